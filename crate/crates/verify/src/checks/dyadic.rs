use normlab::dyadic::{
    auxiliary_sides, difference, distinct_values, expectation, haar_function, haar_reconstruct,
    haar_transform, khintchine_report, lambda_grid, layer_cake, maximal_fn, maximal_linearization,
    modified_weak_type_pairs, square_fn, square_linearization, stopping_decompose,
    tail_square_report, walsh, weak_type_sup, DyadicInterval, DyadicStepFunction, StoppingMode,
};
use normlab::random::{self, StepFamily};
use normlab::scalar::real;
use normlab::{Exponent, Field};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::min_margin;
use crate::case::Case;
use crate::check::{close, holds, upper, within, Check, Ctx, FIELDS};
use crate::config::Suite;
use crate::error::Result;

const SLACK: f64 = 1e-12;

fn check(id: &str, anchor: &str) -> Check {
    Check::new(format!("dyadic.{id}"), Suite::Dyadic, anchor)
}

/// `(level, family, field)`: levels cycle fastest, then families, then fields.
fn setup(ctx: &Ctx, trial: usize) -> (u32, StepFamily, Field) {
    let nl = ctx.levels().len();
    let fams = StepFamily::ALL.len();
    (
        ctx.levels()[trial % nl],
        StepFamily::ALL[trial / nl % fams],
        FIELDS[trial / (nl * fams) % 2],
    )
}

fn draw(rng: &mut ChaCha8Rng, family: StepFamily, level: u32, field: Field) -> DyadicStepFunction {
    let f = random::step_function_from(rng, family, level, field);
    f.scale(real(10f64.powf(rng.gen_range(-2.0..=2.0))))
}

fn f_case(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let (level, family, field) = setup(ctx, trial);
    let mut case = Case::new();
    case.put_step("f", &draw(rng, family, level, field));
    case
}

fn fg_case(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let (level, family, field) = setup(ctx, trial);
    let mut case = Case::new();
    case.put_step("f", &draw(rng, family, level, field))
        .put_step("g", &draw(rng, family, level, field));
    case
}

/// A plateau `a` plus a spike on one cell that lifts the average over the
/// `2^m`-fold enlargement of that cell just past `2a`.
fn plateau_spike(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let level = ctx.levels()[trial % ctx.levels().len()].max(6);
    let m = rng.gen_range(6..=level.min(10));
    let a = 10f64.powf(rng.gen_range(-2.0..=2.0));
    let b = a * 2f64.powi(m as i32) * (1.0 + rng.gen_range(1e-9..1e-4));
    let mut values = vec![real(a); 1 << level];
    let spike = rng.gen_range(0..values.len());
    values[spike] = real(a + b);
    let mut case = Case::new();
    case.put_step(
        "f",
        &DyadicStepFunction::new(level, values).expect("power of two"),
    );
    case
}

fn with_pick(mut case: Case, key: &str, options: &[f64], rng: &mut ChaCha8Rng) -> Case {
    case.put(key, *options.choose(rng).expect("nonempty"));
    case
}

fn integral_of_product(a: &DyadicStepFunction, b: &DyadicStepFunction) -> normlab::Scalar {
    a.mul(b).integral()
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn golden(id: &str, anchor: &str, eval: fn(&DyadicStepFunction) -> f64) -> Check {
    check(&format!("ratio.{id}"), anchor)
        .golden()
        .generate(f_case)
        .evaluate(move |_, case| Ok(eval(&case.step("f")?)))
}

fn s_over_m(f: &DyadicStepFunction, p: f64) -> f64 {
    ratio(square_fn(f).lp_integral(p), maximal_fn(f).lp_integral(p))
}

fn m_over_s(f: &DyadicStepFunction, p: f64) -> f64 {
    ratio(maximal_fn(f).lp_integral(p), square_fn(f).lp_integral(p))
}

fn f_over_s(f: &DyadicStepFunction, q: f64) -> f64 {
    ratio(f.lp_integral(q), square_fn(f).lp_integral(q))
}

fn s_over_f(f: &DyadicStepFunction, q: f64) -> f64 {
    ratio(square_fn(f).lp_integral(q), f.lp_integral(q))
}

fn weak_type(
    ctx: &Ctx,
    case: &Case,
    name: &str,
    default: f64,
    of: fn(&DyadicStepFunction) -> DyadicStepFunction,
) -> Result<f64> {
    let f = case.step("f")?;
    let (sup, _) = weak_type_sup(&of(&f))?;
    let rhs = ctx.constant(name, default) * f.l1_norm();
    Ok(upper(sup, rhs, ctx.tol(name, SLACK)))
}

fn ratio_checks() -> Vec<Check> {
    vec![
        golden(
            "s_over_m.p0_5",
            "S(f) is controlled by M(f) for p < 2",
            |f| s_over_m(f, 0.5),
        ),
        golden("s_over_m.p1", "S(f) is controlled by M(f) for p < 2", |f| {
            s_over_m(f, 1.0)
        }),
        golden(
            "s_over_m.p1_5",
            "S(f) is controlled by M(f) for p < 2",
            |f| s_over_m(f, 1.5),
        ),
        golden(
            "m_over_s.p0_5",
            "M(f) is controlled by S(f) for p < 2",
            |f| m_over_s(f, 0.5),
        ),
        golden("m_over_s.p1", "M(f) is controlled by S(f) for p < 2", |f| {
            m_over_s(f, 1.0)
        }),
        golden(
            "m_over_s.p1_5",
            "M(f) is controlled by S(f) for p < 2",
            |f| m_over_s(f, 1.5),
        ),
        golden("f_over_s.q3", "f is controlled by S(f) for q > 2", |f| {
            f_over_s(f, 3.0)
        }),
        golden("f_over_s.q4", "f is controlled by S(f) for q > 2", |f| {
            f_over_s(f, 4.0)
        }),
        golden("s_over_f.q3", "S(f) is controlled by f for q > 2", |f| {
            s_over_f(f, 3.0)
        }),
        golden("s_over_f.q4", "S(f) is controlled by f for q > 2", |f| {
            s_over_f(f, 4.0)
        }),
        golden(
            "tail_square",
            "the fourth power of the square function",
            |f| tail_square_report(f).ratio(),
        ),
    ]
}

/// Haar pairs `(I, J)` for intervals of level below 5, sampled at level 5.
const HAAR_LEVEL: u32 = 5;

fn haar_intervals() -> Vec<DyadicInterval> {
    DyadicInterval::up_to_level(HAAR_LEVEL - 1).collect()
}

pub fn checks() -> Vec<Check> {
    let mut out = vec![
        check("self_adjoint", "conditional expectations are self-adjoint")
            .generate(|ctx, trial, rng| {
                let mut case = fg_case(ctx, trial, rng);
                let (level, _, _) = setup(ctx, trial);
                case.put("j", rng.gen_range(0..=level));
                case
            })
            .evaluate(|ctx, case| {
                let (f, g, j) = (case.step("f")?, case.step("g")?, case.u32("j")?);
                let (ef, eg) = (expectation(&f, j), expectation(&g, j));
                let a = integral_of_product(&ef, &g);
                let b = integral_of_product(&f, &eg);
                let c = integral_of_product(&ef, &eg);
                let scale = (f.l2_norm_sq() * g.l2_norm_sq())
                    .sqrt()
                    .max(f64::MIN_POSITIVE);
                let err = (a - b).norm().max((a - c).norm()) / scale;
                Ok(within(err, ctx.tol("self_adjoint", SLACK)))
            }),
        check(
            "martingale_orthogonality",
            "martingale differences are orthogonal",
        )
        .generate(|ctx, trial, rng| {
            let mut case = fg_case(ctx, trial, rng);
            let (level, _, _) = setup(ctx, trial);
            let j = rng.gen_range(1..=level.max(1));
            let mut k = rng.gen_range(1..=level.max(1));
            if level >= 2 {
                while k == j {
                    k = rng.gen_range(1..=level);
                }
            }
            case.put("j", j).put("k", k);
            case
        })
        .evaluate(|ctx, case| {
            let (f, g) = (case.step("f")?, case.step("g")?);
            let (j, k) = (case.u32("j")?, case.u32("k")?);
            if j == k {
                return Ok(0.0);
            }
            let v = integral_of_product(&difference(&f, j), &difference(&g, k));
            let scale = (f.l2_norm_sq() * g.l2_norm_sq())
                .sqrt()
                .max(f64::MIN_POSITIVE);
            Ok(within(
                v.norm() / scale,
                ctx.tol("martingale_orthogonality", 1e-13),
            ))
        }),
        check("square_l2", "the 2-norm of S(f)")
            .generate(f_case)
            .evaluate(|ctx, case| {
                let f = case.step("f")?;
                let lhs = square_fn(&f).l2_norm_sq();
                Ok(close(lhs, f.l2_norm_sq(), ctx.tol("square_l2", SLACK)))
            }),
        check("cell_identity", "the square function on each dyadic cell")
            .generate(f_case)
            .evaluate(|ctx, case| {
                let r = tail_square_report(&case.step("f")?);
                let err = r.residual / r.scale.max(f64::MIN_POSITIVE);
                Ok(within(err, ctx.tol("cell_identity", SLACK)))
            }),
        check("haar_round_trip", "the Haar expansion")
            .generate(f_case)
            .evaluate(|ctx, case| {
                let f = case.step("f")?;
                let h = haar_transform(&f);
                let back = haar_reconstruct(&h)?;
                let tol = ctx.tol("haar", 1e-13);
                let err = back.sub(&f).sup_norm() / f.sup_norm().max(f64::MIN_POSITIVE);
                Ok(min_margin([
                    within(err, tol),
                    close(h.energy(), f.l2_norm_sq(), tol),
                ]))
            }),
        check("haar_orthogonality", "orthogonality of the Haar functions")
            .trials(|_| haar_intervals().len().pow(2))
            .generate(|_, trial, _| {
                let iv = haar_intervals();
                let mut case = Case::new();
                case.put("i", iv[trial % iv.len()])
                    .put("j", iv[trial / iv.len() % iv.len()]);
                case
            })
            .evaluate(|_, case| {
                let parse = |k: &str| -> Result<DyadicInterval> {
                    Ok(case
                        .inputs
                        .get(k)
                        .map(String::as_str)
                        .unwrap_or("")
                        .parse()?)
                };
                let (i, j) = (parse("i")?, parse("j")?);
                let v = integral_of_product(
                    &haar_function(i, HAAR_LEVEL)?,
                    &haar_function(j, HAAR_LEVEL)?,
                );
                let want = if i == j { 1.0 } else { 0.0 };
                Ok(within((v - real(want)).norm(), 1e-14))
            }),
        check("layer_cake", "the layer-cake formula")
            .generate(|ctx, trial, rng| {
                let case = f_case(ctx, trial, rng);
                with_pick(case, "p", &[0.5, 1.0, 1.5, 2.0, 3.0], rng)
            })
            .evaluate(|ctx, case| {
                let (f, p) = (case.step("f")?, case.f64("p")?);
                let (direct, layered) = layer_cake(&f.abs(), p)?;
                Ok(close(direct, layered, ctx.tol("layer_cake", SLACK)))
            }),
        check("maximal_weak_type", "the weak-type estimate for M(f)")
            .generate(f_case)
            .evaluate(|ctx, case| weak_type(ctx, case, "maximal_weak_type", 1.0, maximal_fn)),
        check("modified_weak_type", "the modified weak-type inequality")
            .generate(|ctx, trial, rng| match trial % 2 {
                0 => f_case(ctx, trial / 2, rng),
                _ => plateau_spike(ctx, trial / 2, rng),
            })
            .evaluate(|ctx, case| {
                let f = case.step("f")?;
                let c = ctx.constant("modified_weak_type", 1.0);
                let tol = ctx.tol("modified_weak_type", SLACK);
                Ok(min_margin(
                    modified_weak_type_pairs(&f)
                        .into_iter()
                        .map(|(_, lhs, rhs)| upper(lhs, c * rhs, tol)),
                ))
            }),
        check("maximal_lp", "the L^p estimate for M(f)")
            .generate(|ctx, trial, rng| {
                let case = f_case(ctx, trial, rng);
                with_pick(case, "p", &[1.1, 1.5, 2.0, 3.0, 4.0], rng)
            })
            .evaluate(|ctx, case| {
                let (f, p) = (case.step("f")?, case.f64("p")?);
                let lhs = maximal_fn(&f).lp_integral(p);
                let constant =
                    ctx.constant("maximal_lp_factor", 1.0) * 2f64.powf(p) * p / (p - 1.0);
                Ok(upper(
                    lhs,
                    constant * f.lp_integral(p),
                    ctx.tol("maximal_lp", SLACK),
                ))
            }),
        check("square_weak_type", "the weak-type estimate for S(f)")
            .generate(f_case)
            .evaluate(|ctx, case| weak_type(ctx, case, "square_weak_type", 3.0, square_fn)),
        check(
            "square_level_sets",
            "level sets of S(f) are unions of dyadic intervals",
        )
        .generate(|ctx, trial, rng| {
            let mut case = f_case(ctx, trial, rng);
            let f = case.step("f").expect("just written");
            let s = square_fn(&f);
            let grid = lambda_grid(&distinct_values(&s).expect("real"));
            let picked: Vec<f64> = grid
                .choose_multiple(rng, grid.len().min(8))
                .copied()
                .collect();
            case.put_f64s("lambdas", &picked);
            case
        })
        .evaluate(|_, case| {
            let (f, lambdas) = (case.step("f")?, case.f64s("lambdas")?);
            let s = square_fn(&f);
            let level = f.level();
            let mut ok = true;
            for lam in lambdas {
                let d = stopping_decompose(&f, lam, StoppingMode::Square)?;
                let mut covered = vec![0u32; f.len()];
                for iv in &d.maximal_intervals {
                    for c in iv.cells(level) {
                        covered[c] += 1;
                    }
                }
                ok &= s
                    .values()
                    .iter()
                    .zip(&covered)
                    .all(|(v, &n)| n == u32::from(v.re > lam));
            }
            Ok(holds(ok))
        }),
        check("stopping_average", "the stopping-time decomposition")
            .generate(|ctx, trial, rng| {
                let mut case = f_case(ctx, trial, rng);
                let f = case.step("f").expect("just written");
                let top = f.sup_norm().max(f64::MIN_POSITIVE);
                case.put("lambda", top * rng.gen_range(0.01..=1.2));
                case
            })
            .evaluate(|ctx, case| {
                let (f, lam) = (case.step("f")?, case.f64("lambda")?);
                let d = stopping_decompose(&f, lam, StoppingMode::Average)?;
                let tol = ctx.tol("stopping", SLACK);
                if d.degenerate {
                    return Ok(holds(f.integral().norm() > lam));
                }
                let mut ms = vec![holds(f.integral().norm() <= lam)];
                for (a, b) in d
                    .maximal_intervals
                    .iter()
                    .zip(d.maximal_intervals.iter().skip(1))
                {
                    ms.push(holds(a.is_disjoint(b)));
                }
                for iv in &d.maximal_intervals {
                    ms.push(holds(f.average_on(*iv).norm() > lam));
                    let parent = iv.parent().expect("not the unit interval");
                    ms.push(upper(f.average_on(parent).norm(), lam, tol));
                }
                ms.push(upper(d.stopped_measure() * lam, f.l1_norm(), tol));
                ms.push(upper(d.parent_measure(), 2.0 * d.stopped_measure(), tol));
                ms.push(upper(d.replaced.sup_norm(), lam, tol));
                let drift = (d.replaced.integral() - f.integral()).norm();
                ms.push(within(drift, tol * f.l1_norm()));
                Ok(min_margin(ms))
            }),
        check(
            "averaging_contraction",
            "conditional expectations contract L^p",
        )
        .generate(|ctx, trial, rng| {
            let mut case = f_case(ctx, trial, rng);
            let (level, _, _) = setup(ctx, trial);
            case.put("j", rng.gen_range(0..=level));
            with_pick(case, "p", &[1.0, 1.5, 2.0, 3.0, 4.0], rng)
        })
        .evaluate(|ctx, case| {
            let (f, j, p) = (case.step("f")?, case.u32("j")?, case.f64("p")?);
            let beta = f.abs();
            let lhs = expectation(&beta, j).lp_integral(p);
            Ok(upper(lhs, beta.lp_integral(p), ctx.tol("averaging", SLACK)))
        }),
        check(
            "auxiliary_sup",
            "the auxiliary estimates for sums of averages",
        )
        .generate(|ctx, trial, rng| {
            let (level, family, field) = setup(ctx, trial);
            let count = level.min(4) as usize + 1;
            let betas: Vec<DyadicStepFunction> = (0..count)
                .map(|_| draw(rng, family, level, field).abs())
                .collect();
            let mut case = Case::new();
            case.put("count", count);
            for (i, b) in betas.iter().enumerate() {
                case.put_step(&format!("beta.{i}"), b);
            }
            let case = with_pick(case, "p", &[1.5, 2.0, 3.0], rng);
            with_pick(case, "r_is_p", &[0.0, 1.0], rng)
        })
        .evaluate(|ctx, case| {
            let betas = (0..case.usize("count")?)
                .map(|i| case.step(&format!("beta.{i}")))
                .collect::<Result<Vec<_>>>()?;
            let p = case.f64("p")?;
            let (r, c) = if case.f64("r_is_p")? == 1.0 {
                (Exponent::new(p)?, 1.0)
            } else {
                (Exponent::INF, p / (p - 1.0))
            };
            let (lhs, rhs) = auxiliary_sides(&betas, p, r)?;
            Ok(upper(lhs, c * rhs, ctx.tol("auxiliary", SLACK)))
        }),
        check("linearization", "linearizing maximal and square functions")
            .generate(fg_case)
            .evaluate(|ctx, case| {
                let (f, h) = (case.step("f")?, case.step("g")?);
                let tol = ctx.tol("linearization", SLACK);
                let pointwise = |a: &DyadicStepFunction, b: &DyadicStepFunction, equal: bool| {
                    let scale = b.sup_norm().max(f64::MIN_POSITIVE);
                    min_margin(a.values().iter().zip(b.values()).map(|(x, y)| {
                        if equal {
                            within((x.norm() - y.re).abs() / scale, tol)
                        } else {
                            (y.re - x.norm()) / scale + tol
                        }
                    }))
                };
                let lm = maximal_linearization(&f);
                let ls = square_linearization(&f);
                Ok(min_margin([
                    pointwise(&lm.apply(&h)?, &maximal_fn(&h), false),
                    pointwise(&lm.apply(&f)?, &maximal_fn(&f), true),
                    pointwise(&ls.apply(&h)?, &square_fn(&h), false),
                    pointwise(&ls.apply(&f)?, &square_fn(&f), true),
                ]))
            }),
        check("walsh_orthonormality", "orthonormality of the Walsh system")
            .trials(|_| 1024)
            .generate(|_, trial, _| {
                let mut case = Case::new();
                case.put("a", trial % 32).put("b", trial / 32 % 32);
                case
            })
            .evaluate(|_, case| {
                let set = |mask: usize| -> Vec<u32> {
                    (1..=5).filter(|j| mask >> (j - 1) & 1 == 1).collect()
                };
                let (a, b) = (case.usize("a")?, case.usize("b")?);
                let v = integral_of_product(&walsh(&set(a), 5)?, &walsh(&set(b), 5)?);
                let want = if a == b { 1.0 } else { 0.0 };
                Ok(holds(v == real(want)))
            }),
        check("khintchine_sandwich", "Khintchine's inequalities")
            .generate(|_, trial, rng| {
                let n = 1 + trial % 12;
                let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let mut case = Case::new();
                case.put_f64s("a", &a);
                case
            })
            .evaluate(|ctx, case| {
                let a = case.f64s("a")?;
                let report = khintchine_report(&a, &[1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY])?;
                let sum: f64 = a.iter().map(|x| x.abs()).sum();
                Ok(min_margin([
                    ctx.tol("khintchine", SLACK) - report.sandwich_excess(),
                    close(report.sup, sum, SLACK),
                ]))
            }),
        check(
            "khintchine_fourth_moment",
            "the fourth moment of a Rademacher sum",
        )
        .generate(|_, trial, rng| {
            let n = 1 + trial % 12;
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let mut case = Case::new();
            case.put_f64s("a", &a);
            case
        })
        .evaluate(|ctx, case| {
            let a = case.f64s("a")?;
            let n = a.len();
            let by_signs = (0..1usize << n)
                .map(|mask| {
                    let s: f64 = a
                        .iter()
                        .enumerate()
                        .map(|(j, x)| if mask >> j & 1 == 1 { -x } else { *x })
                        .sum();
                    s.powi(4)
                })
                .sum::<f64>()
                / (1u64 << n) as f64;
            let report = khintchine_report(&a, &[2.0])?;
            let tol = ctx.tol("khintchine", SLACK);
            Ok(min_margin([
                close(report.fourth_moment, by_signs, tol),
                close(report.fourth_moment_formula, by_signs, tol),
            ]))
        }),
    ];
    out.extend(ratio_checks());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SuiteConfig;
    use crate::golden::Golden;

    #[test]
    fn setup_cycles_every_combination() {
        let config = SuiteConfig::default();
        let golden = Golden::default();
        let ctx = Ctx {
            config: &config,
            golden: &golden,
        };
        let seen: std::collections::BTreeSet<String> =
            (0..18).map(|t| format!("{:?}", setup(&ctx, t))).collect();
        assert_eq!(seen.len(), 18);
    }

    #[test]
    fn haar_pairs_cover_every_interval_pair() {
        assert_eq!(haar_intervals().len(), 31);
    }
}
