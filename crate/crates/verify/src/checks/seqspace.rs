use normlab::random;
use normlab::scalar::{modulus, real};
use normlab::seqspace::{
    convergence_check, dual_extremizer_seq, fubini_check, lp_norm_seq, pairing_abs, pairing_seq,
    product_key, truncate, ConvergenceMode, SparseFn,
};
use normlab::{Exponent, Field};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{cycle, min_margin};
use crate::case::Case;
use crate::check::{close, holds, split, upper, within, Check, Ctx, FIELDS};
use crate::config::Suite;
use crate::error::Result;

const SLACK: f64 = 1e-12;

fn check(id: &str, anchor: &str) -> Check {
    Check::new(format!("seqspace.{id}"), Suite::Seqspace, anchor)
}

/// Keys are drawn from a pool of `2·size` short byte strings, so two random
/// functions overlap on part of their supports.
fn sparse(rng: &mut ChaCha8Rng, size: usize, field: Field, nonnegative: bool) -> SparseFn {
    let mut f = SparseFn::new();
    for _ in 0..size {
        let key = format!("x{}", rng.gen_range(0..2 * size.max(1)));
        let mut v = random::scalar(rng, field) * 10f64.powf(rng.gen_range(-2.0..=2.0));
        if nonnegative {
            v = real(v.norm());
        }
        f.insert(key.into_bytes(), v);
    }
    f
}

fn fg_case(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let ix = split(trial, &[ctx.p_grid().len(), 2]);
    let (p, field) = (ctx.p_grid()[ix[0]], FIELDS[ix[1]]);
    let size = cycle(ctx.dims(), trial / (ctx.p_grid().len() * 2));
    let mut case = Case::new();
    case.put_sparse("f", &sparse(rng, size, field, false))
        .put_sparse("g", &sparse(rng, size, field, false))
        .put("p", p);
    case
}

fn combos(ctx: &Ctx) -> usize {
    ctx.p_grid().len() * 2
}

fn convergence_case(trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let modes = [
        ConvergenceMode::Monotone,
        ConvergenceMode::Fatou,
        ConvergenceMode::Dominated,
    ];
    let mode = modes[trial % 3];
    let size = rng.gen_range(1..=12);
    let steps = rng.gen_range(1..=10);
    let mut case = Case::new();
    let (family, limit, dominator): (Vec<SparseFn>, SparseFn, Option<SparseFn>) = match mode {
        ConvergenceMode::Monotone => {
            let f = sparse(rng, size, Field::Real, true);
            let family = (1..=steps)
                .map(|j| f.scale(real(1.0 - 0.5f64.powi(j))))
                .collect();
            (family, f, None)
        }
        ConvergenceMode::Fatou => {
            let family = (0..steps)
                .map(|_| sparse(rng, size, Field::Real, true))
                .collect();
            (family, SparseFn::new(), None)
        }
        ConvergenceMode::Dominated => {
            let field = FIELDS[trial / 3 % 2];
            let f = sparse(rng, size, field, false);
            let bump = sparse(rng, size, field, false);
            let family: Vec<SparseFn> = (1..=steps)
                .map(|j| f.add(&bump.scale(real(0.5f64.powi(j)))))
                .collect();
            let mut g = SparseFn::new();
            for h in family.iter().chain([&f]) {
                for (k, v) in h.iter() {
                    let m = modulus(*v).max(g.get(k).re);
                    g.insert(k.clone(), real(m));
                }
            }
            (family, f, Some(g))
        }
    };
    case.put("mode", mode).put("count", family.len());
    for (j, f) in family.iter().enumerate() {
        case.put_sparse(&format!("family.{j}"), f);
    }
    case.put_sparse("limit", &limit);
    if let Some(g) = dominator {
        case.put_sparse("dominator", &g);
    }
    case
}

pub fn checks() -> Vec<Check> {
    vec![
        check("holder", "Hölder's inequality for sequences")
            .per_combo(combos)
            .generate(fg_case)
            .evaluate(|ctx, case| {
                let (f, g, p) = (case.sparse("f")?, case.sparse("g")?, case.exponent("p")?);
                let rhs = lp_norm_seq(&f, p) * lp_norm_seq(&g, p.conjugate());
                Ok(upper(
                    pairing_abs(&f, &g),
                    rhs,
                    ctx.tol("seq_holder", 1e-10),
                ))
            }),
        check("dual_attainment", "the norm of the functional defined by g")
            .per_combo(combos)
            .generate(fg_case)
            .evaluate(|ctx, case| {
                let (g, p) = (case.sparse("g")?, case.exponent("p")?);
                if g.is_empty() {
                    return Ok(0.0);
                }
                let f = dual_extremizer_seq(&g, p)?;
                let tol = ctx.tol("seq_dual", 1e-10);
                Ok(min_margin([
                    close(lp_norm_seq(&f, p), 1.0, tol),
                    close(
                        modulus(pairing_seq(&f, &g)),
                        lp_norm_seq(&g, p.conjugate()),
                        tol,
                    ),
                ]))
            }),
        check("small_p", "functionals on sequence spaces with p < 1")
            .per_combo(|_| 6)
            .generate(|ctx, trial, rng| {
                let size = cycle(ctx.dims(), trial / 6);
                let field = FIELDS[trial % 2];
                let mut case = Case::new();
                case.put_sparse("f", &sparse(rng, size, field, false))
                    .put_sparse("g", &sparse(rng, size, field, false))
                    .put("p", [0.25, 0.5, 0.75][trial / 2 % 3]);
                case
            })
            .evaluate(|ctx, case| {
                let (f, g, p) = (case.sparse("f")?, case.sparse("g")?, case.f64("p")?);
                let fp = f.moduli().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p);
                let f1 = lp_norm_seq(&f, Exponent::ONE);
                let ginf = lp_norm_seq(&g, Exponent::INF);
                let tol = ctx.tol("small_p", SLACK);
                Ok(min_margin([
                    upper(f1, fp, tol),
                    upper(modulus(pairing_seq(&f, &g)), ginf * fp, tol),
                ]))
            }),
        check("norm_monotone", "sequence norms decrease in p")
            .per_combo(combos)
            .generate(|ctx, trial, rng| {
                let mut case = fg_case(ctx, trial, rng);
                let p = case.exponent("p").expect("just written");
                let above: Vec<Exponent> = ctx
                    .p_grid()
                    .iter()
                    .copied()
                    .filter(|q| q.value() >= p.value())
                    .collect();
                case.put("q", above[rng.gen_range(0..above.len())]);
                case
            })
            .evaluate(|ctx, case| {
                let (f, p, q) = (case.sparse("f")?, case.exponent("p")?, case.exponent("q")?);
                let tol = ctx.tol("norm_monotone", SLACK);
                let fp = lp_norm_seq(&f, p);
                Ok(min_margin([
                    upper(lp_norm_seq(&f, q), fp, tol),
                    upper(lp_norm_seq(&f, Exponent::INF), fp, tol),
                ]))
            }),
        check("fubini", "sums over a product in either order")
            .generate(|_, trial, rng| {
                let field = FIELDS[trial % 2];
                let (m, n) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
                let mut f = SparseFn::new();
                for x in 0..m {
                    for y in 0..n {
                        if rng.gen_bool(0.7) {
                            let v =
                                random::scalar(rng, field) * 10f64.powf(rng.gen_range(-2.0..=2.0));
                            f.insert(
                                product_key(format!("a{x}").as_bytes(), format!("b{y}").as_bytes()),
                                v,
                            );
                        }
                    }
                }
                let mut case = Case::new();
                case.put_sparse("f", &f);
                case
            })
            .evaluate(|ctx, case| {
                let f = case.sparse("f")?;
                let scale = lp_norm_seq(&f, Exponent::ONE).max(f64::MIN_POSITIVE);
                let gap = fubini_check(&f)?.max_gap();
                Ok(within(gap / scale, ctx.tol("fubini", 1e-13)))
            }),
        check(
            "truncation",
            "summable functions are nearly finitely supported",
        )
        .generate(|ctx, trial, rng| {
            let size = cycle(ctx.dims(), trial);
            let f = sparse(rng, size, FIELDS[trial / ctx.dims().len() % 2], false);
            let total = lp_norm_seq(&f, Exponent::ONE);
            let mut case = Case::new();
            case.put_sparse("f", &f)
                .put("eps", total * rng.gen_range(0.0..=1.1));
            case
        })
        .evaluate(|_, case| {
            let (f, eps) = (case.sparse("f")?, case.f64("eps")?);
            let (kept, tail) = truncate(&f, eps)?;
            let mut moduli: Vec<f64> = f.moduli().collect();
            moduli.sort_by(|a, b| b.total_cmp(a));
            let outside: f64 = f
                .iter()
                .filter(|(k, _)| !kept.contains(*k))
                .map(|(_, v)| modulus(*v))
                .sum();
            // one key fewer always leaves more than eps outside
            let minimal = kept.is_empty() || moduli[kept.len() - 1..].iter().sum::<f64>() > eps;
            Ok(min_margin([
                holds(tail <= eps),
                close(outside, tail, 1e-12),
                holds(minimal),
            ]))
        }),
        check("convergence", "the convergence theorems")
            .generate(|_, trial, rng| convergence_case(trial, rng))
            .evaluate(|ctx, case| {
                let mode: ConvergenceMode = case
                    .inputs
                    .get("mode")
                    .map(String::as_str)
                    .unwrap_or("")
                    .parse()?;
                let family = (0..case.usize("count")?)
                    .map(|j| case.sparse(&format!("family.{j}")))
                    .collect::<Result<Vec<_>>>()?;
                let limit = case.sparse("limit")?;
                let dominator = match case.inputs.contains_key("dominator") {
                    true => Some(case.sparse("dominator")?),
                    false => None,
                };
                let report = convergence_check(mode, &family, &limit, dominator.as_ref())?;
                // both sides are differences of sums of this size
                let mass = family
                    .iter()
                    .chain([&limit])
                    .map(|f| lp_norm_seq(f, Exponent::ONE))
                    .fold(report.lhs.abs().max(report.rhs.abs()), f64::max);
                let mass = if mass > 0.0 { mass } else { 1.0 };
                Ok(min_margin([
                    holds(report.holds),
                    (report.rhs - report.lhs) / mass + ctx.tol("convergence", SLACK),
                ]))
            }),
    ]
}
