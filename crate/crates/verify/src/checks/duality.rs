use normlab::duality::{
    certify_domination, dual_extremizer, euclidean_extend, gauge_value, hahn_banach_extend,
    hahn_banach_extend_complex, LinearFunctional, MaxLinearGauge, PolyhedralCone,
};
use normlab::lp::in_convex_hull;
use normlab::operators::gram_schmidt;
use normlab::scalar::{modulus, real, Scalar};
use normlab::{random, Error as NumError, Exponent, Field, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{cycle, min_margin, scaled_vector};
use crate::case::Case;
use crate::check::{close, holds, split, upper, within, Check, FIELDS};
use crate::config::Suite;
use crate::error::Result;

const AGREEMENT: f64 = 1e-10;
const MEMBERSHIP_TOL: f64 = 1e-9;

fn check(id: &str, anchor: &str) -> Check {
    Check::new(format!("duality.{id}"), Suite::Duality, anchor)
}

fn combination(rows: &[Vector], weights: &[f64]) -> Vector {
    let mut acc = Vector::zeros(rows[0].dim(), rows[0].field()).expect("dim ≥ 1");
    for (c, w) in rows.iter().zip(weights) {
        acc = acc.checked_add(&c.scale(real(*w))).expect("same dims");
    }
    acc
}

/// A gauge, a subspace basis and values of a functional it dominates.
fn extension_case(rng: &mut ChaCha8Rng, trial: usize, field: Field) -> Case {
    let n = 2 + trial % 5;
    let k = rng.gen_range(1..n);
    let rows: Vec<Vector> = (0..rng.gen_range(2..=7))
        .map(|_| random::vector(rng, n, field))
        .collect();
    let target = combination(&rows, &random::convex_weights(rng, rows.len()));
    let basis: Vec<Vector> = (0..k).map(|_| random::vector(rng, n, field)).collect();
    let mu: Vec<Scalar> = basis
        .iter()
        .map(|w| w.pairing(&target).expect("dims"))
        .collect();
    let mut case = Case::new();
    case.put_vectors("gauge", &rows)
        .put_vectors("basis", &basis)
        .put_vector("mu", &Vector::new(mu, field).expect("k ≥ 1"));
    case
}

fn agreement(lambda: &LinearFunctional, basis: &[Vector], mu: &Vector) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (w, m) in basis.iter().zip(mu.entries()) {
        let scale = w.norm2() * lambda.coeffs().norm2() + modulus(*m);
        worst = worst.max(modulus(lambda.eval(w)? - m) / scale.max(1.0));
    }
    Ok(worst)
}

fn realify(v: &Vector) -> Vec<f64> {
    let mut out: Vec<f64> = v.entries().iter().map(|z| z.re).collect();
    out.extend(v.entries().iter().map(|z| -z.im));
    out
}

fn sign_pattern(n: usize, index: usize) -> Vec<f64> {
    let mut t = index;
    (0..n)
        .map(|_| {
            let d = t % 3;
            t /= 3;
            d as f64 - 1.0
        })
        .collect()
}

/// `(dim, pattern)` for the exhaustive orthant trial `trial`.
fn orthant_trial(trial: usize) -> (usize, usize) {
    let mut t = trial;
    for n in 1..=4 {
        let count = 3usize.pow(n as u32);
        if t < count {
            return (n, t);
        }
        t -= count;
    }
    (4, t % 81)
}

pub fn checks() -> Vec<Check> {
    vec![
        check("extremizer", "the dual extremizer attains the dual norm")
            .per_combo(|ctx| ctx.p_grid().len() * 2)
            .generate(|ctx, trial, rng| {
                let ix = split(trial, &[ctx.p_grid().len(), 2]);
                let (p, field) = (ctx.p_grid()[ix[0]], FIELDS[ix[1]]);
                let n = cycle(ctx.dims(), trial / (ctx.p_grid().len() * 2));
                let mut case = Case::new();
                case.put_vector("w", &scaled_vector(rng, n, field))
                    .put("p", p);
                case
            })
            .evaluate(|ctx, case| {
                let (w, p) = (case.vector("w")?, case.exponent("p")?);
                let v = dual_extremizer(&w, p)?;
                let lhs = modulus(v.pairing(&w)?);
                let rhs = LinearFunctional::new(w).dual_norm(p) * v.p_norm(p);
                Ok(close(lhs, rhs, ctx.tol("extremizer", AGREEMENT)))
            }),
        check("second_dual", "the norm equals the second dual norm")
            .per_combo(|ctx| ctx.p_grid().len() * 2)
            .generate(|ctx, trial, rng| {
                let ix = split(trial, &[ctx.p_grid().len(), 2]);
                let (p, field) = (ctx.p_grid()[ix[0]], FIELDS[ix[1]]);
                let n = cycle(ctx.dims(), trial / (ctx.p_grid().len() * 2));
                let mut case = Case::new();
                case.put_vector("v", &scaled_vector(rng, n, field))
                    .put("p", p)
                    .put("candidates", rng.gen::<u64>());
                case
            })
            .evaluate(|ctx, case| {
                let (v, p) = (case.vector("v")?, case.exponent("p")?);
                let q = p.conjugate();
                let mut rng = random::rng(case.u64("candidates")?);
                let unit = |l: Vector| {
                    let n = l.p_norm(q);
                    l.scale(real(1.0 / n))
                };
                let target = v.p_norm(p);
                let mut best = 0.0_f64;
                let mut m = f64::INFINITY;
                for _ in 0..100 {
                    let l = unit(random::vector(&mut rng, v.dim(), v.field()));
                    let val = modulus(v.pairing(&l)?);
                    m = m.min(upper(val, target, 1e-12));
                    best = best.max(val);
                }
                if !v.is_zero() {
                    let extremal = unit(dual_extremizer(&v, q)?);
                    best = best.max(modulus(v.pairing(&extremal)?));
                }
                Ok(m.min(close(best, target, ctx.tol("second_dual", 1e-8))))
            }),
        check("extension", "the extension theorem")
            .generate(|_, trial, rng| extension_case(rng, trial, Field::Real))
            .evaluate(|ctx, case| {
                let gauge = MaxLinearGauge::new(case.vectors("gauge")?, false)?;
                let (basis, mu) = (case.vectors("basis")?, case.vector("mu")?);
                let lambda = hahn_banach_extend(&basis, mu.entries(), &gauge)?;
                Ok(min_margin([
                    within(
                        agreement(&lambda, &basis, &mu)?,
                        ctx.tol("extension", AGREEMENT),
                    ),
                    holds(certify_domination(&lambda, &gauge)?),
                ]))
            }),
        check(
            "extension_rejects",
            "the extension needs domination on the subspace",
        )
        .generate(|_, trial, rng| {
            let n = 2 + trial % 5;
            loop {
                let rows: Vec<Vector> = (0..rng.gen_range(2..=7))
                    .map(|_| random::vector(rng, n, Field::Real))
                    .collect();
                let gauge = MaxLinearGauge::new(rows.clone(), false).expect("rows");
                let mut w = random::vector(rng, n, Field::Real);
                if gauge.eval(&w).expect("dims") <= 0.0 {
                    w = w.scale(real(-1.0));
                }
                let pw = gauge.eval(&w).expect("dims");
                if pw > 1e-6 {
                    let mut case = Case::new();
                    case.put_vectors("gauge", &rows)
                        .put_vectors("basis", &[w])
                        .put_vector("mu", &Vector::real(&[1.5 * pw]).expect("one entry"));
                    return case;
                }
            }
        })
        .evaluate(|_, case| {
            let gauge = MaxLinearGauge::new(case.vectors("gauge")?, false)?;
            let (basis, mu) = (case.vectors("basis")?, case.vector("mu")?);
            Ok(holds(matches!(
                hahn_banach_extend(&basis, mu.entries(), &gauge),
                Err(NumError::NotDominated)
            )))
        }),
        check(
            "extension_complex",
            "the extension theorem over the complex numbers",
        )
        .generate(|_, trial, rng| extension_case(rng, trial, Field::Complex))
        .evaluate(|ctx, case| {
            let rows = case.vectors("gauge")?;
            let gauge = MaxLinearGauge::new(rows.clone(), false)?;
            let (basis, mu) = (case.vectors("basis")?, case.vector("mu")?);
            let lambda = hahn_banach_extend_complex(&basis, mu.entries(), &gauge)?;
            let hull: Vec<Vec<f64>> = rows.iter().map(realify).collect();
            Ok(min_margin([
                within(
                    agreement(&lambda, &basis, &mu)?,
                    ctx.tol("extension", AGREEMENT),
                ),
                holds(in_convex_hull(&hull, &realify(lambda.coeffs()))?),
            ]))
        }),
        check(
            "euclidean_extension",
            "the Euclidean extension preserves the norm",
        )
        .generate(|_, trial, rng| {
            let field = FIELDS[trial % 2];
            let n = 2 + trial / 2 % 5;
            let k = rng.gen_range(1..n);
            let basis: Vec<Vector> = (0..k).map(|_| random::vector(rng, n, field)).collect();
            let mu = random::vector(rng, k, field);
            let mut case = Case::new();
            case.put_vectors("basis", &basis).put_vector("mu", &mu);
            case
        })
        .evaluate(|ctx, case| {
            let (basis, mu) = (case.vectors("basis")?, case.vector("mu")?);
            let lambda = euclidean_extend(&basis, mu.entries())?;
            // the norm of λ on W, over an orthonormal basis of W
            let on_w = gram_schmidt(&basis, 1e-10)
                .iter()
                .map(|e| lambda.eval(e).map(|z| z.norm_sqr()))
                .sum::<normlab::Result<f64>>()?
                .sqrt();
            let tol = ctx.tol("euclidean_extension", AGREEMENT);
            Ok(min_margin([
                within(agreement(&lambda, &basis, &mu)?, tol),
                close(lambda.coeffs().norm2(), on_w, tol),
            ]))
        }),
        check("gauge_norms", "the Minkowski functional of a norm ball")
            .generate(|ctx, trial, rng| {
                let n = cycle(ctx.dims(), trial / 2).min(8);
                let mut case = Case::new();
                case.put_vector("v", &scaled_vector(rng, n, Field::Real))
                    .put("ball", if trial % 2 == 0 { "l1" } else { "linf" });
                case
            })
            .evaluate(|ctx, case| {
                let v = case.vector("v")?;
                let (gauge, p) = match case.inputs.get("ball").map(String::as_str) {
                    Some("l1") => (MaxLinearGauge::l1(v.dim())?, Exponent::ONE),
                    _ => (MaxLinearGauge::linf(v.dim())?, Exponent::INF),
                };
                let norm = v.p_norm(p);
                let tol = 1e-10 * norm.max(1e-300);
                let got = gauge_value(&gauge, &v, tol)?;
                Ok(within(
                    (got - norm).abs(),
                    tol + ctx.tol("gauge", 1e-12) * norm,
                ))
            }),
        check("orthant_self_dual", "the orthant is its own dual cone")
            .trials(|_| 3 + 9 + 27 + 81)
            .generate(|_, trial, _| {
                let (n, index) = orthant_trial(trial);
                let mut case = Case::new();
                case.put_vector("v", &Vector::real(&sign_pattern(n, index)).expect("n ≥ 1"));
                case
            })
            .evaluate(|_, case| {
                let v = case.vector("v")?;
                let cone = PolyhedralCone::orthant(v.dim())?;
                let member = cone.contains(&v, MEMBERSHIP_TOL)?;
                let dual = cone.dual_contains(&v, MEMBERSHIP_TOL)?;
                let expected = v.entries().iter().all(|z| z.re >= 0.0);
                Ok(holds(member == dual && member == expected))
            }),
        check("double_dual", "a closed convex cone equals its second dual")
            .generate(|_, trial, rng| {
                let n = 1 + trial % 4;
                let gens: Vec<Vector> = (0..rng.gen_range(1..=5))
                    .map(|_| random::vector(rng, n, Field::Real))
                    .collect();
                let v = if trial / 4 % 2 == 0 {
                    combination(&gens, &random::convex_weights(rng, gens.len()))
                        .scale(real(rng.gen_range(0.1..=3.0)))
                } else {
                    random::vector(rng, n, Field::Real)
                };
                let mut case = Case::new();
                case.put_vectors("generators", &gens).put_vector("v", &v);
                case
            })
            .evaluate(|_, case| {
                let cone = PolyhedralCone::new(&case.vectors("generators")?)?;
                let v = case.vector("v")?;
                Ok(holds(
                    cone.contains(&v, MEMBERSHIP_TOL)?
                        == cone.double_dual_contains(&v, MEMBERSHIP_TOL)?,
                ))
            }),
    ]
}
