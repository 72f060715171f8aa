use normlab::convex::{jensen_gap, ConvexSampledFunction};
use normlab::scalar::{modulus, real};
use normlab::vector::polarize;
use normlab::{random, Exponent, Field, Vector};
use rand::Rng;

use super::{cycle, min_margin, scaled_vector};
use crate::case::Case;
use crate::check::{close, holds, split, upper, within, Check, Ctx, FIELDS};
use crate::config::Suite;

const SLACK: f64 = 1e-10;

fn combos(ctx: &Ctx) -> usize {
    ctx.dims().len() * ctx.p_grid().len() * 2
}

/// `(dim, p, field)` of a per-combination trial.
fn combo(ctx: &Ctx, trial: usize) -> (usize, Exponent, Field) {
    let ix = split(trial, &[ctx.dims().len(), ctx.p_grid().len(), 2]);
    (ctx.dims()[ix[0]], ctx.p_grid()[ix[1]], FIELDS[ix[2]])
}

fn vw_case(ctx: &Ctx, trial: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Case {
    let (n, p, field) = combo(ctx, trial);
    let mut case = Case::new();
    case.put_vector("v", &scaled_vector(rng, n, field))
        .put_vector("w", &scaled_vector(rng, n, field))
        .put("p", p);
    case
}

fn check(id: &str, anchor: &str) -> Check {
    Check::new(format!("core.{id}"), Suite::Core, anchor)
}

pub fn checks() -> Vec<Check> {
    vec![
        check("minkowski", "Minkowski's inequality")
            .per_combo(combos)
            .generate(vw_case)
            .evaluate(|ctx, case| {
                let (v, w, p) = (case.vector("v")?, case.vector("w")?, case.exponent("p")?);
                let lhs = v.checked_add(&w)?.p_norm(p);
                Ok(upper(
                    lhs,
                    v.p_norm(p) + w.p_norm(p),
                    ctx.tol("minkowski", SLACK),
                ))
            }),
        check("holder", "Hölder's inequality")
            .per_combo(combos)
            .generate(vw_case)
            .evaluate(|ctx, case| {
                let (v, w, p) = (case.vector("v")?, case.vector("w")?, case.exponent("p")?);
                let lhs = modulus(v.pairing(&w)?);
                let rhs = ctx.constant("holder", 1.0) * v.p_norm(p) * w.p_norm(p.conjugate());
                Ok(upper(lhs, rhs, ctx.tol("holder", SLACK)))
            }),
        check("exponent_comparison", "comparison of p-norms")
            .per_combo(combos)
            .generate(|ctx, trial, rng| {
                let mut case = vw_case(ctx, trial, rng);
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
                let (v, p, q) = (case.vector("v")?, case.exponent("p")?, case.exponent("q")?);
                let n = v.dim() as f64;
                let tol = ctx.tol("comparison", 1e-12);
                let (vp, vq, vinf) = (v.p_norm(p), v.p_norm(q), v.p_norm(Exponent::INF));
                Ok(min_margin([
                    upper(vinf, vp, tol),
                    upper(vq, vp, tol),
                    upper(vp, n.powf(p.recip() - q.recip()) * vq, tol),
                    upper(vp, n.powf(p.recip()) * vinf, tol),
                ]))
            }),
        check(
            "comparison_equality",
            "equality in the comparison of p-norms",
        )
        .per_combo(combos)
        .generate(|ctx, trial, rng| {
            let (n, p, field) = combo(ctx, trial);
            let z = random::scalar(rng, field) * 10f64.powf(rng.gen_range(-3.0..=3.0));
            let q = cycle(ctx.p_grid(), rng.gen_range(0..ctx.p_grid().len()));
            let (p, q) = if p.value() <= q.value() {
                (p, q)
            } else {
                (q, p)
            };
            let mut case = Case::new();
            case.put_vector("v", &Vector::new(vec![z; n], field).expect("n ≥ 1"))
                .put("p", p)
                .put("q", q);
            case
        })
        .evaluate(|ctx, case| {
            let (v, p, q) = (case.vector("v")?, case.exponent("p")?, case.exponent("q")?);
            let n = v.dim() as f64;
            let rhs = n.powf(p.recip() - q.recip()) * v.p_norm(q);
            Ok(close(
                v.p_norm(p),
                rhs,
                ctx.tol("comparison_equality", 1e-12),
            ))
        }),
        check(
            "power_subadditivity",
            "subadditivity of p-th powers for p < 1",
        )
        .per_combo(|ctx| ctx.dims().len() * 3)
        .generate(|ctx, trial, rng| {
            let ix = split(trial, &[ctx.dims().len(), 3]);
            let n = ctx.dims()[ix[0]];
            let mut case = Case::new();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
            case.put_f64s("b", &b)
                .put_f64s("c", &c)
                .put("p", [0.25, 0.5, 0.75][ix[1]]);
            case
        })
        .evaluate(|ctx, case| {
            let (b, c, p) = (case.f64s("b")?, case.f64s("c")?, case.f64("p")?);
            let lhs: f64 = b.iter().zip(&c).map(|(x, y)| (x + y).powf(p)).sum();
            let rhs: f64 = b.iter().chain(&c).map(|x| x.powf(p)).sum();
            Ok(upper(lhs, rhs, ctx.tol("power_subadditivity", 1e-12)))
        }),
        check("cauchy_schwarz", "the Cauchy–Schwarz inequality")
            .per_combo(|ctx| ctx.dims().len() * 2)
            .generate(|ctx, trial, rng| {
                let ix = split(trial, &[ctx.dims().len(), 2]);
                let (n, field) = (ctx.dims()[ix[0]], FIELDS[ix[1]]);
                let v = scaled_vector(rng, n, field);
                let parallel = trial / (ctx.dims().len() * 2) % 2 == 1;
                let w = if parallel {
                    let mut c = random::scalar(rng, field);
                    if c.norm() == 0.0 {
                        c = real(1.0);
                    }
                    v.scale(c)
                } else {
                    scaled_vector(rng, n, field)
                };
                let mut case = Case::new();
                case.put_vector("v", &v)
                    .put_vector("w", &w)
                    .put("parallel", parallel);
                case
            })
            .evaluate(|ctx, case| {
                let (v, w) = (case.vector("v")?, case.vector("w")?);
                let lhs = modulus(v.inner_product(&w)?);
                let rhs = v.norm2() * w.norm2();
                let mut m = upper(lhs, rhs, ctx.tol("cauchy_schwarz", SLACK));
                if case.inputs.get("parallel").map(String::as_str) == Some("true") {
                    m = m.min(close(lhs, rhs, 1e-12));
                }
                Ok(m)
            }),
        check("parallelogram", "the parallelogram law")
            .per_combo(|ctx| ctx.dims().len() * 2)
            .generate(|ctx, trial, rng| {
                let ix = split(trial, &[ctx.dims().len(), 2]);
                let (n, field) = (ctx.dims()[ix[0]], FIELDS[ix[1]]);
                let mut case = Case::new();
                case.put_vector("v", &scaled_vector(rng, n, field))
                    .put_vector("w", &scaled_vector(rng, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let (v, w) = (case.vector("v")?, case.vector("w")?);
                let sq = |x: &Vector| x.norm2().powi(2);
                let lhs = sq(&v.checked_add(&w)?) + sq(&v.checked_sub(&w)?);
                let rhs = 2.0 * (sq(&v) + sq(&w));
                Ok(close(lhs, rhs, ctx.tol("parallelogram", 1e-12)))
            }),
        check("jensen", "the generalized convexity inequality")
            .per_combo(combos)
            .generate(|ctx, trial, rng| {
                let (n, p, _) = combo(ctx, trial);
                let mut case = Case::new();
                let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
                case.put_f64s("x", &xs)
                    .put_f64s("weights", &random::convex_weights(rng, n))
                    .put("p", p.finite().unwrap_or(12.0));
                case
            })
            .evaluate(|ctx, case| {
                let (xs, ws, p) = (case.f64s("x")?, case.f64s("weights")?, case.f64("p")?);
                let phi = |x: f64| x.abs().powf(p);
                let scale: f64 = ws.iter().zip(&xs).map(|(w, &x)| w * phi(x)).sum();
                let gap = jensen_gap(phi, &ws, &xs)?;
                Ok(gap / scale.max(f64::MIN_POSITIVE) + ctx.tol("jensen", SLACK))
            }),
        check("polarization", "the polarization identities")
            .per_combo(|ctx| ctx.dims().len() * 2)
            .generate(|ctx, trial, rng| {
                let ix = split(trial, &[ctx.dims().len(), 2]);
                let (n, field) = (ctx.dims()[ix[0]], FIELDS[ix[1]]);
                let mut case = Case::new();
                case.put_vector("v", &scaled_vector(rng, n, field))
                    .put_vector("w", &scaled_vector(rng, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let (v, w) = (case.vector("v")?, case.vector("w")?);
                let field = v.field();
                let got = polarize(|x| x.norm2().powi(2), &v, &w, field)?;
                let want = v.inner_product(&w)?;
                let scale = (v.norm2() + w.norm2()).powi(2).max(f64::MIN_POSITIVE);
                Ok(within(
                    (got - want).norm() / scale,
                    ctx.tol("polarization", 1e-12),
                ))
            }),
        check("convex_sampling", "convex functions of a real variable")
            .per_combo(|ctx| ctx.p_grid().len())
            .generate(|ctx, trial, rng| {
                let p = cycle(ctx.p_grid(), trial);
                let n = rng.gen_range(3..=40);
                let mut grid: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..=3.0)).collect();
                grid.sort_by(f64::total_cmp);
                grid.dedup();
                let mut case = Case::new();
                case.put_f64s("grid", &grid)
                    .put("p", p.finite().unwrap_or(12.0));
                case
            })
            .evaluate(|_, case| {
                let (grid, p) = (case.f64s("grid")?, case.f64("p")?);
                let f = ConvexSampledFunction::sample(grid, |x| x.abs().powf(p))?;
                Ok(holds(f.difference_quotient_check() && f.midpoint_check()))
            }),
    ]
}
