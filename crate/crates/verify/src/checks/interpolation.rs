use normlab::interpolation::{
    log_convexity_check, m_p, transpose_symmetry_gap, InterpolationTriple,
};
use normlab::operators::{hermitian_eig, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
use normlab::scalar::{real, Scalar};
use normlab::{random, Exponent, Field, Matrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{cycle, min_margin};
use crate::case::Case;
use crate::check::{close, holds, Check, Ctx, FIELDS};
use crate::config::Suite;

fn check(id: &str, anchor: &str) -> Check {
    Check::new(format!("interpolation.{id}"), Suite::Interpolation, anchor)
}

fn shape(ctx: &Ctx, trial: usize) -> (usize, Field) {
    let dims = ctx.matrix_dims();
    (cycle(&dims, trial), FIELDS[trial / dims.len() % 2])
}

fn matrix_case(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let (n, field) = shape(ctx, trial);
    let s = 10f64.powf(rng.gen_range(-2.0..=2.0));
    let mut case = Case::new();
    case.put_matrix("t", &random::matrix(rng, n, n, field).scale(real(s)))
        .put("seed", rng.gen::<u64>());
    case
}

fn direct_norm(t: &Matrix, p: Exponent) -> normlab::Result<f64> {
    let abs = |i: usize, j: usize| t.get(i, j).norm();
    Ok(match p {
        Exponent::One => (0..t.cols())
            .map(|j| (0..t.rows()).map(|i| abs(i, j)).sum::<f64>())
            .fold(0.0, f64::max),
        Exponent::Infinity => (0..t.rows())
            .map(|i| (0..t.cols()).map(|j| abs(i, j)).sum::<f64>())
            .fold(0.0, f64::max),
        _ => {
            let (_, eig) = hermitian_eig(&t.adjoint().mul(t)?, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)?;
            eig.iter().fold(0.0_f64, |m, &x| m.max(x)).max(0.0).sqrt()
        }
    })
}

/// Restarts per non-closed-form exponent.
const BUDGET: usize = 2;

pub fn checks() -> Vec<Check> {
    vec![
        check(
            "endpoints",
            "closed forms of the operator norm at 1, 2 and ∞",
        )
        .generate(matrix_case)
        .evaluate(|ctx, case| {
            let t = case.matrix("t")?;
            let tol = ctx.tol("endpoints", 1e-12);
            let margins = [Exponent::ONE, Exponent::TWO, Exponent::INF]
                .into_iter()
                .map(|p| {
                    let (got, exact) = m_p(&t, p, 1, 0)?;
                    Ok(close(got, direct_norm(&t, p)?, tol).min(holds(exact)))
                })
                .collect::<normlab::Result<Vec<f64>>>()?;
            Ok(min_margin(margins))
        }),
        check("monotone_restarts", "more restarts never lower the bound")
            .generate(|ctx, trial, rng| {
                let mut case = matrix_case(ctx, trial, rng);
                case.put("p", [1.25, 1.5, 3.0, 4.0][rng.gen_range(0..4)]);
                case
            })
            .evaluate(|_, case| {
                let (t, seed) = (case.matrix("t")?, case.u64("seed")?);
                let p = case.exponent("p")?;
                let values = (1..=4)
                    .map(|b| Ok(m_p(&t, p, b, seed)?.0))
                    .collect::<normlab::Result<Vec<f64>>>()?;
                Ok(holds(values.windows(2).all(|w| w[0] <= w[1])))
            }),
        check("riesz_convexity", "log M_p is convex")
            .generate(matrix_case)
            .evaluate(|_, case| {
                let (t, seed) = (case.matrix("t")?, case.u64("seed")?);
                let grid = InterpolationTriple::standard_grid();
                let reports = log_convexity_check(&t, &grid, BUDGET, seed)?;
                Ok(min_margin(reports.iter().map(|r| r.margin)))
            }),
        check(
            "diagonal_equality",
            "diagonal operators attain the interpolation bound",
        )
        .generate(|ctx, trial, rng| {
            let (n, field) = shape(ctx, trial);
            let d: Vec<Scalar> = (0..n).map(|_| random::scalar(rng, field)).collect();
            let mut case = Case::new();
            case.put_matrix("t", &Matrix::diag(&d, field).expect("n ≥ 1"))
                .put("seed", rng.gen::<u64>());
            case
        })
        .evaluate(|ctx, case| {
            let (t, seed) = (case.matrix("t")?, case.u64("seed")?);
            let grid = InterpolationTriple::standard_grid();
            let reports = log_convexity_check(&t, &grid, 1, seed)?;
            let tol = ctx.tol("diagonal_equality", 1e-12);
            Ok(min_margin(
                reports.iter().map(|r| close(r.m_r, r.bound, tol)),
            ))
        }),
        check("transpose_symmetry", "the norm of the dual transformation")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let m = cycle(&ctx.matrix_dims(), trial + 1);
                let mut case = Case::new();
                case.put_matrix("t", &random::matrix(rng, m, n, field));
                case
            })
            .evaluate(|_, case| Ok(holds(transpose_symmetry_gap(&case.matrix("t")?)? == 0.0))),
    ]
}
