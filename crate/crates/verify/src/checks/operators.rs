use normlab::linalg::solve;
use normlab::operators::{
    hermitian_eig, is_psd, neumann_inverse, neumann_residual, op_norm_exact, op_norm_lower,
    psd_sqrt, schatten_norm, schmidt, schur_bound, sp_duality_report, DEFAULT_MAX_SWEEPS,
    DEFAULT_TOL,
};
use normlab::scalar::{modulus, real, Complex64, Scalar};
use normlab::vector::p_norm_of;
use normlab::{random, Exponent, Field, Matrix, Result as NumResult, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{cycle, min_margin};
use crate::case::Case;
use crate::check::{close, holds, upper, within, Check, Ctx, FIELDS};
use crate::config::Suite;

fn check(id: &str, anchor: &str) -> Check {
    Check::new(format!("operators.{id}"), Suite::Operators, anchor)
}

/// `(n, field)` for trial `trial`: sizes cycle fastest, then fields.
fn shape(ctx: &Ctx, trial: usize) -> (usize, Field) {
    let dims = ctx.matrix_dims();
    (cycle(&dims, trial), FIELDS[trial / dims.len() % 2])
}

fn scaled(rng: &mut ChaCha8Rng, rows: usize, cols: usize, field: Field) -> Matrix {
    let s = 10f64.powf(rng.gen_range(-2.0..=2.0));
    random::matrix(rng, rows, cols, field).scale(real(s))
}

fn one_matrix(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let (n, field) = shape(ctx, trial);
    let mut case = Case::new();
    case.put_matrix("t", &scaled(rng, n, n, field));
    case
}

fn two_matrices(ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
    let (n, field) = shape(ctx, trial);
    let mut case = Case::new();
    case.put_matrix("s", &scaled(rng, n, n, field))
        .put_matrix("t", &scaled(rng, n, n, field));
    case
}

fn with_p(mut case: Case, ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let grid = ctx.p_grid();
    case.put("p", grid[rng.gen_range(0..grid.len())]);
    case
}

fn op2(t: &Matrix) -> NumResult<f64> {
    op_norm_exact(t, Exponent::TWO)
}

/// `Σ_j λ_j w_j u_j*` from a Schmidt decomposition.
fn rebuild(t: &Matrix) -> NumResult<Matrix> {
    let s = schmidt(t, None)?;
    let mut out = Matrix::zeros(t.rows(), t.cols(), t.field())?;
    for ((u, w), &l) in s.right.iter().zip(&s.left).zip(&s.values) {
        for a in 0..t.rows() {
            for b in 0..t.cols() {
                let z = out.get(a, b) + w.get(a) * u.get(b).conj() * l;
                out.set(a, b, z);
            }
        }
    }
    Ok(out)
}

fn orthonormal_columns(q: &Matrix) -> Vec<Vector> {
    q.columns()
}

fn inverse(m: &Matrix) -> NumResult<Matrix> {
    let n = m.rows();
    let a: Vec<Vec<Scalar>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let cols = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = real(1.0);
            Vector::new(solve(a.clone(), e)?, m.field())
        })
        .collect::<NumResult<Vec<_>>>()?;
    Matrix::from_columns(&cols)
}

fn spectral_radius(a: &Matrix) -> NumResult<f64> {
    let (_, eig) = hermitian_eig(a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)?;
    Ok(eig.iter().fold(0.0_f64, |m, x| m.max(x.abs())))
}

fn hermitian_part(a: &Matrix) -> NumResult<Matrix> {
    Ok(a.add(&a.adjoint())?.scale(real(0.5)))
}

pub fn checks() -> Vec<Check> {
    vec![
        check("c_star", "the C*-identity")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let m = cycle(&ctx.matrix_dims(), trial + 1);
                let mut case = Case::new();
                case.put_matrix("t", &scaled(rng, m, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let t = case.matrix("t")?;
                let lhs = op2(&t.adjoint().mul(&t)?)?;
                Ok(close(lhs, op2(&t)?.powi(2), ctx.tol("c_star", 1e-9)))
            }),
        check("adjoint_symmetry", "the adjoint has the dual norm")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let m = cycle(&ctx.matrix_dims(), trial + 1);
                let mut case = Case::new();
                case.put_matrix("t", &scaled(rng, m, n, field));
                case
            })
            .evaluate(|_, case| {
                let t = case.matrix("t")?;
                let a = op_norm_exact(&t.adjoint(), Exponent::ONE)?;
                let b = op_norm_exact(&t, Exponent::INF)?;
                let c = op_norm_exact(&t.adjoint(), Exponent::INF)?;
                let d = op_norm_exact(&t, Exponent::ONE)?;
                Ok(holds(a == b && c == d))
            }),
        check("schur", "Schur's bound")
            .generate(|ctx, trial, rng| {
                let case = one_matrix(ctx, trial, rng);
                let mut case = with_p(case, ctx, rng);
                case.put("seed", rng.gen::<u64>());
                case
            })
            .evaluate(|ctx, case| {
                let (t, p) = (case.matrix("t")?, case.exponent("p")?);
                let (lower, _) = op_norm_lower(&t, p, 100, case.u64("seed")?)?;
                Ok(upper(lower, schur_bound(&t, p), ctx.tol("schur", 1e-10)))
            }),
        check("trace_norm", "the trace is bounded by the trace norm")
            .generate(one_matrix)
            .evaluate(|ctx, case| {
                let t = case.matrix("t")?;
                let lhs = modulus(t.trace()?);
                Ok(upper(
                    lhs,
                    schatten_norm(&t, Exponent::ONE)?,
                    ctx.tol("trace_norm", 1e-10),
                ))
            }),
        check("schatten_monotone", "Schatten norms decrease in p")
            .generate(|ctx, trial, rng| {
                let mut case = one_matrix(ctx, trial, rng);
                let grid = ctx.p_grid();
                let (a, b) = (
                    grid[rng.gen_range(0..grid.len())],
                    grid[rng.gen_range(0..grid.len())],
                );
                let (p, q) = if a.value() <= b.value() {
                    (a, b)
                } else {
                    (b, a)
                };
                case.put("p", p).put("q", q);
                case
            })
            .evaluate(|ctx, case| {
                let (t, p, q) = (case.matrix("t")?, case.exponent("p")?, case.exponent("q")?);
                let s = schmidt(&t, None)?;
                let norm = |r| p_norm_of(s.values.iter().copied(), r);
                Ok(upper(norm(q), norm(p), ctx.tol("schatten_monotone", 1e-12)))
            }),
        check("schatten_triangle", "the Schatten triangle inequality")
            .generate(|ctx, trial, rng| {
                let case = two_matrices(ctx, trial, rng);
                with_p(case, ctx, rng)
            })
            .evaluate(|ctx, case| {
                let (s, t, p) = (case.matrix("s")?, case.matrix("t")?, case.exponent("p")?);
                let lhs = schatten_norm(&s.add(&t)?, p)?;
                let rhs = schatten_norm(&s, p)? + schatten_norm(&t, p)?;
                Ok(upper(lhs, rhs, ctx.tol("schatten_triangle", 1e-9)))
            }),
        check(
            "sp_orthonormal",
            "the Schatten bound over orthonormal pairs",
        )
        .generate(|ctx, trial, rng| {
            let (n, field) = shape(ctx, trial);
            let mut case = with_p(one_matrix(ctx, trial, rng), ctx, rng);
            case.put_matrix("y", &random::unitary(rng, n, field))
                .put_matrix("z", &random::unitary(rng, n, field));
            case
        })
        .evaluate(|ctx, case| {
            let (t, p) = (case.matrix("t")?, case.exponent("p")?);
            let ys = orthonormal_columns(&case.matrix("y")?);
            let zs = orthonormal_columns(&case.matrix("z")?);
            let terms = ys
                .iter()
                .zip(&zs)
                .map(|(y, z)| Ok(modulus(t.apply(y)?.inner_product(z)?)))
                .collect::<NumResult<Vec<f64>>>()?;
            let lhs = p_norm_of(terms.into_iter(), p);
            Ok(upper(
                lhs,
                schatten_norm(&t, p)?,
                ctx.tol("sp_orthonormal", 1e-9),
            ))
        }),
        check(
            "sp_columns",
            "the Schatten bound over images of an orthonormal basis",
        )
        .generate(|ctx, trial, rng| {
            let (n, field) = shape(ctx, trial);
            let mut case = one_matrix(ctx, trial, rng);
            let high: Vec<Exponent> = ctx
                .p_grid()
                .iter()
                .copied()
                .filter(|p| p.value() >= 2.0)
                .collect();
            let high = if high.is_empty() {
                vec![Exponent::TWO]
            } else {
                high
            };
            case.put("p", high[rng.gen_range(0..high.len())])
                .put_matrix("y", &random::unitary(rng, n, field));
            case
        })
        .evaluate(|ctx, case| {
            let (t, p) = (case.matrix("t")?, case.exponent("p")?);
            let norms = orthonormal_columns(&case.matrix("y")?)
                .iter()
                .map(|y| Ok(t.apply(y)?.norm2()))
                .collect::<NumResult<Vec<f64>>>()?;
            let lhs = p_norm_of(norms.into_iter(), p);
            Ok(upper(
                lhs,
                schatten_norm(&t, p)?,
                ctx.tol("sp_columns", 1e-9),
            ))
        }),
        check(
            "trace_duality",
            "the trace norm is attained by a partial isometry",
        )
        .generate(one_matrix)
        .evaluate(|ctx, case| {
            let t = case.matrix("t")?;
            let s = schmidt(&t, None)?;
            // R = Σ u_j w_j*, so tr(RT) = Σ λ_j
            let mut r = Matrix::zeros(t.cols(), t.rows(), t.field())?;
            for (u, w) in s.right.iter().zip(&s.left) {
                for a in 0..t.cols() {
                    for b in 0..t.rows() {
                        let z = r.get(a, b) + u.get(a) * w.get(b).conj();
                        r.set(a, b, z);
                    }
                }
            }
            let tol = ctx.tol("trace_duality", 1e-9);
            let lhs = modulus(r.mul(&t)?.trace()?);
            Ok(min_margin([
                close(lhs, schatten_norm(&t, Exponent::ONE)?, tol),
                upper(op2(&r)?, 1.0, tol),
            ]))
        }),
        check("sp_duality", "Hölder's inequality for Schatten norms")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let m = cycle(&ctx.matrix_dims(), trial + 1);
                let mut case = Case::new();
                case.put_matrix("t", &scaled(rng, m, n, field))
                    .put_matrix("r", &scaled(rng, n, m, field));
                with_p(case, ctx, rng)
            })
            .evaluate(|ctx, case| {
                let (t, r, p) = (case.matrix("t")?, case.matrix("r")?, case.exponent("p")?);
                let (lhs, rhs) = sp_duality_report(&t, &r, p)?;
                Ok(upper(lhs, rhs, ctx.tol("sp_duality", 1e-9)))
            }),
        check("psd_trace", "tr(AB) ≥ 0 for nonnegative self-adjoint A, B")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let mut case = Case::new();
                case.put_matrix("a", &random::psd(rng, n, field))
                    .put_matrix("b", &random::psd(rng, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let (a, b) = (case.matrix("a")?, case.matrix("b")?);
                let tr = a.mul(&b)?.trace()?;
                let scale = (a.hs_norm() * b.hs_norm()).max(f64::MIN_POSITIVE);
                Ok(tr.re / scale + ctx.tol("psd_trace", 1e-10))
            }),
        check(
            "projection_norm",
            "a nonzero projection has norm at least one",
        )
        .generate(|ctx, trial, rng| {
            let (n, field) = shape(ctx, trial);
            let k = rng.gen_range(1..=n);
            // P = X (Y*X)^{-1} Y*
            let p = loop {
                let x = random::matrix(rng, n, k, field);
                let y = random::matrix(rng, n, k, field);
                let Ok(inv) = inverse(&y.adjoint().mul(&x).expect("shapes")) else {
                    continue;
                };
                break x
                    .mul(&inv)
                    .and_then(|m| m.mul(&y.adjoint()))
                    .expect("shapes");
            };
            let mut case = Case::new();
            case.put_matrix("p", &p);
            case
        })
        .evaluate(|ctx, case| {
            let p = case.matrix("p")?;
            let norm = op2(&p)?;
            let idempotent = p.mul(&p)?.sub(&p)?.hs_norm() / p.hs_norm().max(1.0);
            Ok(min_margin([
                norm - 1.0 + ctx.tol("projection_norm", 1e-12),
                within(idempotent, 1e-6),
            ]))
        }),
        check("spectral_radius_power", "the spectral radius of a power")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let mut case = Case::new();
                case.put_matrix("a", &random::hermitian(rng, n, field))
                    .put("power", rng.gen_range(1..=4u32));
                case
            })
            .evaluate(|ctx, case| {
                let (a, k) = (case.matrix("a")?, case.u32("power")?);
                let mut power = a.clone();
                for _ in 1..k {
                    power = power.mul(&a)?;
                }
                let lhs = spectral_radius(&hermitian_part(&power)?)?;
                let rhs = spectral_radius(&a)?.powi(k as i32);
                Ok(close(lhs, rhs, ctx.tol("spectral_radius_power", 1e-8)))
            }),
        check("eig_reconstruction", "the spectral theorem")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let mut case = Case::new();
                case.put_matrix("a", &random::hermitian(rng, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let a = case.matrix("a")?;
                let (q, eig) = hermitian_eig(&a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)?;
                let d = Matrix::diag_real(&eig)?.with_field(a.field());
                let back = q.mul(&d)?.mul(&q.adjoint())?;
                let err = back.sub(&a)?.hs_norm();
                Ok(within(err, ctx.tol("reconstruction", 1e-9) * a.hs_norm()))
            }),
        check("svd_reconstruction", "the Schmidt decomposition")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let m = cycle(&ctx.matrix_dims(), trial / 2 + 1);
                let mut case = Case::new();
                case.put_matrix("t", &scaled(rng, m, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let t = case.matrix("t")?;
                let err = rebuild(&t)?.sub(&t)?.hs_norm();
                Ok(within(err, ctx.tol("reconstruction", 1e-9) * t.hs_norm()))
            }),
        check("svd_diagonal", "singular values of a diagonal matrix")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let d: Vec<Scalar> = (0..n).map(|_| random::scalar(rng, field)).collect();
                let mut case = Case::new();
                case.put_matrix("t", &Matrix::diag(&d, field).expect("n ≥ 1"));
                case
            })
            .evaluate(|ctx, case| {
                let t = case.matrix("t")?;
                let mut want: Vec<f64> = (0..t.rows()).map(|i| t.get(i, i).norm()).collect();
                want.sort_by(|a, b| b.total_cmp(a));
                let got = schmidt(&t, None)?.values;
                let tol = ctx.tol("svd_diagonal", 1e-14);
                Ok(min_margin(
                    got.iter()
                        .zip(&want)
                        .map(|(g, w)| within((g - w).abs(), tol * w.max(1e-300))),
                ))
            }),
        check("neumann", "the Neumann series")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let t = random::matrix(rng, n, n, field);
                let norm = op2(&t).expect("finite");
                let t = t.scale(real(rng.gen_range(0.05..=0.95) / norm.max(1e-300)));
                let mut case = Case::new();
                case.put_matrix("t", &t)
                    .put("terms", rng.gen_range(0..=30usize));
                case
            })
            .evaluate(|ctx, case| {
                let (t, k) = (case.matrix("t")?, case.usize("terms")?);
                let s = neumann_inverse(&t, k)?;
                let bound = op2(&t)?.powi(k as i32 + 1);
                let rounding = ctx.tol("neumann", 1e-13) * (k as f64 + 1.0) * t.rows() as f64;
                Ok(within(neumann_residual(&t, &s)?, bound + rounding))
            }),
        check("psd_sqrt", "square roots of nonnegative operators")
            .generate(|ctx, trial, rng| {
                let (n, field) = shape(ctx, trial);
                let mut case = Case::new();
                case.put_matrix("a", &random::psd(rng, n, field));
                case
            })
            .evaluate(|ctx, case| {
                let a = case.matrix("a")?;
                let r = psd_sqrt(&a)?;
                let err = r.mul(&r)?.sub(&a)?.hs_norm();
                Ok(min_margin([
                    within(err, ctx.tol("psd_sqrt", 1e-9) * a.hs_norm()),
                    holds(is_psd(&r, 1e-9 * r.hs_norm())?),
                ]))
            }),
    ]
}
