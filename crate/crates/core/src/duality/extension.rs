//! Extension of linear functionals dominated by a polyhedral gauge.
//!
//! Write `p(v) = max_i ⟨c_i, v⟩`. Suppose `μ` is known on `W_j` through
//! values `m_k = μ(w_k)` on a basis, and `z ∉ W_j`. The admissible values of
//! `μ(z)` form the interval `[A, B]` with
//!
//! ```text
//! A = sup_{x ∈ W_j} μ(x) − p(x − z),   B = inf_{x ∈ W_j} p(x + z) − μ(x).
//! ```
//!
//! By linear-programming duality both are optimal values over the same
//! polytope `F = {y ≥ 0, Σ y_i = 1, Σ y_i ⟨c_i, w_k⟩ = m_k for all k}`:
//! `A = min_F Σ y_i ⟨c_i, z⟩` and `B = max_F Σ y_i ⟨c_i, z⟩`. `F` is empty
//! exactly when `μ` is not dominated by `p` on `W_j`, and since `F` is
//! compact neither program is ever unbounded.

use crate::linalg::{gram_schmidt, solve, solve_real};
use crate::lp::{in_convex_hull, maximize, minimize, LpOutcome};
use crate::scalar::{real, Complex64, Field, Scalar};
use crate::{Error, Result, Vector};

use super::{LinearFunctional, MaxLinearGauge};

const INDEPENDENCE_TOL: f64 = 1e-10;

fn real_parts(v: &Vector) -> Result<Vec<f64>> {
    if v.entries().iter().any(|z| z.im != 0.0) {
        return Err(Error::InvalidArgument(
            "real extension needs real vectors; use the complex variant".into(),
        ));
    }
    Ok(v.entries().iter().map(|z| z.re).collect())
}

fn check_basis(basis_w: &[Vector], n: usize) -> Result<()> {
    for w in basis_w {
        crate::error::check_dims(n, w.dim())?;
    }
    let raw: Vec<Vec<Scalar>> = basis_w.iter().map(|w| w.entries().to_vec()).collect();
    if gram_schmidt(&raw, INDEPENDENCE_TOL).len() < basis_w.len() {
        return Err(Error::LinearlyDependent);
    }
    Ok(())
}

struct Program<'a> {
    rows: &'a [Vec<f64>],
    constraints: Vec<Vec<f64>>,
    targets: Vec<f64>,
}

impl Program<'_> {
    fn push(&mut self, w: Vec<f64>, m: f64) {
        self.constraints.push(w);
        self.targets.push(m);
    }

    fn system(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut a: Vec<Vec<f64>> = self
            .constraints
            .iter()
            .map(|w| self.rows.iter().map(|c| dot(c, w)).collect())
            .collect();
        a.push(vec![1.0; self.rows.len()]);
        let mut b = self.targets.clone();
        b.push(1.0);
        (a, b)
    }

    /// The interval `[A, B]` of admissible values at `z`.
    fn interval(&self, z: &[f64]) -> Result<(f64, f64)> {
        let (a, b) = self.system();
        let cost: Vec<f64> = self.rows.iter().map(|c| dot(c, z)).collect();
        let lo = minimize(&cost, &a, &b)?;
        let hi = maximize(&cost, &a, &b)?;
        match (lo, hi) {
            (LpOutcome::Optimal { value: lo, .. }, LpOutcome::Optimal { value: hi, .. }) => {
                Ok((lo, hi.max(lo)))
            }
            (LpOutcome::Unbounded, _) | (_, LpOutcome::Unbounded) => Err(Error::NonAbsorbing),
            _ => Err(Error::NotDominated),
        }
    }

    fn feasible(&self) -> Result<bool> {
        let (a, b) = self.system();
        let zero = vec![0.0; self.rows.len()];
        Ok(matches!(
            minimize(&zero, &a, &b)?,
            LpOutcome::Optimal { .. }
        ))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extends `μ`, given by its values on a basis of `W`, to a linear
/// functional on `R^n` that is dominated by `gauge` everywhere.
///
/// The extension proceeds one dimension at a time, choosing the midpoint of
/// the admissible interval at each step.
pub fn hahn_banach_extend(
    basis_w: &[Vector],
    mu_values: &[Scalar],
    gauge: &MaxLinearGauge,
) -> Result<LinearFunctional> {
    let n = gauge.dim();
    crate::error::check_dims(basis_w.len(), mu_values.len())?;
    check_basis(basis_w, n)?;
    if mu_values.iter().any(|m| m.im != 0.0) {
        return Err(Error::InvalidArgument(
            "real extension needs real values".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = gauge
        .sublinear_rows()
        .iter()
        .map(real_parts)
        .collect::<Result<_>>()?;
    let mut program = Program {
        rows: &rows,
        constraints: Vec::new(),
        targets: Vec::new(),
    };
    for (w, m) in basis_w.iter().zip(mu_values) {
        program.push(real_parts(w)?, m.re);
    }
    if !program.feasible()? {
        return Err(Error::NotDominated);
    }

    let mut spanning: Vec<Vec<Scalar>> = basis_w.iter().map(|w| w.entries().to_vec()).collect();
    spanning.extend((0..n).map(|k| {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = real(1.0);
        e
    }));
    let orthonormal = gram_schmidt(&spanning, INDEPENDENCE_TOL);
    for z in &orthonormal[basis_w.len()..] {
        let z: Vec<f64> = z.iter().map(|c| c.re).collect();
        let (lo, hi) = program.interval(&z)?;
        program.push(z, 0.5 * (lo + hi));
    }

    let coeffs = solve_real(&program.constraints, &program.targets)?;
    let lambda = LinearFunctional::new(Vector::real(&coeffs)?);
    if !certify_domination(&lambda, gauge)? {
        return Err(Error::CertificationFailed);
    }
    Ok(lambda)
}

/// Whether `λ(v) ≤ gauge(v)` for every `v`, decided exactly: this holds iff
/// the coefficients of `λ` lie in the convex hull of the gauge rows (with
/// their negatives for an absolute gauge).
pub fn certify_domination(lambda: &LinearFunctional, gauge: &MaxLinearGauge) -> Result<bool> {
    crate::error::check_dims(gauge.dim(), lambda.dim())?;
    let rows: Vec<Vec<f64>> = gauge
        .sublinear_rows()
        .iter()
        .map(real_parts)
        .collect::<Result<_>>()?;
    in_convex_hull(&rows, &real_parts(lambda.coeffs())?)
}

fn realify(v: &Vector) -> Vec<f64> {
    let mut out: Vec<f64> = v.entries().iter().map(|z| z.re).collect();
    out.extend(v.entries().iter().map(|z| z.im));
    out
}

/// Complex-linear extension through the real-part correspondence
/// `ψ(v) = φ(v) − iφ(iv)`.
///
/// `gauge` must be a non-absolute gauge `v ↦ max_i Re⟨c_i, v⟩` on `C^n`;
/// the result satisfies `ψ = μ` on `W` and `Re ψ ≤ gauge` everywhere.
pub fn hahn_banach_extend_complex(
    basis_w: &[Vector],
    mu_values: &[Scalar],
    gauge: &MaxLinearGauge,
) -> Result<LinearFunctional> {
    if gauge.is_absolute() {
        return Err(Error::InvalidArgument(
            "complex extension needs a non-absolute gauge".into(),
        ));
    }
    let n = gauge.dim();
    crate::error::check_dims(basis_w.len(), mu_values.len())?;
    check_basis(basis_w, n)?;
    // Re Σ c_j v_j = Σ Re c_j · Re v_j − Im c_j · Im v_j
    let real_rows = gauge
        .rows()
        .iter()
        .map(|c| {
            let mut r: Vec<f64> = c.entries().iter().map(|z| z.re).collect();
            r.extend(c.entries().iter().map(|z| -z.im));
            Vector::real(&r)
        })
        .collect::<Result<Vec<_>>>()?;
    let real_gauge = MaxLinearGauge::new(real_rows, false)?;
    let mut real_basis = Vec::with_capacity(2 * basis_w.len());
    let mut real_mu = Vec::with_capacity(2 * basis_w.len());
    for (w, m) in basis_w.iter().zip(mu_values) {
        real_basis.push(Vector::real(&realify(w))?);
        real_mu.push(real(m.re));
        real_basis.push(Vector::real(&realify(&w.scale(Complex64::i())))?);
        real_mu.push(real((Complex64::i() * m).re));
    }
    let phi = hahn_banach_extend(&real_basis, &real_mu, &real_gauge)?;
    let g = phi.coeffs().entries();
    let coeffs = (0..n)
        .map(|j| Complex64::new(g[j].re, -g[n + j].re))
        .collect();
    Ok(LinearFunctional::new(Vector::new(coeffs, Field::Complex)?))
}

/// The extension that preserves the Euclidean dual norm: `λ = ⟨·, w_μ⟩`
/// with `w_μ ∈ W` the representer of `μ`.
pub fn euclidean_extend(basis_w: &[Vector], mu_values: &[Scalar]) -> Result<LinearFunctional> {
    let first = basis_w.first().ok_or(Error::Empty("subspace basis"))?;
    let n = first.dim();
    crate::error::check_dims(basis_w.len(), mu_values.len())?;
    check_basis(basis_w, n)?;
    // ⟨w_l, w_μ⟩ = μ_l with w_μ = Σ β_k w_k gives G·conj(β) = μ
    let gram: Vec<Vec<Scalar>> = basis_w
        .iter()
        .map(|wl| {
            basis_w
                .iter()
                .map(|wk| wl.inner_product(wk))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let gamma = solve(gram, mu_values.to_vec())?;
    let mut representer = vec![Complex64::new(0.0, 0.0); n];
    for (g, w) in gamma.iter().zip(basis_w) {
        for (r, x) in representer.iter_mut().zip(w.entries()) {
            *r += g.conj() * x;
        }
    }
    let field = basis_w
        .iter()
        .fold(Field::Real, |f, w| f.join(w.field()))
        .join(if mu_values.iter().any(|m| m.im != 0.0) {
            Field::Complex
        } else {
            Field::Real
        });
    let coeffs = representer.into_iter().map(|z| z.conj()).collect();
    Ok(LinearFunctional::new(Vector::new(coeffs, field)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exponent;

    fn v(xs: &[f64]) -> Vector {
        Vector::real(xs).unwrap()
    }

    #[test]
    fn box_gauge_forces_unique_extension() {
        let g = MaxLinearGauge::linf(2).unwrap();
        let lam = hahn_banach_extend(&[v(&[1.0, 0.0])], &[real(1.0)], &g).unwrap();
        assert!((lam.coeffs().get(0) - real(1.0)).norm() < 1e-12);
        assert!(lam.coeffs().get(1).norm() < 1e-12);
    }

    #[test]
    fn diamond_gauge_forces_unique_extension() {
        let g = MaxLinearGauge::l1(2).unwrap();
        let lam = hahn_banach_extend(&[v(&[1.0, 1.0])], &[real(2.0)], &g).unwrap();
        // a + b = 2 and max(|a|,|b|) ≤ 1 leave only (1, 1)
        assert!((lam.coeffs().get(0) - real(1.0)).norm() < 1e-12);
        assert!((lam.coeffs().get(1) - real(1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_functional_extends() {
        let g = MaxLinearGauge::l1(3).unwrap();
        let lam = hahn_banach_extend(&[v(&[1.0, 2.0, 0.0])], &[real(0.0)], &g).unwrap();
        assert!(lam.eval(&v(&[1.0, 2.0, 0.0])).unwrap().norm() < 1e-12);
        assert!(certify_domination(&lam, &g).unwrap());
    }

    #[test]
    fn undominated_input_is_rejected() {
        let g = MaxLinearGauge::linf(2).unwrap();
        let err = hahn_banach_extend(&[v(&[1.0, 0.0])], &[real(1.5)], &g);
        assert_eq!(err, Err(Error::NotDominated));
        let err = hahn_banach_extend(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])], &[real(0.0); 2], &g);
        assert_eq!(err, Err(Error::LinearlyDependent));
    }

    #[test]
    fn sublinear_gauge_extension() {
        // p(v) = max(v1, v2, -v1 - v2) is a genuine sublinear function
        let g = MaxLinearGauge::new(
            vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[-1.0, -1.0])],
            false,
        )
        .unwrap();
        let lam = hahn_banach_extend(&[v(&[1.0, -1.0])], &[real(0.5)], &g).unwrap();
        assert!((lam.eval(&v(&[1.0, -1.0])).unwrap() - real(0.5)).norm() < 1e-12);
        assert!(certify_domination(&lam, &g).unwrap());
    }

    #[test]
    fn complex_extension_contract() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let rows = vec![
            Vector::complex(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
            Vector::complex(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap(),
            Vector::complex(vec![c(-1.0, 0.0), c(0.0, 0.0)]).unwrap(),
            Vector::complex(vec![c(0.0, -1.0), c(0.0, 0.0)]).unwrap(),
            Vector::complex(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            Vector::complex(vec![c(0.0, 0.0), c(-1.0, 0.0)]).unwrap(),
            Vector::complex(vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap(),
            Vector::complex(vec![c(0.0, 0.0), c(0.0, -1.0)]).unwrap(),
        ];
        let g = MaxLinearGauge::new(rows, false).unwrap();
        let w = Vector::complex(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let mu = c(0.5, 0.25);
        let psi = hahn_banach_extend_complex(std::slice::from_ref(&w), &[mu], &g).unwrap();
        assert!((psi.eval(&w).unwrap() - mu).norm() < 1e-10);
        let probe = Vector::complex(vec![c(0.3, -0.7), c(-1.1, 0.2)]).unwrap();
        assert!(psi.eval(&probe).unwrap().re <= g.eval(&probe).unwrap() + 1e-10);
    }

    #[test]
    fn euclidean_representer_preserves_norm() {
        let basis = [v(&[1.0, 1.0, 0.0]), v(&[0.0, 1.0, 1.0])];
        let mu = [real(2.0), real(-1.0)];
        let lam = euclidean_extend(&basis, &mu).unwrap();
        for (w, m) in basis.iter().zip(&mu) {
            assert!((lam.eval(w).unwrap() - m).norm() < 1e-12);
        }
        let q = gram_schmidt(
            &basis
                .iter()
                .map(|w| w.entries().to_vec())
                .collect::<Vec<_>>(),
            1e-12,
        );
        // ‖μ‖ on W is the ℓ² norm of its values on an orthonormal basis
        let on_w: Vec<Scalar> = q
            .iter()
            .map(|e| {
                lam.eval(&Vector::new(e.clone(), Field::Real).unwrap())
                    .unwrap()
            })
            .collect();
        let norm_on_w = Vector::new(on_w, Field::Real).unwrap().norm2();
        assert!((lam.dual_norm(Exponent::TWO) - norm_on_w).abs() < 1e-12);
    }
}
