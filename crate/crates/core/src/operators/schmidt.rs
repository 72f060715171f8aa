use crate::linalg::{self, gram_schmidt};
use crate::scalar::{real, Complex64, Scalar};
use crate::vector::p_norm_of;
use crate::{Error, Exponent, Result, Vector};

use super::{hermitian_eig, Matrix, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};

/// `T v = Σ_j λ_j ⟨v, u_j⟩ w_j` with orthonormal `u_j` (`right`) and `w_j`
/// (`left`), `λ_j ≥ 0` descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub left: Vec<Vector>,
    pub right: Vec<Vector>,
    pub values: Vec<f64>,
    pub rank: usize,
}

impl SchmidtDecomposition {
    /// `Σ_j λ_j ⟨v, u_j⟩ w_j`.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        let dim = self.left[0].dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for ((u, w), &l) in self.right.iter().zip(&self.left).zip(&self.values) {
            let c = v.inner_product(u)? * l;
            for (o, x) in out.iter_mut().zip(w.entries()) {
                *o += c * x;
            }
        }
        Vector::new(out, v.field().join(self.left[0].field()))
    }
}

/// The Schmidt decomposition of `T`, built from the eigenvectors of `T*T`.
///
/// With `u_j` the eigenvectors, the values are `λ_j = ‖T u_j‖₂` rather than
/// square roots of the eigenvalues, which keeps values of rank-deficient
/// directions at rounding level. Left vectors `T u_j / λ_j` are
/// re-orthonormalized in order of decreasing `λ_j`, and directions with
/// `λ_j ≤ rank_tol` (default `1e-10·‖T‖_HS`) are completed by Gram–Schmidt
/// against the standard basis.
pub fn schmidt(t: &Matrix, rank_tol: Option<f64>) -> Result<SchmidtDecomposition> {
    let m = t.rows();
    let n = t.cols();
    let k = m.min(n);
    let field = t.field();
    let rank_tol = rank_tol.unwrap_or(1e-10 * t.hs_norm());
    let gram = t.adjoint().mul(t)?;
    let (q, _) = hermitian_eig(&gram, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)?;

    let mut pairs: Vec<(f64, Vector, Vector)> = (0..n)
        .map(|j| {
            let u = q.column(j).with_field(field);
            let tu = t.apply(&u)?;
            Ok((tu.norm2(), u, tu))
        })
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.truncate(k);

    let rank = pairs.iter().filter(|p| p.0 > rank_tol).count();
    let mut left_raw: Vec<Vec<Scalar>> = Vec::with_capacity(k);
    for (l, _, tu) in &pairs[..rank] {
        left_raw.push(tu.entries().iter().map(|z| z / *l).collect());
    }
    let mut left = gram_schmidt(&left_raw, 0.0);
    if left.len() < rank {
        return Err(Error::LinearlyDependent);
    }
    let mut e = 0;
    while left.len() < k && e < m {
        let mut basis = left.clone();
        let mut unit = vec![Complex64::new(0.0, 0.0); m];
        unit[e] = real(1.0);
        basis.push(unit);
        let grown = gram_schmidt(&basis, 1e-8);
        if grown.len() > left.len() {
            left = grown;
        }
        e += 1;
    }
    let left = left
        .into_iter()
        .map(|w| Vector::new(w, field))
        .collect::<Result<Vec<_>>>()?;
    let values = pairs.iter().map(|p| p.0).collect();
    let right = pairs.into_iter().map(|p| p.1).collect();
    Ok(SchmidtDecomposition {
        left,
        right,
        values,
        rank,
    })
}

/// `‖T‖_{S_p}`: the `ℓ^p` norm of the Schmidt values.
pub fn schatten_norm(t: &Matrix, p: Exponent) -> Result<f64> {
    let s = schmidt(t, None)?;
    Ok(p_norm_of(s.values.iter().copied(), p))
}

/// `(|tr(R T)|, ‖T‖_{S_p}·‖R‖_{S_q})` with `q` conjugate to `p`.
pub fn sp_duality_report(t: &Matrix, r: &Matrix, p: Exponent) -> Result<(f64, f64)> {
    if r.cols() != t.rows() || r.rows() != t.cols() {
        return Err(Error::DimensionMismatch {
            expected: t.rows() * t.cols(),
            found: r.cols() * r.rows(),
        });
    }
    let lhs = crate::scalar::modulus(r.mul(t)?.trace()?);
    let rhs = schatten_norm(t, p)? * schatten_norm(r, p.conjugate())?;
    Ok((lhs, rhs))
}

/// Gram matrix deviation `max |⟨e_i, e_j⟩ − δ_ij|` of a family.
pub fn orthonormality_defect(family: &[Vector]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            let g = linalg::inner(a.entries(), b.entries());
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - real(target)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn diagonal_values() {
        let s = schmidt(&Matrix::diag_real(&[3.0, -4.0]).unwrap(), None).unwrap();
        assert_eq!(s.values, vec![4.0, 3.0]);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn rank_one_outer_product() {
        let a = [1.0, -2.0, 2.0];
        let b = [3.0, 4.0];
        let mut entries = Vec::new();
        for x in a {
            for y in b {
                entries.push(x * y);
            }
        }
        let t = Matrix::real(3, 2, &entries).unwrap();
        let s = schmidt(&t, None).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.values[0] - 15.0).abs() < 1e-13);
        assert!(orthonormality_defect(&s.left) < 1e-12);
        for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            assert!((schatten_norm(&t, p).unwrap() - 15.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unitary_values() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let u = Matrix::real(2, 2, &[c, -c, c, c]).unwrap();
        let s = schmidt(&u, None).unwrap();
        for v in s.values {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn schatten_examples() {
        let d = Matrix::diag_real(&[3.0, 4.0]).unwrap();
        assert_eq!(schatten_norm(&d, Exponent::ONE).unwrap(), 7.0);
        assert_eq!(schatten_norm(&d, Exponent::TWO).unwrap(), 5.0);
        assert_eq!(schatten_norm(&d, Exponent::INF).unwrap(), 4.0);
        let id = Matrix::identity(4, Field::Real).unwrap();
        let p = Exponent::new(3.0).unwrap();
        assert!((schatten_norm(&id, p).unwrap() - 4f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_of_wide_and_tall() {
        let t = Matrix::real(2, 3, &[1.0, 2.0, 0.0, -1.0, 0.5, 3.0]).unwrap();
        for m in [t.clone(), t.adjoint()] {
            let s = schmidt(&m, None).unwrap();
            assert!(orthonormality_defect(&s.left) < 1e-12);
            assert!(orthonormality_defect(&s.right) < 1e-12);
            for k in 0..m.cols() {
                let e = Vector::unit(m.cols(), k, Field::Real).unwrap();
                let diff = s
                    .apply(&e)
                    .unwrap()
                    .checked_sub(&m.apply(&e).unwrap())
                    .unwrap();
                assert!(diff.norm2() < 1e-12);
            }
        }
    }

    #[test]
    fn duality_report_examples() {
        let id = Matrix::identity(3, Field::Real).unwrap();
        let (l, r) = sp_duality_report(&id, &id, Exponent::TWO).unwrap();
        assert!((l - 3.0).abs() < 1e-14 && (r - 3.0).abs() < 1e-12);
        let t = Matrix::diag_real(&[1.0, 2.0]).unwrap();
        let r1 = Matrix::identity(2, Field::Real).unwrap();
        let (l, r) = sp_duality_report(&t, &r1, Exponent::ONE).unwrap();
        assert_eq!((l, r), (3.0, 3.0));
    }
}
