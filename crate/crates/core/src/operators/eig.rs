//! Cyclic Jacobi diagonalization of Hermitian matrices.

use crate::scalar::{modulus, real, Complex64, Field, Scalar};
use crate::{Error, Result};

use super::Matrix;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SWEEPS: usize = 60;

/// Inputs whose Hermitian deviation exceeds this (relative to
/// `max(1, ‖A‖_HS)`) are rejected.
const HERMITIAN_TOL: f64 = 1e-12;

fn off_diagonal(a: &[Scalar], n: usize) -> f64 {
    let mut acc = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc.hypot(modulus(a[i * n + j]));
            }
        }
    }
    acc
}

/// Returns `(Q, eigs)` with `Q` unitary, `A = Q·diag(eigs)·Q*` and `eigs`
/// sorted in descending order (ties keep their order).
///
/// Each rotation acts on a pair `(p, q)`: with `b = A_pq = |b|e^{iφ}`, the
/// phase `diag(1, e^{−iφ})` makes the block real symmetric, and a real
/// rotation then annihilates it. Sweeps stop once the off-diagonal norm is
/// at most `tol·‖A‖_HS`.
pub fn hermitian_eig(a: &Matrix, tol: f64, max_sweeps: usize) -> Result<(Matrix, Vec<f64>)> {
    let deviation = a.hermitian_deviation()?;
    let n = a.rows();
    let scale = a.hs_norm();
    if deviation > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let mut m: Vec<Scalar> = a.entries().to_vec();
    // symmetrize away rounding-level asymmetry
    for i in 0..n {
        m[i * n + i] = real(m[i * n + i].re);
        for j in i + 1..n {
            let z = 0.5 * (m[i * n + j] + m[j * n + i].conj());
            m[i * n + j] = z;
            m[j * n + i] = z.conj();
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        v[k * n + k] = real(1.0);
    }

    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&m, n);
        if off <= tol * scale {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NotConverged { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|k| m[k * n + k].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let eigs = order.iter().map(|&k| diag[k]).collect();
    let mut q = Matrix::zeros(n, n, a.field())?;
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            q.set(row, col, v[row * n + k]);
        }
    }
    Ok((q, eigs))
}

fn rotate(m: &mut [Scalar], v: &mut [Scalar], n: usize, p: usize, q: usize) {
    let b = m[p * n + q];
    let abs_b = modulus(b);
    if abs_b == 0.0 {
        return;
    }
    let a_pp = m[p * n + p].re;
    let a_qq = m[q * n + q].re;
    let theta = (a_qq - a_pp) / (2.0 * abs_b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = (b / abs_b).conj(); // e^{−iφ}
    let (qpp, qpq, qqp, qqq) = (real(c), real(s), e * (-s), e * c);

    // A ← A·Q on columns p, q
    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = akp * qpp + akq * qqp;
        m[k * n + q] = akp * qpq + akq * qqq;
    }
    // A ← Q*·A on rows p, q
    for k in 0..n {
        let apk = m[p * n + k];
        let aqk = m[q * n + k];
        m[p * n + k] = qpp.conj() * apk + qqp.conj() * aqk;
        m[q * n + k] = qpq.conj() * apk + qqq.conj() * aqk;
    }
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    m[p * n + p] = real(m[p * n + p].re);
    m[q * n + q] = real(m[q * n + q].re);
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * qpp + vkq * qqp;
        v[k * n + q] = vkp * qpq + vkq * qqq;
    }
}

/// Hermitian with smallest eigenvalue at least `−tol`.
pub fn is_psd(a: &Matrix, tol: f64) -> Result<bool> {
    let (_, eigs) = hermitian_eig(a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)?;
    Ok(eigs.last().is_none_or(|&m| m >= -tol))
}

/// The positive semidefinite square root `Q·diag(√λ)·Q*`.
pub fn psd_sqrt(a: &Matrix) -> Result<Matrix> {
    let (q, eigs) = hermitian_eig(a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)?;
    let min_eig = eigs.last().copied().unwrap_or(0.0);
    if min_eig < -1e-10 * a.hs_norm().max(1.0) {
        return Err(Error::NotPositiveSemidefinite { min_eig });
    }
    let roots: Vec<Scalar> = eigs.iter().map(|&l| real(l.max(0.0).sqrt())).collect();
    let d = Matrix::diag(&roots, Field::Real)?;
    Ok(q.mul(&d)?.mul(&q.adjoint())?.with_field(a.field()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(a: &Matrix) -> (Matrix, Vec<f64>) {
        hermitian_eig(a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let (q, e) = eig(&Matrix::diag_real(&[3.0, 1.0]).unwrap());
        assert_eq!(e, vec![3.0, 1.0]);
        assert_eq!(q, Matrix::identity(2, Field::Real).unwrap());
    }

    #[test]
    fn swap_matrix() {
        let (_, e) = eig(&Matrix::real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
        assert!((e[0] - 1.0).abs() < 1e-15 && (e[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        let i = Complex64::i();
        let a = Matrix::from_rows(
            vec![vec![real(2.0), i], vec![-i, real(2.0)]],
            Field::Complex,
        )
        .unwrap();
        let (q, e) = eig(&a);
        assert!((e[0] - 3.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
        let d = Matrix::diag_real(&e).unwrap();
        let back = q.mul(&d).unwrap().mul(&q.adjoint()).unwrap();
        assert!(back.sub(&a).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Matrix::real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            hermitian_eig(&a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn reports_non_convergence() {
        let a = Matrix::real(3, 3, &[1.0, 2.0, 3.0, 2.0, -1.0, 0.5, 3.0, 0.5, 2.0]).unwrap();
        assert!(matches!(
            hermitian_eig(&a, 1e-300, 1),
            Err(Error::NotConverged { sweeps: 1, .. })
        ));
    }

    #[test]
    fn psd_examples() {
        assert!(!is_psd(&Matrix::diag_real(&[1.0, -1.0]).unwrap(), 1e-12).unwrap());
        assert!(is_psd(&Matrix::zeros(3, 3, Field::Real).unwrap(), 1e-12).unwrap());
        let b = psd_sqrt(&Matrix::diag_real(&[4.0, 9.0]).unwrap()).unwrap();
        assert!(
            b.sub(&Matrix::diag_real(&[2.0, 3.0]).unwrap())
                .unwrap()
                .max_abs()
                < 1e-15
        );
        let id = Matrix::identity(3, Field::Real).unwrap();
        assert_eq!(psd_sqrt(&id).unwrap(), id);
        assert!(matches!(
            psd_sqrt(&Matrix::diag_real(&[1.0, -1.0]).unwrap()),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }
}
