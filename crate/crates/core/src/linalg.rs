//! Small dense kernels shared by the higher modules.

use crate::scalar::{modulus, real, Complex64, Scalar};
use crate::{Error, Result};

/// Relative pivot threshold below which a system is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-13;

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
///
/// `a` is given as a list of rows.
pub fn solve(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let n = a.len();
    crate::error::check_dims(n, b.len())?;
    for row in &a {
        crate::error::check_dims(n, row.len())?;
    }
    let scale = a
        .iter()
        .flatten()
        .map(|&z| modulus(z))
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Err(Error::LinearlyDependent);
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| modulus(a[i][col]).total_cmp(&modulus(a[j][col])))
            .expect("nonempty range");
        if modulus(a[pivot][col]) <= SINGULAR_TOL * scale {
            return Err(Error::LinearlyDependent);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Complex64::new(1.0, 0.0) / a[col][col];
        for r in col + 1..n {
            let factor = a[r][col] * inv;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * y;
            }
            let sub = factor * b[col];
            b[r] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let tail: Scalar = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Ok(x)
}

pub fn solve_real(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let a = a
        .iter()
        .map(|row| row.iter().copied().map(real).collect())
        .collect();
    let b = b.iter().copied().map(real).collect();
    Ok(solve(a, b)?.into_iter().map(|z| z.re).collect())
}

/// Least-squares coefficients `t` minimizing `‖Σ t_k cols[k] − v‖₂`, with
/// the residual norm. Dependent columns are reported as an error.
pub fn least_squares_real(cols: &[&[f64]], v: &[f64]) -> Result<(Vec<f64>, f64)> {
    let k = cols.len();
    if k == 0 {
        return Ok((Vec::new(), norm2_real(v)));
    }
    for c in cols {
        crate::error::check_dims(v.len(), c.len())?;
    }
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot_real(cols[i], cols[j])).collect())
        .collect();
    let rhs: Vec<f64> = cols.iter().map(|c| dot_real(c, v)).collect();
    let t = solve_real(&gram, &rhs)?;
    let residual: Vec<f64> = (0..v.len())
        .map(|r| v[r] - (0..k).map(|i| t[i] * cols[i][r]).sum::<f64>())
        .collect();
    Ok((t, norm2_real(&residual)))
}

pub fn dot_real(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2_real(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |acc, &x| acc.hypot(x))
}

/// `Σ a_j conj(b_j)`.
pub fn inner(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm2(a: &[Scalar]) -> f64 {
    a.iter().fold(0.0_f64, |acc, &z| acc.hypot(modulus(z)))
}

/// Modified Gram–Schmidt. Vectors whose residual norm falls below `tol`
/// times their original norm (or below `tol` for tiny inputs) are dropped.
pub fn gram_schmidt(vs: &[Vec<Scalar>], tol: f64) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for v in vs {
        let original = norm2(v);
        let mut w = v.clone();
        // two passes keep the family orthonormal to working precision
        for _ in 0..2 {
            for q in &out {
                let c = inner(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = norm2(&w);
        if n > tol * original.max(1.0) && n > 0.0 {
            out.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    out
}
