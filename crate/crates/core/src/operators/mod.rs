//! Dense matrices as linear maps, with operator, Schatten and trace norms.

mod eig;
mod power;
mod schmidt;

pub use eig::{hermitian_eig, is_psd, psd_sqrt, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
pub use power::op_norm_lower;
pub use schmidt::{
    orthonormality_defect, schatten_norm, schmidt, sp_duality_report, SchmidtDecomposition,
};

use std::fmt;

use crate::linalg;
use crate::scalar::{format_scalar, modulus, parse_scalar, real, Complex64, Field, Scalar};
use crate::{Error, Exponent, Result, Vector};

/// A `rows × cols` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: Field,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>, field: Field) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix"));
        }
        crate::error::check_dims(rows * cols, entries.len())?;
        Ok(Self {
            rows,
            cols,
            entries,
            field,
        })
    }

    pub fn real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().copied().map(real).collect(),
            Field::Real,
        )
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: Field) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in &rows {
            crate::error::check_dims(c, row.len())?;
        }
        Self::new(r, c, rows.into_iter().flatten().collect(), field)
    }

    /// The matrix whose `k`-th column is `columns[k]`.
    pub fn from_columns(columns: &[Vector]) -> Result<Self> {
        let first = columns.first().ok_or(Error::Empty("column list"))?;
        let rows = first.dim();
        let cols = columns.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); rows * cols];
        let mut field = Field::Real;
        for (k, c) in columns.iter().enumerate() {
            crate::error::check_dims(rows, c.dim())?;
            field = field.join(c.field());
            for (j, &z) in c.entries().iter().enumerate() {
                entries[j * cols + k] = z;
            }
        }
        Self::new(rows, cols, entries, field)
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Result<Self> {
        Self::new(
            rows,
            cols,
            vec![Complex64::new(0.0, 0.0); rows * cols],
            field,
        )
    }

    pub fn identity(n: usize, field: Field) -> Result<Self> {
        let mut m = Self::zeros(n, n, field)?;
        for k in 0..n {
            m.set(k, k, real(1.0));
        }
        Ok(m)
    }

    pub fn diag(values: &[Scalar], field: Field) -> Result<Self> {
        let n = values.len();
        let mut m = Self::zeros(n, n, field)?;
        for (k, &v) in values.iter().enumerate() {
            m.set(k, k, v);
        }
        Ok(m)
    }

    pub fn diag_real(values: &[f64]) -> Result<Self> {
        let vals: Vec<Scalar> = values.iter().copied().map(real).collect();
        Self::diag(&vals, Field::Real)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Scalar) {
        self.entries[i * self.cols + j] = z;
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        let c = (0..self.rows).map(|i| self.get(i, j)).collect();
        Vector::new(c, self.field).expect("matrix has rows")
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        crate::error::check_dims(self.cols, v.dim())?;
        let out = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Vector::new(out, self.field.join(v.field()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        crate::error::check_dims(self.cols, other.rows)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Matrix::new(self.rows, other.cols, out, self.field.join(other.field))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(Scalar, Scalar) -> Scalar) -> Result<Matrix> {
        crate::error::check_dims(self.rows, other.rows)?;
        crate::error::check_dims(self.cols, other.cols)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Matrix::new(self.rows, self.cols, entries, self.field.join(other.field))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        let field = if c.im != 0.0 {
            Field::Complex
        } else {
            self.field
        };
        Matrix {
            entries: self.entries.iter().map(|z| z * c).collect(),
            field,
            ..*self
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = self.transpose();
        out.entries.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
            field: self.field,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|&z| modulus(z)).fold(0.0, f64::max)
    }

    pub fn hs_norm(&self) -> f64 {
        linalg::norm2(&self.entries)
    }

    pub fn trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|k| self.get(k, k)).sum())
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut dev = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max(modulus(self.get(i, j) - self.get(j, i).conj()));
            }
        }
        Ok(dev)
    }

    /// Largest absolute column sum.
    pub fn max_column_sum(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| modulus(self.get(i, j))).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&z| modulus(z)).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{};{};", self.rows, self.cols, self.field)?;
        for (k, z) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&format_scalar(*z))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Matrix {
    type Err = Error;

    /// Parses `RxC;field;e00,e01,...` (row-major).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad matrix `{s}`"));
        let mut parts = s.splitn(3, ';');
        let shape = parts.next().ok_or_else(bad)?;
        let field: Field = parts.next().ok_or_else(bad)?.parse()?;
        let body = parts.next().ok_or_else(bad)?;
        let (r, c) = shape.split_once('x').ok_or_else(bad)?;
        let rows = r.trim().parse().map_err(|_| bad())?;
        let cols = c.trim().parse().map_err(|_| bad())?;
        let entries = body.split(',').map(parse_scalar).collect::<Result<_>>()?;
        Matrix::new(rows, cols, entries, field)
    }
}

pub fn apply(t: &Matrix, v: &Vector) -> Result<Vector> {
    t.apply(v)
}

pub fn adjoint(t: &Matrix) -> Matrix {
    t.adjoint()
}

pub fn trace(t: &Matrix) -> Result<Scalar> {
    t.trace()
}

pub fn hs_norm(t: &Matrix) -> f64 {
    t.hs_norm()
}

/// `‖T‖_{p→p}` for `p ∈ {1, 2, ∞}`: the largest column sum, the largest
/// singular value and the largest row sum.
pub fn op_norm_exact(t: &Matrix, p: Exponent) -> Result<f64> {
    match p {
        Exponent::One => Ok(t.max_column_sum()),
        Exponent::Infinity => Ok(t.max_row_sum()),
        Exponent::Between { p: 2.0, .. } => {
            let s = schmidt(t, None)?;
            Ok(s.values.first().copied().unwrap_or(0.0))
        }
        other => Err(Error::UnsupportedExponent(other.to_string())),
    }
}

/// Schur's bound `‖T‖_{1→1}^{1/p} ‖T‖_{∞→∞}^{1−1/p}` on `‖T‖_{p→p}`.
pub fn schur_bound(t: &Matrix, p: Exponent) -> f64 {
    let one = t.max_column_sum();
    let inf = t.max_row_sum();
    match p {
        Exponent::One => one,
        Exponent::Infinity => inf,
        Exponent::Between { .. } => {
            let s = p.recip();
            one.powf(s) * inf.powf(1.0 - s)
        }
    }
}

/// `‖T^{2^k}‖₂^{1/2^k}`, an upper bound on the spectral radius that
/// decreases towards it as `k` grows.
///
/// Powers are formed by repeated squaring with renormalization, tracking
/// the scale in logarithms so that neither overflow nor underflow occurs.
pub fn spectral_radius_estimate(t: &Matrix, k: u32) -> Result<f64> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows,
            cols: t.cols,
        });
    }
    if k == 0 {
        return op_norm_exact(t, Exponent::TWO);
    }
    let s0 = t.hs_norm();
    if s0 == 0.0 {
        return Ok(0.0);
    }
    if !s0.is_finite() {
        return Err(Error::Overflow("matrix norm"));
    }
    let mut m = t.scale(real(1.0 / s0));
    let mut log_scale = s0.ln();
    for _ in 0..k {
        let sq = m.mul(&m)?;
        let c = sq.hs_norm();
        if c == 0.0 {
            return Ok(0.0);
        }
        m = sq.scale(real(1.0 / c));
        log_scale = 2.0 * log_scale + c.ln();
    }
    let top = op_norm_exact(&m, Exponent::TWO)?;
    if top == 0.0 {
        return Ok(0.0);
    }
    let out = ((log_scale + top.ln()) / 2f64.powi(k as i32)).exp();
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow("spectral radius estimate"))
    }
}

/// Orthonormalizes `vs` by modified Gram–Schmidt, dropping vectors whose
/// residual falls below `tol` relative to their norm.
pub fn gram_schmidt(vs: &[Vector], tol: f64) -> Vec<Vector> {
    let field = vs.iter().fold(Field::Real, |f, v| f.join(v.field()));
    let raw: Vec<Vec<Scalar>> = vs.iter().map(|v| v.entries().to_vec()).collect();
    linalg::gram_schmidt(&raw, tol)
        .into_iter()
        .map(|e| Vector::new(e, field).expect("nonempty"))
        .collect()
}

/// The orthogonal projection onto `span(basis_w)`: `P v = Σ ⟨v, e_l⟩ e_l`
/// for an orthonormal basis `e_l` of the span.
pub fn orthogonal_projection(basis_w: &[Vector]) -> Result<Matrix> {
    let first = basis_w.first().ok_or(Error::Empty("subspace basis"))?;
    let n = first.dim();
    for w in basis_w {
        crate::error::check_dims(n, w.dim())?;
    }
    let q = gram_schmidt(basis_w, 1e-10);
    if q.len() < basis_w.len() {
        return Err(Error::LinearlyDependent);
    }
    let mut p = Matrix::zeros(n, n, q[0].field())?;
    for e in &q {
        for j in 0..n {
            for k in 0..n {
                let z = p.get(j, k) + e.get(j) * e.get(k).conj();
                p.set(j, k, z);
            }
        }
    }
    Ok(p)
}

/// The partial sum `Σ_{j=0}^{n} T^j` of the Neumann series for `(I − T)^{-1}`.
pub fn neumann_inverse(t: &Matrix, n: usize) -> Result<Matrix> {
    let norm = op_norm_exact(t, Exponent::TWO)?;
    if !(norm < 1.0) {
        return Err(Error::NormNotBelowOne { norm });
    }
    let id = Matrix::identity(t.rows, t.field)?;
    let mut sum = id.clone();
    let mut power = id;
    for _ in 0..n {
        power = power.mul(t)?;
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

/// `‖(I − T) S − I‖₂`, which for the `n`-th Neumann sum is at most
/// `‖T‖₂^{n+1}` up to rounding.
pub fn neumann_residual(t: &Matrix, s: &Matrix) -> Result<f64> {
    let id = Matrix::identity(t.rows, t.field)?;
    let r = id.sub(t)?.mul(s)?.sub(&id)?;
    op_norm_exact(&r, Exponent::TWO)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, xs: &[f64]) -> Matrix {
        Matrix::real(rows, cols, xs).unwrap()
    }

    #[test]
    fn apply_examples() {
        let v = Vector::real(&[1.0, 1.0]).unwrap();
        assert_eq!(
            Matrix::identity(2, Field::Real).unwrap().apply(&v).unwrap(),
            v
        );
        let d = Matrix::diag_real(&[2.0, 3.0]).unwrap();
        assert_eq!(d.apply(&v).unwrap(), Vector::real(&[2.0, 3.0]).unwrap());
        let swap = m(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let ab = Vector::real(&[5.0, -7.0]).unwrap();
        assert_eq!(
            swap.apply(&ab).unwrap(),
            Vector::real(&[-7.0, 5.0]).unwrap()
        );
        assert!(swap.apply(&Vector::real(&[1.0]).unwrap()).is_err());
    }

    #[test]
    fn exact_norm_examples() {
        let d = Matrix::diag_real(&[1.0, -5.0, 2.0]).unwrap();
        for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            assert!((op_norm_exact(&d, p).unwrap() - 5.0).abs() < 1e-14);
        }
        let u = m(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert_eq!(op_norm_exact(&u, Exponent::ONE).unwrap(), 2.0);
        assert_eq!(op_norm_exact(&u, Exponent::INF).unwrap(), 2.0);
        let id = Matrix::identity(5, Field::Real).unwrap();
        assert!((op_norm_exact(&id, Exponent::TWO).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            op_norm_exact(&id, Exponent::new(3.0).unwrap()),
            Err(Error::UnsupportedExponent(_))
        ));
    }

    #[test]
    fn schur_examples() {
        let t = m(2, 2, &[1.0, -3.0, 2.0, 0.5]);
        assert_eq!(schur_bound(&t, Exponent::ONE), t.max_column_sum());
        assert_eq!(schur_bound(&t, Exponent::INF), t.max_row_sum());
        let ones = m(2, 2, &[1.0; 4]);
        assert!((schur_bound(&ones, Exponent::TWO) - 2.0).abs() < 1e-15);
        assert!((op_norm_exact(&ones, Exponent::TWO).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adjoint_examples() {
        let t = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(t.adjoint(), m(2, 2, &[1.0, 3.0, 2.0, 4.0]));
        let i = Matrix::new(1, 1, vec![Complex64::i()], Field::Complex).unwrap();
        assert_eq!(i.adjoint().get(0, 0), -Complex64::i());
        assert_eq!(t.adjoint().adjoint(), t);
    }

    #[test]
    fn trace_and_hs_examples() {
        assert_eq!(
            Matrix::identity(4, Field::Real).unwrap().trace().unwrap(),
            real(4.0)
        );
        assert_eq!(m(2, 2, &[0.0, 1.0, 0.0, 0.0]).trace().unwrap(), real(0.0));
        assert!(m(1, 2, &[1.0, 2.0]).trace().is_err());
        assert_eq!(Matrix::identity(4, Field::Real).unwrap().hs_norm(), 2.0);
        assert_eq!(Matrix::diag_real(&[3.0, 4.0]).unwrap().hs_norm(), 5.0);
    }

    #[test]
    fn spectral_radius_examples() {
        let nil = m(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(spectral_radius_estimate(&nil, 1).unwrap(), 0.0);
        let a = m(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((spectral_radius_estimate(&a, 6).unwrap() - 3.0).abs() < 1e-12);
        let big = Matrix::diag_real(&[1e200, 1.0]).unwrap();
        let est = spectral_radius_estimate(&big, 8).unwrap();
        assert!((est / 1e200 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_examples() {
        let v = |xs: &[f64]| Vector::real(xs).unwrap();
        let out = gram_schmidt(&[v(&[1.0, 0.0]), v(&[1.0, 1.0])], 1e-12);
        assert_eq!(out, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]);
        let out = gram_schmidt(&[v(&[3.0, 4.0]), v(&[6.0, 8.0])], 1e-12);
        assert_eq!(out.len(), 1);
        assert!((out[0].get(0) - real(0.6)).norm() < 1e-15);
    }

    #[test]
    fn projection_examples() {
        let v = |xs: &[f64]| Vector::real(xs).unwrap();
        let p = orthogonal_projection(&[v(&[1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(p, Matrix::diag_real(&[1.0, 0.0, 0.0]).unwrap());
        let p = orthogonal_projection(&[v(&[1.0, 1.0])]).unwrap();
        for z in p.entries() {
            assert!((z - real(0.5)).norm() < 1e-15);
        }
        let p = orthogonal_projection(&[v(&[1.0, 2.0]), v(&[0.0, 1.0])]).unwrap();
        assert!(
            p.sub(&Matrix::identity(2, Field::Real).unwrap())
                .unwrap()
                .max_abs()
                < 1e-15
        );
        assert_eq!(
            orthogonal_projection(&[v(&[1.0, 1.0]), v(&[2.0, 2.0])]),
            Err(Error::LinearlyDependent)
        );
    }

    #[test]
    fn neumann_examples() {
        let zero = Matrix::zeros(3, 3, Field::Real).unwrap();
        assert_eq!(
            neumann_inverse(&zero, 7).unwrap(),
            Matrix::identity(3, Field::Real).unwrap()
        );
        let half = Matrix::diag_real(&[0.5]).unwrap();
        let s = neumann_inverse(&half, 10).unwrap();
        assert_eq!(s.get(0, 0), real(2.0 - 2f64.powi(-10)));
        assert!(matches!(
            neumann_inverse(&Matrix::identity(2, Field::Real).unwrap(), 3),
            Err(Error::NormNotBelowOne { .. })
        ));
    }

    #[test]
    fn matrix_text_round_trip() {
        let t = Matrix::new(
            2,
            1,
            vec![Complex64::new(1.5, -2.0), real(0.25)],
            Field::Complex,
        )
        .unwrap();
        assert_eq!(t.to_string().parse::<Matrix>().unwrap(), t);
        assert!("2x2;real;1,2,3".parse::<Matrix>().is_err());
    }
}
