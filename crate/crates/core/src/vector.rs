//! Dense vectors, `p`-norms, the duality pairing and inner products.

use std::fmt;

use crate::error::check_dims;
use crate::scalar::{format_scalar, modulus, parse_scalar, real, Complex64, Field, Scalar};
use crate::{Error, Exponent, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<Scalar>,
    field: Field,
}

impl Vector {
    pub fn new(entries: Vec<Scalar>, field: Field) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("vector"));
        }
        Ok(Self { entries, field })
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().copied().map(real).collect(), Field::Real)
    }

    pub fn complex(entries: Vec<Scalar>) -> Result<Self> {
        Self::new(entries, Field::Complex)
    }

    pub fn zeros(dim: usize, field: Field) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim], field)
    }

    /// The `k`-th standard basis vector.
    pub fn unit(dim: usize, k: usize, field: Field) -> Result<Self> {
        if k >= dim {
            return Err(Error::OutOfRange(format!(
                "unit index {k} in dimension {dim}"
            )));
        }
        let mut v = Self::zeros(dim, field)?;
        v.entries[k] = real(1.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn get(&self, k: usize) -> Scalar {
        self.entries[k]
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.entries.iter().map(|&z| modulus(z))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `‖v‖_p`; see [`p_norm`].
    pub fn p_norm(&self, p: Exponent) -> f64 {
        p_norm_of(self.moduli(), p)
    }

    pub fn norm2(&self) -> f64 {
        self.p_norm(Exponent::TWO)
    }

    /// `Σ_j w_j v_j`, without conjugation.
    pub fn pairing(&self, w: &Vector) -> Result<Scalar> {
        check_dims(self.dim(), w.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(&w.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `⟨v, w⟩ = Σ_j v_j conj(w_j)`.
    pub fn inner_product(&self, w: &Vector) -> Result<Scalar> {
        check_dims(self.dim(), w.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(&w.entries)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn checked_add(&self, w: &Vector) -> Result<Vector> {
        self.zip_with(w, |a, b| a + b)
    }

    pub fn checked_sub(&self, w: &Vector) -> Result<Vector> {
        self.zip_with(w, |a, b| a - b)
    }

    fn zip_with(&self, w: &Vector, f: impl Fn(Scalar, Scalar) -> Scalar) -> Result<Vector> {
        check_dims(self.dim(), w.dim())?;
        Ok(Vector {
            entries: self
                .entries
                .iter()
                .zip(&w.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            field: self.field.join(w.field),
        })
    }

    /// `c·v`. Multiplying by a non-real scalar promotes the field.
    pub fn scale(&self, c: Scalar) -> Vector {
        let field = if c.im != 0.0 {
            Field::Complex
        } else {
            self.field
        };
        Vector {
            entries: self.entries.iter().map(|z| z * c).collect(),
            field,
        }
    }

    pub fn conj(&self) -> Vector {
        Vector {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
            field: self.field,
        }
    }

    /// `a·self + b·w`.
    pub fn axpby(&self, a: Scalar, w: &Vector, b: Scalar) -> Result<Vector> {
        let mut out = self.zip_with(w, |x, y| a * x + b * y)?;
        if a.im != 0.0 || b.im != 0.0 {
            out.field = Field::Complex;
        }
        Ok(out)
    }

    pub fn with_field(mut self, field: Field) -> Vector {
        self.field = field;
        self
    }
}

/// `(Σ|v_j|^p)^{1/p}` for finite `p`, `max_j |v_j|` for `p = ∞`.
///
/// The largest modulus is factored out before powering, so neither
/// overflow nor underflow occurs for representable inputs.
pub fn p_norm(v: &Vector, p: Exponent) -> f64 {
    v.p_norm(p)
}

/// `p`-norm of a sequence of nonnegative moduli.
pub fn p_norm_of(moduli: impl Iterator<Item = f64> + Clone, p: Exponent) -> f64 {
    let m = moduli.clone().fold(0.0_f64, f64::max);
    match p {
        Exponent::Infinity => m,
        _ if m == 0.0 || !m.is_finite() => m,
        Exponent::One => moduli.sum(),
        Exponent::Between { p, .. } => {
            let s: f64 = moduli.map(|a| (a / m).powf(p)).sum();
            m * s.powf(1.0 / p)
        }
    }
}

/// Reconstructs `⟨v, w⟩` from a squared norm through the polarization
/// identities.
///
/// Over `R`: `4⟨v,w⟩ = ‖v+w‖² − ‖v−w‖²`. Over `C`:
/// `4⟨v,w⟩ = Σ_{k=0}^{3} i^k ‖v + i^k w‖²`.
pub fn polarize(
    norm_sq: impl Fn(&Vector) -> f64,
    v: &Vector,
    w: &Vector,
    field: Field,
) -> Result<Scalar> {
    check_dims(v.dim(), w.dim())?;
    let one = real(1.0);
    match field {
        Field::Real => {
            let plus = norm_sq(&v.axpby(one, w, one)?);
            let minus = norm_sq(&v.axpby(one, w, -one)?);
            Ok(real((plus - minus) / 4.0))
        }
        Field::Complex => {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut ik = one;
            for _ in 0..4 {
                acc += ik * norm_sq(&v.axpby(one, w, ik)?);
                ik *= Complex64::i();
            }
            Ok(acc / 4.0)
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.field)?;
        for (k, z) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&format_scalar(*z))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Vector {
    type Err = Error;

    /// Parses `field;v0,v1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (field, body) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse("vector needs `field;entries`".into()))?;
        let entries = body
            .split(',')
            .map(parse_scalar)
            .collect::<Result<Vec<_>>>()?;
        Vector::new(entries, field.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::real(xs).unwrap()
    }

    #[test]
    fn p_norm_examples() {
        assert_eq!(v(&[3.0, 4.0]).p_norm(Exponent::TWO), 5.0);
        assert_eq!(v(&[1.0, 1.0, 1.0, 1.0]).p_norm(Exponent::INF), 1.0);
        assert_eq!(v(&[1.0, -2.0, 2.0]).p_norm(Exponent::ONE), 5.0);
        assert_eq!(v(&[0.0, 0.0]).p_norm(Exponent::new(3.0).unwrap()), 0.0);
    }

    #[test]
    fn p_norm_does_not_overflow() {
        let big = v(&[1e200, 1e200]);
        let n = big.p_norm(Exponent::new(3.0).unwrap());
        assert!((n / 1e200 - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let tiny = v(&[1e-200, 1e-200]);
        assert!(tiny.p_norm(Exponent::new(4.0).unwrap()) > 0.0);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(v(&[1.0, 0.0]).pairing(&v(&[0.0, 1.0])).unwrap(), real(0.0));
        assert_eq!(v(&[1.0, 1.0]).pairing(&v(&[1.0, 1.0])).unwrap(), real(2.0));
        assert_eq!(
            v(&[1.0, 2.0, 3.0]).pairing(&v(&[3.0, 2.0, 1.0])).unwrap(),
            real(10.0)
        );
        assert!(matches!(
            v(&[1.0]).pairing(&v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let z = Vector::complex(vec![Complex64::i(), real(1.0)]).unwrap();
        assert_eq!(z.inner_product(&z).unwrap(), real(2.0));
        assert_eq!(
            v(&[1.0, 0.0]).inner_product(&v(&[0.0, 1.0])).unwrap(),
            real(0.0)
        );
        assert_eq!(
            v(&[1.0, 2.0]).inner_product(&v(&[2.0, -1.0])).unwrap(),
            real(0.0)
        );
        assert!(v(&[1.0]).inner_product(&v(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn polarize_examples() {
        let sq = |x: &Vector| x.norm2().powi(2);
        let r = polarize(sq, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), Field::Real).unwrap();
        assert_eq!(r, real(0.0));
        let r = polarize(sq, &v(&[1.0, 1.0]), &v(&[1.0, 1.0]), Field::Real).unwrap();
        assert!((r - real(2.0)).norm() < 1e-15);
        // by hand: |1+i|² + i|1+i·i|² − |1−i|² − i|1−i·i|² = 2 + 0 − 2 − 4i
        // so 4⟨v,w⟩ = −4i.
        let e1 = Vector::complex(vec![real(1.0), real(0.0)]).unwrap();
        let ie1 = Vector::complex(vec![Complex64::i(), real(0.0)]).unwrap();
        let r = polarize(sq, &e1, &ie1, Field::Complex).unwrap();
        assert!((r - Complex64::new(0.0, -1.0)).norm() < 1e-15, "{r}");
    }

    #[test]
    fn text_round_trip() {
        let z = Vector::complex(vec![Complex64::new(1.0, -0.5), real(2.0)]).unwrap();
        let back: Vector = z.to_string().parse().unwrap();
        assert_eq!(back, z);
        assert!("real;".parse::<Vector>().is_err());
    }

    #[test]
    fn empty_vector_rejected() {
        assert!(matches!(Vector::real(&[]), Err(Error::Empty(_))));
    }
}
