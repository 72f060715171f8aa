//! Linear functionals, dual norms, polyhedral gauges, the extension theorem
//! and polyhedral cones.

mod cone;
mod extension;
mod gauge;

pub use cone::{cone_contains, dual_cone, PolyhedralCone, MAX_CONE_GENERATORS};
pub use extension::{
    certify_domination, euclidean_extend, hahn_banach_extend, hahn_banach_extend_complex,
};
pub use gauge::{gauge_value, seminorm_from_sublinear, MaxLinearGauge};

use crate::scalar::{modulus, phase, real, Complex64, Field, Scalar};
use crate::{Error, Exponent, Result, Vector};

/// `λ(v) = Σ_j coeffs_j v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFunctional {
    coeffs: Vector,
}

impl LinearFunctional {
    pub fn new(coeffs: Vector) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &Vector {
        &self.coeffs
    }

    pub fn field(&self) -> Field {
        self.coeffs.field()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn eval(&self, v: &Vector) -> Result<Scalar> {
        v.pairing(&self.coeffs)
    }

    /// `‖λ‖_*` when `V` carries the `p`-norm: the conjugate norm of the
    /// coefficients.
    pub fn dual_norm(&self, p: Exponent) -> f64 {
        self.coeffs.p_norm(p.conjugate())
    }
}

pub fn dual_norm(lambda: &LinearFunctional, p: Exponent) -> f64 {
    lambda.dual_norm(p)
}

/// A nonzero `v` with `|Σ w_j v_j| = ‖w‖_q ‖v‖_p`, `q` conjugate to `p`.
///
/// For `1 < p < ∞`, `v_j = conj(w_j)|w_j|^{q−2}`; for `p = ∞` this is the
/// phase vector of `conj(w)`, and for `p = 1` a single coordinate at an
/// index of largest modulus.
pub fn dual_extremizer(w: &Vector, p: Exponent) -> Result<Vector> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let zero = Complex64::new(0.0, 0.0);
    let entries: Vec<Scalar> = match p {
        Exponent::Infinity => w.entries().iter().map(|&z| phase(z).conj()).collect(),
        Exponent::One => {
            let (l, _) =
                w.moduli().enumerate().fold(
                    (0, -1.0),
                    |best, (k, m)| if m > best.1 { (k, m) } else { best },
                );
            let mut v = vec![zero; w.dim()];
            v[l] = phase(w.get(l)).conj();
            v
        }
        Exponent::Between { q, .. } => {
            let direct: Vec<Scalar> = w.entries().iter().map(|&z| power_term(z, 1.0, q)).collect();
            if direct.iter().all(|z| z.re.is_finite() && z.im.is_finite())
                && direct.iter().any(|z| modulus(*z) > 0.0)
            {
                direct
            } else {
                // rescale so the largest modulus is one; homogeneity keeps
                // the equality
                let m = w.moduli().fold(0.0_f64, f64::max);
                w.entries().iter().map(|&z| power_term(z, m, q)).collect()
            }
        }
    };
    Vector::new(entries, w.field())
}

fn power_term(z: Scalar, scale: f64, q: f64) -> Scalar {
    let r = modulus(z);
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        phase(z).conj() * real((r / scale).powf(q - 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::real(xs).unwrap()
    }

    #[test]
    fn dual_norm_examples() {
        let f = |c: &[f64]| LinearFunctional::new(v(c));
        assert_eq!(dual_norm(&f(&[3.0, 4.0]), Exponent::TWO), 5.0);
        assert_eq!(dual_norm(&f(&[2.0, -1.0]), Exponent::ONE), 2.0);
        assert_eq!(dual_norm(&f(&[1.0, 1.0, 1.0]), Exponent::INF), 3.0);
    }

    #[test]
    fn extremizer_examples() {
        let e = dual_extremizer(&v(&[1.0, 0.0]), Exponent::TWO).unwrap();
        assert_eq!(e, v(&[1.0, 0.0]));
        let e = dual_extremizer(&v(&[3.0, 4.0]), Exponent::TWO).unwrap();
        assert_eq!(e, v(&[3.0, 4.0]));
        assert_eq!(e.pairing(&v(&[3.0, 4.0])).unwrap(), real(25.0));
        let w = v(&[2.0, -1.0]);
        let e = dual_extremizer(&w, Exponent::INF).unwrap();
        assert_eq!(e, v(&[1.0, -1.0]));
        // every sign vector s has |⟨s,w⟩| ≤ 3
        let best = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
            .iter()
            .map(|s| modulus(v(s).pairing(&w).unwrap()))
            .fold(0.0, f64::max);
        assert_eq!(best, 3.0);
        assert_eq!(modulus(e.pairing(&w).unwrap()), best);
    }

    #[test]
    fn extremizer_p_one_picks_largest_coordinate() {
        let w = Vector::complex(vec![real(1.0), Complex64::new(0.0, -3.0), real(2.0)]).unwrap();
        let e = dual_extremizer(&w, Exponent::ONE).unwrap();
        assert_eq!(e.p_norm(Exponent::ONE), 1.0);
        assert!((e.pairing(&w).unwrap() - real(3.0)).norm() < 1e-15);
    }

    #[test]
    fn extremizer_survives_extreme_scales() {
        let w = v(&[1e-300, 2e-300]);
        let p = Exponent::new(1.25).unwrap();
        let e = dual_extremizer(&w, p).unwrap();
        let lhs = modulus(e.pairing(&w).unwrap());
        let rhs = w.p_norm(p.conjugate()) * e.p_norm(p);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn zero_has_no_extremizer() {
        assert_eq!(
            dual_extremizer(&v(&[0.0, 0.0]), Exponent::TWO),
            Err(Error::ZeroVector)
        );
    }
}
