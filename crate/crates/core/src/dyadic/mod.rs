//! Dyadic step functions on `[0, 1)` and the harmonic analysis built on
//! them: conditional expectations, maximal and square functions, stopping
//! times, the Haar, Rademacher and Walsh systems.
//!
//! Every integral here is an exact finite sum `2^{−l}·Σ values`.

mod estimates;
mod haar;
mod interval;
mod martingale;
mod stopping;
mod walsh;

use std::fmt;
use std::str::FromStr;

use crate::error::check_dims;
use crate::scalar::{format_scalar, modulus, parse_scalar, real, Complex64, Field, Scalar};
use crate::{Error, Exponent, Result};

pub use estimates::{
    auxiliary_sides, distinct_values, distribution_measure, distribution_measure_at_least,
    lambda_grid, layer_cake, maximal_linearization, modified_weak_type_pairs, square_linearization,
    tail_integral, weak_type_sup, MaximalLinearization, SquareLinearization,
};
pub use haar::{haar_function, haar_reconstruct, haar_transform, HaarCoefficients};
pub use interval::DyadicInterval;
pub use martingale::{
    average_pyramid, difference, expectation, maximal_fn, square_fn, square_fn_truncated,
    tail_square_report, TailSquareReport,
};
pub use stopping::{stopping_decompose, StoppingDecomposition, StoppingMode};
pub use walsh::{khintchine_report, rademacher, rademacher_sum, walsh, KhintchineReport};

/// Largest supported level: `2^24` cells.
pub const MAX_LEVEL: u32 = 24;

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::OutOfRange(format!(
            "level {level} exceeds {MAX_LEVEL}"
        )));
    }
    Ok(())
}

/// A function on `[0, 1)` constant on each of the `2^level` cells
/// `[j·2^{−level}, (j+1)·2^{−level})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStepFunction {
    level: u32,
    values: Vec<Scalar>,
    field: Field,
}

impl DyadicStepFunction {
    /// The field is real unless some value has a nonzero imaginary part.
    pub fn new(level: u32, values: Vec<Scalar>) -> Result<Self> {
        check_level(level)?;
        check_dims(1usize << level, values.len())?;
        let field = if values.iter().any(|z| z.im != 0.0) {
            Field::Complex
        } else {
            Field::Real
        };
        Ok(Self {
            level,
            values,
            field,
        })
    }

    pub fn real(level: u32, values: &[f64]) -> Result<Self> {
        Self::new(level, values.iter().copied().map(real).collect())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(0, vec![c]).expect("one cell at level 0")
    }

    pub fn zero(level: u32) -> Result<Self> {
        check_level(level)?;
        Self::new(level, vec![Complex64::new(0.0, 0.0); 1usize << level])
    }

    /// `1_I` at the level of `I`, or finer.
    pub fn indicator(interval: DyadicInterval, level: u32) -> Result<Self> {
        if level < interval.level() {
            return Err(Error::OutOfRange(format!(
                "level {level} is coarser than {interval}"
            )));
        }
        let mut f = Self::zero(level)?;
        for j in interval.cells(level) {
            f.values[j] = real(1.0);
        }
        Ok(f)
    }

    pub fn from_fn(level: u32, mut g: impl FnMut(usize) -> Scalar) -> Result<Self> {
        check_level(level)?;
        Self::new(level, (0..1usize << level).map(&mut g).collect())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_length(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        if field == Field::Real {
            self.values.iter_mut().for_each(|z| z.im = 0.0);
        }
        self
    }

    /// The value at `x ∈ [0, 1)`.
    pub fn eval(&self, x: f64) -> Result<Scalar> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::OutOfRange(format!("{x} is outside [0, 1)")));
        }
        let j = ((x * self.len() as f64) as usize).min(self.len() - 1);
        Ok(self.values[j])
    }

    /// The same function at a finer level.
    pub fn refine(&self, level: u32) -> Result<Self> {
        check_level(level)?;
        if level < self.level {
            return Err(Error::OutOfRange(format!(
                "cannot refine level {} to {level}",
                self.level
            )));
        }
        let width = 1usize << (level - self.level);
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, width))
            .collect();
        Ok(Self {
            level,
            values,
            field: self.field,
        })
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Scalar, Scalar) -> Scalar) -> Self {
        let level = self.level.max(other.level);
        let a = self.refine(level).expect("level is within range");
        let b = other.refine(level).expect("level is within range");
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| op(x, y))
            .collect();
        Self {
            level,
            values,
            field: self.field.join(other.field),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x * y)
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let field = if c.im != 0.0 {
            Field::Complex
        } else {
            self.field
        };
        Self {
            level: self.level,
            values: self.values.iter().map(|&v| v * c).collect(),
            field,
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, g: impl Fn(Scalar) -> Scalar) -> Self {
        Self {
            level: self.level,
            values: self.values.iter().map(|&v| g(v)).collect(),
            field: self.field,
        }
    }

    /// `x ↦ φ(|f(x)|)`, a real function.
    pub fn map_modulus(&self, phi: impl Fn(f64) -> f64) -> Self {
        Self {
            level: self.level,
            values: self.values.iter().map(|&v| real(phi(modulus(v)))).collect(),
            field: Field::Real,
        }
    }

    pub fn abs(&self) -> Self {
        self.map_modulus(|m| m)
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.values.iter().map(|&v| modulus(v))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub fn real_values(&self) -> Result<Vec<f64>> {
        if !self.is_real() {
            return Err(Error::ComplexValued);
        }
        Ok(self.values.iter().map(|z| z.re).collect())
    }

    pub fn integral(&self) -> Scalar {
        self.values.iter().sum::<Scalar>() * self.cell_length()
    }

    /// `∫_I f`. Intervals finer than the function's level are allowed.
    pub fn integral_on(&self, interval: DyadicInterval) -> Scalar {
        self.average_on(interval) * interval.len()
    }

    /// `|I|^{−1} ∫_I f`.
    pub fn average_on(&self, interval: DyadicInterval) -> Scalar {
        if interval.level() >= self.level {
            let j = interval.index() >> (interval.level() - self.level);
            return self.values[j];
        }
        let cells = interval.cells(self.level);
        let n = cells.len() as f64;
        self.values[cells].iter().sum::<Scalar>() / n
    }

    /// `∫ |f|^p` for `p > 0`.
    pub fn lp_integral(&self, p: f64) -> f64 {
        pairwise_sum(&self.moduli().map(|m| m.powf(p)).collect::<Vec<_>>()) * self.cell_length()
    }

    pub fn l1_norm(&self) -> f64 {
        pairwise_sum(&self.moduli().collect::<Vec<_>>()) * self.cell_length()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        pairwise_sum(&self.values.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())
            * self.cell_length()
    }

    /// `(∫|f|^p)^{1/p}`, or the largest modulus for `p = ∞`.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        match p.finite() {
            Some(p) => self.lp_integral(p).powf(1.0 / p),
            None => self.sup_norm(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.moduli().fold(0.0, f64::max)
    }

    /// `∫ f·g`, without conjugation.
    pub fn pairing(&self, other: &Self) -> Scalar {
        self.mul(other).integral()
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

impl fmt::Display for DyadicStepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.level)?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&format_scalar(*v))?;
        }
        Ok(())
    }
}

impl FromStr for DyadicStepFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (level, body) = s
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `level;values`, got `{s}`")))?;
        let level: u32 = level
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad level `{level}`")))?;
        let values = body
            .split(',')
            .map(parse_scalar)
            .collect::<Result<Vec<_>>>()?;
        Self::new(level, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_is_cell_sum() {
        let f = DyadicStepFunction::real(2, &[1.0, 2.0, 3.0, 6.0]).unwrap();
        assert_eq!(f.integral(), real(3.0));
        assert_eq!(f.l1_norm(), 3.0);
        assert_eq!(f.sup_norm(), 6.0);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(DyadicStepFunction::real(2, &[1.0, 2.0]).is_err());
        assert!(DyadicStepFunction::zero(MAX_LEVEL + 1).is_err());
    }

    #[test]
    fn mixed_levels_refine() {
        let f = DyadicStepFunction::real(1, &[1.0, -1.0]).unwrap();
        let g = DyadicStepFunction::real(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let h = f.add(&g);
        assert_eq!(h.level(), 2);
        assert_eq!(h.real_values().unwrap(), vec![2.0, 3.0, 2.0, 3.0]);
        assert_eq!(h.sub(&g).real_values().unwrap(), vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn averages_on_intervals() {
        let f = DyadicStepFunction::real(2, &[4.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.average_on(DyadicInterval::new(1, 0).unwrap()), real(2.0));
        assert_eq!(f.average_on(DyadicInterval::new(3, 1).unwrap()), real(4.0));
        assert_eq!(f.integral_on(DyadicInterval::new(1, 0).unwrap()), real(1.0));
    }

    #[test]
    fn text_round_trip() {
        let f = DyadicStepFunction::new(1, vec![real(0.1), Complex64::new(-2.5, 1e-3)]).unwrap();
        let text = f.to_string();
        assert_eq!(text, "1;0.1,-2.5+0.001i");
        assert_eq!(text.parse::<DyadicStepFunction>().unwrap(), f);
        assert!("2;1,2".parse::<DyadicStepFunction>().is_err());
        assert!("x".parse::<DyadicStepFunction>().is_err());
    }

    #[test]
    fn eval_picks_cell() {
        let f = DyadicStepFunction::real(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.eval(0.25).unwrap(), real(2.0));
        assert_eq!(f.eval(0.999).unwrap(), real(4.0));
        assert!(f.eval(1.0).is_err());
    }
}
