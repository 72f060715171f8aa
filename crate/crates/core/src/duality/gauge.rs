use crate::scalar::{modulus, real, Field};
use crate::{Error, Result, Vector};

/// `v ↦ max_i Re⟨c_i, v⟩` (a sublinear function) or, when `absolute`,
/// `v ↦ max_i |⟨c_i, v⟩|` (a seminorm). The pairing has no conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxLinearGauge {
    rows: Vec<Vector>,
    absolute: bool,
}

impl MaxLinearGauge {
    pub fn new(rows: Vec<Vector>, absolute: bool) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("gauge rows"))?;
        for r in &rows {
            crate::error::check_dims(first.dim(), r.dim())?;
        }
        Ok(Self { rows, absolute })
    }

    /// The `ℓ^∞` norm on `R^n`: rows `e_1, …, e_n`, absolute.
    pub fn linf(n: usize) -> Result<Self> {
        let rows = (0..n)
            .map(|k| Vector::unit(n, k, Field::Real))
            .collect::<Result<_>>()?;
        Self::new(rows, true)
    }

    /// The `ℓ^1` norm on `R^n` as the max of all `2^n` sign functionals.
    pub fn l1(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidArgument(format!("l1 gauge dimension {n}")));
        }
        let rows = (0..1usize << n)
            .map(|mask| {
                let signs: Vec<f64> = (0..n)
                    .map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                Vector::real(&signs)
            })
            .collect::<Result<_>>()?;
        Self::new(rows, false)
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_absolute(&self) -> bool {
        self.absolute
    }

    pub fn dim(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn eval(&self, v: &Vector) -> Result<f64> {
        crate::error::check_dims(self.dim(), v.dim())?;
        let mut best = f64::NEG_INFINITY;
        for c in &self.rows {
            let z = v.pairing(c)?;
            best = best.max(if self.absolute { modulus(z) } else { z.re });
        }
        Ok(best)
    }

    /// Rows of an equivalent non-absolute gauge over the reals:
    /// `max_i |⟨c_i,v⟩| = max_i max(⟨c_i,v⟩, ⟨−c_i,v⟩)`.
    pub(crate) fn sublinear_rows(&self) -> Vec<Vector> {
        let mut rows = self.rows.clone();
        if self.absolute {
            rows.extend(self.rows.iter().map(|c| c.scale(real(-1.0))));
        }
        rows
    }
}

/// `N(v) = max(p(v), p(−v))`, returned as the absolute gauge on the rows of
/// `p` together with their negatives.
pub fn seminorm_from_sublinear(p: &MaxLinearGauge) -> Result<MaxLinearGauge> {
    if p.is_absolute() {
        return Err(Error::InvalidArgument("gauge is already absolute".into()));
    }
    let mut rows = p.rows().to_vec();
    rows.extend(p.rows().iter().map(|c| c.scale(real(-1.0))));
    MaxLinearGauge::new(rows, true)
}

const MAX_SCALE_EXP: i32 = 60;

/// The Minkowski functional of `A = {u : gauge(u) ≤ 1}` at `v`, by
/// bisection on `r` with the membership test `gauge(v/r) ≤ 1`.
pub fn gauge_value(a: &MaxLinearGauge, v: &Vector, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol}")));
    }
    crate::error::check_dims(a.dim(), v.dim())?;
    if v.is_zero() {
        return Ok(0.0);
    }
    let member = |r: f64| -> Result<bool> { Ok(a.eval(&v.scale(real(1.0 / r)))? <= 1.0) };
    let mut hi = 1.0;
    let mut doublings = 0;
    while !member(hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_SCALE_EXP {
            return Err(Error::NonAbsorbing);
        }
    }
    let mut lo = 0.0;
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if member(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
