use std::collections::BTreeMap;

use crate::scalar::{real, Complex64, Field, Scalar};
use crate::{Error, Result};

use super::martingale::average_pyramid;
use super::{DyadicInterval, DyadicStepFunction};

/// Coefficients of `f = c₀·h₀ + Σ_I c_I·h_I` over `|I| ≥ 2^{1−level}`,
/// where `h₀ ≡ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoefficients {
    pub level: u32,
    pub c0: Scalar,
    pub coeffs: BTreeMap<DyadicInterval, Scalar>,
}

impl HaarCoefficients {
    /// `|c₀|² + Σ|c_I|²`.
    pub fn energy(&self) -> f64 {
        self.c0.norm_sqr() + self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>()
    }
}

/// `h_I = |I|^{−1/2}·(1_{right half} − 1_{left half})`, sampled at `level`.
pub fn haar_function(interval: DyadicInterval, level: u32) -> Result<DyadicStepFunction> {
    if level <= interval.level() {
        return Err(Error::OutOfRange(format!(
            "h_{interval} needs a level above {}",
            interval.level()
        )));
    }
    let height = interval.len().sqrt().recip();
    let (left, right) = interval.children();
    DyadicStepFunction::from_fn(level, |i| {
        let cell = DyadicInterval::new(level, i).expect("cell index is in range");
        if left.contains(&cell) {
            real(-height)
        } else if right.contains(&cell) {
            real(height)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `c₀ = ∫f` and `c_I = ∫ f·h_I = (|I|^{1/2}/2)·(avg_{I_r} f − avg_{I_l} f)`.
pub fn haar_transform(f: &DyadicStepFunction) -> HaarCoefficients {
    let pyramid = average_pyramid(f);
    let mut coeffs = BTreeMap::new();
    for k in 0..f.level() {
        let finer = &pyramid[k as usize + 1];
        for interval in DyadicInterval::at_level(k) {
            let j = interval.index();
            let c = (finer[2 * j + 1] - finer[2 * j]) * (interval.len().sqrt() / 2.0);
            coeffs.insert(interval, c);
        }
    }
    HaarCoefficients {
        level: f.level(),
        c0: pyramid[0][0],
        coeffs,
    }
}

/// Inverse of [`haar_transform`], descending from `c₀` one level at a time.
pub fn haar_reconstruct(h: &HaarCoefficients) -> Result<DyadicStepFunction> {
    let mut row = vec![h.c0];
    for k in 0..h.level {
        let mut next = Vec::with_capacity(row.len() * 2);
        for (j, &avg) in row.iter().enumerate() {
            let interval = DyadicInterval::new(k, j)?;
            let c = h.coeffs.get(&interval).copied().unwrap_or_default();
            let half_gap = c / interval.len().sqrt();
            next.push(avg - half_gap);
            next.push(avg + half_gap);
        }
        row = next;
    }
    if let Some(stray) = h.coeffs.keys().find(|i| i.level() >= h.level) {
        return Err(Error::OutOfRange(format!(
            "coefficient on {stray} is finer than level {}",
            h.level
        )));
    }
    let f = DyadicStepFunction::new(h.level, row)?;
    let complex = h.c0.im != 0.0 || h.coeffs.values().any(|c| c.im != 0.0);
    Ok(f.with_field(if complex { Field::Complex } else { Field::Real }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn haar_function_is_its_own_expansion() {
        let i = DyadicInterval::new(2, 1).unwrap();
        let h = haar_function(i, 4).unwrap();
        assert!((h.l2_norm_sq() - 1.0).abs() < 1e-15);
        assert!(h.integral().norm() < 1e-15);
        let t = haar_transform(&h);
        assert!(t.c0.norm() < 1e-15);
        for (j, c) in &t.coeffs {
            let target = if *j == i { 1.0 } else { 0.0 };
            assert!((c - real(target)).norm() < 1e-14, "{j}: {c}");
        }
    }

    #[test]
    fn constant_has_only_c0() {
        let one = DyadicStepFunction::constant(real(1.0)).refine(3).unwrap();
        let t = haar_transform(&one);
        assert_eq!(t.c0, real(1.0));
        assert!(t.coeffs.values().all(|c| c.norm() == 0.0));
        assert_eq!(t.coeffs.len(), 7);
    }

    #[test]
    fn round_trip_and_parseval() {
        let mut rng = random::rng(12);
        for field in [Field::Real, Field::Complex] {
            let f = random::step_function(&mut rng, 4, field);
            let t = haar_transform(&f);
            let g = haar_reconstruct(&t).unwrap();
            assert!(g.sub(&f).sup_norm() <= 1e-13);
            assert!((t.energy() - f.l2_norm_sq()).abs() <= 1e-13);
            assert_eq!(g.field(), field);
        }
    }

    #[test]
    fn orthogonality_exhaustive() {
        let level = 5;
        let fns: Vec<_> = DyadicInterval::up_to_level(level - 1)
            .map(|i| haar_function(i, level).unwrap())
            .collect();
        for (a, f) in fns.iter().enumerate() {
            assert!(f.integral().norm() < 1e-14);
            for (b, g) in fns.iter().enumerate() {
                let ip = f.pairing(g).norm();
                if a == b {
                    assert!((ip - 1.0).abs() < 1e-13);
                } else {
                    assert!(ip < 1e-13);
                }
            }
        }
    }

    #[test]
    fn haar_needs_finer_level() {
        assert!(haar_function(DyadicInterval::new(3, 0).unwrap(), 3).is_err());
    }
}
