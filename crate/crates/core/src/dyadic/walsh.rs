use crate::scalar::real;
use crate::{Error, Result};

use super::{check_level, DyadicStepFunction};

/// `r_j` at `level`: `+1` then `−1` alternately on intervals of length
/// `2^{−j}`.
pub fn rademacher(j: u32, level: u32) -> Result<DyadicStepFunction> {
    check_level(level)?;
    if j == 0 || j > level {
        return Err(Error::OutOfRange(format!("r_{j} at level {level}")));
    }
    DyadicStepFunction::from_fn(level, |c| {
        real(if (c >> (level - j)).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        })
    })
}

/// `w_A = Π_{j ∈ A} r_j`, with `w_∅ ≡ 1`. Repeated indices cancel.
pub fn walsh(set: &[u32], level: u32) -> Result<DyadicStepFunction> {
    check_level(level)?;
    let mut w = DyadicStepFunction::constant(real(1.0)).refine(level)?;
    for &j in set {
        w = w.mul(&rademacher(j, level)?);
    }
    Ok(w)
}

/// `Σ_j a_j r_{j+1}` at level `a.len()`.
pub fn rademacher_sum(a: &[f64]) -> Result<DyadicStepFunction> {
    let level = a.len() as u32;
    check_level(level)?;
    let mut f = DyadicStepFunction::zero(level)?;
    for (j, &aj) in a.iter().enumerate() {
        f = f.add(&rademacher(j as u32 + 1, level)?.scale(real(aj)));
    }
    Ok(f)
}

/// Moments of `f = Σ a_j r_j` against `σ = (Σ a_j²)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KhintchineReport {
    pub sigma: f64,
    /// `(p, ‖f‖_p)` for each requested `p`.
    pub norms: Vec<(f64, f64)>,
    /// `‖f‖₄⁴` by integration.
    pub fourth_moment: f64,
    /// `3σ⁴ − 2Σa_j⁴`.
    pub fourth_moment_formula: f64,
    /// `max |f|`, which equals `Σ|a_j|`.
    pub sup: f64,
}

impl KhintchineReport {
    /// Largest violation of `‖f‖_p ≤ σ` for `p ≤ 2` and `σ ≤ ‖f‖_q` for
    /// `q ≥ 2`, relative to `σ`; nonpositive when the sandwich holds.
    pub fn sandwich_excess(&self) -> f64 {
        if self.sigma == 0.0 {
            return 0.0;
        }
        self.norms
            .iter()
            .map(|&(p, n)| {
                if p <= 2.0 {
                    (n - self.sigma) / self.sigma
                } else {
                    (self.sigma - n) / self.sigma
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn khintchine_report(a: &[f64], p_grid: &[f64]) -> Result<KhintchineReport> {
    if let Some(&p) = p_grid.iter().find(|p| !(**p > 0.0)) {
        return Err(Error::InvalidExponent(p));
    }
    let f = rademacher_sum(a)?;
    let energy = a.iter().map(|x| x * x).sum::<f64>();
    let sigma = energy.sqrt();
    let norms = p_grid
        .iter()
        .map(|&p| {
            let n = if p.is_infinite() {
                f.sup_norm()
            } else {
                f.lp_integral(p).powf(1.0 / p)
            };
            (p, n)
        })
        .collect();
    Ok(KhintchineReport {
        sigma,
        norms,
        fourth_moment: f.lp_integral(4.0),
        fourth_moment_formula: 3.0 * energy * energy
            - 2.0 * a.iter().map(|x| x.powi(4)).sum::<f64>(),
        sup: f.sup_norm(),
    })
}
