//! Convex functions sampled on a grid: difference quotients and support lines.

use crate::{Error, Result};

/// Additive slack allowed when comparing difference quotients.
pub const QUOTIENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl ConvexSampledFunction {
    /// Grid must be strictly increasing with at least two points.
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidArgument(
                "grid needs at least two points".into(),
            ));
        }
        crate::error::check_dims(grid.len(), values.len())?;
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    /// Samples `phi` on `grid`.
    pub fn sample(grid: Vec<f64>, phi: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&x| phi(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn slope(&self, i: usize, j: usize) -> f64 {
        (self.values[j] - self.values[i]) / (self.grid[j] - self.grid[i])
    }

    /// Index of a middle point `t` at which some triple `s < t < u` has
    /// out-of-order difference quotients.
    fn first_violation(&self) -> Option<usize> {
        let n = self.len();
        for s in 0..n {
            for t in s + 1..n {
                for u in t + 1..n {
                    let left = self.slope(s, t);
                    let chord = self.slope(s, u);
                    let right = self.slope(t, u);
                    if left > chord + QUOTIENT_SLACK || chord > right + QUOTIENT_SLACK {
                        return Some(t);
                    }
                }
            }
        }
        None
    }

    /// True iff every triple `s < t < u` of grid points has
    /// `(f(t)−f(s))/(t−s) ≤ (f(u)−f(s))/(u−s) ≤ (f(u)−f(t))/(u−t)`.
    pub fn difference_quotient_check(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Support line touching the samples at `grid[t_index]`.
    ///
    /// The slope is the midpoint of `[D_l, D_r]`, where `D_l` is the largest
    /// slope to a left neighbour and `D_r` the smallest to a right
    /// neighbour; at the ends of the grid the one available side is used.
    pub fn support_line(&self, t_index: usize) -> Result<SupportLine> {
        if t_index >= self.len() {
            return Err(Error::OutOfRange(format!("grid index {t_index}")));
        }
        if let Some(index) = self.first_violation() {
            return Err(Error::NotConvex { index });
        }
        let left = (0..t_index)
            .map(|s| self.slope(s, t_index))
            .fold(f64::NEG_INFINITY, f64::max);
        let right = (t_index + 1..self.len())
            .map(|u| self.slope(t_index, u))
            .fold(f64::INFINITY, f64::min);
        let slope = match (left.is_finite(), right.is_finite()) {
            (true, true) => 0.5 * (left + right),
            (true, false) => left,
            (false, true) => right,
            (false, false) => unreachable!("grid has at least two points"),
        };
        Ok(SupportLine {
            slope,
            x0: self.grid[t_index],
            y0: self.values[t_index],
        })
    }

    /// Midpoint convexity on the grid: `φ((x+y)/2) ≤ (φ(x)+φ(y))/2`
    /// wherever the midpoint of two grid points is itself a grid point.
    pub fn midpoint_check(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 2..n {
                let mid = 0.5 * (self.grid[i] + self.grid[j]);
                if let Ok(k) = self.grid.binary_search_by(|g| g.total_cmp(&mid)) {
                    let avg = 0.5 * (self.values[i] + self.values[j]);
                    if self.values[k] > avg + QUOTIENT_SLACK {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The affine function `x ↦ y0 + slope·(x − x0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportLine {
    pub slope: f64,
    pub x0: f64,
    pub y0: f64,
}

impl SupportLine {
    pub fn intercept(&self) -> f64 {
        self.y0 - self.slope * self.x0
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.y0 + self.slope * (x - self.x0)
    }
}

/// Jensen's gap `Σλᵢφ(xᵢ) − φ(Σλᵢxᵢ)` for convex weights; nonnegative when
/// `φ` is convex.
pub fn jensen_gap(phi: impl Fn(f64) -> f64, weights: &[f64], points: &[f64]) -> Result<f64> {
    crate::error::check_dims(weights.len(), points.len())?;
    let mean: f64 = weights.iter().zip(points).map(|(w, x)| w * x).sum();
    let avg: f64 = weights.iter().zip(points).map(|(w, &x)| w * phi(x)).sum();
    Ok(avg - phi(mean))
}
