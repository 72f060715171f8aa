//! A dense two-phase simplex method for small linear programs.
//!
//! Problems are taken in standard form: minimize `cᵀx` subject to
//! `A x = b`, `x ≥ 0`. Bland's rule is used throughout, so the method
//! terminates without cycling.

use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
/// Phase-one infeasibility (relative to `1 + max|b|`) still treated as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex loop over the first `allowed` columns.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                reduced < -COST_EPS
            });
            let Some(j) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j] > PIVOT_EPS {
                    let ratio = row[self.rhs] / row[j];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - 1e-14
                                || (ratio <= best + 1e-14 && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((i, _)) => self.pivot(i, j),
            }
        }
        Err(Error::NotConverged {
            sweeps: MAX_PIVOTS,
            off: f64::NAN,
        })
    }
}

/// Minimizes `cᵀx` subject to `a·x = b`, `x ≥ 0`; `a` is a list of rows.
pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    crate::error::check_dims(m, b.len())?;
    for row in a {
        crate::error::check_dims(n, row.len())?;
    }
    let rhs = n + m;
    let mut rows = vec![vec![0.0; rhs + 1]; m];
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            rows[i][j] = s * a[i][j];
        }
        rows[i][n + i] = 1.0;
        rows[i][rhs] = s * b[i];
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        rhs,
    };

    let mut phase1 = vec![0.0; n + m];
    phase1[n..].iter_mut().for_each(|v| *v = 1.0);
    t.optimize(&phase1, n + m)?;
    let infeasibility: f64 = t
        .basis
        .iter()
        .zip(&t.rows)
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, row)| row[rhs])
        .sum();
    let scale = 1.0 + b.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if infeasibility > FEASIBILITY_TOL * scale {
        return Ok(LpOutcome::Infeasible);
    }

    // drive artificial variables out of the basis; rows where that is
    // impossible are redundant
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| t.rows[r][j].abs() > PIVOT_EPS) {
                Some(j) => {
                    t.pivot(r, j);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    let mut cost = c.to_vec();
    cost.resize(n + m, 0.0);
    if !t.optimize(&cost, n)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for (&bv, row) in t.basis.iter().zip(&t.rows) {
        if bv < n {
            x[bv] = row[rhs].max(0.0);
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// Maximizes `cᵀx` over the same feasible set.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpOutcome> {
    let neg: Vec<f64> = c.iter().map(|v| -v).collect();
    Ok(match minimize(&neg, a, b)? {
        LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
        other => other,
    })
}

/// Whether `point` is a convex combination of `vertices`, each a real
/// vector of the same length.
pub fn in_convex_hull(vertices: &[Vec<f64>], point: &[f64]) -> Result<bool> {
    if vertices.is_empty() {
        return Err(Error::Empty("vertex list"));
    }
    let d = point.len();
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|k| vertices.iter().map(|v| v[k]).collect())
        .collect();
    a.push(vec![1.0; vertices.len()]);
    let mut b = point.to_vec();
    b.push(1.0);
    let c = vec![0.0; vertices.len()];
    Ok(matches!(minimize(&c, &a, &b)?, LpOutcome::Optimal { .. }))
}
