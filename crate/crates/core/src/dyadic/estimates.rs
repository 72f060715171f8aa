//! Distribution functions and the pieces the maximal and square function
//! estimates are checked with.

use crate::scalar::{real, Complex64, Scalar};
use crate::{Error, Exponent, Result};

use super::martingale::{average_pyramid, expectation, maximal_fn, square_fn};
use super::DyadicStepFunction;

fn real_values(g: &DyadicStepFunction) -> Result<Vec<f64>> {
    g.real_values()
}

fn nonnegative_values(g: &DyadicStepFunction) -> Result<Vec<f64>> {
    let v = real_values(g)?;
    if let Some(x) = v.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::Negative(format!("value {x}")));
    }
    Ok(v)
}

/// `|{g > λ}|`.
pub fn distribution_measure(g: &DyadicStepFunction, lam: f64) -> Result<f64> {
    let v = real_values(g)?;
    Ok(v.iter().filter(|&&x| x > lam).count() as f64 * g.cell_length())
}

/// `|{g ≥ λ}|`, the left limit of `μ ↦ |{g > μ}|` at `λ`.
pub fn distribution_measure_at_least(g: &DyadicStepFunction, lam: f64) -> Result<f64> {
    let v = real_values(g)?;
    Ok(v.iter().filter(|&&x| x >= lam).count() as f64 * g.cell_length())
}

/// `∫_{g > λ} g`, or `∫_{g ≥ λ} g` when `inclusive`.
pub fn tail_integral(g: &DyadicStepFunction, lam: f64, inclusive: bool) -> Result<f64> {
    let v = real_values(g)?;
    let sum: f64 = v
        .iter()
        .filter(|&&x| if inclusive { x >= lam } else { x > lam })
        .sum();
    Ok(sum * g.cell_length())
}

/// Sorted distinct values.
pub fn distinct_values(g: &DyadicStepFunction) -> Result<Vec<f64>> {
    let mut v = real_values(g)?;
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// The positive points among `values`, the midpoints between consecutive
/// ones, and half the smallest. Between grid points every distribution
/// function of the data is constant.
pub fn lambda_grid(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values
        .iter()
        .copied()
        .filter(|x| *x > 0.0 && x.is_finite())
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    let mut grid = Vec::with_capacity(2 * v.len());
    if let Some(&first) = v.first() {
        grid.push(first / 2.0);
    }
    for (k, &x) in v.iter().enumerate() {
        if k > 0 {
            grid.push((v[k - 1] + x) / 2.0);
        }
        grid.push(x);
    }
    grid
}

/// `(∫g^p, ∫_0^∞ pλ^{p−1}|{g > λ}| dλ)` for `g ≥ 0`.
///
/// The second integral is summed in closed form: on `[v_{i−1}, v_i)`
/// between consecutive distinct values the distribution function equals
/// `|{g ≥ v_i}|`, and `∫ pλ^{p−1} = v_i^p − v_{i−1}^p`.
pub fn layer_cake(g: &DyadicStepFunction, p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    let v = nonnegative_values(g)?;
    let direct = v.iter().map(|x| x.powf(p)).sum::<f64>() * g.cell_length();

    let mut sorted = v;
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut layered = 0.0;
    let mut prev = 0.0_f64;
    let mut i = 0;
    while i < n {
        let x = sorted[i];
        if x > prev {
            let at_least = (n - i) as f64 * g.cell_length();
            layered += at_least * (x.powf(p) - prev.powf(p));
            prev = x;
        }
        i += 1;
    }
    Ok((direct, layered))
}

/// `sup_{λ > 0} λ·|{g > λ}|` and the `λ` approached.
///
/// The supremum is a left limit at one of the values: on
/// `[v_{i−1}, v_i)` the product increases towards `v_i·|{g ≥ v_i}|`.
pub fn weak_type_sup(g: &DyadicStepFunction) -> Result<(f64, f64)> {
    let values = distinct_values(g)?;
    let mut best = (0.0, 0.0);
    for v in values.into_iter().filter(|v| *v > 0.0) {
        let w = v * distribution_measure_at_least(g, v)?;
        if w > best.0 {
            best = (w, v);
        }
    }
    Ok(best)
}

/// `(λ, |{M(f) > 2λ}|, λ^{−1}∫_{|f|>λ}|f|)` on a grid that meets every
/// breakpoint of both sides, once as a value and once as a left limit.
pub fn modified_weak_type_pairs(f: &DyadicStepFunction) -> Vec<(f64, f64, f64)> {
    let m = maximal_fn(f);
    let a = f.abs();
    let mut breaks: Vec<f64> = m.values().iter().map(|v| v.re / 2.0).collect();
    breaks.extend(a.values().iter().map(|v| v.re));
    let mut out = Vec::new();
    for lam in lambda_grid(&breaks) {
        let lhs = distribution_measure(&m, 2.0 * lam).expect("real");
        let rhs = tail_integral(&a, lam, false).expect("real") / lam;
        out.push((lam, lhs, rhs));
        let lhs = distribution_measure_at_least(&m, 2.0 * lam).expect("real");
        let rhs = tail_integral(&a, lam, true).expect("real") / lam;
        out.push((lam, lhs, rhs));
    }
    out
}

/// The linear operator `h ↦ E_{α(x)}(h)(x)` with `α(x)` the coarsest level
/// at which `|E_k(f)(x)|` attains `M(f)(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalLinearization {
    pub level: u32,
    pub alpha: Vec<u32>,
}

impl MaximalLinearization {
    /// Functions finer than the selector are rejected.
    pub fn apply(&self, h: &DyadicStepFunction) -> Result<DyadicStepFunction> {
        let h = h.refine(self.level)?;
        let pyramid = average_pyramid(&h);
        let l = self.level;
        let values = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, &k)| pyramid[k as usize][i >> (l - k)])
            .collect();
        Ok(DyadicStepFunction::new(l, values)?.with_field(h.field()))
    }
}

pub fn maximal_linearization(f: &DyadicStepFunction) -> MaximalLinearization {
    let l = f.level();
    let pyramid = average_pyramid(f);
    let alpha = (0..1usize << l)
        .map(|i| {
            let mut best = (0, f64::NEG_INFINITY);
            for k in 0..=l {
                let m = pyramid[k as usize][i >> (l - k)].norm();
                if m > best.1 {
                    best = (k, m);
                }
            }
            best.0
        })
        .collect();
    MaximalLinearization { level: l, alpha }
}

/// The linear operator `h ↦ Σ_i α_i(x)·(E_i h − E_{i−1} h)(x)` with
/// `Σ_i |α_i(x)|² ≤ 1`, chosen so that it reproduces `S(f)` at `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareLinearization {
    pub level: u32,
    /// `alpha[x][i]` for cells `x` and `0 ≤ i ≤ level`.
    pub alpha: Vec<Vec<Scalar>>,
}

fn differences_at(pyramid: &[Vec<Scalar>], l: u32, i: usize) -> Vec<Scalar> {
    (0..=l)
        .map(|j| {
            let e = pyramid[j as usize][i >> (l - j)];
            if j == 0 {
                e
            } else {
                e - pyramid[j as usize - 1][i >> (l - j + 1)]
            }
        })
        .collect()
}

impl SquareLinearization {
    pub fn apply(&self, h: &DyadicStepFunction) -> Result<DyadicStepFunction> {
        let h = h.refine(self.level)?;
        let pyramid = average_pyramid(&h);
        let values = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let d = differences_at(&pyramid, self.level, i);
                a.iter().zip(&d).map(|(x, y)| x * y).sum::<Scalar>()
            })
            .collect();
        DyadicStepFunction::new(self.level, values)
    }
}

pub fn square_linearization(f: &DyadicStepFunction) -> SquareLinearization {
    let l = f.level();
    let pyramid = average_pyramid(f);
    let s = square_fn(f);
    let alpha = (0..1usize << l)
        .map(|i| {
            let d = differences_at(&pyramid, l, i);
            let norm = s.values()[i].re;
            d.iter()
                .map(|z| {
                    if norm > 0.0 {
                        z.conj() / norm
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    SquareLinearization { level: l, alpha }
}

/// `(‖(Σ_j E_j(β_j)^r)^{1/r}‖_p, ‖(Σ_j β_j^r)^{1/r}‖_p)` for nonnegative
/// `β_0, …, β_n`, with the max in place of the `ℓ^r` sum when `r = ∞`.
pub fn auxiliary_sides(betas: &[DyadicStepFunction], p: f64, r: Exponent) -> Result<(f64, f64)> {
    if betas.is_empty() {
        return Err(Error::Empty("betas"));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    let level = betas
        .iter()
        .map(|b| b.level())
        .max()
        .unwrap_or(0)
        .max(betas.len() as u32 - 1);
    let mut raw = Vec::with_capacity(betas.len());
    let mut averaged = Vec::with_capacity(betas.len());
    for (j, b) in betas.iter().enumerate() {
        nonnegative_values(b)?;
        let b = b.refine(level)?;
        averaged.push(expectation(&b, j as u32));
        raw.push(b);
    }
    let combine = |fns: &[DyadicStepFunction]| -> f64 {
        let n = 1usize << level;
        let g: Vec<Scalar> = (0..n)
            .map(|i| {
                let col = fns.iter().map(|f| f.values()[i].re);
                real(match r.finite() {
                    Some(r) => col.map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r),
                    None => col.fold(0.0, f64::max),
                })
            })
            .collect();
        let g = DyadicStepFunction::new(level, g).expect("length matches level");
        g.lp_integral(p).powf(1.0 / p)
    };
    Ok((combine(&averaged), combine(&raw)))
}
