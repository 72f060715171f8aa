//! Log-convexity of `1/p ↦ log ‖T‖_{p→p}` as an executable check.

use crate::operators::{op_norm_exact, op_norm_lower};
use crate::{random, Error, Exponent, Matrix, Result, Vector};

/// Default number of restarts for non-closed-form exponents.
pub const DEFAULT_BUDGET: usize = 8;
/// Iteration cap per restart.
pub const ITERATION_CAP: usize = 500;
/// Relative slack in the one-sided test.
pub const RELATIVE_SLACK: f64 = 1e-9;

/// Exponents `p < q` and `t ∈ (0, 1)`, with `1/r = t/p + (1 − t)/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationTriple {
    pub p: Exponent,
    pub q: Exponent,
    pub t: f64,
    pub r: Exponent,
}

impl InterpolationTriple {
    pub fn new(p: Exponent, q: Exponent, t: f64) -> Result<Self> {
        if !(p.value() < q.value()) {
            return Err(Error::InvalidArgument(format!(
                "need p < q, got {p} and {q}"
            )));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidArgument(format!("t = {t} outside (0, 1)")));
        }
        let r = Exponent::from_recip(t * p.recip() + (1.0 - t) * q.recip())?;
        Ok(Self { p, q, t, r })
    }

    /// The triple through `p < r < q`.
    pub fn through(p: Exponent, r: Exponent, q: Exponent) -> Result<Self> {
        let t = (r.recip() - q.recip()) / (p.recip() - q.recip());
        let mut triple = Self::new(p, q, t)?;
        triple.r = r;
        Ok(triple)
    }

    /// Endpoint pairs `(1,2), (1,∞), (2,∞)` with `t ∈ {0.2, 0.4, 0.6, 0.8}`.
    pub fn standard_grid() -> Vec<InterpolationTriple> {
        let pairs = [
            (Exponent::ONE, Exponent::TWO),
            (Exponent::ONE, Exponent::INF),
            (Exponent::TWO, Exponent::INF),
        ];
        let mut out = Vec::with_capacity(12);
        for (p, q) in pairs {
            for t in [0.2, 0.4, 0.6, 0.8] {
                out.push(Self::new(p, q, t).expect("valid grid"));
            }
        }
        out
    }
}

fn closed_form(p: Exponent) -> bool {
    matches!(p, Exponent::One | Exponent::Infinity) || p == Exponent::TWO
}

/// `M_p = ‖T‖_{p→p}`: exact for `p ∈ {1, 2, ∞}` (flag `true`), otherwise the
/// best certified lower bound over `budget` seeded restarts.
pub fn m_p(t: &Matrix, p: Exponent, budget: usize, seed: u64) -> Result<(f64, bool)> {
    if closed_form(p) {
        return Ok((op_norm_exact(t, p)?, true));
    }
    let mut best = 0.0_f64;
    for restart in 0..budget.max(1) {
        let s = random::derive_seed(seed, restart as u64);
        let (b, _) = op_norm_lower(t, p, ITERATION_CAP, s)?;
        best = best.max(b);
    }
    Ok((best, false))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripleReport {
    pub triple: InterpolationTriple,
    /// `M_r`, exact or a lower bound.
    pub m_r: f64,
    pub m_p: f64,
    pub m_q: f64,
    /// `M_p^t M_q^{1−t}`.
    pub bound: f64,
    /// Whether both endpoint values are exact.
    pub endpoints_exact: bool,
    /// `(bound·(1 + slack) − m_r) / bound`; negative means a violation.
    pub margin: f64,
}

impl TripleReport {
    pub fn passed(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Checks `M_r ≤ M_p^t M_q^{1−t}` for each triple. Restarts for triple `i`
/// are seeded from `(seed, i)`.
pub fn log_convexity_check(
    t: &Matrix,
    triples: &[InterpolationTriple],
    budget: usize,
    seed: u64,
) -> Result<Vec<TripleReport>> {
    triples
        .iter()
        .enumerate()
        .map(|(i, tr)| {
            let s = random::derive_seed(seed, i as u64);
            let (m_r, _) = m_p(t, tr.r, budget, s)?;
            let (mp, ep) = m_p(t, tr.p, budget, s)?;
            let (mq, eq) = m_p(t, tr.q, budget, s)?;
            let bound = interpolate_bound(mp, mq, tr)?;
            let margin = if bound > 0.0 {
                (bound * (1.0 + RELATIVE_SLACK) - m_r) / bound
            } else if m_r == 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            Ok(TripleReport {
                triple: *tr,
                m_r,
                m_p: mp,
                m_q: mq,
                bound,
                endpoints_exact: ep && eq,
                margin,
            })
        })
        .collect()
}

/// Fitted multipliers and residuals of the extremal conditions
/// `|(T x)_j| = μ|y_j|^{r′−1}` and `|(Tᵀ y)_k| = ν|x_k|^{r−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationarity {
    pub mu: f64,
    pub nu: f64,
    pub mu_res: f64,
    pub nu_res: f64,
}

const NORMALIZATION_TOL: f64 = 1e-10;

/// Least-squares fit of `μ` and `ν` with the largest residual of each
/// family, relative to the largest left-hand side. Requires `1 < r < ∞`,
/// `‖x‖_r = 1` and `‖y‖_{r′} = 1`.
pub fn stationarity_residual(
    t: &Matrix,
    x: &Vector,
    y: &Vector,
    r: Exponent,
) -> Result<Stationarity> {
    let Exponent::Between { p: rr, q: rq } = r else {
        return Err(Error::UnsupportedExponent(r.to_string()));
    };
    crate::error::check_dims(t.cols(), x.dim())?;
    crate::error::check_dims(t.rows(), y.dim())?;
    let nx = x.p_norm(r);
    let ny = y.p_norm(r.conjugate());
    if (nx - 1.0).abs() > NORMALIZATION_TOL || (ny - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(format!("‖x‖_r = {nx}, ‖y‖_r′ = {ny}")));
    }
    let lhs_mu: Vec<f64> = t.apply(x)?.moduli().collect();
    let rhs_mu: Vec<f64> = y.moduli().map(|m| m.powf(rq - 1.0)).collect();
    let lhs_nu: Vec<f64> = t.transpose().apply(y)?.moduli().collect();
    let rhs_nu: Vec<f64> = x.moduli().map(|m| m.powf(rr - 1.0)).collect();
    let (mu, mu_res) = fit(&lhs_mu, &rhs_mu);
    let (nu, nu_res) = fit(&lhs_nu, &rhs_nu);
    Ok(Stationarity {
        mu,
        nu,
        mu_res,
        nu_res,
    })
}

fn fit(lhs: &[f64], rhs: &[f64]) -> (f64, f64) {
    let den: f64 = rhs.iter().map(|b| b * b).sum();
    let c = if den > 0.0 {
        lhs.iter().zip(rhs).map(|(a, b)| a * b).sum::<f64>() / den
    } else {
        0.0
    };
    let scale = lhs.iter().fold(0.0_f64, |m, &a| m.max(a));
    let worst = lhs
        .iter()
        .zip(rhs)
        .map(|(a, b)| (a - c * b).abs())
        .fold(0.0_f64, f64::max);
    let res = if scale > 0.0 { worst / scale } else { worst };
    (c, res)
}

/// `N_p^t N_q^{1−t}`.
pub fn interpolate_bound(n_p: f64, n_q: f64, triple: &InterpolationTriple) -> Result<f64> {
    if n_p < 0.0 || n_q < 0.0 || n_p.is_nan() || n_q.is_nan() {
        return Err(Error::Negative(format!("endpoint bounds {n_p}, {n_q}")));
    }
    if n_p == n_q {
        return Ok(n_p);
    }
    Ok(n_p.powf(triple.t) * n_q.powf(1.0 - triple.t))
}

/// Largest `|M_p(T) − M_{p′}(Tᵀ)|` over `p ∈ {1, ∞}` (exact in closed form).
pub fn transpose_symmetry_gap(t: &Matrix) -> Result<f64> {
    let tt = t.transpose();
    let a = (op_norm_exact(t, Exponent::ONE)? - op_norm_exact(&tt, Exponent::INF)?).abs();
    let b = (op_norm_exact(t, Exponent::INF)? - op_norm_exact(&tt, Exponent::ONE)?).abs();
    Ok(a.max(b))
}
