//! Certified lower bounds on `‖T‖_{p→p}` by a nonlinear power method.

use crate::duality::dual_extremizer;
use crate::scalar::real;
use crate::{random, Exponent, Result, Vector};

use super::Matrix;

const STALL: f64 = 1e-12;

fn ratio(t: &Matrix, x: &Vector, p: Exponent) -> Result<f64> {
    let nx = x.p_norm(p);
    if nx == 0.0 {
        return Ok(0.0);
    }
    Ok(t.apply(x)?.p_norm(p) / nx)
}

fn normalized(x: Vector, p: Exponent) -> Option<Vector> {
    let n = x.p_norm(p);
    (n > 0.0 && n.is_finite()).then(|| x.scale(real(1.0 / n)))
}

/// Returns `(bound, witness)` with `bound = ‖T x‖_p / ‖x‖_p` for the witness
/// `x`, hence `bound ≤ ‖T‖_{p→p}`.
///
/// From a seeded start, the iteration alternates the two dual maps of the
/// extremal conditions: `z` norms `T x` in `ℓ^{p′}`, and the next `x`
/// norms `Tᵀ z` in `ℓ^p`. Standard basis vectors are also tried. The best
/// ratio seen is kept, so the bound never decreases with `iters`.
pub fn op_norm_lower(t: &Matrix, p: Exponent, iters: usize, seed: u64) -> Result<(f64, Vector)> {
    let n = t.cols();
    let mut best = (0.0, Vector::unit(n, 0, t.field())?);
    for k in 0..n {
        let e = Vector::unit(n, k, t.field())?;
        let r = ratio(t, &e, p)?;
        if r > best.0 {
            best = (r, e);
        }
    }
    let mut rng = random::rng(seed);
    let start = random::vector(&mut rng, n, t.field());
    let Some(mut x) = normalized(start, p) else {
        return Ok(best);
    };
    let tt = t.transpose();
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..iters.max(1) {
        let r = ratio(t, &x, p)?;
        if r > best.0 {
            best = (r, x.clone());
        }
        if (r - prev).abs() < STALL * r.max(1.0) {
            break;
        }
        prev = r;
        let y = t.apply(&x)?;
        if y.is_zero() {
            break;
        }
        let z = dual_extremizer(&y, p.conjugate())?;
        let w = tt.apply(&z)?;
        if w.is_zero() {
            break;
        }
        match normalized(dual_extremizer(&w, p)?, p) {
            Some(next) => x = next,
            None => break,
        }
    }
    Ok(best)
}
