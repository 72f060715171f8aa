//! The registered checks, one module per suite.

use normlab::{random, Field, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::check::Check;

mod core;
mod duality;
mod dyadic;
mod interpolation;
mod operators;
mod seqspace;

/// Every check, in registration order. Ids are unique.
pub fn registry() -> Vec<Check> {
    let mut all = Vec::new();
    all.extend(core::checks());
    all.extend(duality::checks());
    all.extend(operators::checks());
    all.extend(interpolation::checks());
    all.extend(dyadic::checks());
    all.extend(seqspace::checks());
    all
}

pub(crate) fn cycle<T: Copy>(xs: &[T], i: usize) -> T {
    xs[i % xs.len()]
}

/// A random vector rescaled by a factor in `[10^{-3}, 10^3]`.
pub(crate) fn scaled_vector(rng: &mut ChaCha8Rng, dim: usize, field: Field) -> Vector {
    let s = 10f64.powf(rng.gen_range(-3.0..=3.0));
    random::vector(rng, dim, field).scale(normlab::scalar::real(s))
}

pub(crate) fn min_margin(ms: impl IntoIterator<Item = f64>) -> f64 {
    ms.into_iter().fold(f64::INFINITY, |a, m| {
        if m.is_nan() || a.is_nan() {
            f64::NEG_INFINITY
        } else {
            a.min(m)
        }
    })
}
