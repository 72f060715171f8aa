//! Seeded generators for vectors, matrices and step functions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dyadic::DyadicStepFunction;
use crate::operators::gram_schmidt;
use crate::scalar::{real, Complex64, Field, Scalar};
use crate::{Matrix, Vector};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A seed for substream `stream`, decorrelated from `seed` by SplitMix64
/// finalization.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform on `[−1, 1]` (real) or on the closed unit disc (complex).
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    match field {
        Field::Real => real(rng.gen_range(-1.0..=1.0)),
        Field::Complex => loop {
            let z = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            if z.norm_sqr() <= 1.0 {
                break z;
            }
        },
    }
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field) -> Vector {
    let entries = (0..dim.max(1)).map(|_| scalar(rng, field)).collect();
    Vector::new(entries, field).expect("dimension is positive")
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, field: Field) -> Matrix {
    let entries = (0..rows.max(1) * cols.max(1))
        .map(|_| scalar(rng, field))
        .collect();
    Matrix::new(rows.max(1), cols.max(1), entries, field).expect("shape is positive")
}

/// `(B + B*)/2` for a random `B`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> Matrix {
    let b = matrix(rng, n, n, field);
    let mut a = b.add(&b.adjoint()).expect("square").scale(real(0.5));
    for k in 0..a.rows() {
        let d = a.get(k, k);
        a.set(k, k, real(d.re));
    }
    a
}

/// `B*B` for a random `B`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> Matrix {
    let b = matrix(rng, n, n, field);
    b.adjoint().mul(&b).expect("square")
}

/// A random unitary (orthogonal over `R`) matrix from Gram–Schmidt on
/// random columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> Matrix {
    loop {
        let cols: Vec<Vector> = (0..n.max(1)).map(|_| vector(rng, n, field)).collect();
        let q = gram_schmidt(&cols, 1e-6);
        if q.len() == n.max(1) {
            return Matrix::from_columns(&q)
                .expect("nonempty")
                .with_field(field);
        }
    }
}

/// Nonnegative weights summing to one.
pub fn convex_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Families of random step functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFamily {
    /// Independent values on every cell.
    Uniform,
    /// A multiple of the indicator of one dyadic interval.
    Spike,
    /// A few spikes superposed.
    Spikes,
}

impl StepFamily {
    pub const ALL: [StepFamily; 3] = [StepFamily::Uniform, StepFamily::Spike, StepFamily::Spikes];
}

pub fn step_function<R: Rng + ?Sized>(rng: &mut R, level: u32, field: Field) -> DyadicStepFunction {
    let values = (0..1usize << level).map(|_| scalar(rng, field)).collect();
    DyadicStepFunction::new(level, values).expect("length matches level")
}

/// `c·1_I` for a random dyadic interval `I` of level at most `level`, with
/// `|c|·|I|` between 1/2 and 3/2.
pub fn spike<R: Rng + ?Sized>(rng: &mut R, level: u32, field: Field) -> DyadicStepFunction {
    let k = rng.gen_range(0..=level);
    let j = rng.gen_range(0..1usize << k);
    let width = 1usize << (level - k);
    let mut amp = scalar(rng, field);
    while amp.norm() < 1e-3 {
        amp = scalar(rng, field);
    }
    let c = amp / amp.norm() * rng.gen_range(0.5..=1.5) * (1u64 << k) as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); 1usize << level];
    values[j * width..(j + 1) * width]
        .iter_mut()
        .for_each(|v| *v = c);
    DyadicStepFunction::new(level, values).expect("length matches level")
}

pub fn step_function_from<R: Rng + ?Sized>(
    rng: &mut R,
    family: StepFamily,
    level: u32,
    field: Field,
) -> DyadicStepFunction {
    match family {
        StepFamily::Uniform => step_function(rng, level, field),
        StepFamily::Spike => spike(rng, level, field),
        StepFamily::Spikes => {
            let count = rng.gen_range(2..=4);
            let mut f = spike(rng, level, field);
            for _ in 1..count {
                f = f.add(&spike(rng, level, field));
            }
            f
        }
    }
}
