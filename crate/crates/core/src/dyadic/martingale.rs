use crate::scalar::{real, Field, Scalar};

use super::{DyadicInterval, DyadicStepFunction};

/// `avg[k][j]` is the average of `f` over the `j`-th interval of level `k`,
/// for `0 ≤ k ≤ level(f)`.
pub fn average_pyramid(f: &DyadicStepFunction) -> Vec<Vec<Scalar>> {
    let l = f.level() as usize;
    let mut pyramid = vec![Vec::new(); l + 1];
    pyramid[l] = f.values().to_vec();
    for k in (0..l).rev() {
        pyramid[k] = pyramid[k + 1]
            .chunks_exact(2)
            .map(|pair| (pair[0] + pair[1]) * 0.5)
            .collect();
    }
    pyramid
}

/// Pulls a level-`k` row of the pyramid back to the cells of level `l`.
fn spread(row: &[Scalar], k: u32, l: u32) -> Vec<Scalar> {
    (0..1usize << l).map(|i| row[i >> (l - k)]).collect()
}

fn from_values(level: u32, values: Vec<Scalar>, field: Field) -> DyadicStepFunction {
    DyadicStepFunction::new(level, values)
        .expect("length matches level")
        .with_field(field)
}

/// `E_k(f)`: the average of `f` over the level-`k` cell containing each
/// point, at the level of `f`.
pub fn expectation(f: &DyadicStepFunction, k: u32) -> DyadicStepFunction {
    if k >= f.level() {
        return f.clone();
    }
    let pyramid = average_pyramid(f);
    from_values(
        f.level(),
        spread(&pyramid[k as usize], k, f.level()),
        f.field(),
    )
}

/// `E_j(f) − E_{j−1}(f)` for `j ≥ 1`, and `E_0(f)` for `j = 0`.
pub fn difference(f: &DyadicStepFunction, j: u32) -> DyadicStepFunction {
    let e = expectation(f, j);
    if j == 0 {
        return e;
    }
    e.sub(&expectation(f, j - 1))
}

/// `M(f) = max_{k ≤ level} |E_k(f)|`.
pub fn maximal_fn(f: &DyadicStepFunction) -> DyadicStepFunction {
    let l = f.level();
    let pyramid = average_pyramid(f);
    let values = (0..1usize << l)
        .map(|i| {
            let m = (0..=l)
                .map(|k| pyramid[k as usize][i >> (l - k)].norm())
                .fold(0.0, f64::max);
            real(m)
        })
        .collect();
    from_values(l, values, Field::Real)
}

/// `S_n(f) = (|E_0 f|² + Σ_{j=1}^{n} |E_j f − E_{j−1} f|²)^{1/2}`.
pub fn square_fn_truncated(f: &DyadicStepFunction, n: u32) -> DyadicStepFunction {
    let l = f.level();
    let n = n.min(l);
    let pyramid = average_pyramid(f);
    let values = (0..1usize << l)
        .map(|i| {
            let mut acc = pyramid[0][0].norm_sqr();
            for j in 1..=n {
                let d =
                    pyramid[j as usize][i >> (l - j)] - pyramid[j as usize - 1][i >> (l - j + 1)];
                acc += d.norm_sqr();
            }
            real(acc.sqrt())
        })
        .collect();
    from_values(l, values, Field::Real)
}

/// `S(f)`; the sum stops at the level of `f`, where later differences vanish.
pub fn square_fn(f: &DyadicStepFunction) -> DyadicStepFunction {
    square_fn_truncated(f, f.level())
}

/// The cell identity `∫_I (|E_j f|² + R_{j+1}(f)²) = ∫_I |f|²` over every
/// dyadic `I` with `|I| = 2^{−j}`, and the fourth-power comparison of `S(f)`
/// with `S(f)²·M(|f|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSquareReport {
    /// Largest `|∫_I(|E_j f|² + R_{j+1}²) − ∫_I |f|²|`.
    pub residual: f64,
    /// `∫|f|²`, the natural scale of the residual.
    pub scale: f64,
    /// `∫ S(f)⁴`.
    pub s4: f64,
    /// `∫ S(f)²·M(|f|²)`.
    pub s2_m: f64,
}

impl TailSquareReport {
    /// `∫S⁴ / ∫S²M(|f|²)`, or 0 for `f = 0`.
    pub fn ratio(&self) -> f64 {
        if self.s2_m == 0.0 {
            0.0
        } else {
            self.s4 / self.s2_m
        }
    }
}

/// Computes `R_j(f)² = Σ_{k ≥ j} |E_k f − E_{k−1} f|²` for every `j ≤ level`
/// and evaluates both sides of the cell identity on every interval.
pub fn tail_square_report(f: &DyadicStepFunction) -> TailSquareReport {
    let l = f.level();
    let n = 1usize << l;
    let pyramid = average_pyramid(f);
    let cell = f.cell_length();

    // tail[j][i] = R_j(f)² on cell i, with tail[l+1] = 0
    let mut tail = vec![vec![0.0; n]; l as usize + 2];
    for j in (1..=l).rev() {
        for i in 0..n {
            let d = pyramid[j as usize][i >> (l - j)] - pyramid[j as usize - 1][i >> (l - j + 1)];
            tail[j as usize][i] = tail[j as usize + 1][i] + d.norm_sqr();
        }
    }

    let mut residual = 0.0_f64;
    for j in 0..=l {
        for interval in DyadicInterval::at_level(j) {
            let cells = interval.cells(l);
            let e = pyramid[j as usize][interval.index()].norm_sqr();
            let lhs: f64 = cells
                .clone()
                .map(|i| e + tail[j as usize + 1][i])
                .sum::<f64>()
                * cell;
            let rhs: f64 = cells.map(|i| f.values()[i].norm_sqr()).sum::<f64>() * cell;
            residual = residual.max((lhs - rhs).abs());
        }
    }

    let s = square_fn(f);
    let m = maximal_fn(&f.map_modulus(|x| x * x));
    let s4 = s.lp_integral(4.0);
    let s2_m = s
        .values()
        .iter()
        .zip(m.values())
        .map(|(a, b)| a.re * a.re * b.re)
        .sum::<f64>()
        * cell;
    TailSquareReport {
        residual,
        scale: f.l2_norm_sq(),
        s4,
        s2_m,
    }
}
