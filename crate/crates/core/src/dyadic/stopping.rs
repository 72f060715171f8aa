use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

use super::interval::maximal_elements;
use super::martingale::{average_pyramid, square_fn};
use super::{DyadicInterval, DyadicStepFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StoppingMode {
    /// Stop on intervals whose average exceeds the threshold in modulus.
    Average,
    /// Stop on intervals on which the square function exceeds the threshold.
    Square,
}

impl fmt::Display for StoppingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StoppingMode::Average => "average",
            StoppingMode::Square => "square",
        })
    }
}

impl FromStr for StoppingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "average" => Ok(StoppingMode::Average),
            "square" => Ok(StoppingMode::Square),
            other => Err(Error::Parse(format!("unknown stopping mode `{other}`"))),
        }
    }
}

/// The outcome of stopping `f` at a threshold `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingDecomposition {
    pub mode: StoppingMode,
    /// Maximal stopping intervals, sorted and pairwise disjoint.
    pub maximal_intervals: Vec<DyadicInterval>,
    /// Maximal elements among the parents of `maximal_intervals`.
    pub halved_parents: Vec<DyadicInterval>,
    /// `f` with its average substituted on each of `halved_parents`.
    pub replaced: DyadicStepFunction,
    pub threshold: f64,
    /// Set when `[0, 1)` itself is a stopping interval; then nothing is
    /// replaced.
    pub degenerate: bool,
}

impl StoppingDecomposition {
    pub fn stopped_measure(&self) -> f64 {
        self.maximal_intervals.iter().map(DyadicInterval::len).sum()
    }

    pub fn parent_measure(&self) -> f64 {
        self.halved_parents.iter().map(DyadicInterval::len).sum()
    }

    /// Whether `x`'s cell lies in some halved parent.
    pub fn is_covered(&self, cell: DyadicInterval) -> bool {
        self.halved_parents.iter().any(|l| l.contains(&cell))
    }
}

/// Stopping-time decomposition of `f` at level `λ > 0`.
///
/// In average mode the stopping family is every dyadic `J` with
/// `|avg_J f| > λ`; in square mode it is every dyadic `J` contained in
/// `{S(f) > λ}`. Its maximal elements are collected, their parents formed,
/// and `f` is replaced by its average on each maximal parent.
pub fn stopping_decompose(
    f: &DyadicStepFunction,
    lam: f64,
    mode: StoppingMode,
) -> Result<StoppingDecomposition> {
    if !(lam > 0.0 && lam.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "threshold must be positive, got {lam}"
        )));
    }
    let l = f.level();
    let stopped: Vec<DyadicInterval> = match mode {
        StoppingMode::Average => {
            let pyramid = average_pyramid(f);
            DyadicInterval::up_to_level(l)
                .filter(|i| pyramid[i.level() as usize][i.index()].norm() > lam)
                .collect()
        }
        StoppingMode::Square => {
            let s = square_fn(f);
            // inside[k][j]: every cell of the j-th level-k interval has S > λ
            let mut inside = vec![Vec::new(); l as usize + 1];
            inside[l as usize] = s.values().iter().map(|v| v.re > lam).collect();
            for k in (0..l as usize).rev() {
                inside[k] = inside[k + 1]
                    .chunks_exact(2)
                    .map(|p| p[0] && p[1])
                    .collect();
            }
            DyadicInterval::up_to_level(l)
                .filter(|i| inside[i.level() as usize][i.index()])
                .collect()
        }
    };
    let maximal_intervals = maximal_elements(&stopped);

    if maximal_intervals.first() == Some(&DyadicInterval::unit()) {
        return Ok(StoppingDecomposition {
            mode,
            maximal_intervals,
            halved_parents: Vec::new(),
            replaced: f.clone(),
            threshold: lam,
            degenerate: true,
        });
    }

    let parents: Vec<DyadicInterval> = maximal_intervals
        .iter()
        .filter_map(|j| j.parent())
        .collect();
    let halved_parents = maximal_elements(&parents);
    let mut values = f.values().to_vec();
    for parent in &halved_parents {
        let avg = f.average_on(*parent);
        values[parent.cells(l)].iter_mut().for_each(|v| *v = avg);
    }
    let replaced = DyadicStepFunction::new(l, values)?.with_field(f.field());
    Ok(StoppingDecomposition {
        mode,
        maximal_intervals,
        halved_parents,
        replaced,
        threshold: lam,
        degenerate: false,
    })
}
