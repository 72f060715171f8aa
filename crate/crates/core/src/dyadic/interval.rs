use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use super::{check_level, MAX_LEVEL};
use crate::{Error, Result};

/// `[j·2^{−k}, (j+1)·2^{−k})` with `0 ≤ j < 2^k`.
///
/// Ordered left to right by starting point, coarser first on ties, so a
/// sorted family lists each interval before its subintervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    level: u32,
    index: usize,
}

impl DyadicInterval {
    pub fn new(level: u32, index: usize) -> Result<Self> {
        check_level(level)?;
        if index >= 1usize << level {
            return Err(Error::OutOfRange(format!("index {index} at level {level}")));
        }
        Ok(Self { level, index })
    }

    /// `[0, 1)`.
    pub fn unit() -> Self {
        Self { level: 0, index: 0 }
    }

    /// All intervals of one level, left to right.
    pub fn at_level(level: u32) -> impl Iterator<Item = DyadicInterval> {
        let n = if level <= MAX_LEVEL {
            1usize << level
        } else {
            0
        };
        (0..n).map(move |index| DyadicInterval { level, index })
    }

    /// All intervals of level at most `level`, coarsest first.
    pub fn up_to_level(level: u32) -> impl Iterator<Item = DyadicInterval> {
        (0..=level).flat_map(DyadicInterval::at_level)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn len(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn start(&self) -> f64 {
        self.index as f64 * self.len()
    }

    pub fn end(&self) -> f64 {
        (self.index + 1) as f64 * self.len()
    }

    pub fn parent(&self) -> Option<Self> {
        (self.level > 0).then(|| Self {
            level: self.level - 1,
            index: self.index / 2,
        })
    }

    /// The ancestor at a coarser level, or `self`.
    pub fn ancestor(&self, level: u32) -> Option<Self> {
        (level <= self.level).then(|| Self {
            level,
            index: self.index >> (self.level - level),
        })
    }

    /// Left and right halves.
    pub fn children(&self) -> (Self, Self) {
        let level = self.level + 1;
        (
            Self {
                level,
                index: 2 * self.index,
            },
            Self {
                level,
                index: 2 * self.index + 1,
            },
        )
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        other.level >= self.level && other.index >> (other.level - self.level) == self.index
    }

    pub fn contains_point(&self, x: f64) -> bool {
        self.start() <= x && x < self.end()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        !self.contains(other) && !other.contains(self)
    }

    /// Indices of the cells at a finer `level` that make up the interval.
    pub fn cells(&self, level: u32) -> Range<usize> {
        debug_assert!(level >= self.level);
        let width = 1usize << (level - self.level);
        self.index * width..(self.index + 1) * width
    }

    fn sort_key(&self) -> (usize, u32) {
        (self.index << (MAX_LEVEL - self.level), self.level)
    }
}

impl Ord for DyadicInterval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for DyadicInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The maximal elements of a family under inclusion, sorted.
pub(crate) fn maximal_elements(family: &[DyadicInterval]) -> Vec<DyadicInterval> {
    let mut sorted = family.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out: Vec<DyadicInterval> = Vec::new();
    for i in sorted {
        if !out.last().is_some_and(|m| m.contains(&i)) {
            out.push(i);
        }
    }
    out
}

/// Written `k:j`.
impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.level, self.index)
    }
}

impl FromStr for DyadicInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad dyadic interval `{s}`"));
        let (k, j) = s.trim().split_once(':').ok_or_else(bad)?;
        Self::new(k.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?)
    }
}
