use normlab::{Exponent, Field};
use rand_chacha::ChaCha8Rng;

use crate::case::Case;
use crate::config::{Suite, SuiteConfig};
use crate::error::Result;
use crate::golden::Golden;

/// Everything a check may read besides its own inputs.
#[derive(Debug, Clone, Copy)]
pub struct Ctx<'a> {
    pub config: &'a SuiteConfig,
    pub golden: &'a Golden,
}

impl Ctx<'_> {
    fn lookup(&self, key: String, default: f64) -> f64 {
        self.config.overrides.get(&key).copied().unwrap_or(default)
    }

    /// A constant of an inequality, overridable as `const.<name>`.
    pub fn constant(&self, name: &str, default: f64) -> f64 {
        self.lookup(format!("const.{name}"), default)
    }

    /// A tolerance, overridable as `tol.<name>`.
    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.lookup(format!("tol.{name}"), default)
    }

    pub fn trials(&self) -> usize {
        self.config.trials
    }

    pub fn dims(&self) -> &[usize] {
        &self.config.dims
    }

    pub fn levels(&self) -> &[u32] {
        &self.config.levels
    }

    pub fn p_grid(&self) -> &[Exponent] {
        &self.config.p_grid
    }

    /// Matrix sizes: the configured dims capped at 16.
    pub fn matrix_dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.config.dims.iter().map(|&d| d.min(16)).collect();
        d.dedup();
        d
    }
}

/// How trial values become a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Each trial returns a margin; the check passes when the smallest is
    /// nonnegative.
    Margin,
    /// Each trial returns a ratio; the largest is compared against a golden
    /// value.
    Golden,
}

type TrialsFn = dyn Fn(&Ctx) -> usize + Send + Sync;
type GenerateFn = dyn Fn(&Ctx, usize, &mut ChaCha8Rng) -> Case + Send + Sync;
type EvaluateFn = dyn Fn(&Ctx, &Case) -> Result<f64> + Send + Sync;

pub struct Check {
    pub id: String,
    pub suite: Suite,
    /// Where the property comes from, by name.
    pub anchor: String,
    pub kind: Kind,
    trials: Box<TrialsFn>,
    generate: Box<GenerateFn>,
    evaluate: Box<EvaluateFn>,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check")
            .field("id", &self.id)
            .field("suite", &self.suite)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl Check {
    pub fn new(id: impl Into<String>, suite: Suite, anchor: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            suite,
            anchor: anchor.into(),
            kind: Kind::Margin,
            trials: Box::new(|ctx| ctx.trials()),
            generate: Box::new(|_, _, _| Case::new()),
            evaluate: Box::new(|_, _| Ok(0.0)),
        }
    }

    pub fn golden(mut self) -> Self {
        self.kind = Kind::Golden;
        self
    }

    pub fn trials(mut self, f: impl Fn(&Ctx) -> usize + Send + Sync + 'static) -> Self {
        self.trials = Box::new(f);
        self
    }

    /// Runs `ctx.trials()` trials for every combination of the given sizes.
    pub fn per_combo(self, sizes: impl Fn(&Ctx) -> usize + Send + Sync + 'static) -> Self {
        self.trials(move |ctx| ctx.trials() * sizes(ctx).max(1))
    }

    pub fn generate(
        mut self,
        f: impl Fn(&Ctx, usize, &mut ChaCha8Rng) -> Case + Send + Sync + 'static,
    ) -> Self {
        self.generate = Box::new(f);
        self
    }

    pub fn evaluate(
        mut self,
        f: impl Fn(&Ctx, &Case) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        self.evaluate = Box::new(f);
        self
    }

    pub fn trial_count(&self, ctx: &Ctx) -> usize {
        (self.trials)(ctx)
    }

    pub fn make_case(&self, ctx: &Ctx, trial: usize, rng: &mut ChaCha8Rng) -> Case {
        (self.generate)(ctx, trial, rng)
    }

    pub fn eval(&self, ctx: &Ctx, case: &Case) -> Result<f64> {
        (self.evaluate)(ctx, case)
    }
}

/// Splits a trial index into one index per axis, first axis fastest.
pub fn split(trial: usize, sizes: &[usize]) -> Vec<usize> {
    let mut t = trial;
    sizes
        .iter()
        .map(|&n| {
            let n = n.max(1);
            let i = t % n;
            t /= n;
            i
        })
        .collect()
}

pub const FIELDS: [Field; 2] = [Field::Real, Field::Complex];

/// Margin of `lhs ≤ rhs` relative to the larger side, plus `slack`.
pub fn upper(lhs: f64, rhs: f64, slack: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let m = (rhs - lhs) / scale + slack;
    if m.is_nan() {
        f64::NEG_INFINITY
    } else {
        m
    }
}

/// Margin of `a ≈ b` within relative tolerance `rel`.
pub fn close(a: f64, b: f64, rel: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let m = rel - (a - b).abs() / scale;
    if m.is_nan() {
        f64::NEG_INFINITY
    } else {
        m
    }
}

/// Margin of `err ≤ tol`.
pub fn within(err: f64, tol: f64) -> f64 {
    if err.is_nan() {
        f64::NEG_INFINITY
    } else {
        tol - err
    }
}

/// `0` for true, `−1` for false.
pub fn holds(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_mixed_radix() {
        assert_eq!(split(0, &[2, 3]), vec![0, 0]);
        assert_eq!(split(5, &[2, 3]), vec![1, 2]);
        assert_eq!(split(7, &[2, 3]), vec![1, 0]);
    }

    #[test]
    fn margins() {
        assert!(upper(1.0, 2.0, 0.0) > 0.0);
        assert!(upper(2.0, 1.0, 0.0) < 0.0);
        assert_eq!(upper(0.0, 0.0, 0.0), 0.0);
        assert!(close(1.0, 1.0 + 1e-13, 1e-12) > 0.0);
        assert!(close(1.0, 1.1, 1e-12) < 0.0);
        assert_eq!(upper(f64::NAN, 1.0, 0.0), f64::NEG_INFINITY);
    }
}
