use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::case::Case;
use crate::check::{Check, Ctx, Kind};
use crate::checks::registry;
use crate::config::SuiteConfig;
use crate::error::{Error, Result};
use crate::golden::Golden;
use crate::report::{CheckRecord, Report, Witness};
use crate::stream::substream;

pub const THREADS_VAR: &str = "VERIFY_THREADS";

fn pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Error::Config(format!(
                "{THREADS_VAR} must be a positive integer, got `{v}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// One trial's contribution: larger `score` is worse.
struct Outcome {
    trial: usize,
    score: f64,
    case: Case,
    error: Option<String>,
}

fn score(kind: Kind, value: &Result<f64>) -> (f64, Option<String>) {
    match value {
        Err(e) => (f64::INFINITY, Some(e.to_string())),
        Ok(v) if v.is_nan() => (f64::INFINITY, Some("NaN".into())),
        Ok(v) => match kind {
            Kind::Margin => (-v, None),
            Kind::Golden => (*v, None),
        },
    }
}

fn worse(a: Outcome, b: Outcome) -> Outcome {
    if b.score > a.score || (b.score == a.score && b.trial < a.trial) {
        b
    } else {
        a
    }
}

fn verdict(check: &Check, ctx: &Ctx, worst: &Outcome) -> (f64, Option<f64>, Option<f64>) {
    if worst.error.is_some() {
        return (f64::NEG_INFINITY, None, None);
    }
    match check.kind {
        Kind::Margin => (-worst.score, None, None),
        Kind::Golden => {
            let observed = worst.score;
            let margin = ctx.golden.margin(ctx.config, &check.id, observed);
            (
                margin,
                Some(observed),
                ctx.golden.expected(ctx.config, &check.id),
            )
        }
    }
}

fn record(check: &Check, ctx: &Ctx, trials: usize, worst: Outcome) -> CheckRecord {
    let (worst_margin, observed, golden) = verdict(check, ctx, &worst);
    CheckRecord {
        id: check.id.clone(),
        suite: check.suite.to_string(),
        anchor: check.anchor.clone(),
        trials,
        worst_margin,
        passed: worst.error.is_none() && worst_margin >= 0.0,
        observed,
        golden,
        error: worst.error,
        witness: Some(Witness {
            check: check.id.clone(),
            seed: ctx.config.seed,
            trial: worst.trial,
            config: ctx.config.echo(),
            case: worst.case,
        }),
    }
}

fn run_check(check: &Check, ctx: &Ctx) -> CheckRecord {
    let n = check.trial_count(ctx).max(1);
    let worst = (0..n)
        .into_par_iter()
        .map(|trial| {
            let mut rng = substream(ctx.config.seed, &check.id, trial);
            let case = check.make_case(ctx, trial, &mut rng);
            let (score, error) = score(check.kind, &check.eval(ctx, &case));
            Outcome {
                trial,
                score,
                case,
                error,
            }
        })
        .reduce_with(worse)
        .expect("at least one trial");
    record(check, ctx, n, worst)
}

/// Runs every selected check against the bundled golden values.
pub fn run(config: &SuiteConfig) -> Result<Report> {
    run_with(config, &Golden::builtin())
}

pub fn run_with(config: &SuiteConfig, golden: &Golden) -> Result<Report> {
    run_selected(config, golden, |_| true)
}

fn run_selected(
    config: &SuiteConfig,
    golden: &Golden,
    keep: impl Fn(&Check) -> bool,
) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let ctx = Ctx { config, golden };
    let checks: Vec<Check> = registry()
        .into_iter()
        .filter(|c| config.includes(c.suite, &c.id) && keep(c))
        .collect();
    if checks.is_empty() {
        return Err(Error::Config("the selection matches no checks".into()));
    }
    let records = pool()?.install(|| checks.par_iter().map(|c| run_check(c, &ctx)).collect());
    Ok(Report::new(
        config.echo(),
        records,
        start.elapsed().as_secs_f64(),
    ))
}

/// Re-evaluates the check named in `witness` on its recorded inputs.
pub fn replay(witness: &Witness) -> Result<Report> {
    replay_with(witness, &Golden::builtin())
}

pub fn replay_with(witness: &Witness, golden: &Golden) -> Result<Report> {
    let start = Instant::now();
    let config = SuiteConfig::try_from(witness.config.clone())?;
    let ctx = Ctx {
        config: &config,
        golden,
    };
    let check = registry()
        .into_iter()
        .find(|c| c.id == witness.check)
        .ok_or_else(|| Error::UnknownCheck(witness.check.clone()))?;
    let (score, error) = score(check.kind, &check.eval(&ctx, &witness.case));
    let outcome = Outcome {
        trial: witness.trial,
        score,
        case: witness.case.clone(),
        error,
    };
    let rec = record(&check, &ctx, 1, outcome);
    Ok(Report::new(
        config.echo(),
        vec![rec],
        start.elapsed().as_secs_f64(),
    ))
}

/// Runs the golden checks of `config` and returns their observed maxima.
pub fn observe_golden(config: &SuiteConfig) -> Result<BTreeMap<String, f64>> {
    let report = run_selected(config, &Golden::default(), |c| c.kind == Kind::Golden)?;
    Ok(report
        .checks
        .into_iter()
        .filter_map(|r| r.observed.map(|v| (r.id, v)))
        .collect())
}
