use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use normlab_verify::config::{parse_list, parse_suites};
use normlab_verify::runner::observe_golden;
use normlab_verify::{replay, run, Error, Golden, Report, Result, SuiteConfig, Witness};

#[derive(Parser)]
#[command(
    name = "verify",
    version,
    about = "Run the normlab verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected suites and write a report.
    Run(RunArgs),
    /// Re-evaluate a check on the inputs stored in a witness file.
    Replay {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Record the maxima of the ratio checks as golden values.
    RecordGolden {
        #[command(flatten)]
        config: ConfigArgs,
        /// Trial counts to record a profile for.
        #[arg(long, default_value = "1000,10000")]
        profiles: String,
        #[arg(long, default_value = "crates/verify/fixtures/golden.toml")]
        fixture: PathBuf,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, default_value = "all")]
    suites: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value = "4,8,16")]
    dims: String,
    #[arg(long, default_value = "4,8,12")]
    levels: String,
    #[arg(long = "p", default_value = "1,1.5,2,3,inf")]
    p_grid: String,
    /// Keep only checks whose id starts with one of these prefixes.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Replace a constant or tolerance, e.g. `const.square_weak_type=2.9`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the witness of every failing check into this directory.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
}

impl ConfigArgs {
    fn build(&self) -> Result<SuiteConfig> {
        let mut overrides = BTreeMap::new();
        for item in &self.overrides {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{item}` is not KEY=VALUE")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("override `{item}` has a bad value")))?;
            overrides.insert(k.trim().to_string(), v);
        }
        let config = SuiteConfig {
            suites: parse_suites(&self.suites)?,
            seed: self.seed,
            trials: self.trials,
            dims: parse_list(&self.dims, "dimension")?,
            levels: parse_list(&self.levels, "level")?,
            p_grid: parse_list(&self.p_grid, "exponent")?,
            overrides,
            only: self.only.clone(),
        };
        config.validate()?;
        Ok(config)
    }
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let text = report.to_toml()?;
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} checks, {} failed, {} trials, {:.1}s",
        report.summary.checks,
        report.summary.failed,
        report.summary.trials,
        report.wall_time_seconds
    );
    for r in report.failures() {
        eprintln!("FAIL {} (worst margin {:e})", r.id, r.worst_margin);
    }
    Ok(())
}

fn write_witnesses(report: &Report, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for r in report.failures() {
        if let Some(w) = &r.witness {
            std::fs::write(dir.join(format!("{}.toml", r.id)), w.to_toml()?)?;
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run(args) => {
            let report = run(&args.config.build()?)?;
            if let Some(dir) = &args.witness_dir {
                write_witnesses(&report, dir)?;
            }
            emit(&report, args.out.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Replay { witness, out } => {
            let report = replay(&Witness::read(&witness)?)?;
            emit(&report, out.as_deref())?;
            Ok(report.exit_code())
        }
        Command::RecordGolden {
            config,
            profiles,
            fixture,
        } => {
            let base = config.build()?;
            let mut golden = Golden::default();
            for trials in parse_list::<usize>(&profiles, "trial count")? {
                let config = SuiteConfig {
                    trials,
                    ..base.clone()
                };
                golden.record(&config, observe_golden(&config)?);
            }
            std::fs::write(&fixture, golden.to_toml()?)?;
            eprintln!("wrote {}", fixture.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
