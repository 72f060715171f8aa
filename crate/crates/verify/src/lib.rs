//! Seeded verification suites over `normlab`, with replayable witnesses.
//!
//! A [`check::Check`] draws the inputs of each trial from its own random
//! stream, records them as a [`case::Case`], and scores them with a margin:
//! nonnegative means the property held. [`runner::run`] executes the
//! selected checks in parallel and assembles a [`report::Report`] sorted by
//! check id.

pub mod case;
pub mod check;
pub mod checks;
pub mod config;
pub mod error;
pub mod golden;
pub mod report;
pub mod runner;
pub mod stream;

pub use checks::registry;
pub use config::{Suite, SuiteConfig};
pub use error::{Error, Result};
pub use golden::Golden;
pub use report::{CheckRecord, Report, Witness};
pub use runner::{replay, run, run_with};
