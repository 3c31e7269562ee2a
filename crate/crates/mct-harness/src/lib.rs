//! Experiment runner for `mct-core`: seeded random corpora, log-log slope
//! fits, CSV/JSON reports and the named verification suites behind the
//! `mct` command-line tool.

pub mod config;
pub mod corpus;
pub mod error;
pub mod fit;
pub mod report;
pub mod suites;
pub mod weight_spec;

pub use config::{CorpusConfig, ExperimentConfig, SpaceParams};
pub use corpus::{generate_corpus, CorpusOptions};
pub use error::{HarnessError, Result};
pub use fit::{fit_slope, SlopeFit};
pub use report::{ExperimentReport, Row, Summary, Verdict};
pub use suites::{run_suite, SUITE_NAMES};
pub use weight_spec::parse_weight;
