//! Batch measure computation, theorem-suite verification and corpus statistics over
//! cubic graphs, built on `snark-core`.

pub mod checks;
pub mod config;
pub mod corpus;
pub mod measures;
pub mod stats;
pub mod verify;
pub mod witness;

pub use config::{BudgetSpec, MeasureConfig, MeasureName};
pub use corpus::{builder, read_graph6_file, CorpusError, Input};
pub use measures::{run_measures, to_csv, Measure, MeasureReport, Record, Value, MEASURES_SCHEMA};
pub use stats::{ratio_stats, RatioStat, StatsError};
pub use verify::{verify_records, verify_suite, TheoremEntry, VerificationReport, VERIFICATION_SCHEMA};
pub use witness::Witness;
