//! Benchmark protocol: instance classes by distance, repeated trials,
//! ratio and time aggregation.

pub mod instances;
pub mod output;
pub mod run;
pub mod summary;

pub use instances::{choose_beta, sample_instances, BenchInstance, BetaChoice, DistanceMetric};
pub use output::{write_csv, write_summary_json};
pub use run::{hs_matrix, run_matrix, AlgorithmId, BenchConfig, BenchRecord, Mode, ReferenceKind, SCHEMA_VERSION};
pub use summary::{summarize, BenchSummary, GroupSummary};
