//! Instance generation, ingestion, experiments and scaling benchmarks.

pub mod bench;
pub mod experiment;
pub mod generate;
pub mod ingest;

pub use bench::{bench_scaling, loglog_slope, ScalingRow, ScalingTable};
pub use experiment::{
    run_algorithm, run_experiment, schedule_digest, write_jsonl, Algorithm, ExperimentConfig,
    InstanceTemplate, ReportRecord,
};
pub use generate::{generate, Family, InstanceRng, InstanceSpec, Layout};
pub use ingest::{ingest, ingest_bytes, AlphabetMode, IngestOptions};
