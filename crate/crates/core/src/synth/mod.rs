//! Synthetic datasets with planted ideology, homophilic following and
//! tunable selective attention, plus a brute-force reference
//! implementation of the metrics.

mod config;
mod generate;
mod oracle;

pub use config::SynthConfig;
pub use generate::{generate, synthesize, GroundTruth, SynthCounts, SynthDataset};
pub use oracle::{compare_snapshots, engine_snapshot, oracle_metrics, MetricKey, MetricSnapshot, Mismatch, OracleReport, DEFAULT_MAX_EVENTS};
