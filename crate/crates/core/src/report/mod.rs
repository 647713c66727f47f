//! Dataset-level report: a JSON summary plus plot-ready CSV tables.

mod build;
mod config;
mod table;

pub use build::{
    build_report, load_graphs, ActivitySummary, ClassFractionRow, ClassFractionSummary, CongruenceRow,
    CongruenceSummary, CorrEntry, CorrelationRow, DatasetSummary, EntropySummary, FractionSummary, ReportBundle,
    ReportSummary, RunMeta, ScoreSampleSummary, TableInfo, TestEntry,
};
pub use config::{parse_key_values, read_key_values, OverlapSelection, RunConfig};
pub use table::CsvTable;
