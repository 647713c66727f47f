//! Statistical primitives: Pearson correlation, Mann-Whitney U, binned
//! Shannon entropy and percentile bootstrap.

mod bootstrap;
mod entropy;
mod mwu;
mod pearson;
mod sum;

pub use bootstrap::{bootstrap_mean_ci, BootstrapInterval};
pub use entropy::{bin_index, entropy_of_counts, shannon_entropy};
pub use mwu::{
    average_ranks, exact_p_value, mann_whitney_u, mann_whitney_u_with, normal_p_value, PMethod,
    UTestResult, EXACT_CELL_LIMIT, NORMAL_MIN_SAMPLE,
};
pub use pearson::{pearson, CorrelationResult};
pub use sum::{compensated_mean, compensated_sum, NeumaierSum};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("samples differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} observations, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("correlation undefined: a sample has zero variance")]
    ZeroVariance,
    #[error("non-finite observation")]
    NonFinite,
    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("empty sample")]
    EmptySample,
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
}

/// Display rule for p-values in reports.
pub fn format_p(p: f64) -> String {
    if p < 0.001 {
        "p<0.001".to_string()
    } else {
        format!("p={p:.3}")
    }
}
