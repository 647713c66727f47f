//! Individual and exposure moderacy, and the per-user analyses built on
//! them.

mod activity;
mod congruence;
mod distributions;
mod diversity;
mod engine;
mod fractions;
mod metrics;
mod score;

pub use activity::{friend_activity_comparison, ActivityComparison, FriendActivity};
pub use congruence::{congruent_friend_fraction_diff, CongruenceDiff};
pub use distributions::{score_samples, ScoreSamples};
pub use diversity::{entropy_comparison, EntropyComparison, EntropyProfile};
pub use engine::{Analysis, Exposure, Individual, ModeracyOptions};
pub use fractions::{exposure_class_fractions, random_baseline_fractions, BaselineProfile, ExposureProfile};
pub use metrics::{compute_user_metrics, exposure_delta, MetricsTable, UserMetrics};
pub use score::{classify, domain_class, fold, minmax_normalize, raw_mean_score, MinMaxScale, ModeracyClass};
