//! Shared fixtures for the criterion benches.

use echoscope::ingest::DatasetBundle;
use echoscope::synth::{generate, SynthConfig};

/// A calibrated synthetic bundle of `n_users` accounts with degree and
/// activity scaled down so that larger sizes stay quick to build.
pub fn fixture(n_users: usize) -> DatasetBundle {
    let cfg = SynthConfig {
        n_users,
        base_follow_prob: (60.0 / n_users as f64).min(0.5),
        activity_rate: 8.0,
        retweet_rate: 10.0,
        seed: 7,
        ..SynthConfig::default()
    };
    generate(&cfg).expect("bench fixture").0
}
