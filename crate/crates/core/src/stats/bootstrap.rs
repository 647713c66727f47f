use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{NeumaierSum, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapInterval {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub reps: usize,
}

impl BootstrapInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Percentile bootstrap interval for the mean.
pub fn bootstrap_mean_ci<R: Rng + ?Sized>(
    values: &[f64],
    reps: usize,
    confidence: f64,
    rng: &mut R,
) -> Result<BootstrapInterval, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if reps == 0 {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    let n = values.len();
    let mean = values.iter().copied().collect::<NeumaierSum>().value() / n as f64;
    let mut means: Vec<f64> = (0..reps)
        .map(|_| {
            let acc: NeumaierSum = (0..n).map(|_| values[rng.random_range(0..n)]).collect();
            acc.value() / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let alpha = (1.0 - confidence).clamp(0.0, 1.0) / 2.0;
    let pick = |q: f64| means[((q * (reps - 1) as f64).round() as usize).min(reps - 1)];
    Ok(BootstrapInterval {
        mean,
        lower: pick(alpha),
        upper: pick(1.0 - alpha),
        reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Stream};

    #[test]
    fn interval_brackets_sample_mean() {
        let values: Vec<f64> = (0..200).map(|i| (i % 17) as f64 / 16.0).collect();
        let mut rng = substream(1, Stream::Bootstrap, 0);
        let ci = bootstrap_mean_ci(&values, 500, 0.95, &mut rng).unwrap();
        assert!(ci.lower < ci.mean && ci.mean < ci.upper);
        assert!(ci.upper - ci.lower < 0.2);
    }

    #[test]
    fn constant_sample_has_zero_width() {
        let mut rng = substream(1, Stream::Bootstrap, 0);
        let ci = bootstrap_mean_ci(&[0.3; 10], 50, 0.9, &mut rng).unwrap();
        assert_eq!((ci.lower, ci.upper), (0.3, 0.3));
    }
}
