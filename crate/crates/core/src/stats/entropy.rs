use super::StatsError;

/// Equal-width bin on [0, 1]; the last bin is closed on the right.
#[inline]
pub fn bin_index(value: f64, n_bins: usize) -> usize {
    ((value * n_bins as f64) as usize).min(n_bins - 1)
}

/// Entropy in bits of a histogram; empty bins contribute nothing.
pub fn entropy_of_counts(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // -0.0 for a single occupied bin
    h.max(0.0)
}

/// Shannon entropy (bits) of `values` binned into `n_bins` equal-width
/// bins over [0, 1].
pub fn shannon_entropy(values: &[f64], n_bins: usize) -> Result<f64, StatsError> {
    if n_bins < 2 {
        return Err(StatsError::TooFewBins(n_bins));
    }
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut counts = vec![0u64; n_bins];
    for &v in values {
        if !v.is_finite() {
            return Err(StatsError::NonFinite);
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(StatsError::OutOfRange(v));
        }
        counts[bin_index(v, n_bins)] += 1;
    }
    Ok(entropy_of_counts(&counts))
}
