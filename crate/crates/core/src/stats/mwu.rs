use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::StatsError;

/// Exact enumeration is used when `n1 * n2` does not exceed this.
pub const EXACT_CELL_LIMIT: usize = 400;

/// Smallest per-sample size at which the normal approximation is treated
/// as applicable (agrees with exact enumeration to within 0.01).
pub const NORMAL_MIN_SAMPLE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PMethod {
    Auto,
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UTestResult {
    /// U for the first sample: the number of (a, b) pairs with a > b,
    /// counting ties as one half.
    pub u_statistic: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub n1: usize,
    pub n2: usize,
    pub method: PMethod,
}

/// 1-based ranks with ties given their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

fn check(a: &[f64], b: &[f64]) -> Result<(), StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}

fn pooled_ranks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut pooled = Vec::with_capacity(a.len() + b.len());
    pooled.extend_from_slice(a);
    pooled.extend_from_slice(b);
    average_ranks(&pooled)
}

fn u_from_ranks(ranks: &[f64], n1: usize) -> f64 {
    let rank_sum: f64 = ranks[..n1].iter().sum();
    rank_sum - (n1 * (n1 + 1)) as f64 / 2.0
}

/// Two-sided Mann-Whitney U test; exact when `n1 * n2 <= 400`.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<UTestResult, StatsError> {
    mann_whitney_u_with(a, b, PMethod::Auto)
}

pub fn mann_whitney_u_with(a: &[f64], b: &[f64], method: PMethod) -> Result<UTestResult, StatsError> {
    check(a, b)?;
    let ranks = pooled_ranks(a, b);
    let u = u_from_ranks(&ranks, a.len());
    let method = match method {
        PMethod::Auto if a.len() * b.len() <= EXACT_CELL_LIMIT => PMethod::Exact,
        PMethod::Auto => PMethod::Normal,
        m => m,
    };
    let p = match method {
        PMethod::Exact => exact_from_ranks(&ranks, a.len()),
        _ => normal_from_ranks(&ranks, a.len(), u),
    };
    Ok(UTestResult {
        u_statistic: u,
        p,
        n1: a.len(),
        n2: b.len(),
        method,
    })
}

/// Permutation p-value by dynamic programming over rank sums:
/// P(|U - mean| >= |u_obs - mean|) under random assignment of the pooled
/// (mid)ranks to the two groups.
pub fn exact_p_value(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    check(a, b)?;
    Ok(exact_from_ranks(&pooled_ranks(a, b), a.len()))
}

pub fn normal_p_value(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    check(a, b)?;
    let ranks = pooled_ranks(a, b);
    let u = u_from_ranks(&ranks, a.len());
    Ok(normal_from_ranks(&ranks, a.len(), u))
}

fn exact_from_ranks(ranks: &[f64], n1: usize) -> f64 {
    let total_n = ranks.len();
    // Midranks are multiples of 1/2, so doubled ranks are integers.
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    // The two-sided event is the same whichever group is enumerated, so
    // enumerate the smaller one.
    let (m, observed) = if n1 <= total_n - n1 {
        (n1, doubled[..n1].iter().sum::<usize>())
    } else {
        (total_n - n1, doubled[n1..].iter().sum::<usize>())
    };
    let max_sum: usize = doubled.iter().sum();

    // ways[j][s]: subsets of size j with doubled rank sum s.
    let mut ways = vec![vec![0u128; max_sum + 1]; m + 1];
    ways[0][0] = 1;
    for (i, &r) in doubled.iter().enumerate() {
        let reachable = max_sum.min(doubled[..=i].iter().sum());
        for j in (1..=m.min(i + 1)).rev() {
            let (lo, hi) = ways.split_at_mut(j);
            let prev = &lo[j - 1];
            let cur = &mut hi[0];
            for s in (r..=reachable).rev() {
                if prev[s - r] != 0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }

    // Doubled expected rank sum of the first group: m * (N + 1).
    let centre = (m * (total_n + 1)) as i64;
    let obs_dev = (observed as i64 - centre).abs();
    let mut extreme = 0u128;
    let mut total = 0u128;
    for (s, &count) in ways[m].iter().enumerate() {
        if count == 0 {
            continue;
        }
        total += count;
        if (s as i64 - centre).abs() >= obs_dev {
            extreme += count;
        }
    }
    (extreme as f64 / total as f64).min(1.0)
}

fn normal_from_ranks(ranks: &[f64], n1: usize, u: f64) -> f64 {
    let n2 = ranks.len() - n1;
    let n = ranks.len() as f64;
    let (n1f, n2f) = (n1 as f64, n2 as f64);

    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = if n > 1.0 {
        n1f * n2f / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)))
    } else {
        0.0
    };
    if variance <= 0.0 {
        return 1.0;
    }
    let mean = n1f * n2f / 2.0;
    let z = ((u - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * std_normal.sf(z)).min(1.0)
}
