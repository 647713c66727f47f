use rayon::prelude::*;
use serde::Serialize;

use super::engine::Analysis;
use crate::graph::GraphKind;
use crate::ids::UserId;
use crate::stats::{mann_whitney_u, shannon_entropy, UTestResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub user: UserId,
    pub kind: GraphKind,
    /// Bits.
    pub entropy: f64,
    pub n_bins: usize,
    pub n_friends_scored: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyComparison {
    pub k: u32,
    pub n_bins: usize,
    /// `(follower, retweet)` per eligible seed, ascending by id.
    pub pairs: Vec<(EntropyProfile, EntropyProfile)>,
    /// Seeds with fewer than two scored friends under either kind.
    pub skipped: usize,
    /// Retweet entropies as the first sample, follower entropies second.
    pub test: Option<UTestResult>,
}

impl EntropyComparison {
    /// Whether the retweet population ranks lower than the follower one.
    pub fn retweet_lower(&self) -> Option<bool> {
        self.test.map(|t| t.u_statistic < (t.n1 * t.n2) as f64 / 2.0)
    }
}

fn friend_entropy(analysis: &Analysis<'_>, u: UserId, kind: GraphKind, k: u32, n_bins: usize) -> Option<EntropyProfile> {
    let scores: Vec<f64> = analysis
        .friends_of(u, kind, k)
        .iter()
        .filter_map(|&f| analysis.moderacy(f))
        .collect();
    if scores.len() < 2 {
        return None;
    }
    Some(EntropyProfile {
        user: u,
        kind,
        entropy: shannon_entropy(&scores, n_bins).ok()?,
        n_bins,
        n_friends_scored: scores.len(),
    })
}

/// Entropy of friends' `m_s` under each graph kind, per seed, and a rank
/// test between the two populations.
pub fn entropy_comparison(analysis: &Analysis<'_>, k: u32, n_bins: usize) -> EntropyComparison {
    let per_seed: Vec<Option<(EntropyProfile, EntropyProfile)>> = analysis
        .seeds()
        .par_iter()
        .map(|&u| {
            Some((
                friend_entropy(analysis, u, GraphKind::Follower, k, n_bins)?,
                friend_entropy(analysis, u, GraphKind::Retweet, k, n_bins)?,
            ))
        })
        .collect();
    let skipped = per_seed.iter().filter(|p| p.is_none()).count();
    let pairs: Vec<_> = per_seed.into_iter().flatten().collect();
    let fol: Vec<f64> = pairs.iter().map(|p| p.0.entropy).collect();
    let rt: Vec<f64> = pairs.iter().map(|p| p.1.entropy).collect();
    EntropyComparison {
        k,
        n_bins,
        test: mann_whitney_u(&rt, &fol).ok(),
        pairs,
        skipped,
    }
}
