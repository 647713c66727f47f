use rand::Rng;
use serde::Serialize;

use super::engine::Analysis;
use crate::graph::{sample_random_friend_subset, GraphKind};
use crate::ids::UserId;

/// Share of moderate and hardline domain occurrences in an exposure pool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExposureProfile {
    pub user: UserId,
    pub kind: GraphKind,
    pub frac_moderate: f64,
    pub frac_hardline: f64,
    pub n_domain_occurrences: u64,
}

/// Class shares averaged over random follower subsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineProfile {
    pub user: UserId,
    pub frac_moderate: f64,
    pub frac_hardline: f64,
    pub mean_occurrences: f64,
    pub subset_size: usize,
    /// Repetitions whose sampled pool was non-empty.
    pub reps_used: usize,
}

fn shares(moderate: u64, hardline: u64) -> Option<(f64, f64)> {
    let n = moderate + hardline;
    (n > 0).then(|| (moderate as f64 / n as f64, hardline as f64 / n as f64))
}

pub fn exposure_class_fractions(analysis: &Analysis<'_>, u: UserId, kind: GraphKind, k: u32) -> Option<ExposureProfile> {
    let (m, h) = analysis.pool_classes(&analysis.friends_of(u, kind, k));
    let (frac_moderate, frac_hardline) = shares(m, h)?;
    Some(ExposureProfile {
        user: u,
        kind,
        frac_moderate,
        frac_hardline,
        n_domain_occurrences: m + h,
    })
}

/// Draws `reps` follower subsets as large as `u`'s retweet-friend set at
/// `k` and averages their class shares. Absent without retweet friends or
/// when no draw yields a scored occurrence.
pub fn random_baseline_fractions<R: Rng + ?Sized>(
    analysis: &Analysis<'_>,
    u: UserId,
    k: u32,
    reps: usize,
    rng: &mut R,
) -> Option<BaselineProfile> {
    let fg = analysis.follower_graph();
    let n_friends = fg.friends(u).map_or(0, <[_]>::len);
    let wanted = analysis.retweet_graph().friends_at(u, k).count();
    let size = wanted.min(n_friends);
    if size == 0 {
        return None;
    }
    if size < wanted {
        log::debug!("{u}: {wanted} retweet friends but {n_friends} followed; subset clamped");
    }
    let (mut sum_m, mut sum_h, mut occ, mut used) = (0.0, 0.0, 0u64, 0usize);
    for _ in 0..reps {
        let subset = sample_random_friend_subset(u, fg, size, rng);
        let (m, h) = analysis.pool_classes(&subset);
        if let Some((fm, fh)) = shares(m, h) {
            sum_m += fm;
            sum_h += fh;
            occ += m + h;
            used += 1;
        }
    }
    (used > 0).then(|| BaselineProfile {
        user: u,
        frac_moderate: sum_m / used as f64,
        frac_hardline: sum_h / used as f64,
        mean_occurrences: occ as f64 / used as f64,
        subset_size: size,
        reps_used: used,
    })
}
