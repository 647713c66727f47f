//! Follower and retweet graphs around the seed users, their overlap, and
//! the sampling primitives used by the random baselines.

mod cache;
mod follower;
mod overlap;
mod retweet;
mod sample;

pub use cache::{read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use follower::FollowerGraph;
pub use overlap::{
    fraction_friends_retweeted, overlap_vs_threshold, retweet_overlap, OverlapCurve, OverlapMode, OverlapPoint,
};
pub use retweet::RetweetGraph;
pub use sample::{sample_friends_by_indegree, sample_random_friend_subset, Indegree};

use serde::{Deserialize, Serialize};

/// Which relation defines a seed user's neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Follower,
    Retweet,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Follower => "follower",
            GraphKind::Retweet => "retweet",
        }
    }
}

/// Default retweet-friend threshold: one retweet makes a retweet friend.
pub const DEFAULT_THRESHOLD: u32 = 1;

/// Seed set as a membership mask over user ids.
pub(crate) fn seed_mask(seeds: &[crate::UserId], n_users: usize) -> Vec<bool> {
    let n = n_users.max(seeds.iter().map(|s| s.index() + 1).max().unwrap_or(0));
    let mut mask = vec![false; n];
    for s in seeds {
        mask[s.index()] = true;
    }
    mask
}
