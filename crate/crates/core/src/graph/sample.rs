use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{FollowerGraph, RetweetGraph};
use crate::error::{Error, Result};
use crate::ids::UserId;

pub trait Indegree {
    /// Indegree by user id.
    fn indegrees(&self) -> &[u32];
}

impl Indegree for FollowerGraph {
    fn indegrees(&self) -> &[u32] {
        FollowerGraph::indegrees(self)
    }
}

impl Indegree for RetweetGraph {
    fn indegrees(&self) -> &[u32] {
        RetweetGraph::indegrees(self)
    }
}

/// `n` draws with replacement, each account chosen with probability
/// proportional to its indegree.
pub fn sample_friends_by_indegree<G: Indegree + ?Sized, R: Rng + ?Sized>(
    graph: &G,
    n: usize,
    rng: &mut R,
) -> Result<Vec<UserId>> {
    let indeg = graph.indegrees();
    let targets: Vec<(UserId, u32)> = indeg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(i, &d)| (UserId(i as u32), d))
        .collect();
    if targets.is_empty() {
        return Err(Error::Invalid("all indegrees are zero".into()));
    }
    let dist = WeightedIndex::new(targets.iter().map(|t| t.1)).expect("positive weights");
    Ok((0..n).map(|_| targets[dist.sample(rng)].0).collect())
}

/// Uniform sample without replacement from `u`'s friends, ascending. A
/// request larger than the friend list is clamped to it.
pub fn sample_random_friend_subset<R: Rng + ?Sized>(
    u: UserId,
    fg: &FollowerGraph,
    size: usize,
    rng: &mut R,
) -> Vec<UserId> {
    let friends = fg.friends(u).unwrap_or(&[]);
    let size = if size > friends.len() {
        log::warn!("requested {size} friends of {u}, only {} exist", friends.len());
        friends.len()
    } else {
        size
    };
    if size == friends.len() {
        return friends.to_vec();
    }
    let mut picked: Vec<UserId> = rand::seq::index::sample(rng, friends.len(), size)
        .into_iter()
        .map(|i| friends[i])
        .collect();
    picked.sort_unstable();
    picked
}
