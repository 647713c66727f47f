use rayon::prelude::*;

use crate::ids::UserId;
use crate::ingest::{EventLog, TimeWindow};

/// Seed users' retweet links weighted by retweet count. A link points at
/// the original author; intermediate retweeters are not recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetweetGraph {
    seeds: Vec<UserId>,
    offsets: Vec<usize>,
    targets: Vec<UserId>,
    weights: Vec<u32>,
    indegree: Vec<u32>,
}

impl RetweetGraph {
    /// Counts the retweet events by each seed inside `window`.
    pub fn build(log: &EventLog, seeds: &[UserId], window: TimeWindow, n_users: usize) -> Self {
        let mask = super::seed_mask(seeds, n_users);
        let mut pairs: Vec<(UserId, UserId)> = log
            .events()
            .par_iter()
            .filter(|e| e.is_retweet() && mask.get(e.author.index()).copied().unwrap_or(false) && window.contains(e.timestamp))
            .map(|e| (e.author, e.original_author.expect("retweet has an original author")))
            .collect();
        pairs.par_sort_unstable();

        let n_users = n_users.max(pairs.iter().map(|p| p.1.index() + 1).max().unwrap_or(0));
        let mut offsets = Vec::with_capacity(seeds.len() + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut indegree = vec![0u32; n_users];
        offsets.push(0);
        let mut cursor = 0;
        for &s in seeds {
            while cursor < pairs.len() && pairs[cursor].0 < s {
                cursor += 1;
            }
            while cursor < pairs.len() && pairs[cursor].0 == s {
                let target = pairs[cursor].1;
                let run = pairs[cursor..].iter().take_while(|p| **p == (s, target)).count();
                targets.push(target);
                weights.push(run as u32);
                indegree[target.index()] += run as u32;
                cursor += run;
            }
            offsets.push(targets.len());
        }
        RetweetGraph {
            seeds: seeds.to_vec(),
            offsets,
            targets,
            weights,
            indegree,
        }
    }

    pub(crate) fn from_parts(
        seeds: Vec<UserId>,
        offsets: Vec<usize>,
        targets: Vec<UserId>,
        weights: Vec<u32>,
        n_users: usize,
    ) -> Self {
        let mut indegree = vec![0u32; n_users];
        for (t, w) in targets.iter().zip(&weights) {
            indegree[t.index()] += w;
        }
        RetweetGraph {
            seeds,
            offsets,
            targets,
            weights,
            indegree,
        }
    }

    pub(crate) fn parts(&self) -> (&[usize], &[UserId], &[u32]) {
        (&self.offsets, &self.targets, &self.weights)
    }

    pub fn seeds(&self) -> &[UserId] {
        &self.seeds
    }

    /// All retweeted accounts of `u` with weights, ascending by id.
    pub fn links(&self, u: UserId) -> impl Iterator<Item = (UserId, u32)> + '_ {
        let range = match self.seeds.binary_search(&u) {
            Ok(i) => self.offsets[i]..self.offsets[i + 1],
            Err(_) => 0..0,
        };
        self.targets[range.clone()].iter().copied().zip(self.weights[range].iter().copied())
    }

    /// The thresholded view: links with weight at least `k`.
    pub fn friends_at(&self, u: UserId, k: u32) -> impl Iterator<Item = (UserId, u32)> + '_ {
        self.links(u).filter(move |&(_, w)| w >= k)
    }

    pub fn friend_ids_at(&self, u: UserId, k: u32) -> Vec<UserId> {
        self.friends_at(u, k).map(|(v, _)| v).collect()
    }

    pub fn weight(&self, u: UserId, v: UserId) -> u32 {
        self.links(u).find(|&(t, _)| t == v).map_or(0, |(_, w)| w)
    }

    pub fn indegree(&self, u: UserId) -> u32 {
        self.indegree.get(u.index()).copied().unwrap_or(0)
    }

    pub fn indegrees(&self) -> &[u32] {
        &self.indegree
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }
}
