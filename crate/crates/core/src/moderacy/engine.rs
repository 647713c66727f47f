use std::borrow::Cow;

use rayon::prelude::*;
use serde::Serialize;

use super::score::{domain_class, fold_by, fold_unchecked, ModeracyClass, MinMaxScale};
use crate::graph::{FollowerGraph, GraphKind, RetweetGraph};
use crate::ids::{DomainId, UserId};
use crate::ingest::{DatasetBundle, EventKind, TimeWindow};
use crate::stats::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeracyOptions {
    pub window: TimeWindow,
    /// Count each distinct scored domain once per pool instead of once per
    /// occurrence.
    pub unique_domains: bool,
}

impl Default for ModeracyOptions {
    fn default() -> Self {
        ModeracyOptions {
            window: TimeWindow::ALL,
            unique_domains: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Pool {
    sum: NeumaierSum,
    count: u64,
}

impl Pool {
    fn add(&mut self, x: f64) {
        self.sum.add(x);
        self.count += 1;
    }

    fn merge(&mut self, other: &Pool) {
        self.sum.merge(&other.sum);
        self.count += other.count;
    }

    fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum.value() / self.count as f64)
    }
}

#[derive(Debug, Clone, Default)]
struct AuthorStats {
    originals: Pool,
    all: Pool,
    moderate: u64,
    hardline: u64,
    tweets: u32,
}

/// Scored domains of one author, sorted and deduplicated.
#[derive(Debug, Clone, Default)]
struct DistinctDomains {
    originals: Vec<DomainId>,
    all: Vec<DomainId>,
}

/// A user's own sharing: raw mean `mu` over scored domains in original
/// tweets and its folded value before normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Individual {
    pub mu: f64,
    pub folded: f64,
    pub domain_count: u64,
}

/// Exposure pool summary: raw mean of the pooled scores and the value
/// folded on the side of the user's own `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exposure {
    pub raw: f64,
    pub folded: f64,
    pub domain_count: u64,
}

/// Read-only view over a bundle and its graphs with per-author
/// aggregates precomputed for one time window.
pub struct Analysis<'a> {
    bundle: &'a DatasetBundle,
    follower: &'a FollowerGraph,
    retweet: &'a RetweetGraph,
    options: ModeracyOptions,
    scores: Vec<Option<f64>>,
    authors: Vec<AuthorStats>,
    distinct: Option<Vec<DistinctDomains>>,
    scale: Option<MinMaxScale>,
}

impl<'a> Analysis<'a> {
    /// `retweet` must have been built with the same window as `options`.
    pub fn new(
        bundle: &'a DatasetBundle,
        follower: &'a FollowerGraph,
        retweet: &'a RetweetGraph,
        options: ModeracyOptions,
    ) -> Self {
        let log = &bundle.log;
        let scores: Vec<Option<f64>> = log.domain_names().map(|d| bundle.scores.get(d)).collect();
        let n_users = bundle.users.len();
        let window = options.window;

        let authors: Vec<AuthorStats> = (0..n_users as u32)
            .into_par_iter()
            .map(|i| {
                let mut st = AuthorStats::default();
                for ev in log.events_of(UserId(i)).filter(|e| window.contains(e.timestamp)) {
                    st.tweets += 1;
                    for d in &ev.domains {
                        if let Some(s) = scores[d.index()] {
                            st.all.add(s);
                            match domain_class(s) {
                                ModeracyClass::Moderate => st.moderate += 1,
                                ModeracyClass::Hardliner => st.hardline += 1,
                            }
                            if ev.kind == EventKind::Original {
                                st.originals.add(s);
                            }
                        }
                    }
                }
                st
            })
            .collect();

        let distinct = options.unique_domains.then(|| {
            (0..n_users as u32)
                .into_par_iter()
                .map(|i| {
                    let mut dd = DistinctDomains::default();
                    for ev in log.events_of(UserId(i)).filter(|e| window.contains(e.timestamp)) {
                        for &d in ev.domains.iter().filter(|d| scores[d.index()].is_some()) {
                            dd.all.push(d);
                            if ev.kind == EventKind::Original {
                                dd.originals.push(d);
                            }
                        }
                    }
                    for v in [&mut dd.originals, &mut dd.all] {
                        v.sort_unstable();
                        v.dedup();
                    }
                    dd
                })
                .collect()
        });

        let mut analysis = Analysis {
            bundle,
            follower,
            retweet,
            options,
            scores,
            authors,
            distinct,
            scale: None,
        };
        let folded: Vec<f64> = bundle
            .seeds
            .par_iter()
            .filter_map(|&s| analysis.individual(s).map(|i| i.folded))
            .collect();
        analysis.scale = MinMaxScale::fit(folded).ok();
        if analysis.scale.is_some_and(|s| s.is_degenerate()) {
            log::warn!("all scored seeds share one folded score; m_s is 0.5 for everyone");
        }
        analysis
    }

    pub fn bundle(&self) -> &'a DatasetBundle {
        self.bundle
    }

    pub fn follower_graph(&self) -> &'a FollowerGraph {
        self.follower
    }

    pub fn retweet_graph(&self) -> &'a RetweetGraph {
        self.retweet
    }

    pub fn options(&self) -> ModeracyOptions {
        self.options
    }

    pub fn seeds(&self) -> &'a [UserId] {
        &self.bundle.seeds
    }

    pub fn domain_score(&self, d: DomainId) -> Option<f64> {
        self.scores[d.index()]
    }

    /// Tweets (originals and retweets) posted by `u` inside the window.
    pub fn activity(&self, u: UserId) -> u32 {
        self.authors[u.index()].tweets
    }

    pub fn individual(&self, u: UserId) -> Option<Individual> {
        let (mean, count) = match &self.distinct {
            None => {
                let p = &self.authors[u.index()].originals;
                (p.mean()?, p.count)
            }
            Some(dd) => {
                let ds = &dd[u.index()].originals;
                (self.mean_of(ds)?, ds.len() as u64)
            }
        };
        Some(Individual {
            mu: mean,
            folded: fold_unchecked(mean),
            domain_count: count,
        })
    }

    /// Min-max scale fitted on the scored seeds' folded scores.
    pub fn moderacy_scale(&self) -> Option<MinMaxScale> {
        self.scale
    }

    /// Normalised individual moderacy `m_s`. Accounts outside the seed
    /// population are placed on the seed scale and clamped to [0, 1].
    pub fn moderacy(&self, u: UserId) -> Option<f64> {
        Some(self.scale?.apply(self.individual(u)?.folded))
    }

    pub fn moderacy_class(&self, u: UserId) -> Option<ModeracyClass> {
        self.moderacy(u).map(super::classify)
    }

    /// Friends of `u` under `kind`; the retweet kind keeps links of weight
    /// at least `k`.
    pub fn friends_of(&self, u: UserId, kind: GraphKind, k: u32) -> Cow<'a, [UserId]> {
        match kind {
            GraphKind::Follower => Cow::Borrowed(self.follower.friends(u).unwrap_or(&[])),
            GraphKind::Retweet => Cow::Owned(self.retweet.friend_ids_at(u, k)),
        }
    }

    /// Raw mean over every scored occurrence posted by `friends`, with the
    /// pool size.
    pub fn pool_mean(&self, friends: &[UserId]) -> Option<(f64, u64)> {
        match &self.distinct {
            None => {
                let mut pool = Pool::default();
                for f in friends {
                    pool.merge(&self.authors[f.index()].all);
                }
                Some((pool.mean()?, pool.count))
            }
            Some(dd) => {
                let mut ds: Vec<DomainId> = friends.iter().flat_map(|f| dd[f.index()].all.iter().copied()).collect();
                ds.sort_unstable();
                ds.dedup();
                Some((self.mean_of(&ds)?, ds.len() as u64))
            }
        }
    }

    /// Moderate and hardline occurrence counts posted by `friends`.
    pub fn pool_classes(&self, friends: &[UserId]) -> (u64, u64) {
        friends.iter().fold((0, 0), |(m, h), f| {
            let st = &self.authors[f.index()];
            (m + st.moderate, h + st.hardline)
        })
    }

    /// Exposure of `u` through its `kind` friends at threshold `k`,
    /// before normalisation. Absent when `u` has no scored originals or
    /// the pool is empty.
    pub fn exposure(&self, u: UserId, kind: GraphKind, k: u32) -> Option<Exposure> {
        let mu = self.individual(u)?.mu;
        let (raw, count) = self.pool_mean(&self.friends_of(u, kind, k))?;
        Some(Exposure {
            raw,
            folded: fold_by(mu, raw),
            domain_count: count,
        })
    }

    fn mean_of(&self, domains: &[DomainId]) -> Option<f64> {
        if domains.is_empty() {
            return None;
        }
        let sum: NeumaierSum = domains.iter().map(|d| self.scores[d.index()].expect("scored")).collect();
        Some(sum.value() / domains.len() as f64)
    }
}
