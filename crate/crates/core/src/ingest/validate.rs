use std::collections::HashSet;

use serde::Serialize;

use crate::ids::UserId;
use crate::ingest::bundle::DatasetBundle;

/// Referential checks over a parsed bundle. Only `unknown_seeds` count as
/// errors; everything else is informational.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n_users: usize,
    pub n_seeds: usize,
    pub n_edges: usize,
    pub n_events: usize,
    pub n_originals: usize,
    pub n_retweets: usize,
    pub n_scored_domains: usize,
    pub n_domains_seen: usize,
    pub self_loops_dropped: u64,
    pub duplicate_edges_dropped: u64,
    pub urls_seen: u64,
    pub urls_dropped: u64,
    /// Share of events carrying at least one scored domain.
    pub scored_event_fraction: f64,
    pub seeds_without_friends: Vec<String>,
    /// Retweets whose original author never posts in the log. Legal: the
    /// log need not contain every retweeted account.
    pub dangling_retweets: usize,
    pub dangling_retweet_authors: usize,
    /// Seeds that appear in neither the edge list nor the event log.
    pub unknown_seeds: Vec<String>,
    pub errors: usize,
    pub warnings: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors == 0
    }
}

pub fn validate_dataset(bundle: &DatasetBundle) -> ValidationReport {
    let log = &bundle.log;
    let events = log.events();

    let authors: HashSet<UserId> = events.iter().map(|e| e.author).collect();
    let mut dangling = 0usize;
    let mut dangling_authors = HashSet::new();
    for e in events.iter().filter(|e| e.is_retweet()) {
        let orig = e.original_author.expect("retweets carry an original author");
        if !authors.contains(&orig) {
            dangling += 1;
            dangling_authors.insert(orig);
        }
    }

    let scored: Vec<bool> = log
        .domain_names()
        .map(|d| bundle.scores.get(d).is_some())
        .collect();
    let scored_events = events
        .iter()
        .filter(|e| e.domains.iter().any(|d| scored[d.index()]))
        .count();

    let sources = bundle.edges.sources();
    let friended: HashSet<UserId> = bundle.edges.edges().iter().map(|e| e.1).collect();
    let mut seeds_without_friends = Vec::new();
    let mut unknown_seeds = Vec::new();
    for u in bundle.seeds_by_name() {
        let has_friends = sources.binary_search(&u).is_ok();
        if !has_friends {
            seeds_without_friends.push(bundle.users.name(u).to_string());
            if !friended.contains(&u) && log.positions_of(u).is_empty() {
                let mentioned = events.iter().any(|e| e.original_author == Some(u));
                if !mentioned {
                    unknown_seeds.push(bundle.users.name(u).to_string());
                }
            }
        }
    }

    let n_retweets = events.iter().filter(|e| e.is_retweet()).count();
    let warnings = seeds_without_friends.len() + usize::from(dangling > 0);
    ValidationReport {
        n_users: bundle.users.len(),
        n_seeds: bundle.seeds.len(),
        n_edges: bundle.edges.len(),
        n_events: events.len(),
        n_originals: events.len() - n_retweets,
        n_retweets,
        n_scored_domains: bundle.scores.len(),
        n_domains_seen: log.domain_count(),
        self_loops_dropped: bundle.edges.self_loops_dropped,
        duplicate_edges_dropped: bundle.edges.duplicates_dropped,
        urls_seen: log.urls_seen,
        urls_dropped: log.urls_dropped,
        scored_event_fraction: if events.is_empty() {
            0.0
        } else {
            scored_events as f64 / events.len() as f64
        },
        seeds_without_friends,
        dangling_retweets: dangling,
        dangling_retweet_authors: dangling_authors.len(),
        errors: unknown_seeds.len(),
        unknown_seeds,
        warnings,
    }
}
