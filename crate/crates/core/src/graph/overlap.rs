use serde::{Deserialize, Serialize};

use super::{FollowerGraph, RetweetGraph};
use crate::ids::UserId;
use crate::stats::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    /// Share of retweeted accounts that are followed.
    Account,
    /// Share of retweet events whose original author is followed.
    Content,
}

impl OverlapMode {
    pub fn as_str(self) -> &'static str {
        match self {
            OverlapMode::Account => "account",
            OverlapMode::Content => "content",
        }
    }
}

/// |friends ∩ retweet friends at k| / |friends|; `None` without friends.
pub fn fraction_friends_retweeted(u: UserId, fg: &FollowerGraph, rg: &RetweetGraph, k: u32) -> Option<f64> {
    let friends = fg.friends(u)?;
    if friends.is_empty() {
        return None;
    }
    let hit = rg.friends_at(u, k).filter(|&(v, _)| friends.binary_search(&v).is_ok()).count();
    Some(hit as f64 / friends.len() as f64)
}

/// Overlap of `u`'s retweet friends at threshold `k` with the accounts
/// `u` follows; `None` when `u` has no retweet friend at `k`. Content mode
/// weights each retweeted account by its retweet count, which is the
/// number of `u`'s retweet events pointing at it.
pub fn retweet_overlap(u: UserId, fg: &FollowerGraph, rg: &RetweetGraph, k: u32, mode: OverlapMode) -> Option<f64> {
    let friends = fg.friends(u).unwrap_or(&[]);
    let (mut hit, mut total) = (0u64, 0u64);
    for (v, w) in rg.friends_at(u, k) {
        let weight = match mode {
            OverlapMode::Account => 1,
            OverlapMode::Content => u64::from(w),
        };
        total += weight;
        if friends.binary_search(&v).is_ok() {
            hit += weight;
        }
    }
    (total > 0).then(|| hit as f64 / total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapPoint {
    pub k: u32,
    /// `None` when no user has a retweet friend at this threshold.
    pub mean_overlap: Option<f64>,
    pub n_users: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapCurve {
    pub mode: OverlapMode,
    pub points: Vec<OverlapPoint>,
}

/// Mean overlap per threshold over the seeds that still have a retweet
/// friend there; users who drop out are excluded, not counted as zero.
pub fn overlap_vs_threshold(
    fg: &FollowerGraph,
    rg: &RetweetGraph,
    ks: impl IntoIterator<Item = u32>,
    mode: OverlapMode,
) -> OverlapCurve {
    let points = ks
        .into_iter()
        .map(|k| {
            let mut acc = NeumaierSum::new();
            let mut n = 0;
            for &u in fg.seeds() {
                if let Some(o) = retweet_overlap(u, fg, rg, k, mode) {
                    acc.add(o);
                    n += 1;
                }
            }
            OverlapPoint {
                k,
                mean_overlap: (n > 0).then(|| acc.value() / n as f64),
                n_users: n,
            }
        })
        .collect();
    OverlapCurve { mode, points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::UserTable;
    use crate::ingest::{parse_events_reader, parse_follow_edges_reader, PldExtractor, TimeWindow};

    struct Fixture {
        users: UserTable,
        fg: FollowerGraph,
        rg: RetweetGraph,
    }

    fn fixture(edges: &str, retweets: &[(&str, &str, usize)]) -> Fixture {
        let mut users = UserTable::new();
        let el = parse_follow_edges_reader(edges.as_bytes(), "e", &mut users).unwrap();
        let mut lines = Vec::new();
        let mut id = 0;
        for &(a, o, n) in retweets {
            for _ in 0..n {
                id += 1;
                lines.push(format!(r#"{{"id":"{id}","author":"{a}","ts":{id},"kind":"retweet","orig_author":"{o}","urls":[]}}"#));
            }
        }
        let log = parse_events_reader(lines.join("\n").as_bytes(), "v", &mut users, &PldExtractor::default()).unwrap();
        let seeds = el.sources();
        let fg = FollowerGraph::build(&el, &seeds, users.len()).unwrap();
        let rg = RetweetGraph::build(&log, &seeds, TimeWindow::ALL, users.len());
        Fixture { users, fg, rg }
    }

    #[test]
    fn fraction_of_friends() {
        let edges: String = std::iter::once("follower,friend".to_string())
            .chain((0..10).map(|i| format!("s,f{i}")))
            .collect::<Vec<_>>()
            .join("\n");
        let f = fixture(&edges, &[("s", "f3", 1)]);
        let s = f.users.get("s").unwrap();
        assert_eq!(fraction_friends_retweeted(s, &f.fg, &f.rg, 1), Some(0.1));
        assert_eq!(fraction_friends_retweeted(s, &f.fg, &f.rg, 2), Some(0.0));
    }

    #[test]
    fn all_and_none_followed() {
        let f = fixture("follower,friend\ns,a\ns,b\nt,z\n", &[("s", "a", 2), ("s", "b", 1), ("t", "y", 1)]);
        let s = f.users.get("s").unwrap();
        let t = f.users.get("t").unwrap();
        for mode in [OverlapMode::Account, OverlapMode::Content] {
            assert_eq!(retweet_overlap(s, &f.fg, &f.rg, 1, mode), Some(1.0));
            assert_eq!(retweet_overlap(t, &f.fg, &f.rg, 1, mode), Some(0.0));
            assert_eq!(retweet_overlap(t, &f.fg, &f.rg, 2, mode), None);
        }
    }

    #[test]
    fn account_versus_content() {
        // a followed (3 retweets), x not followed (1 retweet)
        let f = fixture("follower,friend\ns,a\n", &[("s", "a", 3), ("s", "x", 1)]);
        let s = f.users.get("s").unwrap();
        assert_eq!(retweet_overlap(s, &f.fg, &f.rg, 1, OverlapMode::Account), Some(0.5));
        assert_eq!(retweet_overlap(s, &f.fg, &f.rg, 1, OverlapMode::Content), Some(0.75));
    }

    #[test]
    fn curve_constant_for_single_followed_account() {
        let f = fixture("follower,friend\ns,a\n", &[("s", "a", 10)]);
        let c = overlap_vs_threshold(&f.fg, &f.rg, 1..=10, OverlapMode::Account);
        assert_eq!(c.points.len(), 10);
        assert!(c.points.iter().all(|p| p.mean_overlap == Some(1.0) && p.n_users == 1));
    }

    #[test]
    fn curve_rises_when_weak_links_drop() {
        let f = fixture("follower,friend\ns,a\n", &[("s", "a", 2), ("s", "x", 1)]);
        let c = overlap_vs_threshold(&f.fg, &f.rg, [1, 2, 3], OverlapMode::Account);
        assert_eq!(c.points[0].mean_overlap, Some(0.5));
        assert_eq!(c.points[1].mean_overlap, Some(1.0));
        assert_eq!(c.points[2].mean_overlap, None);
        assert_eq!(c.points[2].n_users, 0);
    }
}
