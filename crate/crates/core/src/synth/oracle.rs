use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{retweet_overlap, FollowerGraph, OverlapMode, RetweetGraph};
use crate::ids::UserId;
use crate::ingest::{DatasetBundle, EventKind, TweetEvent};
use crate::moderacy::{compute_user_metrics, entropy_comparison, Analysis, ModeracyOptions};

pub const DEFAULT_MAX_EVENTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MetricKey {
    pub k: u32,
    pub user: String,
    pub metric: &'static str,
}

/// Every compared value by `(k, user, metric)`; `None` marks an
/// undefined value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricSnapshot {
    pub values: BTreeMap<MetricKey, Option<f64>>,
}

impl MetricSnapshot {
    fn put(&mut self, k: u32, user: &str, metric: &'static str, v: Option<f64>) {
        self.values.insert(
            MetricKey {
                k,
                user: user.to_string(),
                metric,
            },
            v,
        );
    }

    pub fn get(&self, k: u32, user: &str, metric: &'static str) -> Option<Option<f64>> {
        self.values
            .get(&MetricKey {
                k,
                user: user.to_string(),
                metric,
            })
            .copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub key: MetricKey,
    pub engine: Option<f64>,
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    /// Values defined on both sides and compared numerically.
    pub compared: usize,
    /// Values undefined on both sides.
    pub both_absent: usize,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_snapshots(engine: &MetricSnapshot, oracle: &MetricSnapshot, tolerance: f64) -> OracleReport {
    let mut report = OracleReport {
        compared: 0,
        both_absent: 0,
        max_abs_diff: 0.0,
        tolerance,
        mismatches: Vec::new(),
    };
    let keys: BTreeSet<&MetricKey> = engine.values.keys().chain(oracle.values.keys()).collect();
    for key in keys {
        let e = engine.values.get(key).copied().flatten();
        let o = oracle.values.get(key).copied().flatten();
        let in_both = engine.values.contains_key(key) && oracle.values.contains_key(key);
        let ok = match (e, o) {
            (Some(a), Some(b)) => {
                let d = (a - b).abs();
                report.compared += 1;
                report.max_abs_diff = report.max_abs_diff.max(d);
                d <= tolerance
            }
            (None, None) => {
                report.both_absent += in_both as usize;
                in_both
            }
            _ => false,
        };
        if !ok {
            report.mismatches.push(Mismatch {
                key: key.clone(),
                engine: e,
                oracle: o,
            });
        }
    }
    report
}

/// Engine values in snapshot form.
pub fn engine_snapshot(
    bundle: &DatasetBundle,
    options: ModeracyOptions,
    ks: &[u32],
    n_bins: usize,
) -> Result<MetricSnapshot> {
    let n = bundle.users.len();
    let fg = FollowerGraph::build(&bundle.edges, &bundle.seeds, n)?;
    let rg = RetweetGraph::build(&bundle.log, &bundle.seeds, options.window, n);
    let analysis = Analysis::new(bundle, &fg, &rg, options);
    let mut snap = MetricSnapshot::default();
    for &k in ks {
        let table = compute_user_metrics(&analysis, k);
        let entropy = entropy_comparison(&analysis, k, n_bins);
        let by_user: BTreeMap<UserId, (f64, f64)> = entropy
            .pairs
            .iter()
            .map(|(f, r)| (f.user, (f.entropy, r.entropy)))
            .collect();
        for row in &table.rows {
            let name = bundle.users.name(row.user);
            snap.put(k, name, "m_s", row.m_s);
            snap.put(k, name, "m_e_f", row.m_e_f);
            snap.put(k, name, "m_e_r", row.m_e_r);
            snap.put(k, name, "delta", row.delta);
            snap.put(k, name, "overlap_account", retweet_overlap(row.user, &fg, &rg, k, OverlapMode::Account));
            snap.put(k, name, "overlap_content", retweet_overlap(row.user, &fg, &rg, k, OverlapMode::Content));
            let ent = by_user.get(&row.user);
            snap.put(k, name, "entropy_f", ent.map(|e| e.0));
            snap.put(k, name, "entropy_r", ent.map(|e| e.1));
        }
    }
    Ok(snap)
}

fn naive_mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut s = 0.0;
    for x in xs {
        s += x;
    }
    Some(s / xs.len() as f64)
}

fn naive_entropy(values: &[f64], n_bins: usize) -> f64 {
    let mut counts = vec![0usize; n_bins];
    for &v in values {
        let mut b = (v * n_bins as f64).floor() as usize;
        if b >= n_bins {
            b = n_bins - 1;
        }
        counts[b] += 1;
    }
    let total = values.len() as f64;
    let mut h = 0.0;
    for c in counts {
        if c > 0 {
            let p = c as f64 / total;
            h -= p * p.log2();
        }
    }
    h
}

/// Recomputes every compared metric by direct scans over the raw events
/// and edges. Refuses bundles above `max_events` events.
pub fn oracle_metrics(
    bundle: &DatasetBundle,
    options: ModeracyOptions,
    ks: &[u32],
    n_bins: usize,
    max_events: usize,
) -> Result<MetricSnapshot> {
    if bundle.log.len() > max_events {
        return Err(Error::GuardRail(format!(
            "oracle limited to {max_events} events, bundle has {}",
            bundle.log.len()
        )));
    }
    let events: Vec<&TweetEvent> = bundle
        .log
        .events()
        .iter()
        .filter(|e| options.window.contains(e.timestamp))
        .collect();
    let name = |u: UserId| bundle.users.name(u).to_string();
    let score = |e: &TweetEvent, i: usize| bundle.scores.get(bundle.log.domain_name(e.domains[i]));

    // scored domain names shared by `authors`, originals only if asked
    let shared = |authors: &BTreeSet<String>, originals_only: bool| -> Vec<f64> {
        let mut occurrences: Vec<(String, f64)> = Vec::new();
        for e in &events {
            if !authors.contains(&name(e.author)) || (originals_only && e.kind != EventKind::Original) {
                continue;
            }
            for i in 0..e.domains.len() {
                if let Some(s) = score(e, i) {
                    occurrences.push((bundle.log.domain_name(e.domains[i]).to_string(), s));
                }
            }
        }
        if options.unique_domains {
            let set: BTreeMap<String, f64> = occurrences.into_iter().collect();
            set.into_values().collect()
        } else {
            occurrences.into_iter().map(|o| o.1).collect()
        }
    };

    let mu_of = |u: &str| naive_mean(&shared(&BTreeSet::from([u.to_string()]), true));
    let fold = |m: f64| if m > 0.5 { m } else { 1.0 - m };
    let seeds: Vec<String> = bundle.seeds.iter().map(|&s| name(s)).collect();

    let seed_folds: Vec<f64> = seeds.iter().filter_map(|s| mu_of(s)).map(fold).collect();
    let lo = seed_folds.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = seed_folds.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let m_s = |u: &str| -> Option<f64> {
        let f = fold(mu_of(u)?);
        if hi == lo {
            Some(0.5)
        } else {
            Some(((f - lo) / (hi - lo)).clamp(0.0, 1.0))
        }
    };

    let mut follows: BTreeMap<String, BTreeSet<String>> = seeds.iter().map(|s| (s.clone(), BTreeSet::new())).collect();
    for &(a, b) in bundle.edges.edges() {
        if let Some(set) = follows.get_mut(&name(a)) {
            set.insert(name(b));
        }
    }
    let mut weights: BTreeMap<(String, String), u32> = BTreeMap::new();
    for e in &events {
        if e.kind == EventKind::Retweet && follows.contains_key(&name(e.author)) {
            let orig = name(e.original_author.expect("retweet has an original author"));
            *weights.entry((name(e.author), orig)).or_insert(0) += 1;
        }
    }

    let mut snap = MetricSnapshot::default();
    for &k in ks {
        struct Row {
            m_s: Option<f64>,
            ef: Option<f64>,
            er: Option<f64>,
            ov_a: Option<f64>,
            ov_c: Option<f64>,
            ent: Option<(f64, f64)>,
        }
        let mut rows: Vec<(String, Row)> = Vec::new();
        for s in &seeds {
            let ff = &follows[s];
            let rf: BTreeSet<String> = weights
                .iter()
                .filter(|((a, _), &w)| a == s && w >= k)
                .map(|((_, b), _)| b.clone())
                .collect();
            let mu = mu_of(s);
            let exposure = |friends: &BTreeSet<String>| -> Option<f64> {
                let raw = naive_mean(&shared(friends, false))?;
                let mu = mu?;
                Some(if mu > 0.5 { raw } else { 1.0 - raw })
            };
            let (ov_a, ov_c) = if rf.is_empty() {
                (None, None)
            } else {
                let both = rf.iter().filter(|v| ff.contains(*v)).count();
                let mut num = 0u32;
                let mut den = 0u32;
                for ((a, b), &w) in &weights {
                    if a == s && w >= k {
                        den += w;
                        if ff.contains(b) {
                            num += w;
                        }
                    }
                }
                (Some(both as f64 / rf.len() as f64), Some(num as f64 / den as f64))
            };
            let fr: Vec<f64> = ff.iter().filter_map(|f| m_s(f)).collect();
            let rr: Vec<f64> = rf.iter().filter_map(|f| m_s(f)).collect();
            let ent = (fr.len() >= 2 && rr.len() >= 2).then(|| (naive_entropy(&fr, n_bins), naive_entropy(&rr, n_bins)));
            rows.push((
                s.clone(),
                Row {
                    m_s: m_s(s),
                    ef: exposure(ff),
                    er: exposure(&rf),
                    ov_a,
                    ov_c,
                    ent,
                },
            ));
        }
        let all: Vec<f64> = rows.iter().flat_map(|(_, r)| [r.ef, r.er]).flatten().collect();
        let elo = all.iter().cloned().fold(f64::INFINITY, f64::min);
        let ehi = all.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let norm = |x: Option<f64>| x.map(|v| if ehi == elo { 0.5 } else { (v - elo) / (ehi - elo) });
        for (s, r) in rows {
            let (ef, er) = (norm(r.ef), norm(r.er));
            snap.put(k, &s, "m_s", r.m_s);
            snap.put(k, &s, "m_e_f", ef);
            snap.put(k, &s, "m_e_r", er);
            snap.put(k, &s, "delta", ef.zip(er).map(|(a, b)| a - b));
            snap.put(k, &s, "overlap_account", r.ov_a);
            snap.put(k, &s, "overlap_content", r.ov_c);
            snap.put(k, &s, "entropy_f", r.ent.map(|e| e.0));
            snap.put(k, &s, "entropy_r", r.ent.map(|e| e.1));
        }
    }
    Ok(snap)
}
