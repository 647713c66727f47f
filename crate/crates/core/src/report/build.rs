use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::table::{fmt_f, fmt_opt, CsvTable};
use crate::error::{Error, Result};
use crate::graph::{
    fraction_friends_retweeted, overlap_vs_threshold, read_cache, retweet_overlap, write_cache, FollowerGraph,
    GraphKind, OverlapCurve, OverlapMode, RetweetGraph,
};
use crate::ids::UserId;
use crate::ingest::{hex_prefix, DatasetBundle, SuffixList, TimeWindow};
use crate::moderacy::{
    compute_user_metrics, congruent_friend_fraction_diff, entropy_comparison, exposure_class_fractions,
    friend_activity_comparison, random_baseline_fractions, score_samples, Analysis, ModeracyClass, ModeracyOptions,
};
use crate::rng::{substream, Stream};
use crate::stats::{bin_index, format_p, mann_whitney_u, pearson, UTestResult};

/// Builds both graphs, going through the binary cache at `cache` when one
/// is given. An unreadable or stale cache is rebuilt, never fatal.
pub fn load_graphs(
    bundle: &DatasetBundle,
    window: TimeWindow,
    cache: Option<&Path>,
) -> Result<(FollowerGraph, RetweetGraph)> {
    let n = bundle.users.len();
    if let Some(path) = cache {
        match read_cache(path, &bundle.fingerprint, window, n) {
            Ok(Some(graphs)) => {
                log::info!("graphs loaded from {}", path.display());
                return Ok(graphs);
            }
            Ok(None) => {}
            Err(e) => log::warn!("rebuilding graphs: {e}"),
        }
    }
    let fg = FollowerGraph::build(&bundle.edges, &bundle.seeds, n).map_err(|e| e.context("follower graph"))?;
    let rg = RetweetGraph::build(&bundle.log, &bundle.seeds, window, n);
    if let Some(path) = cache {
        if let Err(e) = write_cache(path, &bundle.fingerprint, window, n, &fg, &rg) {
            log::warn!("graph cache not written: {e}");
        }
    }
    Ok((fg, rg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub input_fingerprint: String,
    pub psl_snapshot: String,
    pub seed: u64,
    /// Threshold used by the single-threshold analyses.
    pub primary_k: u32,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub users: usize,
    pub seeds: usize,
    pub scored_seeds: usize,
    pub events: usize,
    pub events_in_window: usize,
    pub follow_edges: usize,
    pub retweet_edges: usize,
    pub scored_domains: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrEntry {
    pub r: f64,
    pub p: f64,
    pub p_display: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub k: u32,
    pub n_scored_seeds: usize,
    pub n_follower_pool: usize,
    pub n_retweet_pool: usize,
    pub mean_delta: Option<f64>,
    pub ms_vs_me_f: Option<CorrEntry>,
    pub ms_vs_me_r: Option<CorrEntry>,
    pub ms_vs_delta: Option<CorrEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionSummary {
    pub k: u32,
    pub n_users: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestEntry {
    #[serde(flatten)]
    pub test: UTestResult,
    pub p_display: String,
}

impl From<UTestResult> for TestEntry {
    fn from(test: UTestResult) -> Self {
        TestEntry {
            p_display: format_p(test.p),
            test,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFractionRow {
    pub user_class: ModeracyClass,
    /// `follower`, `retweet` or `random`.
    pub source: &'static str,
    pub n_users: usize,
    pub mean_frac_moderate: Option<f64>,
    pub mean_frac_hardline: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFractionSummary {
    pub k: u32,
    pub reps: usize,
    pub baseline_users_eligible: usize,
    pub baseline_users_sampled: usize,
    pub rows: Vec<ClassFractionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropySummary {
    pub k: u32,
    pub n_bins: usize,
    pub n_users: usize,
    pub skipped: usize,
    pub mean_follower: Option<f64>,
    pub mean_retweet: Option<f64>,
    pub median_follower: Option<f64>,
    pub median_retweet: Option<f64>,
    /// Retweet entropies first.
    pub test: Option<TestEntry>,
    pub retweet_lower: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivitySummary {
    pub k: u32,
    pub n_friends: usize,
    pub n_retweeted: usize,
    pub n_not_retweeted: usize,
    pub median_tweets_retweeted: Option<f64>,
    pub median_tweets_not_retweeted: Option<f64>,
    pub retweeted_vs_not: Option<TestEntry>,
    pub n_retweeted_hardline: usize,
    pub n_retweeted_moderate: usize,
    pub median_tweets_retweeted_hardline: Option<f64>,
    pub median_tweets_retweeted_moderate: Option<f64>,
    pub hardline_vs_moderate_retweeted: Option<TestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceRow {
    pub class: ModeracyClass,
    pub n_users: usize,
    pub mean_frac_retweeted: Option<f64>,
    pub mean_frac_not_retweeted: Option<f64>,
    pub mean_diff: Option<f64>,
    /// Retweeted fractions first.
    pub test: Option<TestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceSummary {
    pub k: u32,
    pub rows: Vec<CongruenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreSampleSummary {
    pub draws: usize,
    pub n_bins: usize,
    pub n_random_user: usize,
    pub n_follower_friend: usize,
    pub n_retweet_friend: usize,
    pub mean_random_user: Option<f64>,
    pub mean_follower_friend: Option<f64>,
    pub mean_retweet_friend: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableInfo {
    pub file: String,
    pub rows: usize,
}

/// Everything that goes into `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub meta: RunMeta,
    pub dataset: DatasetSummary,
    /// Human-readable notes on pools or tests that came out empty.
    pub markers: Vec<String>,
    pub correlations: Vec<CorrelationRow>,
    pub overlap: Vec<OverlapCurve>,
    pub friends_retweeted: Vec<FractionSummary>,
    pub class_fractions: ClassFractionSummary,
    pub entropy: EntropySummary,
    pub activity: ActivitySummary,
    pub congruence: CongruenceSummary,
    pub score_samples: ScoreSampleSummary,
    pub tables: Vec<TableInfo>,
}

/// The JSON summary plus one CSV per plot.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub summary: ReportSummary,
    pub tables: Vec<CsvTable>,
}

impl ReportBundle {
    pub fn table(&self, name: &str) -> Option<&CsvTable> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// File name and contents of every output, `report.json` first.
    pub fn files(&self) -> Result<Vec<(String, Vec<u8>)>> {
        let mut json = serde_json::to_vec_pretty(&self.summary).map_err(|e| Error::Invalid(format!("report.json: {e}")))?;
        json.push(b'\n');
        let mut out = vec![("report.json".to_string(), json)];
        for t in &self.tables {
            out.push((t.name.clone(), t.to_bytes()?));
        }
        Ok(out)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let werr = |path: &Path, e: std::io::Error| Error::Write {
            path: path.to_path_buf(),
            source: e,
        };
        std::fs::create_dir_all(dir).map_err(|e| werr(dir, e))?;
        for (name, bytes) in self.files()? {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| werr(&path, e))?;
        }
        Ok(())
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    crate::stats::compensated_mean(xs)
}

fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

fn class_str(c: Option<ModeracyClass>) -> String {
    c.map(|c| c.as_str().to_string()).unwrap_or_default()
}

fn corr(x: &[f64], y: &[f64], what: &str, k: u32, markers: &mut Vec<String>) -> Option<CorrEntry> {
    match pearson(x, y) {
        Ok(c) => Some(CorrEntry {
            r: c.r,
            p: c.p,
            p_display: format_p(c.p),
            n: c.n,
        }),
        Err(e) => {
            markers.push(format!("k={k}: {what} correlation undefined: {e}"));
            None
        }
    }
}

fn u_test(a: &[f64], b: &[f64]) -> Option<TestEntry> {
    mann_whitney_u(a, b).ok().map(TestEntry::from)
}

fn heatmap(name: &str, cells: &[(f64, f64)], bins: usize) -> CsvTable {
    let mut counts = vec![0u64; bins * bins];
    for &(ms, me) in cells {
        counts[bin_index(ms, bins) * bins + bin_index(me, bins)] += 1;
    }
    let edge = |i: usize| fmt_f(i as f64 / bins as f64);
    let mut t = CsvTable::new(name, &["ms_bin", "me_bin", "ms_lo", "ms_hi", "me_lo", "me_hi", "count"]);
    for i in 0..bins {
        for j in 0..bins {
            t.push(vec![
                i.to_string(),
                j.to_string(),
                edge(i),
                edge(i + 1),
                edge(j),
                edge(j + 1),
                counts[i * bins + j].to_string(),
            ]);
        }
    }
    t
}

/// Runs every analysis and assembles the report. `fg` and `rg` must come
/// from `bundle`, with `rg` built over `config.window`.
pub fn build_report(
    bundle: &DatasetBundle,
    fg: &FollowerGraph,
    rg: &RetweetGraph,
    config: &RunConfig,
) -> Result<ReportBundle> {
    config.validate()?;
    let options = ModeracyOptions {
        window: config.window,
        unique_domains: config.unique_domains,
    };
    let an = Analysis::new(bundle, fg, rg, options);
    let k0 = config.primary_k();
    let name = |u: UserId| bundle.users.name(u);
    let mut markers = Vec::new();

    let mut seeds: Vec<UserId> = bundle.seeds.clone();
    seeds.sort_by(|&a, &b| name(a).cmp(name(b)));

    let events_in_window = bundle.log.events().iter().filter(|e| config.window.contains(e.timestamp)).count();
    let scored_seeds = seeds.iter().filter(|&&u| an.moderacy(u).is_some()).count();
    if events_in_window == 0 {
        markers.push("window contains no events: every exposure pool is empty".into());
    }
    if scored_seeds == 0 {
        markers.push("no seed has a scored original tweet: m_s is undefined for every user".into());
    }

    let mut tables = Vec::new();
    let mut correlations = Vec::new();
    let mut heat_f = Vec::new();
    let mut heat_r = Vec::new();
    for k in config.ks() {
        let mt = compute_user_metrics(&an, k);
        let by = |u: UserId| mt.get(u);
        if k == k0 {
            let mut t = CsvTable::new(
                "metrics.csv",
                &["user", "mu", "m_s", "m_e_f", "m_e_r", "delta", "class", "domain_count"],
            );
            for &u in &seeds {
                let Some(m) = by(u) else { continue };
                t.push(vec![
                    name(u).to_string(),
                    fmt_opt(m.raw_mean),
                    fmt_opt(m.m_s),
                    fmt_opt(m.m_e_f),
                    fmt_opt(m.m_e_r),
                    fmt_opt(m.delta),
                    class_str(m.class),
                    m.domain_count.to_string(),
                ]);
                if let Some(ms) = m.m_s {
                    if let Some(me) = m.m_e_f {
                        heat_f.push((ms, me));
                    }
                    if let Some(me) = m.m_e_r {
                        heat_r.push((ms, me));
                    }
                }
            }
            tables.push(t);
        }

        let mut t = CsvTable::new(format!("delta_vs_ms_k{k}.csv"), &["user", "m_s", "m_e_f", "m_e_r", "delta"]);
        for &u in &seeds {
            let Some(m) = by(u) else { continue };
            if let (Some(ms), Some(d)) = (m.m_s, m.delta) {
                t.push(vec![name(u).to_string(), fmt_f(ms), fmt_opt(m.m_e_f), fmt_opt(m.m_e_r), fmt_f(d)]);
            }
        }
        tables.push(t);

        let n_follower_pool = mt.rows.iter().filter(|m| m.exposure_f.is_some()).count();
        let n_retweet_pool = mt.rows.iter().filter(|m| m.exposure_r.is_some()).count();
        if n_follower_pool == 0 {
            markers.push(format!("k={k}: no seed has a follower-graph exposure pool"));
        }
        if n_retweet_pool == 0 {
            markers.push(format!("k={k}: no seed has a retweet-graph exposure pool"));
        }
        let (ms_f, me_f) = mt.paired(|m| m.m_s, |m| m.m_e_f);
        let (ms_r, me_r) = mt.paired(|m| m.m_s, |m| m.m_e_r);
        let (ms_d, d) = mt.paired(|m| m.m_s, |m| m.delta);
        correlations.push(CorrelationRow {
            k,
            n_scored_seeds: scored_seeds,
            n_follower_pool,
            n_retweet_pool,
            mean_delta: mean(&d),
            ms_vs_me_f: corr(&ms_f, &me_f, "m_s vs m_e_f", k, &mut markers),
            ms_vs_me_r: corr(&ms_r, &me_r, "m_s vs m_e_r", k, &mut markers),
            ms_vs_delta: corr(&ms_d, &d, "m_s vs delta", k, &mut markers),
        });
    }
    tables.push(heatmap("echo_heatmap_f.csv", &heat_f, config.heatmap_bins));
    tables.push(heatmap("echo_heatmap_r.csv", &heat_r, config.heatmap_bins));

    // Overlap and the share of friends retweeted.
    let modes = config.overlap_mode.modes();
    let overlap: Vec<OverlapCurve> = modes.iter().map(|&m| overlap_vs_threshold(fg, rg, config.ks(), m)).collect();
    let mut t = CsvTable::new("overlap_curve.csv", &["mode", "k", "mean_overlap", "n_users"]);
    for c in &overlap {
        for p in &c.points {
            t.push(vec![c.mode.as_str().into(), p.k.to_string(), fmt_opt(p.mean_overlap), p.n_users.to_string()]);
        }
    }
    tables.push(t);

    let mut friends_retweeted = Vec::new();
    let mut t = CsvTable::new(
        "friends_retweeted.csv",
        &["k", "user", "fraction_friends_retweeted", "overlap_account", "overlap_content"],
    );
    for k in config.ks() {
        let mut fractions = Vec::new();
        for &u in &seeds {
            let frac = fraction_friends_retweeted(u, fg, rg, k);
            let ov = |m: OverlapMode| modes.contains(&m).then(|| retweet_overlap(u, fg, rg, k, m)).flatten();
            let (oa, oc) = (ov(OverlapMode::Account), ov(OverlapMode::Content));
            if frac.is_none() && oa.is_none() && oc.is_none() {
                continue;
            }
            fractions.extend(frac);
            t.push(vec![k.to_string(), name(u).to_string(), fmt_opt(frac), fmt_opt(oa), fmt_opt(oc)]);
        }
        friends_retweeted.push(FractionSummary {
            k,
            n_users: fractions.len(),
            mean: mean(&fractions),
            median: median(&fractions),
        });
    }
    tables.push(t);

    // Class fractions and the random baseline.
    let scored: Vec<UserId> = seeds.iter().copied().filter(|&u| an.moderacy(u).is_some()).collect();
    let eligible: Vec<UserId> = scored.iter().copied().filter(|&u| rg.friends_at(u, k0).next().is_some()).collect();
    let sampled: Vec<UserId> = match config.baseline_users {
        Some(cap) if cap < eligible.len() => {
            let mut rng = substream(config.seed, Stream::BaselineUsers, 0);
            let mut idx = rand::seq::index::sample(&mut rng, eligible.len(), cap).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| eligible[i]).collect()
        }
        _ => eligible.clone(),
    };
    let baselines: Vec<_> = sampled
        .par_iter()
        .map(|&u| {
            let mut rng = substream(config.seed, Stream::RandomBaseline, u.index() as u64);
            random_baseline_fractions(&an, u, k0, config.reps, &mut rng)
        })
        .collect();
    let baseline_of = |u: UserId| sampled.binary_search_by(|&s| name(s).cmp(name(u))).ok().and_then(|i| baselines[i]);

    let mut t = CsvTable::new(
        "class_fractions.csv",
        &["user", "class", "source", "frac_moderate", "frac_hardline", "n_occurrences"],
    );
    // (class, source) -> (moderate shares, hardline shares)
    type Shares = (Vec<f64>, Vec<f64>);
    let mut acc: Vec<((ModeracyClass, &'static str), Shares)> = Vec::new();
    let mut record = |c: ModeracyClass, src: &'static str, fm: f64, fh: f64| {
        match acc.iter_mut().find(|(key, _)| *key == (c, src)) {
            Some((_, (m, h))) => {
                m.push(fm);
                h.push(fh);
            }
            None => acc.push(((c, src), (vec![fm], vec![fh]))),
        }
    };
    for &u in &scored {
        let class = an.moderacy_class(u).expect("scored seed has a class");
        for kind in [GraphKind::Follower, GraphKind::Retweet] {
            if let Some(p) = exposure_class_fractions(&an, u, kind, k0) {
                record(class, kind.as_str(), p.frac_moderate, p.frac_hardline);
                t.push(vec![
                    name(u).to_string(),
                    class.as_str().into(),
                    kind.as_str().into(),
                    fmt_f(p.frac_moderate),
                    fmt_f(p.frac_hardline),
                    p.n_domain_occurrences.to_string(),
                ]);
            }
        }
        if let Some(b) = baseline_of(u) {
            record(class, "random", b.frac_moderate, b.frac_hardline);
            t.push(vec![
                name(u).to_string(),
                class.as_str().into(),
                "random".into(),
                fmt_f(b.frac_moderate),
                fmt_f(b.frac_hardline),
                fmt_f(b.mean_occurrences),
            ]);
        }
    }
    tables.push(t);
    let mut rows = Vec::new();
    for class in [ModeracyClass::Moderate, ModeracyClass::Hardliner] {
        for src in ["follower", "retweet", "random"] {
            let (m, h) = acc
                .iter()
                .find(|(key, _)| *key == (class, src))
                .map(|(_, v)| (v.0.as_slice(), v.1.as_slice()))
                .unwrap_or((&[], &[]));
            if m.is_empty() {
                markers.push(format!("k={k0}: no {} user has a {src} class-fraction pool", class.as_str()));
            }
            rows.push(ClassFractionRow {
                user_class: class,
                source: src,
                n_users: m.len(),
                mean_frac_moderate: mean(m),
                mean_frac_hardline: mean(h),
            });
        }
    }
    let class_fractions = ClassFractionSummary {
        k: k0,
        reps: config.reps,
        baseline_users_eligible: eligible.len(),
        baseline_users_sampled: sampled.len(),
        rows,
    };

    // Entropy of friends' moderacy.
    let ec = entropy_comparison(&an, k0, config.entropy_bins);
    let mut pairs: Vec<_> = ec.pairs.iter().collect();
    pairs.sort_by(|a, b| name(a.0.user).cmp(name(b.0.user)));
    let mut t = CsvTable::new(
        "entropy.csv",
        &["user", "class", "entropy_follower", "entropy_retweet", "n_follower_scored", "n_retweet_scored"],
    );
    for (f, r) in &pairs {
        t.push(vec![
            name(f.user).to_string(),
            class_str(an.moderacy_class(f.user)),
            fmt_f(f.entropy),
            fmt_f(r.entropy),
            f.n_friends_scored.to_string(),
            r.n_friends_scored.to_string(),
        ]);
    }
    tables.push(t);
    let ent_f: Vec<f64> = ec.pairs.iter().map(|p| p.0.entropy).collect();
    let ent_r: Vec<f64> = ec.pairs.iter().map(|p| p.1.entropy).collect();
    if ec.test.is_none() {
        markers.push(format!("k={k0}: entropy test undefined ({} seeds usable)", ec.pairs.len()));
    }
    let entropy = EntropySummary {
        k: k0,
        n_bins: ec.n_bins,
        n_users: ec.pairs.len(),
        skipped: ec.skipped,
        mean_follower: mean(&ent_f),
        mean_retweet: mean(&ent_r),
        median_follower: median(&ent_f),
        median_retweet: median(&ent_r),
        test: ec.test.map(TestEntry::from),
        retweet_lower: ec.retweet_lower(),
    };

    // Activity of retweeted and ignored friends.
    let ac = friend_activity_comparison(&an, k0);
    let mut friends: Vec<_> = ac.friends.iter().collect();
    friends.sort_by(|a, b| name(a.friend).cmp(name(b.friend)));
    let mut t = CsvTable::new("activity.csv", &["friend", "tweets", "retweeted", "class"]);
    for f in &friends {
        t.push(vec![
            name(f.friend).to_string(),
            f.tweets.to_string(),
            f.retweeted.to_string(),
            class_str(f.class),
        ]);
    }
    tables.push(t);
    let rt = ac.sample(|f| f.retweeted);
    let not_rt = ac.sample(|f| !f.retweeted);
    let rt_h = ac.sample(|f| f.retweeted && f.class == Some(ModeracyClass::Hardliner));
    let rt_m = ac.sample(|f| f.retweeted && f.class == Some(ModeracyClass::Moderate));
    if ac.retweeted_vs_not.is_none() {
        markers.push(format!("k={k0}: activity test undefined (retweeted or ignored friends missing)"));
    }
    let activity = ActivitySummary {
        k: k0,
        n_friends: ac.friends.len(),
        n_retweeted: rt.len(),
        n_not_retweeted: not_rt.len(),
        median_tweets_retweeted: median(&rt),
        median_tweets_not_retweeted: median(&not_rt),
        retweeted_vs_not: ac.retweeted_vs_not.map(TestEntry::from),
        n_retweeted_hardline: rt_h.len(),
        n_retweeted_moderate: rt_m.len(),
        median_tweets_retweeted_hardline: median(&rt_h),
        median_tweets_retweeted_moderate: median(&rt_m),
        hardline_vs_moderate_retweeted: ac.hardline_vs_moderate_retweeted.map(TestEntry::from),
    };

    // Congruence of retweeted versus ignored friends.
    let diffs: Vec<_> = seeds
        .par_iter()
        .map(|&u| congruent_friend_fraction_diff(&an, u, k0))
        .collect();
    let mut t = CsvTable::new(
        "congruence.csv",
        &[
            "user",
            "class",
            "frac_congruent_retweeted",
            "frac_congruent_not_retweeted",
            "diff",
            "n_retweeted",
            "n_not_retweeted",
        ],
    );
    for d in diffs.iter().flatten() {
        t.push(vec![
            name(d.user).to_string(),
            d.class.as_str().into(),
            fmt_f(d.frac_congruent_retweeted),
            fmt_f(d.frac_congruent_not_retweeted),
            fmt_f(d.diff),
            d.n_retweeted.to_string(),
            d.n_not_retweeted.to_string(),
        ]);
    }
    tables.push(t);
    let congruence = CongruenceSummary {
        k: k0,
        rows: [ModeracyClass::Moderate, ModeracyClass::Hardliner]
            .into_iter()
            .map(|class| {
                let of: Vec<_> = diffs.iter().flatten().filter(|d| d.class == class).collect();
                let a: Vec<f64> = of.iter().map(|d| d.frac_congruent_retweeted).collect();
                let b: Vec<f64> = of.iter().map(|d| d.frac_congruent_not_retweeted).collect();
                let diff: Vec<f64> = of.iter().map(|d| d.diff).collect();
                if of.is_empty() {
                    markers.push(format!("k={k0}: no {} user has both congruence partitions", class.as_str()));
                }
                CongruenceRow {
                    class,
                    n_users: of.len(),
                    mean_frac_retweeted: mean(&a),
                    mean_frac_not_retweeted: mean(&b),
                    mean_diff: mean(&diff),
                    test: u_test(&a, &b),
                }
            })
            .collect(),
    };

    // Moderacy of randomly drawn accounts.
    let ss = score_samples(&an, config.score_sample_size, config.seed)?;
    let mut t = CsvTable::new("score_samples.csv", &["source", "bin", "lo", "hi", "count"]);
    for (src, values) in [
        ("random_user", &ss.random_user),
        ("follower_friend", &ss.follower_friend),
        ("retweet_friend", &ss.retweet_friend),
    ] {
        let mut counts = vec![0u64; config.score_bins];
        for &v in values {
            counts[bin_index(v, config.score_bins)] += 1;
        }
        for (i, c) in counts.iter().enumerate() {
            t.push(vec![
                src.into(),
                i.to_string(),
                fmt_f(i as f64 / config.score_bins as f64),
                fmt_f((i + 1) as f64 / config.score_bins as f64),
                c.to_string(),
            ]);
        }
    }
    tables.push(t);
    let score_samples = ScoreSampleSummary {
        draws: config.score_sample_size,
        n_bins: config.score_bins,
        n_random_user: ss.random_user.len(),
        n_follower_friend: ss.follower_friend.len(),
        n_retweet_friend: ss.retweet_friend.len(),
        mean_random_user: mean(&ss.random_user),
        mean_follower_friend: mean(&ss.follower_friend),
        mean_retweet_friend: mean(&ss.retweet_friend),
    };

    let summary = ReportSummary {
        meta: RunMeta {
            tool: "echoscope",
            version: env!("CARGO_PKG_VERSION"),
            config_hash: config.hash(&bundle.fingerprint),
            input_fingerprint: hex_prefix(&bundle.fingerprint, 64),
            psl_snapshot: SuffixList::bundled().snapshot_id().to_string(),
            seed: config.seed,
            primary_k: k0,
            config: config.clone(),
        },
        dataset: DatasetSummary {
            users: bundle.users.len(),
            seeds: bundle.seeds.len(),
            scored_seeds,
            events: bundle.log.len(),
            events_in_window,
            follow_edges: fg.edge_count(),
            retweet_edges: rg.edge_count(),
            scored_domains: bundle.scores.len(),
        },
        markers,
        correlations,
        overlap,
        friends_retweeted,
        class_fractions,
        entropy,
        activity,
        congruence,
        score_samples,
        tables: tables
            .iter()
            .map(|t| TableInfo {
                file: t.name.clone(),
                rows: t.rows.len(),
            })
            .collect(),
    };
    Ok(ReportBundle { summary, tables })
}
