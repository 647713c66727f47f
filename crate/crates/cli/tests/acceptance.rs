//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (no libtest harness) so that shared synthetic
//! runs are generated once. `ECHOSCOPE_ACCEPTANCE=1,3,9` restricts the
//! run to the listed criteria.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use echoscope::graph::{FollowerGraph, RetweetGraph};
use echoscope::ingest::{DatasetBundle, TimeWindow};
use echoscope::moderacy::{
    compute_user_metrics, congruent_friend_fraction_diff, entropy_comparison, fold, minmax_normalize, Analysis,
    ModeracyClass, ModeracyOptions,
};
use echoscope::stats::{mann_whitney_u, pearson, shannon_entropy};
use echoscope::synth::{compare_snapshots, engine_snapshot, generate, oracle_metrics, SynthConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn selected() -> Option<Vec<u32>> {
    let v = std::env::var("ECHOSCOPE_ACCEPTANCE").ok()?;
    Some(v.split(',').filter_map(|s| s.trim().parse().ok()).collect())
}

// ---------------------------------------------------------------- 1

fn random_small_config(rng: &mut ChaCha8Rng) -> SynthConfig {
    SynthConfig {
        n_users: rng.random_range(5..=50),
        n_domains: rng.random_range(5..=25),
        follow_homophily: [0.05, 0.2, 1.0, 5.0][rng.random_range(0..4)],
        base_follow_prob: rng.random_range(0.1..0.7),
        attention_bias: rng.random_range(0.0..8.0),
        activity_rate: rng.random_range(1.0..8.0),
        retweet_rate: rng.random_range(0.5..8.0),
        duration: rng.random_range(1_000..1_000_000),
        seed: rng.random(),
        activity_sigma: rng.random_range(0.0..1.0),
        retweet_sigma: rng.random_range(0.0..1.0),
        domain_noise: rng.random_range(0.0..0.3),
        ..SynthConfig::default()
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let (mut compared, mut max_diff, mut failed, mut rejected) = (0usize, 0.0f64, Vec::new(), 0usize);
    for i in 0..100 {
        let bundle = loop {
            let cfg = random_small_config(&mut rng);
            if cfg.validate().is_err() || cfg.check_feasible().is_err() {
                rejected += 1;
                continue;
            }
            let (b, _) = generate(&cfg).expect("generator");
            if b.log.len() <= 1000 {
                break b;
            }
            rejected += 1;
        };
        let mut options = ModeracyOptions {
            unique_domains: i % 4 == 3,
            ..ModeracyOptions::default()
        };
        if i % 5 == 4 {
            if let Some((lo, hi)) = bundle.log.time_range() {
                let q = (hi - lo) / 4;
                options.window = TimeWindow { start: lo + q, end: hi - q };
            }
        }
        let ks = [1, 2, 3, 5];
        let bins = [2, 5, 10][i % 3];
        let engine = engine_snapshot(&bundle, options, &ks, bins).expect("engine");
        let oracle = oracle_metrics(&bundle, options, &ks, bins, 1000).expect("oracle");
        let report = compare_snapshots(&engine, &oracle, 1e-12);
        compared += report.compared;
        max_diff = max_diff.max(report.max_abs_diff);
        if !report.passed() {
            let m = &report.mismatches[0];
            failed.push(format!("bundle {i}: {} k={} {}", m.key.metric, m.key.k, m.key.user));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        failed.is_empty() && secs < 60.0,
        format!(
            "100 bundles, {compared} values, max |diff| {max_diff:.1e}, {} failing, {rejected} configs redrawn, {secs:.1} s{}",
            failed.len(),
            failed.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF01D);
    let mut failures = Vec::new();
    let mut mus: Vec<f64> = vec![0.0, 0.5, 1.0, 0.5 - 1e-15, 0.5 + 1e-15, f64::MIN_POSITIVE];
    while mus.len() < 100_000 {
        mus.push(rng.random_range(0.0..=1.0));
    }
    for &mu in &mus {
        let a = fold(mu).unwrap();
        let b = fold(1.0 - mu).unwrap();
        // 1 - (1 - mu) may differ from mu in the last place.
        if (a - b).abs() > f64::EPSILON {
            failures.push(format!("symmetry at {mu}"));
        }
        if !(0.5..=1.0).contains(&a) {
            failures.push(format!("range at {mu}: {a}"));
        }
    }
    let mut batches = 0;
    for chunk in mus.chunks(1000) {
        batches += 1;
        let folded: BTreeMap<usize, f64> = chunk.iter().enumerate().map(|(i, &m)| (i, fold(m).unwrap())).collect();
        let norm = minmax_normalize(&folded).unwrap();
        let lo = folded.values().copied().fold(f64::INFINITY, f64::min);
        let hi = folded.values().copied().fold(f64::NEG_INFINITY, f64::max);
        for (i, &x) in &folded {
            let y = norm[i];
            if x == lo && y != 0.0 || x == hi && y != 1.0 {
                failures.push(format!("endpoint {x} -> {y}"));
            }
            if !(0.0..=1.0).contains(&y) {
                failures.push(format!("normalized {y} out of range"));
            }
        }
        let mut order: Vec<usize> = (0..chunk.len()).collect();
        order.sort_by(|&a, &b| folded[&a].total_cmp(&folded[&b]));
        for w in order.windows(2) {
            let (x0, x1) = (folded[&w[0]], folded[&w[1]]);
            let (y0, y1) = (norm[&w[0]], norm[&w[1]]);
            if y0 > y1 || (x0 < x1) != (y0 < y1) && x1 - x0 > 1e-12 {
                failures.push(format!("rank order broken between {x0} and {x1}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} values, {batches} normalization batches, {} failures{}",
            mus.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- 3

fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx).powi(2);
        syy += (y[i] - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Twice the U statistic of `a`, by direct pair comparison.
fn doubled_u(a: &[f64], b: &[f64]) -> i64 {
    let mut u = 0;
    for &x in a {
        for &y in b {
            u += if x > y {
                2
            } else if x == y {
                1
            } else {
                0
            };
        }
    }
    u
}

/// Two-sided permutation p-value by enumerating every split of the pool.
fn enumerated_p(a: &[f64], b: &[f64]) -> f64 {
    let pool: Vec<f64> = a.iter().chain(b).copied().collect();
    let (n1, n) = (a.len(), pool.len());
    let centre = (n1 * (n - n1)) as i64; // doubled n1*n2/2
    let obs = (doubled_u(a, b) - centre).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let (ga, gb): (Vec<f64>, Vec<f64>) = {
            let mut ga = Vec::new();
            let mut gb = Vec::new();
            for (i, &v) in pool.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ga.push(v)
                } else {
                    gb.push(v)
                }
            }
            (ga, gb)
        };
        total += 1;
        if (doubled_u(&ga, &gb) - centre).abs() >= obs {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57A7);
    let mut problems = Vec::new();

    let mut max_r = 0.0f64;
    for i in 0..1000 {
        let n = rng.random_range(3..300);
        let slope = rng.random_range(-2.0..2.0);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| slope * v + rng.random_range(-3.0..3.0)).collect();
        let got = pearson(&x, &y).expect("pearson").r;
        let d = (got - naive_pearson(&x, &y)).abs();
        max_r = max_r.max(d);
        if d > 1e-10 {
            problems.push(format!("pearson sample {i}: diff {d:e}"));
        }
    }

    let mut max_p = 0.0f64;
    let mut exact_cases = 0;
    for n in 1..=5 {
        for _ in 0..60 {
            // Coarse grid so that ties occur.
            let mut draw = || (rng.random_range(0..8) as f64) / 2.0;
            let a: Vec<f64> = (0..n).map(|_| draw()).collect();
            let b: Vec<f64> = (0..n).map(|_| draw()).collect();
            let got = mann_whitney_u(&a, &b).expect("mwu").p;
            let d = (got - enumerated_p(&a, &b)).abs();
            max_p = max_p.max(d);
            exact_cases += 1;
            if d > 1e-9 {
                problems.push(format!("mwu {a:?} vs {b:?}: diff {d:e}"));
            }
        }
    }

    let mut u_cases = 0;
    for _ in 0..2000 {
        let n1 = rng.random_range(1..60);
        let n2 = rng.random_range(1..60);
        let ties = rng.random_bool(0.5);
        let mut draw = || {
            if ties {
                rng.random_range(0..6) as f64
            } else {
                rng.random_range(0.0..1.0)
            }
        };
        let a: Vec<f64> = (0..n1).map(|_| draw()).collect();
        let b: Vec<f64> = (0..n2).map(|_| draw()).collect();
        let ua = mann_whitney_u(&a, &b).unwrap().u_statistic;
        let ub = mann_whitney_u(&b, &a).unwrap().u_statistic;
        u_cases += 1;
        if ua + ub != (n1 * n2) as f64 {
            problems.push(format!("U sum {ua}+{ub} != {}", n1 * n2));
        }
    }

    let mut entropy_cases = 0;
    for _ in 0..1000 {
        let bins = rng.random_range(2..20);
        let n = rng.random_range(1..200);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
        let h = shannon_entropy(&v, bins).unwrap();
        entropy_cases += 1;
        if !(0.0..=(bins as f64).log2() + 1e-12).contains(&h) {
            problems.push(format!("entropy {h} outside [0, log2 {bins}]"));
        }
    }
    let degenerate = shannon_entropy(&[0.3; 17], 2).unwrap();
    let uniform = shannon_entropy(&[0.1, 0.2, 0.7, 0.9], 2).unwrap();
    if degenerate != 0.0 {
        problems.push(format!("degenerate entropy {degenerate}"));
    }
    if uniform != 1.0 {
        problems.push(format!("uniform 2-bin entropy {uniform}"));
    }

    outcome(
        problems.is_empty(),
        format!(
            "pearson 1000 samples max diff {max_r:.1e}; mwu {exact_cases} enumerated cases max diff {max_p:.1e}; \
             {u_cases} U-sum checks; {entropy_cases} entropy bounds; {} problems{}",
            problems.len(),
            problems.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- 4 to 8

const KS: [u32; 4] = [1, 2, 5, 10];

fn family_config(seed: u64, beta: f64) -> SynthConfig {
    SynthConfig {
        n_users: 2000,
        follow_homophily: 0.2,
        attention_bias: beta,
        seed,
        ..SynthConfig::default()
    }
}

struct RunStats {
    seed: u64,
    elapsed: Duration,
    r_f: Option<f64>,
    r_r: Option<f64>,
    /// Pearson(delta, m_s) at each k of `KS`.
    r_delta: Vec<Option<f64>>,
    delta_sum: f64,
    delta_count: usize,
    entropy_lower: Option<bool>,
    entropy_p: Option<f64>,
    cong_moderate: Option<f64>,
    cong_hardline: Option<f64>,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn family_run(seed: u64, beta: f64) -> RunStats {
    let t = Instant::now();
    let (bundle, _): (DatasetBundle, _) = generate(&family_config(seed, beta)).expect("generator");
    let n = bundle.users.len();
    let fg = FollowerGraph::build(&bundle.edges, &bundle.seeds, n).expect("follower graph");
    let rg = RetweetGraph::build(&bundle.log, &bundle.seeds, TimeWindow::ALL, n);
    let an = Analysis::new(&bundle, &fg, &rg, ModeracyOptions::default());

    let mut stats = RunStats {
        seed,
        elapsed: Duration::ZERO,
        r_f: None,
        r_r: None,
        r_delta: Vec::new(),
        delta_sum: 0.0,
        delta_count: 0,
        entropy_lower: None,
        entropy_p: None,
        cong_moderate: None,
        cong_hardline: None,
    };
    for k in KS {
        let mt = compute_user_metrics(&an, k);
        let (ms_d, d) = mt.paired(|m| m.m_s, |m| m.delta);
        stats.r_delta.push(pearson(&ms_d, &d).ok().map(|c| c.r));
        if k == 1 {
            let (a, b) = mt.paired(|m| m.m_s, |m| m.m_e_f);
            stats.r_f = pearson(&a, &b).ok().map(|c| c.r);
            let (a, b) = mt.paired(|m| m.m_s, |m| m.m_e_r);
            stats.r_r = pearson(&a, &b).ok().map(|c| c.r);
            stats.delta_sum = d.iter().sum();
            stats.delta_count = d.len();
        }
    }
    let ec = entropy_comparison(&an, 1, 5);
    stats.entropy_lower = ec.retweet_lower();
    stats.entropy_p = ec.test.map(|t| t.p);

    let (mut hard, mut moder) = (Vec::new(), Vec::new());
    for &u in an.seeds() {
        if let Some(c) = congruent_friend_fraction_diff(&an, u, 1) {
            match c.class {
                ModeracyClass::Hardliner => hard.push(c.diff),
                ModeracyClass::Moderate => moder.push(c.diff),
            }
        }
    }
    stats.cong_hardline = mean(&hard);
    stats.cong_moderate = mean(&moder);
    stats.elapsed = t.elapsed();
    stats
}

fn family(beta: f64) -> Vec<RunStats> {
    (1..=20)
        .map(|seed| {
            let s = family_run(seed, beta);
            eprintln!("  beta={beta} seed={seed}: {:.1} s", s.elapsed.as_secs_f64());
            s
        })
        .collect()
}

fn fmt_r(r: Option<f64>) -> String {
    r.map_or_else(|| "n/a".into(), |v| format!("{v:.3}"))
}

fn criterion_4(runs: &[RunStats]) -> Outcome {
    let hits: Vec<bool> = runs
        .iter()
        .map(|s| matches!((s.r_f, s.r_r), (Some(f), Some(r)) if r > f && f > 0.0))
        .collect();
    let n_hit = hits.iter().filter(|&&h| h).count();
    let slowest = runs.iter().map(|s| s.elapsed.as_secs_f64()).fold(0.0, f64::max);
    let misses: Vec<String> = runs
        .iter()
        .zip(&hits)
        .filter(|(_, h)| !**h)
        .map(|(s, _)| format!("seed {} rf {} rr {}", s.seed, fmt_r(s.r_f), fmt_r(s.r_r)))
        .collect();
    let mf = mean(&runs.iter().filter_map(|s| s.r_f).collect::<Vec<_>>());
    let mr = mean(&runs.iter().filter_map(|s| s.r_r).collect::<Vec<_>>());
    outcome(
        n_hit >= 19 && slowest < 60.0,
        format!(
            "{n_hit}/20 runs with r(m_s,m_e_r) > r(m_s,m_e_f) > 0 (mean {} vs {}), slowest run {slowest:.1} s{}",
            fmt_r(mr),
            fmt_r(mf),
            if misses.is_empty() { String::new() } else { format!("; misses: {}", misses.join(", ")) }
        ),
    )
}

fn trend_holds(s: &RunStats) -> bool {
    let r: Option<Vec<f64>> = s.r_delta.iter().copied().collect();
    match r {
        Some(r) => r[0] < 0.0 && r.windows(2).all(|w| w[1] <= w[0]),
        None => false,
    }
}

fn criterion_5(runs: &[RunStats]) -> Outcome {
    let n_hit = runs.iter().filter(|s| trend_holds(s)).count();
    let mean_by_k: Vec<String> = (0..KS.len())
        .map(|i| {
            let v: Vec<f64> = runs.iter().filter_map(|s| s.r_delta[i]).collect();
            format!("k={}: {}", KS[i], fmt_r(mean(&v)))
        })
        .collect();
    outcome(
        n_hit >= 18,
        format!(
            "{n_hit}/20 runs negative at k=1 and non-increasing; mean r(delta,m_s) {}",
            mean_by_k.join(", ")
        ),
    )
}

fn ols_slope(y: &[f64]) -> f64 {
    let x: Vec<f64> = KS.iter().map(|&k| k as f64).collect();
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

fn criterion_6(runs: &[RunStats]) -> Outcome {
    let total: f64 = runs.iter().map(|s| s.delta_sum).sum();
    let count: usize = runs.iter().map(|s| s.delta_count).sum();
    let mean_delta = total / count as f64;
    let slopes: Vec<f64> = runs
        .iter()
        .filter_map(|s| s.r_delta.iter().copied().collect::<Option<Vec<f64>>>())
        .map(|r| ols_slope(&r))
        .collect();
    let n = slopes.len() as f64;
    let m = slopes.iter().sum::<f64>() / n;
    let sd = (slopes.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let t = m / (sd / n.sqrt());
    let p_lower = StudentsT::new(0.0, 1.0, n - 1.0).expect("t distribution").cdf(t);
    let significant = p_lower < 0.05;
    outcome(
        mean_delta.abs() < 0.02 && !significant && slopes.len() >= 2,
        format!(
            "mean delta {mean_delta:.4} over {count} users; mean slope {m:.5} over {} runs, t={t:.2}, one-sided p={p_lower:.3}",
            slopes.len()
        ),
    )
}

fn criterion_7(runs: &[RunStats]) -> Outcome {
    let n_hit = runs
        .iter()
        .filter(|s| s.entropy_lower == Some(true) && s.entropy_p.is_some_and(|p| p < 0.001))
        .count();
    let worst = runs.iter().filter_map(|s| s.entropy_p).fold(0.0, f64::max);
    outcome(
        n_hit >= 19,
        format!("{n_hit}/20 runs with retweet-friend entropy lower at p<0.001 (largest p {worst:.1e})"),
    )
}

fn criterion_8(runs: &[RunStats]) -> Outcome {
    let n_hit = runs
        .iter()
        .filter(|s| matches!((s.cong_moderate, s.cong_hardline), (Some(m), Some(h)) if m > 0.0 && h > 0.0 && h > m))
        .count();
    let mh = mean(&runs.iter().filter_map(|s| s.cong_hardline).collect::<Vec<_>>());
    let mm = mean(&runs.iter().filter_map(|s| s.cong_moderate).collect::<Vec<_>>());
    outcome(
        n_hit >= 18,
        format!(
            "{n_hit}/20 runs with both class diffs > 0 and hardline > moderate (mean {} vs {})",
            fmt_r(mh),
            fmt_r(mm)
        ),
    )
}

// ---------------------------------------------------------------- 9

fn echoscope(args: &[&str]) -> (bool, String, Duration) {
    let t = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_echoscope"))
        .args(args)
        .env("ECHOSCOPE_LOG", "info")
        .output()
        .expect("binary runs");
    (o.status.success(), String::from_utf8_lossy(&o.stderr).into_owned(), t.elapsed())
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap()))
        .collect()
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().expect("tempdir");
    let data = tmp.path().join("data");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let (ok, err, gen_time) = echoscope(&[
        "synth", "--out", &s(&data),
        "--set", "n_users=10000",
        "--set", "base_follow_prob=0.0315",
        "--set", "activity_rate=4.2",
        "--set", "retweet_rate=6.2",
    ]);
    if !ok {
        return outcome(false, format!("synth failed: {err}"));
    }
    let truth: serde_json::Value =
        serde_json::from_slice(&std::fs::read(data.join("truth.json")).unwrap()).unwrap();
    let edges = truth["counts"]["follow_edges"].as_u64().unwrap_or(0);
    let events = truth["counts"]["originals"].as_u64().unwrap_or(0) + truth["counts"]["retweets"].as_u64().unwrap_or(0);

    let mut runs = Vec::new();
    for threads in ["8", "1"] {
        let out = tmp.path().join(format!("report{threads}"));
        let (ok, err, elapsed) = echoscope(&[
            "report", "--data", &s(&data), "--out", &s(&out),
            "--k-min", "1", "--k-max", "10", "--reps", "1000", "--baseline-users", "100",
            "--threads", threads, "--no-cache",
        ]);
        if !ok {
            return outcome(false, format!("report with {threads} threads failed: {err}"));
        }
        let peak_kb: Option<u64> = err
            .lines()
            .find_map(|l| l.split("peak_rss_kb=").nth(1))
            .and_then(|v| v.trim().parse().ok());
        runs.push((threads, elapsed, peak_kb, dir_bytes(&out)));
    }
    let identical = runs[0].3 == runs[1].3;
    let slowest = runs.iter().map(|r| r.1.as_secs_f64()).fold(0.0, f64::max);
    let peak = runs.iter().filter_map(|r| r.2).max();
    let big_enough = edges >= 1_000_000 && events >= 100_000;
    let mem_ok = peak.is_some_and(|kb| kb < 2 * 1024 * 1024);
    outcome(
        identical && big_enough && slowest < 120.0 && mem_ok,
        format!(
            "{edges} edges, {events} events (generated in {:.1} s); report {:.1} s with 8 threads, {:.1} s with 1; \
             outputs {}; peak memory {}",
            gen_time.as_secs_f64(),
            runs[0].1.as_secs_f64(),
            runs[1].1.as_secs_f64(),
            if identical { "byte-identical" } else { "DIFFER" },
            peak.map_or_else(|| "unavailable".into(), |kb| format!("{} MiB", kb / 1024)),
        ),
    )
}

// ----------------------------------------------------------------

fn main() -> ExitCode {
    let only = selected();
    let want = |c: u32| only.as_ref().is_none_or(|v| v.contains(&c));
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id: u32, name: &'static str, o: Outcome| {
        println!("criterion {id} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };

    if want(1) {
        record(1, "oracle equivalence", criterion_1());
    }
    if want(2) {
        record(2, "fold/normalize algebra", criterion_2());
    }
    if want(3) {
        record(3, "statistical primitives", criterion_3());
    }
    if [4, 5, 7, 8].into_iter().any(want) {
        let runs = family(5.0);
        if want(4) {
            record(4, "echo-chamber ordering", criterion_4(&runs));
        }
        if want(5) {
            record(5, "bias-threshold trend", criterion_5(&runs));
        }
        if want(7) {
            record(7, "entropy", criterion_7(&runs));
        }
        if want(8) {
            record(8, "congruence", criterion_8(&runs));
        }
    }
    if want(6) {
        let runs = family(0.0);
        record(6, "null model", criterion_6(&runs));
    }
    if want(9) {
        record(9, "determinism and performance", criterion_9());
    }

    results.sort_by_key(|r| r.0);
    println!();
    for (id, name, o) in &results {
        println!("{:>2} {:<30} {}", id, name, if o.pass { "PASS" } else { "FAIL" });
    }
    if results.iter().all(|r| r.2.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
