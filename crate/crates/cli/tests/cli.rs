use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn echoscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_echoscope"))
        .args(args)
        .env("ECHOSCOPE_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL: &[&str] = &[
    "--set", "n_users=40",
    "--set", "n_domains=10",
    "--set", "base_follow_prob=0.3",
    "--set", "activity_rate=6",
    "--set", "retweet_rate=6",
];

fn synth_small(dir: &Path, seed: &str) {
    let mut args = vec!["synth", "--out", s(dir), "--seed", seed];
    args.extend_from_slice(SMALL);
    let o = echoscope(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap()))
        .collect()
}

#[test]
fn synth_is_reproducible_and_flags_null_model() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    synth_small(&a, "1");
    synth_small(&b, "1");
    assert_eq!(dir_bytes(&a), dir_bytes(&b));
    for f in ["scores.csv", "edges.csv", "events.jsonl", "seeds.csv", "truth.json"] {
        assert!(a.join(f).exists(), "{f}");
    }

    let cfg = t.path().join("null.conf");
    fs::write(&cfg, "# uniform attention\nn_users=30\nbase_follow_prob=0.3\nbeta=0\n").unwrap();
    let n = t.path().join("n");
    let o = echoscope(&["synth", "--config", s(&cfg), "--out", s(&n)]);
    assert_eq!(code(&o), 0);
    let truth: serde_json::Value = serde_json::from_slice(&fs::read(n.join("truth.json")).unwrap()).unwrap();
    assert_eq!(truth["null-model"], true);
}

#[test]
fn synth_rejects_infeasible_config() {
    let t = tempfile::tempdir().unwrap();
    let o = echoscope(&[
        "synth", "--out", s(&t.path().join("x")),
        "--set", "n_users=20", "--set", "base_follow_prob=0.01", "--set", "retweet_rate=500",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn validate_exit_codes() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("d");
    synth_small(&d, "2");
    let o = echoscope(&["validate", "--data", s(&d)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["errors"], 0);

    let o = echoscope(&[
        "validate",
        "--scores", s(&t.path().join("absent.csv")),
        "--edges", s(&d.join("edges.csv")),
        "--events", s(&d.join("events.jsonl")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.csv"));
}

#[test]
fn dangling_retweet_authors_are_warnings() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path();
    fs::write(d.join("scores.csv"), "domain,score\na.com,0\nb.com,1\n").unwrap();
    fs::write(d.join("edges.csv"), "follower,friend\nu,v\n").unwrap();
    fs::write(
        d.join("events.jsonl"),
        concat!(
            r#"{"id":"1","author":"v","ts":1,"kind":"original","urls":["https://a.com/x"]}"#, "\n",
            r#"{"id":"2","author":"u","ts":2,"kind":"retweet","orig_author":"ghost","urls":["https://b.com/y"]}"#, "\n",
        ),
    )
    .unwrap();
    let out = d.join("v.json");
    let o = echoscope(&["validate", "--data", s(d), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    assert!(v["warnings"].as_u64().unwrap() > 0);
    assert_eq!(v["dangling_retweets"], 1);
}

#[test]
fn malformed_record_reports_line() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path();
    fs::write(d.join("scores.csv"), "domain,score\na.com,0\nb.com,not-a-score\n").unwrap();
    fs::write(d.join("edges.csv"), "follower,friend\nu,v\n").unwrap();
    fs::write(d.join("events.jsonl"), "").unwrap();
    let o = echoscope(&["validate", "--data", s(d)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));
}

#[test]
fn report_is_deterministic_across_runs_and_threads() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("d");
    synth_small(&d, "3");
    let run = |out: &str, threads: &str, extra: &[&str]| {
        let out = t.path().join(out);
        let mut args = vec!["report", "--data", s(&d), "--out", s(&out), "--reps", "30", "--threads", threads];
        args.extend_from_slice(extra);
        let o = echoscope(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        dir_bytes(&out)
    };
    let one = run("r1", "1", &["--no-cache"]);
    let eight = run("r8", "8", &["--no-cache"]);
    let cached = run("rc", "2", &[]);
    let warm = run("rc", "2", &[]);
    assert_eq!(one, eight);
    assert!(!one.contains_key("graphs.cache"));
    assert!(cached.contains_key("graphs.cache"));
    assert_eq!(cached, warm);
    let mut without: BTreeMap<_, _> = cached.clone();
    without.remove("graphs.cache");
    assert_eq!(one, without);

    let deltas = one.keys().filter(|k| k.starts_with("delta_vs_ms_k")).count();
    assert_eq!(deltas, 10);
    for f in [
        "report.json",
        "overlap_curve.csv",
        "echo_heatmap_f.csv",
        "echo_heatmap_r.csv",
        "class_fractions.csv",
        "entropy.csv",
        "activity.csv",
        "congruence.csv",
        "metrics.csv",
    ] {
        assert!(one.contains_key(f), "{f}");
        if f.ends_with(".csv") {
            assert!(one[f].contains(&b'\n'), "{f} lacks a header row");
        }
    }
}

#[test]
fn config_file_with_flag_override() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("d");
    synth_small(&d, "4");
    let cfg = t.path().join("run.conf");
    fs::write(
        &cfg,
        format!("data={}\nk_max=3\nreps=10\nseed=5\nno_cache=true\n", d.display()),
    )
    .unwrap();
    let out = t.path().join("r");
    let o = echoscope(&["report", "--config", s(&cfg), "--out", s(&out), "--seed", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["meta"]["config"]["k_max"], 3);
    assert_eq!(v["meta"]["config"]["seed"], 6);
    assert_eq!(v["meta"]["seed"], 6);
    assert!(!out.join("graphs.cache").exists());
    assert_eq!(dir_bytes(&out).keys().filter(|k| k.starts_with("delta_vs_ms_k")).count(), 3);

    fs::write(&cfg, "k_min=4\nk_max=2\n").unwrap();
    let o = echoscope(&["report", "--config", s(&cfg), "--data", s(&d), "--out", s(&out)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn empty_window_gives_marked_report() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("d");
    synth_small(&d, "5");
    let out = t.path().join("r");
    let o = echoscope(&["report", "--data", s(&d), "--out", s(&out), "--window", "-100..-1", "--reps", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["dataset"]["events_in_window"], 0);
    let markers = v["markers"].as_array().unwrap();
    assert!(markers.iter().any(|m| m.as_str().unwrap().contains("window contains no events")));
    assert_eq!(v["meta"]["config"]["window"], "-100..-1");
}

#[test]
fn oracle_check_pass_guard_and_empty() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("d");
    synth_small(&d, "6");
    let o = echoscope(&["oracle-check", "--data", s(&d)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["compared"].as_u64().unwrap() > 0);
    assert!(v["mismatches"].as_array().unwrap().is_empty());

    let o = echoscope(&["oracle-check", "--data", s(&d), "--max-events", "10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard rail"));

    let e = t.path().join("empty");
    fs::create_dir(&e).unwrap();
    fs::write(e.join("scores.csv"), "domain,score\na.com,0.5\n").unwrap();
    fs::write(e.join("edges.csv"), "follower,friend\ns,t\n").unwrap();
    fs::write(e.join("events.jsonl"), "").unwrap();
    let o = echoscope(&["oracle-check", "--data", s(&e)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["compared"], 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&echoscope(&["report", "--bogus"])), 2);
    assert_eq!(code(&echoscope(&["report", "--data", "/nonexistent"])), 2);
}
