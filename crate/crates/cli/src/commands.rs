use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use echoscope::ingest::{validate_dataset, DatasetBundle, InputPaths, TimeWindow};
use echoscope::moderacy::ModeracyOptions;
use echoscope::report::{build_report, load_graphs, read_key_values, RunConfig};
use echoscope::synth::{compare_snapshots, engine_snapshot, oracle_metrics, synthesize, SynthConfig};
use echoscope::{Error, Result};

use crate::{InputArgs, OracleArgs, ReportArgs, SynthArgs, ValidateArgs};

const ORACLE_TOLERANCE: f64 = 1e-12;

impl InputArgs {
    fn resolve(&self) -> Result<InputPaths> {
        let base = self.data.as_deref().map(InputPaths::in_dir);
        let pick = |flag: &Option<PathBuf>, from_dir: Option<&PathBuf>, name: &str| {
            flag.clone()
                .or_else(|| from_dir.cloned())
                .ok_or_else(|| Error::Config(format!("missing --{name} (or --data DIR)")))
        };
        Ok(InputPaths {
            scores: pick(&self.scores, base.as_ref().map(|b| &b.scores), "scores")?,
            edges: pick(&self.edges, base.as_ref().map(|b| &b.edges), "edges")?,
            events: pick(&self.events, base.as_ref().map(|b| &b.events), "events")?,
            seeds: self.seeds.clone().or_else(|| base.and_then(|b| b.seeds)),
        })
    }
}

fn load(inputs: &InputArgs) -> Result<DatasetBundle> {
    let paths = inputs.resolve()?;
    let t = Instant::now();
    let bundle = DatasetBundle::load(&paths)?;
    log::info!(
        "loaded {} users, {} edges, {} events in {:.2?}",
        bundle.users.len(),
        bundle.edges.len(),
        bundle.log.len(),
        t.elapsed()
    );
    Ok(bundle)
}

fn emit_json(value: &impl serde::Serialize, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Invalid(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Write {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let bundle = load(&args.inputs)?;
    let report = validate_dataset(&bundle);
    emit_json(&report, args.out.as_deref())?;
    if report.warnings > 0 {
        log::warn!("{} warning(s)", report.warnings);
    }
    if report.is_ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} referential error(s)", report.errors);
        Ok(ExitCode::from(2))
    }
}

/// High-water resident set size from procfs; `None` off Linux.
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn flag_or_config(flag: bool, cfg: Option<&str>) -> Result<bool> {
    match cfg {
        _ if flag => Ok(true),
        None => Ok(false),
        Some(v) => match v {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            v => Err(Error::Config(format!("{v:?} is not a boolean"))),
        },
    }
}

pub fn report(mut args: ReportArgs) -> Result<ExitCode> {
    let mut cfg = RunConfig::default();
    let mut no_cache_cfg = None;
    if let Some(path) = &args.config {
        // Input locations and run plumbing may live in the file too; the
        // command line still wins.
        for (k, v) in read_key_values(path)? {
            let pv = || Some(PathBuf::from(&v));
            match k.as_str() {
                "data" => args.inputs.data = args.inputs.data.take().or_else(pv),
                "scores" => args.inputs.scores = args.inputs.scores.take().or_else(pv),
                "edges" => args.inputs.edges = args.inputs.edges.take().or_else(pv),
                "events" => args.inputs.events = args.inputs.events.take().or_else(pv),
                "seeds" => args.inputs.seeds = args.inputs.seeds.take().or_else(pv),
                "out" => args.out = args.out.take().or_else(pv),
                "cache" => args.cache = args.cache.take().or_else(pv),
                "threads" => {
                    let n = v.parse().map_err(|_| Error::Config(format!("threads: {v:?}")))?;
                    args.threads = args.threads.or(Some(n));
                }
                "no_cache" | "no-cache" => no_cache_cfg = Some(v.clone()),
                _ => cfg.set(&k, &v)?,
            }
        }
    }
    let set = |cfg: &mut RunConfig, key: &str, v: Option<String>| v.map_or(Ok(()), |v| cfg.set(key, &v));
    set(&mut cfg, "k_min", args.k_min.map(|v| v.to_string()))?;
    set(&mut cfg, "k_max", args.k_max.map(|v| v.to_string()))?;
    set(&mut cfg, "entropy_bins", args.entropy_bins.map(|v| v.to_string()))?;
    set(&mut cfg, "reps", args.reps.map(|v| v.to_string()))?;
    set(&mut cfg, "baseline_users", args.baseline_users.map(|v| v.to_string()))?;
    set(&mut cfg, "seed", args.seed.map(|v| v.to_string()))?;
    set(&mut cfg, "window", args.window.clone())?;
    set(&mut cfg, "overlap_mode", args.overlap_mode.clone())?;
    set(&mut cfg, "heatmap_bins", args.heatmap_bins.map(|v| v.to_string()))?;
    if args.unique_domains {
        cfg.unique_domains = true;
    }
    cfg.validate()?;
    let no_cache = flag_or_config(args.no_cache, no_cache_cfg.as_deref())?;
    let out = args.out.clone().ok_or_else(|| Error::Config("missing --out".into()))?;
    set_threads(args.threads)?;

    let bundle = load(&args.inputs)?;
    std::fs::create_dir_all(&out).map_err(|e| Error::Write {
        path: out.clone(),
        source: e,
    })?;
    let cache = (!no_cache).then(|| args.cache.clone().unwrap_or_else(|| out.join("graphs.cache")));
    let t = Instant::now();
    let (fg, rg) = load_graphs(&bundle, cfg.window, cache.as_deref())?;
    log::info!("graphs ready in {:.2?}", t.elapsed());
    let t = Instant::now();
    let report = build_report(&bundle, &fg, &rg, &cfg).map_err(|e| e.context("report"))?;
    log::info!("analyses done in {:.2?}", t.elapsed());
    report.write(&out)?;
    let markers = &report.summary.markers;
    if !markers.is_empty() {
        log::warn!("{} empty-pool marker(s), listed in report.json", markers.len());
    }
    for m in markers {
        log::info!("{m}");
    }
    eprintln!(
        "wrote report.json and {} tables to {} (config {})",
        report.tables.len(),
        out.display(),
        report.summary.meta.config_hash
    );
    Ok(ExitCode::SUCCESS)
}

pub fn synth(args: SynthArgs) -> Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(p) => SynthConfig::load(p)?,
        None => SynthConfig::default(),
    };
    for kv in &args.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set {kv:?} is not KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let t = Instant::now();
    let ds = synthesize(&cfg)?;
    ds.write(&args.out)?;
    let c = &ds.truth.counts;
    eprintln!(
        "wrote {} users, {} follow edges, {} originals, {} retweets to {} in {:.2?}",
        c.users,
        c.follow_edges,
        c.originals,
        c.retweets,
        args.out.display(),
        t.elapsed()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn oracle_check(args: OracleArgs) -> Result<ExitCode> {
    if args.k_min == 0 || args.k_max < args.k_min {
        return Err(Error::Config(format!("k range {}..{} is invalid", args.k_min, args.k_max)));
    }
    let bundle = load(&args.inputs)?;
    let window = match &args.window {
        Some(w) => TimeWindow::parse(w)?,
        None => TimeWindow::ALL,
    };
    let options = ModeracyOptions {
        window,
        unique_domains: args.unique_domains,
    };
    let ks: Vec<u32> = (args.k_min..=args.k_max).collect();
    // The guard rail is checked before any engine work.
    let oracle = oracle_metrics(&bundle, options, &ks, args.entropy_bins, args.max_events)?;
    let engine = engine_snapshot(&bundle, options, &ks, args.entropy_bins)?;
    let report = compare_snapshots(&engine, &oracle, ORACLE_TOLERANCE);
    emit_json(&report, args.out.as_deref())?;
    if report.passed() {
        eprintln!("oracle check passed: {} values compared", report.compared);
        Ok(ExitCode::SUCCESS)
    } else {
        for m in report.mismatches.iter().take(10) {
            eprintln!(
                "mismatch k={} user={} metric={}: engine {:?} oracle {:?}",
                m.key.k, m.key.user, m.key.metric, m.engine, m.oracle
            );
        }
        eprintln!("oracle check failed: {} mismatches", report.mismatches.len());
        Ok(ExitCode::from(1))
    }
}
