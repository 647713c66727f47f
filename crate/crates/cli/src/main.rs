//! `echoscope` command-line tool.
//!
//! Exit codes: 0 success, 1 internal error (including a failed oracle
//! check), 2 input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "echoscope", version, about = "Echo-chamber analytics over follower and retweet graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the inputs and report referential problems.
    Validate(ValidateArgs),
    /// Run every analysis and write report.json plus plot-ready CSVs.
    Report(ReportArgs),
    /// Generate a synthetic dataset from a key=value config.
    Synth(SynthArgs),
    /// Compare engine metrics with the brute-force oracle on a small bundle.
    OracleCheck(OracleArgs),
}

/// Input files. `--data DIR` fills in the conventional names.
#[derive(Debug, Clone, Default, Args)]
struct InputArgs {
    /// Directory holding scores.csv, edges.csv, events.jsonl and optionally seeds.csv.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    scores: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    events: Option<PathBuf>,
    /// Seed list (`user` column); defaults to every follower in the edge list.
    #[arg(long)]
    seeds: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    inputs: InputArgs,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    inputs: InputArgs,
    /// key=value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    k_min: Option<u32>,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    entropy_bins: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    /// Cap on the users given a random baseline.
    #[arg(long)]
    baseline_users: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Inclusive unix-seconds range FROM..TO; either side may be empty.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// account, content or both.
    #[arg(long)]
    overlap_mode: Option<String>,
    #[arg(long)]
    unique_domains: bool,
    #[arg(long)]
    heatmap_bins: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Neither read nor write the graph cache.
    #[arg(long)]
    no_cache: bool,
    /// Graph cache location; defaults to graphs.cache in the output directory.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// key=value generator config; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra key=value overrides, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    inputs: InputArgs,
    #[arg(long, default_value_t = echoscope::synth::DEFAULT_MAX_EVENTS)]
    max_events: usize,
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    #[arg(long, default_value_t = 5)]
    entropy_bins: usize,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    unique_domains: bool,
    /// Write the JSON diff report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ECHOSCOPE_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Report(a) => commands::report(a),
        Command::Synth(a) => commands::synth(a),
        Command::OracleCheck(a) => commands::oracle_check(a),
    };
    if let Some(kb) = commands::peak_rss_kb() {
        log::info!("peak_rss_kb={kb}");
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            // Display already carries the whole cause chain.
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
