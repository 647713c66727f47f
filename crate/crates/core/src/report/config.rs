use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::OverlapMode;
use crate::ingest::{hex_prefix, TimeWindow};

/// Which overlap definitions a report emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapSelection {
    Account,
    Content,
    Both,
}

impl OverlapSelection {
    pub fn modes(self) -> &'static [OverlapMode] {
        match self {
            OverlapSelection::Account => &[OverlapMode::Account],
            OverlapSelection::Content => &[OverlapMode::Content],
            OverlapSelection::Both => &[OverlapMode::Account, OverlapMode::Content],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OverlapSelection::Account => "account",
            OverlapSelection::Content => "content",
            OverlapSelection::Both => "both",
        }
    }
}

impl std::str::FromStr for OverlapSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "account" => Ok(OverlapSelection::Account),
            "content" => Ok(OverlapSelection::Content),
            "both" => Ok(OverlapSelection::Both),
            other => Err(Error::Config(format!("overlap mode {other:?} is not account, content or both"))),
        }
    }
}

/// Analysis parameters of a `report` run.
///
/// Input locations, the output directory and the worker count are not
/// part of it: they cannot change a single output byte. The inputs enter
/// the provenance hash through their content fingerprint instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub entropy_bins: usize,
    pub reps: usize,
    /// Cap on the users that get a random baseline; `None` means all.
    pub baseline_users: Option<usize>,
    pub seed: u64,
    #[serde(with = "window_text")]
    pub window: TimeWindow,
    pub overlap_mode: OverlapSelection,
    pub unique_domains: bool,
    pub heatmap_bins: usize,
    pub score_sample_size: usize,
    pub score_bins: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k_min: 1,
            k_max: 10,
            entropy_bins: 5,
            reps: 1000,
            baseline_users: None,
            seed: 1,
            window: TimeWindow::ALL,
            overlap_mode: OverlapSelection::Both,
            unique_domains: false,
            heatmap_bins: 25,
            score_sample_size: 10_000,
            score_bins: 20,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn flag(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        v => Err(Error::Config(format!("{key}: {v:?} is not a boolean"))),
    }
}

impl RunConfig {
    /// The thresholds of the k sweep. Single-threshold analyses use `k_min`.
    pub fn ks(&self) -> std::ops::RangeInclusive<u32> {
        self.k_min..=self.k_max
    }

    pub fn primary_k(&self) -> u32 {
        self.k_min
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim().replace('-', "_").as_str() {
            "k_min" => self.k_min = num(key, value)?,
            "k_max" => self.k_max = num(key, value)?,
            "entropy_bins" => self.entropy_bins = num(key, value)?,
            "reps" | "bootstrap_reps" => self.reps = num(key, value)?,
            "baseline_users" => {
                self.baseline_users = match value.trim() {
                    "" | "all" => None,
                    v => Some(num(key, v)?),
                }
            }
            "seed" => self.seed = num(key, value)?,
            "window" => self.window = TimeWindow::parse(value)?,
            "overlap_mode" => self.overlap_mode = value.parse()?,
            "unique_domains" => self.unique_domains = flag(key, value)?,
            "heatmap_bins" => self.heatmap_bins = num(key, value)?,
            "score_sample_size" => self.score_sample_size = num(key, value)?,
            "score_bins" => self.score_bins = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.k_min == 0 {
            return bad("k_min must be at least 1".into());
        }
        if self.k_max < self.k_min {
            return bad(format!("k range {}..{} is empty", self.k_min, self.k_max));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.entropy_bins < 2 {
            return bad("entropy_bins must be at least 2".into());
        }
        if self.heatmap_bins == 0 || self.score_bins == 0 {
            return bad("histogram bin counts must be positive".into());
        }
        if self.baseline_users == Some(0) {
            return bad("baseline_users must be positive".into());
        }
        Ok(())
    }

    /// Canonical `key=value` lines, one per field, in a fixed order.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let baseline = self.baseline_users.map_or_else(|| "all".to_string(), |n| n.to_string());
        let _ = writeln!(s, "k_min={}", self.k_min);
        let _ = writeln!(s, "k_max={}", self.k_max);
        let _ = writeln!(s, "entropy_bins={}", self.entropy_bins);
        let _ = writeln!(s, "reps={}", self.reps);
        let _ = writeln!(s, "baseline_users={baseline}");
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "window={}", self.window);
        let _ = writeln!(s, "overlap_mode={}", self.overlap_mode.as_str());
        let _ = writeln!(s, "unique_domains={}", self.unique_domains);
        let _ = writeln!(s, "heatmap_bins={}", self.heatmap_bins);
        let _ = writeln!(s, "score_sample_size={}", self.score_sample_size);
        let _ = writeln!(s, "score_bins={}", self.score_bins);
        s
    }

    /// Provenance hash over the canonical config and the input fingerprint.
    pub fn hash(&self, input_fingerprint: &[u8; 32]) -> String {
        let mut h = Sha256::new();
        h.update(self.to_key_values().as_bytes());
        h.update(input_fingerprint);
        hex_prefix(&h.finalize(), 16)
    }
}

/// Windows travel as their `FROM..TO` text.
mod window_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::ingest::TimeWindow;

    pub fn serialize<S: Serializer>(w: &TimeWindow, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(w)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<TimeWindow, D::Error> {
        let text = String::deserialize(d)?;
        TimeWindow::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
/// Returns the pairs in file order so that callers can route keys that
/// belong elsewhere (input paths, say) before applying the rest.
pub fn parse_key_values(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(source, i as u64 + 1, "expected key=value"))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_key_values(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Read {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_key_values(&text, &path.display().to_string())
}
