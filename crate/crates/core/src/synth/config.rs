use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the planted-homophily generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_users: usize,
    /// Scored outlets, spread evenly over the five bias levels.
    pub n_domains: usize,
    /// Length scale of ideology distance in the follow probability;
    /// `inf` disables homophily.
    pub follow_homophily: f64,
    pub base_follow_prob: f64,
    /// Selective-attention strength; 0 is uniform attention.
    pub attention_bias: f64,
    /// Mean original tweets per user.
    pub activity_rate: f64,
    /// Mean retweets per user.
    pub retweet_rate: f64,
    /// Simulated span in seconds.
    pub duration: i64,
    pub seed: u64,
    /// Sigma of the per-user log-normal activity multiplier.
    pub activity_sigma: f64,
    /// Sigma of the per-user log-normal multiplier on retweet volume.
    pub retweet_sigma: f64,
    /// Sigma of the Gaussian jitter between an author's ideology and the
    /// outlets they link.
    pub domain_noise: f64,
    pub no_url_prob: f64,
    pub unscored_url_prob: f64,
    pub shortener_url_prob: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_users: 2000,
            n_domains: 100,
            follow_homophily: 0.2,
            base_follow_prob: 0.035,
            attention_bias: 5.0,
            activity_rate: 40.0,
            retweet_rate: 60.0,
            duration: 120 * 86_400,
            seed: 1,
            activity_sigma: 0.1,
            retweet_sigma: 1.0,
            domain_noise: 0.1,
            no_url_prob: 0.1,
            unscored_url_prob: 0.1,
            shortener_url_prob: 0.02,
        }
    }
}

impl SynthConfig {
    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
        }
        let v = value.trim();
        match key.trim() {
            "n_users" => self.n_users = num(key, v)?,
            "n_domains" => self.n_domains = num(key, v)?,
            "follow_homophily" | "lambda" => self.follow_homophily = num(key, v)?,
            "base_follow_prob" => self.base_follow_prob = num(key, v)?,
            "attention_bias" | "beta" => self.attention_bias = num(key, v)?,
            "activity_rate" => self.activity_rate = num(key, v)?,
            "retweet_rate" => self.retweet_rate = num(key, v)?,
            "duration" => self.duration = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "activity_sigma" => self.activity_sigma = num(key, v)?,
            "retweet_sigma" => self.retweet_sigma = num(key, v)?,
            "domain_noise" => self.domain_noise = num(key, v)?,
            "no_url_prob" => self.no_url_prob = num(key, v)?,
            "unscored_url_prob" => self.unscored_url_prob = num(key, v)?,
            "shortener_url_prob" => self.shortener_url_prob = num(key, v)?,
            other => return Err(Error::Config(format!("unknown synth key {other:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines over the defaults. Blank lines and `#`
    /// comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SynthConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
            cfg.set(k, v).map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_key_values(&self) -> String {
        format!(
            "n_users = {}\nn_domains = {}\nfollow_homophily = {}\nbase_follow_prob = {}\nattention_bias = {}\n\
             activity_rate = {}\nretweet_rate = {}\nduration = {}\nseed = {}\nactivity_sigma = {}\n\
             retweet_sigma = {}\ndomain_noise = {}\nno_url_prob = {}\nunscored_url_prob = {}\nshortener_url_prob = {}\n",
            self.n_users,
            self.n_domains,
            self.follow_homophily,
            self.base_follow_prob,
            self.attention_bias,
            self.activity_rate,
            self.retweet_rate,
            self.duration,
            self.seed,
            self.activity_sigma,
            self.retweet_sigma,
            self.domain_noise,
            self.no_url_prob,
            self.unscored_url_prob,
            self.shortener_url_prob,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_users < 2 {
            return bad(format!("n_users must be at least 2, got {}", self.n_users));
        }
        if self.n_domains < 5 {
            return bad(format!("n_domains must be at least 5, got {}", self.n_domains));
        }
        if self.follow_homophily.is_nan() || self.follow_homophily <= 0.0 {
            return bad(format!("follow_homophily must be > 0, got {}", self.follow_homophily));
        }
        if !(self.attention_bias >= 0.0 && self.attention_bias.is_finite()) {
            return bad(format!("attention_bias must be finite and >= 0, got {}", self.attention_bias));
        }
        for (name, p) in [
            ("base_follow_prob", self.base_follow_prob),
            ("no_url_prob", self.no_url_prob),
            ("unscored_url_prob", self.unscored_url_prob),
            ("shortener_url_prob", self.shortener_url_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must be in [0, 1], got {p}"));
            }
        }
        if self.unscored_url_prob + self.shortener_url_prob > 1.0 {
            return bad("unscored_url_prob + shortener_url_prob exceeds 1".into());
        }
        for (name, x) in [
            ("activity_rate", self.activity_rate),
            ("retweet_rate", self.retweet_rate),
            ("activity_sigma", self.activity_sigma),
            ("retweet_sigma", self.retweet_sigma),
            ("domain_noise", self.domain_noise),
        ] {
            if !(x >= 0.0 && x.is_finite()) {
                return bad(format!("{name} must be finite and >= 0, got {x}"));
            }
        }
        if self.duration < 1 {
            return bad(format!("duration must be at least 1, got {}", self.duration));
        }
        Ok(())
    }

    /// Expected number of accounts a user follows.
    pub fn expected_out_degree(&self) -> f64 {
        let l = self.follow_homophily;
        // E[exp(-|x - y| / l)] for independent uniform x, y
        let kernel = if l.is_infinite() {
            1.0
        } else {
            2.0 * l - 2.0 * l * l * (1.0 - (-1.0 / l).exp())
        };
        (self.n_users - 1) as f64 * self.base_follow_prob * kernel
    }

    /// Fails when the expected retweet volume exceeds the originals an
    /// average timeline offers.
    pub fn check_feasible(&self) -> Result<()> {
        let available = self.expected_out_degree() * self.activity_rate;
        if self.retweet_rate > available {
            return Err(Error::Infeasible(format!(
                "retweet_rate {} exceeds the {available:.2} friend originals an average user sees",
                self.retweet_rate
            )));
        }
        Ok(())
    }
}
