use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, LogNormal, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SynthConfig;
use crate::error::{Error, Result};
use crate::ingest::{label_for, DatasetBundle};
use crate::rng::{substream, Stream};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthCounts {
    pub users: usize,
    pub follow_edges: usize,
    pub originals: usize,
    pub retweets: usize,
    /// Retweets dropped because a timeline had too few originals.
    pub retweets_clamped: usize,
    /// Users given one follow edge to their nearest neighbour because the
    /// random draw left them with none.
    pub forced_follows: usize,
}

/// Planted values behind a synthetic bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    #[serde(rename = "null-model")]
    pub null_model: bool,
    pub config: SynthConfig,
    pub counts: SynthCounts,
    pub ideology: BTreeMap<String, f64>,
    pub activity: BTreeMap<String, f64>,
    pub domain_scores: BTreeMap<String, f64>,
}

/// A generated dataset in its on-disk text forms.
#[derive(Debug, Clone)]
pub struct SynthDataset {
    pub scores_csv: String,
    pub edges_csv: String,
    pub events_jsonl: String,
    pub seeds_csv: String,
    pub truth: GroundTruth,
}

impl SynthDataset {
    pub fn bundle(&self) -> Result<DatasetBundle> {
        DatasetBundle::from_readers(
            (self.scores_csv.as_bytes(), "scores.csv"),
            (self.edges_csv.as_bytes(), "edges.csv"),
            (self.events_jsonl.as_bytes(), "events.jsonl"),
            Some((self.seeds_csv.as_bytes(), "seeds.csv")),
        )
    }

    /// Writes `scores.csv`, `edges.csv`, `events.jsonl`, `seeds.csv` and
    /// `truth.json` into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let io = |path: &Path, source| Error::Write {
            path: path.to_path_buf(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let truth = serde_json::to_string_pretty(&self.truth).expect("truth serialises") + "\n";
        for (name, body) in [
            ("scores.csv", &self.scores_csv),
            ("edges.csv", &self.edges_csv),
            ("events.jsonl", &self.events_jsonl),
            ("seeds.csv", &self.seeds_csv),
            ("truth.json", &truth),
        ] {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}

pub fn generate(config: &SynthConfig) -> Result<(DatasetBundle, GroundTruth)> {
    let ds = synthesize(config)?;
    Ok((ds.bundle()?, ds.truth))
}

struct Original {
    ts: i64,
    url: Option<String>,
}

#[derive(Serialize)]
struct EventLine<'a> {
    id: String,
    author: &'a str,
    ts: i64,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    orig_author: Option<&'a str>,
    urls: Vec<&'a str>,
}

const SHORTENER: &str = "bit.ly";

fn outlet(d: usize) -> String {
    format!("outlet{d:03}.example")
}

fn poisson<R: Rng>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as usize
}

pub fn synthesize(config: &SynthConfig) -> Result<SynthDataset> {
    config.validate()?;
    config.check_feasible()?;
    let n = config.n_users;
    let width = (n - 1).to_string().len();
    let names: Vec<String> = (0..n).map(|i| format!("u{i:0width$}")).collect();

    let mut rng = substream(config.seed, Stream::Ideology, 0);
    let ideology: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();

    // outlet d has bias level d % 5
    let level_of = |d: usize| d % 5;
    let by_level: Vec<Vec<usize>> = (0..5)
        .map(|l| (0..config.n_domains).filter(|&d| level_of(d) == l).collect())
        .collect();

    let sigma = config.activity_sigma;
    let lognormal = LogNormal::new(-sigma * sigma / 2.0, sigma).map_err(|e| Error::Config(e.to_string()))?;
    let noise = Normal::new(0.0, config.domain_noise).map_err(|e| Error::Config(e.to_string()))?;
    let per_user: Vec<(f64, Vec<Original>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(config.seed, Stream::Originals, i as u64);
            let activity = lognormal.sample(&mut rng);
            let count = poisson(config.activity_rate * activity, &mut rng);
            let mut tweets: Vec<Original> = (0..count)
                .map(|j| {
                    let ts = rng.random_range(0..config.duration);
                    let url = if rng.random::<f64>() < config.no_url_prob {
                        None
                    } else {
                        let r: f64 = rng.random();
                        Some(if r < config.shortener_url_prob {
                            format!("https://{SHORTENER}/{}x{j}", names[i])
                        } else if r < config.shortener_url_prob + config.unscored_url_prob {
                            format!("https://blog{}.example/post/{j}", rng.random_range(0..config.n_domains))
                        } else {
                            let target = (ideology[i] + noise.sample(&mut rng)).clamp(0.0, 1.0);
                            let level = (target * 4.0).round() as usize;
                            let pool = &by_level[level];
                            let d = pool[rng.random_range(0..pool.len())];
                            format!("https://www.{}/story/{}-{j}", outlet(d), names[i])
                        })
                    };
                    Original { ts, url }
                })
                .collect();
            tweets.sort_by_key(|t| t.ts);
            (activity, tweets)
        })
        .collect();

    let lambda = config.follow_homophily;
    let follows: Vec<(Vec<usize>, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(config.seed, Stream::Follow, i as u64);
            let xi = ideology[i];
            let mut friends: Vec<usize> = (0..n)
                .filter(|&j| {
                    let p = config.base_follow_prob * (-(xi - ideology[j]).abs() / lambda).exp();
                    // the draw is consumed for every j so streams do not shift
                    let u: f64 = rng.random();
                    j != i && u < p
                })
                .collect();
            let forced = friends.is_empty();
            if forced {
                let nearest = (0..n)
                    .filter(|&j| j != i)
                    .min_by(|&a, &b| {
                        (xi - ideology[a]).abs().total_cmp(&(xi - ideology[b]).abs()).then(a.cmp(&b))
                    })
                    .expect("n_users >= 2");
                friends.push(nearest);
            }
            (friends, forced)
        })
        .collect();

    let rs = config.retweet_sigma;
    let retweet_volume = LogNormal::new(-rs * rs / 2.0, rs).map_err(|e| Error::Config(e.to_string()))?;
    let beta = config.attention_bias;
    // (original author, original index, timestamp) per retweet
    type Picks = Vec<(usize, usize, i64)>;
    // per user: picks plus clamped count
    let retweets: Vec<(Picks, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(config.seed, Stream::Retweets, i as u64);
            let wanted = poisson(config.retweet_rate * retweet_volume.sample(&mut rng), &mut rng);
            let mut keyed: Vec<(f64, usize, usize)> = Vec::new();
            for &f in &follows[i].0 {
                let stretch = (beta * (ideology[i] - ideology[f]).abs()).exp();
                for j in 0..per_user[f].1.len() {
                    // Efraimidis-Spirakis key ln(U) / w with w = exp(-beta |dx|)
                    let u: f64 = 1.0 - rng.random::<f64>();
                    keyed.push((u.ln() * stretch, f, j));
                }
            }
            let take = wanted.min(keyed.len());
            if take > 0 && take < keyed.len() {
                keyed.select_nth_unstable_by(take - 1, |a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
            }
            keyed.truncate(take);
            keyed.sort_by_key(|a| (a.1, a.2));
            let picks = keyed
                .into_iter()
                .map(|(_, f, j)| {
                    let t0 = per_user[f].1[j].ts;
                    (f, j, rng.random_range(t0..=config.duration))
                })
                .collect();
            (picks, wanted - take)
        })
        .collect();

    let mut counts = SynthCounts {
        users: n,
        ..SynthCounts::default()
    };

    let mut scores_csv = String::from("domain,score\n");
    let mut domain_scores = BTreeMap::new();
    for d in 0..config.n_domains {
        let score = level_of(d) as f64 * 0.25;
        scores_csv += &format!("{},{}\n", outlet(d), label_for(score).expect("five levels"));
        domain_scores.insert(outlet(d), score);
    }

    let mut edges_csv = String::from("follower,friend\n");
    for (i, (friends, forced)) in follows.iter().enumerate() {
        counts.follow_edges += friends.len();
        counts.forced_follows += *forced as usize;
        for &f in friends {
            edges_csv += &format!("{},{}\n", names[i], names[f]);
        }
    }

    let mut lines: Vec<(i64, String, EventLine<'_>)> = Vec::new();
    for (i, (_, tweets)) in per_user.iter().enumerate() {
        for (j, t) in tweets.iter().enumerate() {
            let id = format!("{}-o{j}", names[i]);
            lines.push((
                t.ts,
                id.clone(),
                EventLine {
                    id,
                    author: &names[i],
                    ts: t.ts,
                    kind: "original",
                    orig_author: None,
                    urls: t.url.as_deref().into_iter().collect(),
                },
            ));
        }
        counts.originals += tweets.len();
    }
    for (i, (picks, clamped)) in retweets.iter().enumerate() {
        counts.retweets += picks.len();
        counts.retweets_clamped += clamped;
        for (r, &(f, j, ts)) in picks.iter().enumerate() {
            let id = format!("{}-r{r}", names[i]);
            lines.push((
                ts,
                id.clone(),
                EventLine {
                    id,
                    author: &names[i],
                    ts,
                    kind: "retweet",
                    orig_author: Some(&names[f]),
                    urls: per_user[f].1[j].url.as_deref().into_iter().collect(),
                },
            ));
        }
    }
    if counts.retweets_clamped > 0 {
        log::warn!("{} retweets dropped: timelines too short", counts.retweets_clamped);
    }
    lines.par_sort_unstable_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut events_jsonl = String::with_capacity(lines.len() * 120);
    for (_, _, line) in &lines {
        events_jsonl += &serde_json::to_string(line).expect("event serialises");
        events_jsonl.push('\n');
    }

    let seeds_csv = std::iter::once("user").chain(names.iter().map(String::as_str)).collect::<Vec<_>>().join("\n") + "\n";

    let truth = GroundTruth {
        null_model: beta == 0.0,
        config: config.clone(),
        counts,
        ideology: names.iter().cloned().zip(ideology.iter().copied()).collect(),
        activity: names.iter().cloned().zip(per_user.iter().map(|p| p.0)).collect(),
        domain_scores,
    };
    Ok(SynthDataset {
        scores_csv,
        edges_csv,
        events_jsonl,
        seeds_csv,
        truth,
    })
}
