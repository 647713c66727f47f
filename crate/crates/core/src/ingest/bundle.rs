use std::io::Read;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ids::{UserId, UserTable};
use crate::ingest::domain::PldExtractor;
use crate::ingest::edges::{parse_follow_edges_reader, FollowEdgeList};
use crate::ingest::events::{parse_events_reader, EventLog};
use crate::ingest::open;
use crate::ingest::scores::{parse_domain_scores_reader, DomainScoreTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputPaths {
    pub scores: PathBuf,
    pub edges: PathBuf,
    pub events: PathBuf,
    /// One `user` column. Without it, every follower in the edge list is a seed.
    pub seeds: Option<PathBuf>,
}

impl InputPaths {
    /// The conventional file names inside a dataset directory, as written by `synth`.
    pub fn in_dir(dir: &Path) -> Self {
        let seeds = dir.join("seeds.csv");
        InputPaths {
            scores: dir.join("scores.csv"),
            edges: dir.join("edges.csv"),
            events: dir.join("events.jsonl"),
            seeds: seeds.exists().then_some(seeds),
        }
    }
}

/// Everything parsed from one dataset.
#[derive(Debug, Clone)]
pub struct DatasetBundle {
    pub users: UserTable,
    pub scores: DomainScoreTable,
    pub edges: FollowEdgeList,
    pub log: EventLog,
    /// Ascending by id, deduplicated.
    pub seeds: Vec<UserId>,
    /// SHA-256 over the raw input bytes, in parse order.
    pub fingerprint: [u8; 32],
}

struct HashingReader<'h, R> {
    inner: R,
    hasher: &'h mut Sha256,
}

impl<R: Read> Read for HashingReader<'_, R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }
}

fn parse_seeds<R: Read>(reader: R, source: &str, users: &mut UserTable) -> Result<Vec<UserId>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::parse(source, 1, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["user"] {
        return Err(Error::parse(source, 1, "expected header `user`"));
    }
    let mut seeds = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::parse(source, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 1 || record[0].is_empty() {
            return Err(Error::parse(source, line, "expected one non-empty user id"));
        }
        seeds.push(users.intern(&record[0]));
    }
    Ok(seeds)
}

impl DatasetBundle {
    pub fn load(paths: &InputPaths) -> Result<Self> {
        let seeds = match &paths.seeds {
            Some(p) => Some((open(p)?, p.display().to_string())),
            None => None,
        };
        // &File implements Read
        Self::from_readers(
            (open(&paths.scores)?, &paths.scores.display().to_string()),
            (open(&paths.edges)?, &paths.edges.display().to_string()),
            (open(&paths.events)?, &paths.events.display().to_string()),
            seeds.as_ref().map(|(f, n)| (f, n.as_str())),
        )
    }

    /// Parses the three artifacts (plus an optional seed list), each given
    /// as a reader and a name used in error messages.
    pub fn from_readers<A: Read, B: Read, C: Read, D: Read>(
        scores: (A, &str),
        edges: (B, &str),
        events: (C, &str),
        seeds: Option<(D, &str)>,
    ) -> Result<Self> {
        let mut hasher = Sha256::new();
        let mut users = UserTable::new();
        let scores_table = parse_domain_scores_reader(
            HashingReader {
                inner: scores.0,
                hasher: &mut hasher,
            },
            scores.1,
        )?;
        let edge_list = parse_follow_edges_reader(
            HashingReader {
                inner: edges.0,
                hasher: &mut hasher,
            },
            edges.1,
            &mut users,
        )?;
        let mut log = parse_events_reader(
            HashingReader {
                inner: events.0,
                hasher: &mut hasher,
            },
            events.1,
            &mut users,
            &PldExtractor::default(),
        )?;
        let mut seed_ids = match seeds {
            Some((r, name)) => parse_seeds(
                HashingReader {
                    inner: r,
                    hasher: &mut hasher,
                },
                name,
                &mut users,
            )?,
            None => edge_list.sources(),
        };
        seed_ids.sort_unstable();
        seed_ids.dedup();
        log.reindex(users.len());
        Ok(DatasetBundle {
            users,
            scores: scores_table,
            edges: edge_list,
            log,
            seeds: seed_ids,
            fingerprint: hasher.finalize().into(),
        })
    }

    pub fn is_seed(&self, u: UserId) -> bool {
        self.seeds.binary_search(&u).is_ok()
    }

    /// Seeds ordered by account name, the order used in every output table.
    pub fn seeds_by_name(&self) -> Vec<UserId> {
        let mut seeds = self.seeds.clone();
        seeds.sort_by(|&a, &b| self.users.name(a).cmp(self.users.name(b)));
        seeds
    }

    pub fn seeds_csv(&self) -> String {
        let mut out = String::from("user\n");
        for u in self.seeds_by_name() {
            out.push_str(self.users.name(u));
            out.push('\n');
        }
        out
    }
}
