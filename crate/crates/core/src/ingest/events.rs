use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rayon::slice::ParallelSliceMut;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{DomainId, Interner, UserId, UserTable};
use crate::ingest::domain::PldExtractor;
use crate::ingest::open;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Original,
    Retweet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetEvent {
    pub tweet_id: Box<str>,
    pub author: UserId,
    /// Seconds since the Unix epoch.
    pub timestamp: i64,
    pub kind: EventKind,
    /// Set exactly when `kind` is `Retweet`.
    pub original_author: Option<UserId>,
    /// Domain occurrences in URL order; repeats are kept.
    pub domains: Vec<DomainId>,
}

impl TweetEvent {
    pub fn is_retweet(&self) -> bool {
        self.kind == EventKind::Retweet
    }
}

/// Inclusive time range `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: i64,
    pub end: i64,
}

impl TimeWindow {
    pub const ALL: TimeWindow = TimeWindow {
        start: i64::MIN,
        end: i64::MAX,
    };

    #[inline]
    pub fn contains(&self, ts: i64) -> bool {
        self.start <= ts && ts <= self.end
    }

    pub fn is_all(&self) -> bool {
        *self == Self::ALL
    }

    /// Parses `FROM..TO`; either bound may be omitted.
    pub fn parse(text: &str) -> Result<Self> {
        let (from, to) = text
            .split_once("..")
            .ok_or_else(|| Error::Config(format!("window {text:?} is not FROM..TO")))?;
        let bound = |s: &str, default: i64| -> Result<i64> {
            let s = s.trim();
            if s.is_empty() {
                Ok(default)
            } else {
                s.parse().map_err(|_| Error::Config(format!("bad window bound {s:?}")))
            }
        };
        let w = TimeWindow {
            start: bound(from, i64::MIN)?,
            end: bound(to, i64::MAX)?,
        };
        if w.start > w.end {
            return Err(Error::Config(format!("window {text:?} is empty (start > end)")));
        }
        Ok(w)
    }
}

impl std::fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.start != i64::MIN {
            write!(f, "{}", self.start)?;
        }
        f.write_str("..")?;
        if self.end != i64::MAX {
            write!(f, "{}", self.end)?;
        }
        Ok(())
    }
}

/// Events sorted by `(timestamp, tweet_id)` with a per-author index.
#[derive(Debug, Clone, Default)]
pub struct EventLog {
    events: Vec<TweetEvent>,
    domains: Interner,
    author_offsets: Vec<u32>,
    author_positions: Vec<u32>,
    pub urls_seen: u64,
    pub urls_dropped: u64,
}

impl EventLog {
    pub fn new(mut events: Vec<TweetEvent>, domains: Interner, n_users: usize) -> Self {
        events.par_sort_unstable_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
        let mut log = EventLog {
            events,
            domains,
            ..Default::default()
        };
        log.reindex(n_users);
        log
    }

    /// Rebuilds the author index for a user table of `n_users` entries.
    pub fn reindex(&mut self, n_users: usize) {
        let n_users = n_users.max(self.events.iter().map(|e| e.author.index() + 1).max().unwrap_or(0));
        let mut counts = vec![0u32; n_users + 1];
        for e in &self.events {
            counts[e.author.index() + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut cursor = counts.clone();
        let mut positions = vec![0u32; self.events.len()];
        for (pos, e) in self.events.iter().enumerate() {
            let slot = &mut cursor[e.author.index()];
            positions[*slot as usize] = pos as u32;
            *slot += 1;
        }
        self.author_offsets = counts;
        self.author_positions = positions;
    }

    pub fn events(&self) -> &[TweetEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Positions (into [`events`](Self::events)) of `author`'s events, in log order.
    pub fn positions_of(&self, author: UserId) -> &[u32] {
        let i = author.index();
        if i + 1 >= self.author_offsets.len() {
            return &[];
        }
        &self.author_positions[self.author_offsets[i] as usize..self.author_offsets[i + 1] as usize]
    }

    pub fn events_of(&self, author: UserId) -> impl Iterator<Item = &TweetEvent> + '_ {
        self.positions_of(author).iter().map(move |&p| &self.events[p as usize])
    }

    pub fn domain_name(&self, id: DomainId) -> &str {
        self.domains.name(id.0)
    }

    pub fn domain_count(&self) -> usize {
        self.domains.len()
    }

    pub fn domain_names(&self) -> impl Iterator<Item = &str> {
        self.domains.names()
    }

    /// Smallest and largest timestamp, if any.
    pub fn time_range(&self) -> Option<(i64, i64)> {
        Some((self.events.first()?.timestamp, self.events.last()?.timestamp))
    }

    /// JSON-lines in the ingest format. URLs are written as
    /// `https://<domain>/`, which reduce back to the same domains.
    pub fn to_jsonl(&self, users: &UserTable) -> String {
        let mut out = String::new();
        for e in &self.events {
            let rec = RawEventOut {
                id: &e.tweet_id,
                author: users.name(e.author),
                ts: e.timestamp,
                kind: e.kind,
                orig_author: e.original_author.map(|u| users.name(u)),
                urls: e.domains.iter().map(|&d| format!("https://{}/", self.domain_name(d))).collect(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("serialisable"));
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
pub(crate) struct RawEventOut<'a> {
    pub id: &'a str,
    pub author: &'a str,
    pub ts: i64,
    pub kind: EventKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orig_author: Option<&'a str>,
    pub urls: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IdValue {
    Text(String),
    Number(u64),
}

impl IdValue {
    fn into_string(self) -> String {
        match self {
            IdValue::Text(s) => s,
            IdValue::Number(n) => n.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct RawEvent {
    id: IdValue,
    author: IdValue,
    ts: i64,
    kind: EventKind,
    #[serde(default)]
    orig_author: Option<IdValue>,
    #[serde(default)]
    urls: Vec<String>,
}

pub fn parse_events(path: &Path, users: &mut UserTable, extractor: &PldExtractor) -> Result<EventLog> {
    parse_events_reader(open(path)?, &path.display().to_string(), users, extractor)
}

/// Streams JSON-lines events, reducing URLs to pay-level domains.
pub fn parse_events_reader<R: Read>(
    reader: R,
    source: &str,
    users: &mut UserTable,
    extractor: &PldExtractor,
) -> Result<EventLog> {
    let mut reader = BufReader::new(reader);
    let mut domains = Interner::new();
    let mut events = Vec::new();
    let mut line = String::new();
    let mut line_no = 0u64;
    let (mut urls_seen, mut urls_dropped) = (0u64, 0u64);
    loop {
        line.clear();
        let n = reader.read_line(&mut line).map_err(|e| Error::Read {
            path: source.into(),
            source: e,
        })?;
        if n == 0 {
            break;
        }
        line_no += 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawEvent = serde_json::from_str(&line).map_err(|e| Error::parse(source, line_no, e.to_string()))?;
        let author_name = raw.author.into_string();
        if author_name.is_empty() {
            return Err(Error::parse(source, line_no, "empty author"));
        }
        if raw.ts < 0 {
            return Err(Error::parse(source, line_no, "negative timestamp"));
        }
        let author = users.intern(&author_name);
        let original_author = match (raw.kind, raw.orig_author) {
            (EventKind::Retweet, None) => {
                return Err(Error::parse(source, line_no, "retweet without orig_author"));
            }
            (EventKind::Retweet, Some(orig)) => {
                let orig = orig.into_string();
                if orig == author_name {
                    return Err(Error::parse(source, line_no, "retweet of own tweet"));
                }
                if orig.is_empty() {
                    return Err(Error::parse(source, line_no, "empty orig_author"));
                }
                Some(users.intern(&orig))
            }
            (EventKind::Original, Some(_)) => {
                return Err(Error::parse(source, line_no, "original tweet with orig_author"));
            }
            (EventKind::Original, None) => None,
        };
        let mut event_domains = Vec::with_capacity(raw.urls.len());
        for url in &raw.urls {
            urls_seen += 1;
            match extractor.extract(url) {
                Some(d) => event_domains.push(DomainId(domains.intern(d.as_str()))),
                None => urls_dropped += 1,
            }
        }
        events.push(TweetEvent {
            tweet_id: raw.id.into_string().into(),
            author,
            timestamp: raw.ts,
            kind: raw.kind,
            original_author,
            domains: event_domains,
        });
    }
    let mut log = EventLog::new(events, domains, users.len());
    log.urls_seen = urls_seen;
    log.urls_dropped = urls_dropped;
    Ok(log)
}
