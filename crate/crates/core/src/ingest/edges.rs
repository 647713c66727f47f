use std::io::Read;
use std::path::Path;

use rayon::slice::ParallelSliceMut;

use crate::error::{Error, Result};
use crate::ids::{UserId, UserTable};
use crate::ingest::open;

/// Deduplicated directed follow edges `follower -> friend`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowEdgeList {
    edges: Vec<(UserId, UserId)>,
    pub records: u64,
    pub self_loops_dropped: u64,
    pub duplicates_dropped: u64,
}

impl FollowEdgeList {
    /// Builds from raw pairs, dropping self-loops and duplicates.
    pub fn from_pairs(pairs: Vec<(UserId, UserId)>) -> Self {
        let records = pairs.len() as u64;
        let mut edges: Vec<(UserId, UserId)> = pairs.into_iter().filter(|(a, b)| a != b).collect();
        let self_loops_dropped = records - edges.len() as u64;
        edges.par_sort_unstable();
        edges.dedup();
        let duplicates_dropped = records - self_loops_dropped - edges.len() as u64;
        if self_loops_dropped > 0 {
            log::warn!("dropped {self_loops_dropped} self-loop follow edges");
        }
        FollowEdgeList {
            edges,
            records,
            self_loops_dropped,
            duplicates_dropped,
        }
    }

    pub fn edges(&self) -> &[(UserId, UserId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Distinct followers, ascending.
    pub fn sources(&self) -> Vec<UserId> {
        let mut out: Vec<UserId> = self.edges.iter().map(|e| e.0).collect();
        out.dedup();
        out
    }

    /// CSV ordered by follower name, then friend name.
    pub fn to_csv(&self, users: &UserTable) -> String {
        let mut named: Vec<(&str, &str)> = self.edges.iter().map(|&(a, b)| (users.name(a), users.name(b))).collect();
        named.sort_unstable();
        let mut out = String::from("follower,friend\n");
        for (a, b) in named {
            out.push_str(a);
            out.push(',');
            out.push_str(b);
            out.push('\n');
        }
        out
    }
}

pub fn parse_follow_edges(path: &Path, users: &mut UserTable) -> Result<FollowEdgeList> {
    parse_follow_edges_reader(open(path)?, &path.display().to_string(), users)
}

/// Streams `follower,friend` CSV records.
pub fn parse_follow_edges_reader<R: Read>(reader: R, source: &str, users: &mut UserTable) -> Result<FollowEdgeList> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.byte_headers().map_err(|e| Error::parse(source, 1, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != [b"follower".as_slice(), b"friend".as_slice()] {
        return Err(Error::parse(source, 1, "expected header `follower,friend`"));
    }
    let mut pairs = Vec::new();
    let mut record = csv::ByteRecord::new();
    loop {
        match rdr.read_byte_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(Error::parse(source, line, e.to_string()));
            }
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::parse(source, line, "expected 2 fields"));
        }
        let field = |i: usize| -> Result<&str> {
            let s = std::str::from_utf8(&record[i]).map_err(|_| Error::parse(source, line, "invalid UTF-8"))?;
            if s.is_empty() {
                return Err(Error::parse(source, line, "empty user id"));
            }
            Ok(s)
        };
        let follower = users.intern(field(0)?);
        let friend = users.intern(field(1)?);
        pairs.push((follower, friend));
    }
    Ok(FollowEdgeList::from_pairs(pairs))
}
