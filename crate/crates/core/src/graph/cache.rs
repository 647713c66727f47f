//! Binary graph cache.
//!
//! All integers little-endian.
//!
//! ```text
//! offset  size        field
//! 0       8           magic "ECHOGRPH"
//! 8       4           version (u32)
//! 12      32          input fingerprint (SHA-256 of the input bytes)
//! 44      8           window start (i64)
//! 52      8           window end (i64)
//! 60      8           n_users (u64)
//! 68      8           n_seeds (u64)
//! 76      4*S         seed ids (u32)
//! ..      8*(S+1)     follower offsets (u64)
//! ..      4*F         friend ids (u32)
//! ..      8*(S+1)     retweet offsets (u64)
//! ..      4*R         retweet target ids (u32)
//! ..      4*R         retweet weights (u32)
//! ..      8           total file length (u64)
//! ```

use std::fs;
use std::path::Path;

use super::{FollowerGraph, RetweetGraph};
use crate::error::{Error, Result};
use crate::ids::UserId;
use crate::ingest::TimeWindow;

pub const CACHE_MAGIC: &[u8; 8] = b"ECHOGRPH";
pub const CACHE_VERSION: u32 = 1;

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn write_cache(
    path: &Path,
    fingerprint: &[u8; 32],
    window: TimeWindow,
    n_users: usize,
    fg: &FollowerGraph,
    rg: &RetweetGraph,
) -> Result<()> {
    let mut out = Vec::new();
    out.extend_from_slice(CACHE_MAGIC);
    put_u32(&mut out, CACHE_VERSION);
    out.extend_from_slice(fingerprint);
    out.extend_from_slice(&window.start.to_le_bytes());
    out.extend_from_slice(&window.end.to_le_bytes());
    put_u64(&mut out, n_users as u64);
    put_u64(&mut out, fg.seeds().len() as u64);
    for s in fg.seeds() {
        put_u32(&mut out, s.0);
    }
    let (offsets, friends) = fg.parts();
    for &o in offsets {
        put_u64(&mut out, o as u64);
    }
    for f in friends {
        put_u32(&mut out, f.0);
    }
    let (offsets, targets, weights) = rg.parts();
    for &o in offsets {
        put_u64(&mut out, o as u64);
    }
    for t in targets {
        put_u32(&mut out, t.0);
    }
    for &w in weights {
        put_u32(&mut out, w);
    }
    let total = out.len() as u64 + 8;
    put_u64(&mut out, total);
    fs::write(path, out).map_err(|e| Error::Write {
        path: path.to_path_buf(),
        source: e,
    })
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Cache("truncated file".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn len(&mut self, what: &str) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v)
            .ok()
            .filter(|&n| n <= self.buf.len())
            .ok_or_else(|| Error::Cache(format!("implausible {what} {v}")))
    }

    fn offsets(&mut self, n: usize) -> Result<Vec<usize>> {
        let out: Vec<usize> = (0..=n).map(|_| self.len("offset")).collect::<Result<_>>()?;
        if out.first() != Some(&0) || out.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Cache("offsets not monotone".into()));
        }
        Ok(out)
    }

    fn ids(&mut self, n: usize, n_users: usize) -> Result<Vec<UserId>> {
        (0..n)
            .map(|_| {
                let id = self.u32()?;
                if id as usize >= n_users {
                    return Err(Error::Cache(format!("user id {id} out of range")));
                }
                Ok(UserId(id))
            })
            .collect()
    }
}

/// Loads cached graphs. `Ok(None)` when the file is missing or was built
/// from different inputs, window or user table; `Err` when it is corrupt.
pub fn read_cache(
    path: &Path,
    fingerprint: &[u8; 32],
    window: TimeWindow,
    n_users: usize,
) -> Result<Option<(FollowerGraph, RetweetGraph)>> {
    let buf = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
    };
    let mut c = Cursor { buf: &buf, pos: 0 };
    if c.take(8)? != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if c.u32()? != CACHE_VERSION {
        return Ok(None);
    }
    if c.take(32)? != fingerprint || c.i64()? != window.start || c.i64()? != window.end {
        return Ok(None);
    }
    if c.len("user count")? != n_users {
        return Ok(None);
    }
    let n_seeds = c.len("seed count")?;
    let seeds = c.ids(n_seeds, n_users)?;
    let f_offsets = c.offsets(n_seeds)?;
    let friends = c.ids(*f_offsets.last().unwrap(), n_users)?;
    let r_offsets = c.offsets(n_seeds)?;
    let r_len = *r_offsets.last().unwrap();
    let targets = c.ids(r_len, n_users)?;
    let weights = (0..r_len).map(|_| c.u32()).collect::<Result<Vec<_>>>()?;
    let total = c.u64()?;
    if total != buf.len() as u64 || c.pos != buf.len() {
        return Err(Error::Cache("length mismatch".into()));
    }
    Ok(Some((
        FollowerGraph::from_parts(seeds.clone(), f_offsets, friends, n_users),
        RetweetGraph::from_parts(seeds, r_offsets, targets, weights, n_users),
    )))
}
