//! Pay-level domains and registrable-domain extraction.
//!
//! Suffix rules come from a snapshot of the public suffix list compiled into
//! the binary (`data/public_suffix_list.dat`); nothing is fetched at run time.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use url::{Host, Url};

use crate::error::{Error, Result};

static SNAPSHOT: &str = include_str!("../../data/public_suffix_list.dat");

/// Redirector hosts whose targets are opaque without network access.
pub const DEFAULT_SHORTENERS: &[&str] = &[
    "bit.ly", "buff.ly", "dlvr.it", "fb.me", "goo.gl", "ift.tt", "j.mp", "ow.ly", "t.co",
    "tinyurl.com", "tr.im", "is.gd", "su.pr", "wp.me", "youtu.be", "lnkd.in", "trib.al",
];

/// A lowercase registrable domain such as `example.co.uk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PayLevelDomain(String);

impl PayLevelDomain {
    /// Validates shape only: lowercase, dotted, no scheme, path, port or
    /// userinfo. Use [`SuffixList::registrable_domain`] to reduce a host.
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        let bad = |why: &str| Err(Error::Invalid(format!("{value:?} is not a pay-level domain: {why}")));
        if value.is_empty() {
            return bad("empty");
        }
        if value.chars().any(|c| c.is_uppercase()) {
            return bad("not lowercase");
        }
        if value.contains([':', '/', '@', '?', '#', ' ']) {
            return bad("contains scheme, path, port or userinfo");
        }
        if !value.contains('.') {
            return bad("no dot");
        }
        if value.split('.').any(str::is_empty) {
            return bad("empty label");
        }
        Ok(PayLevelDomain(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for PayLevelDomain {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        PayLevelDomain::new(value)
    }
}

impl From<PayLevelDomain> for String {
    fn from(d: PayLevelDomain) -> String {
        d.0
    }
}

impl std::borrow::Borrow<str> for PayLevelDomain {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PayLevelDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parsed public suffix rules.
#[derive(Debug)]
pub struct SuffixList {
    normal: HashSet<String>,
    /// `*.foo` stored as `foo`
    wildcard: HashSet<String>,
    /// `!bar.foo` stored as `bar.foo`
    exception: HashSet<String>,
    snapshot_id: String,
}

fn to_ascii(domain: &str) -> Option<String> {
    if domain.is_ascii() {
        return Some(domain.to_ascii_lowercase());
    }
    match Url::parse(&format!("http://{domain}/")).ok()?.host() {
        Some(Host::Domain(d)) => Some(d.to_string()),
        _ => None,
    }
}

impl SuffixList {
    pub fn parse(text: &str) -> Self {
        let mut list = SuffixList {
            normal: HashSet::new(),
            wildcard: HashSet::new(),
            exception: HashSet::new(),
            snapshot_id: hex_prefix(&Sha256::digest(text.as_bytes()), 16),
        };
        for line in text.lines() {
            let rule = line.split_whitespace().next().unwrap_or("");
            if rule.is_empty() || rule.starts_with("//") {
                continue;
            }
            if let Some(rest) = rule.strip_prefix('!') {
                if let Some(r) = to_ascii(rest) {
                    list.exception.insert(r);
                }
            } else if let Some(rest) = rule.strip_prefix("*.") {
                if let Some(r) = to_ascii(rest) {
                    list.wildcard.insert(r);
                }
            } else if let Some(r) = to_ascii(rule) {
                list.normal.insert(r);
            }
        }
        list
    }

    /// The snapshot compiled into this build.
    pub fn bundled() -> &'static SuffixList {
        static LIST: OnceLock<SuffixList> = OnceLock::new();
        LIST.get_or_init(|| SuffixList::parse(SNAPSHOT))
    }

    /// Content hash identifying the snapshot in report metadata.
    pub fn snapshot_id(&self) -> &str {
        &self.snapshot_id
    }

    pub fn rule_count(&self) -> usize {
        self.normal.len() + self.wildcard.len() + self.exception.len()
    }

    /// Number of trailing labels forming the public suffix of `labels`.
    fn suffix_len(&self, labels: &[&str]) -> usize {
        let n = labels.len();
        let mut best = 1; // implicit "*" rule
        for i in 0..n {
            let candidate = labels[i..].join(".");
            if self.exception.contains(&candidate) {
                return n - i - 1;
            }
            let matched = self.normal.contains(&candidate)
                || (i + 1 < n && self.wildcard.contains(&labels[i + 1..].join(".")));
            if matched {
                best = best.max(n - i);
            }
        }
        best
    }

    /// Registrable domain of a host name, or `None` if the host is itself a
    /// public suffix or malformed.
    pub fn registrable_domain(&self, host: &str) -> Option<String> {
        let host = host.strip_suffix('.').unwrap_or(host);
        if host.is_empty() || host.starts_with('.') {
            return None;
        }
        let host = to_ascii(host)?;
        let labels: Vec<&str> = host.split('.').collect();
        if labels.iter().any(|l| l.is_empty()) {
            return None;
        }
        let suffix = self.suffix_len(&labels);
        if labels.len() <= suffix {
            return None;
        }
        Some(labels[labels.len() - suffix - 1..].join("."))
    }
}

pub(crate) fn hex_prefix(bytes: &[u8], n: usize) -> String {
    bytes.iter().take(n / 2).map(|b| format!("{b:02x}")).collect()
}

/// URL to pay-level domain reduction with a redirector skip list.
#[derive(Debug, Clone)]
pub struct PldExtractor {
    list: &'static SuffixList,
    skip: HashSet<String>,
}

impl Default for PldExtractor {
    fn default() -> Self {
        Self::with_skip_list(DEFAULT_SHORTENERS.iter().copied())
    }
}

impl PldExtractor {
    pub fn with_skip_list<'a>(hosts: impl IntoIterator<Item = &'a str>) -> Self {
        PldExtractor {
            list: SuffixList::bundled(),
            skip: hosts.into_iter().map(|h| h.to_ascii_lowercase()).collect(),
        }
    }

    pub fn suffix_list(&self) -> &SuffixList {
        self.list
    }

    /// Never fails: bare IPs, skip-listed hosts and unparseable input give `None`.
    pub fn extract(&self, url: &str) -> Option<PayLevelDomain> {
        let parsed = Url::parse(url.trim()).ok()?;
        let host = match parsed.host()? {
            Host::Domain(d) => d,
            Host::Ipv4(_) | Host::Ipv6(_) => return None,
        };
        let host = host.strip_suffix('.').unwrap_or(host);
        // hosts like "1.2.3" survive URL parsing as domains
        if host.split('.').all(|l| !l.is_empty() && l.bytes().all(|b| b.is_ascii_digit())) {
            return None;
        }
        let pld = self.list.registrable_domain(host)?;
        if self.skip.contains(host) || self.skip.contains(&pld) {
            return None;
        }
        PayLevelDomain::new(pld).ok()
    }
}

/// [`PldExtractor::extract`] with the default skip list.
pub fn extract_pld(url: &str) -> Option<PayLevelDomain> {
    static DEFAULT: OnceLock<PldExtractor> = OnceLock::new();
    DEFAULT.get_or_init(PldExtractor::default).extract(url)
}
