use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::domain::{PayLevelDomain, SuffixList};
use crate::ingest::open;

/// Ideology score of a pay-level domain: 0 hardline left, 0.5 centre,
/// 1 hardline right.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DomainScoreTable {
    entries: BTreeMap<PayLevelDomain, f64>,
}

/// Bias label to score, keyed by the normalised label text.
pub const LABEL_SCORES: &[(&str, f64)] = &[
    ("left", 0.0),
    ("left-center", 0.25),
    ("center", 0.5),
    ("least-biased", 0.5),
    ("right-center", 0.75),
    ("right", 1.0),
];

/// Label written by the synthesiser for each five-level score.
pub fn label_for(score: f64) -> Option<&'static str> {
    match score {
        0.0 => Some("left"),
        0.25 => Some("left-center"),
        0.5 => Some("center"),
        0.75 => Some("right-center"),
        1.0 => Some("right"),
        _ => None,
    }
}

fn parse_score(raw: &str) -> std::result::Result<f64, String> {
    let norm: String = raw
        .trim()
        .to_ascii_lowercase()
        .chars()
        .map(|c| if c == ' ' || c == '_' { '-' } else { c })
        .collect();
    if let Some(&(_, s)) = LABEL_SCORES.iter().find(|(l, _)| *l == norm) {
        return Ok(s);
    }
    match norm.parse::<f64>() {
        Ok(s) if (0.0..=1.0).contains(&s) => Ok(s),
        Ok(s) => Err(format!("score {s} outside [0, 1]")),
        Err(_) => Err(format!("unknown bias label {raw:?}")),
    }
}

impl DomainScoreTable {
    pub fn from_entries(entries: impl IntoIterator<Item = (PayLevelDomain, f64)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (d, s) in entries {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::Invalid(format!("score {s} for {d} outside [0, 1]")));
            }
            if table.insert(d.clone(), s).is_some() {
                return Err(Error::Invalid(format!("duplicate domain {d}")));
            }
        }
        if table.is_empty() {
            return Err(Error::Invalid("domain score table is empty".into()));
        }
        Ok(DomainScoreTable { entries: table })
    }

    pub fn get(&self, domain: &str) -> Option<f64> {
        self.entries.get(domain).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PayLevelDomain, f64)> {
        self.entries.iter().map(|(d, &s)| (d, s))
    }

    /// Serialises in the ingest format (`domain,score`), scores as decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("domain,score\n");
        for (d, s) in self.iter() {
            out.push_str(&format!("{d},{s}\n"));
        }
        out
    }
}

pub fn parse_domain_scores(path: &Path) -> Result<DomainScoreTable> {
    parse_domain_scores_reader(open(path)?, &path.display().to_string())
}

/// Reads `domain,score` CSV; a score is a bias label or a decimal in [0, 1].
pub fn parse_domain_scores_reader<R: Read>(reader: R, source: &str) -> Result<DomainScoreTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(source, 1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["domain", "score"] {
        return Err(Error::parse(source, 1, "expected header `domain,score`"));
    }
    let list = SuffixList::bundled();
    let mut entries: BTreeMap<PayLevelDomain, f64> = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(source, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::parse(source, line, "expected 2 fields"));
        }
        let raw_domain = record[0].to_ascii_lowercase();
        let domain = PayLevelDomain::new(raw_domain.clone()).map_err(|e| Error::parse(source, line, e.to_string()))?;
        match list.registrable_domain(&raw_domain) {
            Some(reg) if reg == raw_domain => {}
            Some(reg) => {
                return Err(Error::parse(
                    source,
                    line,
                    format!("{raw_domain} is not a pay-level domain (registrable part is {reg})"),
                ))
            }
            None => return Err(Error::parse(source, line, format!("{raw_domain} is a public suffix"))),
        }
        let score = parse_score(&record[1]).map_err(|m| Error::parse(source, line, m))?;
        if entries.insert(domain, score).is_some() {
            return Err(Error::parse(source, line, format!("duplicate domain {raw_domain}")));
        }
    }
    if entries.is_empty() {
        return Err(Error::parse(source, 1, "no score records"));
    }
    Ok(DomainScoreTable { entries })
}
