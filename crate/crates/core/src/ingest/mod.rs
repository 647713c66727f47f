//! Parsing and validation of the three input artifacts: domain score
//! table (CSV), follow edges (CSV) and tweet events (JSON lines).

mod bundle;
mod domain;
mod edges;
mod events;
mod scores;
mod validate;

use std::fs::File;
use std::path::Path;

pub use bundle::{DatasetBundle, InputPaths};
pub use domain::{extract_pld, PayLevelDomain, PldExtractor, SuffixList, DEFAULT_SHORTENERS};
pub use edges::{parse_follow_edges, parse_follow_edges_reader, FollowEdgeList};
pub use events::{parse_events, parse_events_reader, EventKind, EventLog, TimeWindow, TweetEvent};
pub use scores::{label_for, parse_domain_scores, parse_domain_scores_reader, DomainScoreTable, LABEL_SCORES};
pub use validate::{validate_dataset, ValidationReport};

pub(crate) use domain::hex_prefix;

pub(crate) fn open(path: &Path) -> crate::Result<File> {
    File::open(path).map_err(|e| crate::Error::Read {
        path: path.to_path_buf(),
        source: e,
    })
}
