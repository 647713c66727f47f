//! Echo-chamber analytics over follower and retweet graphs.
//!
//! The pipeline reads a domain score table, a follow edge list and a tweet
//! event log, reconstructs each seed user's follower-graph and
//! retweet-graph neighbourhoods, and measures individual moderacy,
//! exposure moderacy through both graphs and the bias between them.

pub mod error;
pub mod graph;
pub mod ids;
pub mod ingest;
pub mod moderacy;
pub mod report;
pub mod rng;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use ids::{DomainId, UserId, UserTable};
pub use report::{build_report, load_graphs, ReportBundle, RunConfig};
