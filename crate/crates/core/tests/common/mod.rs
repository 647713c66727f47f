#![allow(dead_code)]

use echoscope::graph::{FollowerGraph, RetweetGraph};
use echoscope::ingest::{DatasetBundle, TimeWindow};
use echoscope::UserId;

pub fn bundle(scores: &str, edges: &str, events: &str, seeds: Option<&str>) -> DatasetBundle {
    DatasetBundle::from_readers(
        (scores.as_bytes(), "scores"),
        (edges.as_bytes(), "edges"),
        (events.as_bytes(), "events"),
        seeds.map(|s| (s.as_bytes(), "seeds")),
    )
    .expect("fixture parses")
}

pub fn graphs(b: &DatasetBundle, window: TimeWindow) -> (FollowerGraph, RetweetGraph) {
    let fg = FollowerGraph::build(&b.edges, &b.seeds, b.users.len()).unwrap();
    let rg = RetweetGraph::build(&b.log, &b.seeds, window, b.users.len());
    (fg, rg)
}

pub fn id(b: &DatasetBundle, name: &str) -> UserId {
    b.users.get(name).unwrap_or_else(|| panic!("no user {name}"))
}

/// One JSONL event line.
pub fn ev(id: u32, author: &str, ts: i64, orig: Option<&str>, domains: &[&str]) -> String {
    let urls: Vec<String> = domains.iter().map(|d| format!("\"https://{d}/p\"")).collect();
    match orig {
        None => format!(
            r#"{{"id":"{id}","author":"{author}","ts":{ts},"kind":"original","urls":[{}]}}"#,
            urls.join(",")
        ),
        Some(o) => format!(
            r#"{{"id":"{id}","author":"{author}","ts":{ts},"kind":"retweet","orig_author":"{o}","urls":[{}]}}"#,
            urls.join(",")
        ),
    }
}
