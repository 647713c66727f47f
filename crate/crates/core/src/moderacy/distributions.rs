use serde::Serialize;

use super::engine::Analysis;
use crate::error::Result;
use crate::graph::{sample_friends_by_indegree, Indegree};
use crate::ids::UserId;
use crate::rng::{substream, Stream};

/// `m_s` of randomly drawn accounts: uniform over scored seeds, and
/// indegree-proportional over follower-graph and retweet-graph friends.
/// Unscored draws are discarded.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ScoreSamples {
    pub random_user: Vec<f64>,
    pub follower_friend: Vec<f64>,
    pub retweet_friend: Vec<f64>,
}

pub fn score_samples(analysis: &Analysis<'_>, n: usize, seed: u64) -> Result<ScoreSamples> {
    let scored: Vec<f64> = analysis.seeds().iter().filter_map(|&u| analysis.moderacy(u)).collect();
    let mut out = ScoreSamples::default();
    if scored.is_empty() || n == 0 {
        return Ok(out);
    }
    let mut rng = substream(seed, Stream::UserScoreSample, 0);
    out.random_user = (0..n).map(|_| scored[rand::Rng::random_range(&mut rng, 0..scored.len())]).collect();

    let draw = |g: &dyn Indegree, key: u64| -> Result<Vec<f64>> {
        if g.indegrees().iter().all(|&d| d == 0) {
            return Ok(Vec::new());
        }
        let mut rng = substream(seed, Stream::IndegreeSample, key);
        let picks: Vec<UserId> = sample_friends_by_indegree(g, n, &mut rng)?;
        Ok(picks.into_iter().filter_map(|f| analysis.moderacy(f)).collect())
    };
    out.follower_friend = draw(analysis.follower_graph(), 0)?;
    out.retweet_friend = draw(analysis.retweet_graph(), 1)?;
    Ok(out)
}
