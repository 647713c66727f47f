use serde::Serialize;

use super::engine::Analysis;
use super::score::ModeracyClass;
use crate::ids::UserId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CongruenceDiff {
    pub user: UserId,
    pub class: ModeracyClass,
    pub frac_congruent_retweeted: f64,
    pub frac_congruent_not_retweeted: f64,
    pub diff: f64,
    pub n_retweeted: usize,
    pub n_not_retweeted: usize,
}

/// Share of scored retweeted follower-graph friends in `u`'s class minus
/// the same share among scored friends `u` did not retweet `k` times.
pub fn congruent_friend_fraction_diff(analysis: &Analysis<'_>, u: UserId, k: u32) -> Option<CongruenceDiff> {
    let class = analysis.moderacy_class(u)?;
    let rg = analysis.retweet_graph();
    let (mut rt, mut rt_same, mut not, mut not_same) = (0usize, 0usize, 0usize, 0usize);
    for &f in analysis.follower_graph().friends(u)? {
        let Some(fc) = analysis.moderacy_class(f) else { continue };
        let same = (fc == class) as usize;
        if rg.weight(u, f) >= k {
            rt += 1;
            rt_same += same;
        } else {
            not += 1;
            not_same += same;
        }
    }
    if rt == 0 || not == 0 {
        return None;
    }
    let a = rt_same as f64 / rt as f64;
    let b = not_same as f64 / not as f64;
    Some(CongruenceDiff {
        user: u,
        class,
        frac_congruent_retweeted: a,
        frac_congruent_not_retweeted: b,
        diff: a - b,
        n_retweeted: rt,
        n_not_retweeted: not,
    })
}
