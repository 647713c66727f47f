use serde::Serialize;

use super::engine::Analysis;
use super::score::ModeracyClass;
use crate::ids::UserId;
use crate::stats::{mann_whitney_u, UTestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FriendActivity {
    pub friend: UserId,
    /// Tweets posted inside the window.
    pub tweets: u32,
    /// Retweeted at least `k` times by some seed that follows it.
    pub retweeted: bool,
    pub class: Option<ModeracyClass>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActivityComparison {
    pub k: u32,
    /// Every follower-graph friend of any seed, ascending by id.
    pub friends: Vec<FriendActivity>,
    pub retweeted_vs_not: Option<UTestResult>,
    /// Retweeted hardline friends against retweeted moderate friends.
    pub hardline_vs_moderate_retweeted: Option<UTestResult>,
}

impl ActivityComparison {
    pub fn sample(&self, pred: impl Fn(&FriendActivity) -> bool) -> Vec<f64> {
        self.friends.iter().filter(|f| pred(f)).map(|f| f.tweets as f64).collect()
    }
}

pub fn friend_activity_comparison(analysis: &Analysis<'_>, k: u32) -> ActivityComparison {
    let fg = analysis.follower_graph();
    let rg = analysis.retweet_graph();
    let n = analysis.bundle().users.len();
    // 0 = not a friend, 1 = friend, 2 = retweeted friend
    let mut state = vec![0u8; n];
    for &s in analysis.seeds() {
        for &f in fg.friends(s).unwrap_or(&[]) {
            state[f.index()] = state[f.index()].max(1);
        }
        for (f, _) in rg.friends_at(s, k) {
            if fg.follows(s, f) {
                state[f.index()] = 2;
            }
        }
    }
    let friends: Vec<FriendActivity> = state
        .iter()
        .enumerate()
        .filter(|(_, &st)| st > 0)
        .map(|(i, &st)| {
            let f = UserId(i as u32);
            FriendActivity {
                friend: f,
                tweets: analysis.activity(f),
                retweeted: st == 2,
                class: analysis.moderacy_class(f),
            }
        })
        .collect();

    let mut out = ActivityComparison {
        k,
        friends,
        retweeted_vs_not: None,
        hardline_vs_moderate_retweeted: None,
    };
    out.retweeted_vs_not = mann_whitney_u(&out.sample(|f| f.retweeted), &out.sample(|f| !f.retweeted)).ok();
    out.hardline_vs_moderate_retweeted = mann_whitney_u(
        &out.sample(|f| f.retweeted && f.class == Some(ModeracyClass::Hardliner)),
        &out.sample(|f| f.retweeted && f.class == Some(ModeracyClass::Moderate)),
    )
    .ok();
    out
}
