use rayon::prelude::*;
use serde::Serialize;

use super::engine::{Analysis, Exposure};
use super::score::{classify, MinMaxScale, ModeracyClass};
use crate::graph::GraphKind;
use crate::ids::UserId;

/// Per-seed moderacy figures at one retweet threshold. Fields are `None`
/// when undefined, never zero-filled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserMetrics {
    pub user: UserId,
    pub raw_mean: Option<f64>,
    /// Folded `raw_mean` before normalisation.
    pub folded: Option<f64>,
    pub m_s: Option<f64>,
    pub exposure_f: Option<Exposure>,
    pub exposure_r: Option<Exposure>,
    pub m_e_f: Option<f64>,
    pub m_e_r: Option<f64>,
    pub delta: Option<f64>,
    pub domain_count: u64,
    pub class: Option<ModeracyClass>,
}

/// All seeds' metrics at threshold `k`, ascending by user id.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsTable {
    pub k: u32,
    pub moderacy_scale: Option<MinMaxScale>,
    /// Joint scale over both exposure kinds at this `k`.
    pub exposure_scale: Option<MinMaxScale>,
    pub rows: Vec<UserMetrics>,
}

impl MetricsTable {
    pub fn get(&self, u: UserId) -> Option<&UserMetrics> {
        self.rows.binary_search_by_key(&u, |r| r.user).ok().map(|i| &self.rows[i])
    }

    /// `(x, y)` pairs over rows where both are present.
    pub fn paired(
        &self,
        x: impl Fn(&UserMetrics) -> Option<f64>,
        y: impl Fn(&UserMetrics) -> Option<f64>,
    ) -> (Vec<f64>, Vec<f64>) {
        self.rows.iter().filter_map(|r| Some((x(r)?, y(r)?))).unzip()
    }
}

/// `m_e_f - m_e_r`; absent unless both exposures are.
pub fn exposure_delta(m: &UserMetrics) -> Option<f64> {
    Some(m.m_e_f? - m.m_e_r?)
}

pub fn compute_user_metrics(analysis: &Analysis<'_>, k: u32) -> MetricsTable {
    let mut rows: Vec<UserMetrics> = analysis
        .seeds()
        .par_iter()
        .map(|&u| {
            let ind = analysis.individual(u);
            let m_s = analysis.moderacy(u);
            UserMetrics {
                user: u,
                raw_mean: ind.map(|i| i.mu),
                folded: ind.map(|i| i.folded),
                m_s,
                exposure_f: analysis.exposure(u, GraphKind::Follower, k),
                exposure_r: analysis.exposure(u, GraphKind::Retweet, k),
                m_e_f: None,
                m_e_r: None,
                delta: None,
                domain_count: ind.map_or(0, |i| i.domain_count),
                class: m_s.map(classify),
            }
        })
        .collect();

    let pooled = rows
        .iter()
        .flat_map(|r| [r.exposure_f, r.exposure_r])
        .flatten()
        .map(|e| e.folded);
    let exposure_scale = MinMaxScale::fit(pooled).ok();
    if let Some(scale) = exposure_scale {
        if scale.is_degenerate() {
            log::warn!("k={k}: all exposures equal; m_e is 0.5 for everyone");
        }
        for r in &mut rows {
            r.m_e_f = r.exposure_f.map(|e| scale.apply(e.folded));
            r.m_e_r = r.exposure_r.map(|e| scale.apply(e.folded));
            r.delta = exposure_delta(r);
        }
    }
    MetricsTable {
        k,
        moderacy_scale: analysis.moderacy_scale(),
        exposure_scale,
        rows,
    }
}
