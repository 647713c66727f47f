use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::DomainScoreTable;
use crate::stats::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeracyClass {
    Moderate,
    Hardliner,
}

impl ModeracyClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeracyClass::Moderate => "moderate",
            ModeracyClass::Hardliner => "hardliner",
        }
    }
}

/// Moderate iff `m_s <= 0.5`.
pub fn classify(m_s: f64) -> ModeracyClass {
    if m_s <= 0.5 {
        ModeracyClass::Moderate
    } else {
        ModeracyClass::Hardliner
    }
}

/// Reflects a left-right score onto the moderacy half-axis: `mu` if
/// `mu > 0.5`, else `1 - mu`.
pub fn fold(mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Invalid(format!("score {mu} outside [0, 1]")));
    }
    Ok(fold_unchecked(mu))
}

#[inline]
pub(crate) fn fold_unchecked(mu: f64) -> f64 {
    if mu > 0.5 {
        mu
    } else {
        1.0 - mu
    }
}

/// Folds `raw` on the side chosen by the user's own raw mean `mu`.
#[inline]
pub(crate) fn fold_by(mu: f64, raw: f64) -> f64 {
    if mu > 0.5 {
        raw
    } else {
        1.0 - raw
    }
}

/// Class of a single domain occurrence: `classify(fold(score))`. Only
/// centre outlets (0.5) land on the moderate side of the boundary.
pub fn domain_class(score: f64) -> ModeracyClass {
    classify(fold_unchecked(score))
}

/// Mean score over scored occurrences; `None` when nothing is scored.
pub fn raw_mean_score<'a>(domains: impl IntoIterator<Item = &'a str>, table: &DomainScoreTable) -> Option<f64> {
    let mut acc = NeumaierSum::new();
    let mut n = 0usize;
    for d in domains {
        if let Some(s) = table.get(d) {
            acc.add(s);
            n += 1;
        }
    }
    (n > 0).then(|| acc.value() / n as f64)
}

/// Affine map taking a population's minimum to 0 and maximum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScale {
    pub min: f64,
    pub max: f64,
}

impl MinMaxScale {
    pub fn fit(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut it = values.into_iter();
        let first = it.next().ok_or_else(|| Error::Invalid("min-max normalisation of an empty set".into()))?;
        let (min, max) = it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Ok(MinMaxScale { min, max })
    }

    pub fn is_degenerate(&self) -> bool {
        self.max == self.min
    }

    /// Values outside the fitted range are clamped; a degenerate range
    /// maps everything to 0.5.
    pub fn apply(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            return 0.5;
        }
        ((x - self.min) / (self.max - self.min)).clamp(0.0, 1.0)
    }
}

/// Min-max normalisation of a keyed population.
pub fn minmax_normalize<K: Ord + Clone>(scores: &BTreeMap<K, f64>) -> Result<BTreeMap<K, f64>> {
    let scale = MinMaxScale::fit(scores.values().copied())?;
    if scale.is_degenerate() {
        log::warn!("min-max normalisation over identical values; mapping all to 0.5");
    }
    Ok(scores.iter().map(|(k, &v)| (k.clone(), scale.apply(v))).collect())
}
