use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exact::ExactTreeDistribution;
use crate::forest::ConfigKey;

/// Counts of sampled configurations keyed by sorted edge-id lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    pub counts: BTreeMap<ConfigKey, u64>,
    pub total: u64,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut key: ConfigKey) {
        key.sort_unstable();
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn count(&self, key: &[usize]) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &EmpiricalDistribution) {
        for (k, c) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += c;
        }
        self.total += other.total;
    }
}

impl FromIterator<ConfigKey> for EmpiricalDistribution {
    fn from_iter<I: IntoIterator<Item = ConfigKey>>(iter: I) -> Self {
        let mut d = EmpiricalDistribution::new();
        for k in iter {
            d.add(k);
        }
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Cells after pooling.
    pub cells: usize,
}

/// Pearson's chi-square test of `empirical` against `exact`.
///
/// Cells with expected count below 5 are pooled: the two cells with the
/// smallest expectation (ties by smallest key) are merged until every cell
/// reaches 5 or one cell remains.
pub fn chi_square_gof(
    empirical: &EmpiricalDistribution,
    exact: &ExactTreeDistribution,
) -> Result<GofResult> {
    let probabilities = exact.probabilities();
    if let Some(key) = empirical
        .counts
        .keys()
        .find(|k| !probabilities.contains_key(*k))
    {
        return Err(Error::UnsupportedOutcome { key: key.clone() });
    }
    let n = empirical.total as f64;
    // (expected, smallest key, observed)
    let mut cells: Vec<(f64, ConfigKey, f64)> = probabilities
        .iter()
        .map(|(k, p)| {
            (
                p.to_f64().unwrap_or(0.0) * n,
                k.clone(),
                empirical.count(k) as f64,
            )
        })
        .collect();
    let order = |a: &(f64, ConfigKey, f64), b: &(f64, ConfigKey, f64)| {
        a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1))
    };
    cells.sort_by(order);
    while cells.len() > 1 && cells[0].0 < 5.0 {
        let (e1, k1, o1) = cells.remove(0);
        let (e2, k2, o2) = cells.remove(0);
        cells.push((e1 + e2, k1.min(k2), o1 + o2));
        cells.sort_by(order);
    }
    let statistic: f64 = cells
        .iter()
        .filter(|c| c.0 > 0.0)
        .map(|(e, _, o)| (o - e) * (o - e) / e)
        .sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .sf(statistic)
    };
    Ok(GofResult {
        statistic,
        p_value,
        cells: cells.len(),
    })
}
