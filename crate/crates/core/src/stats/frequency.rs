use rand::Rng;

use super::components::ComponentPartition;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::walk::walk_step;

/// Occupation counts of a single long walk, per forest component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyEstimate {
    pub counts: Vec<u64>,
    /// Steps spent on vertices outside every component (the wired vertex).
    pub unassigned: u64,
    pub steps: u64,
}

impl FrequencyEstimate {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.steps as f64)
            .collect()
    }

    pub fn unassigned_frequency(&self) -> f64 {
        self.unassigned as f64 / self.steps as f64
    }
}

/// Fraction of the positions `X_1, ..., X_N` of a conductance-weighted
/// walk from `start` that fall in each component of `partition`.
pub fn estimate_frequencies<R: Rng + ?Sized>(
    network: &Network,
    partition: &ComponentPartition,
    start: usize,
    steps: u64,
    rng: &mut R,
) -> Result<FrequencyEstimate> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "frequency estimation needs at least one step".into(),
        ));
    }
    let mut counts = vec![0u64; partition.count()];
    let mut unassigned = 0;
    let mut x = start;
    for _ in 0..steps {
        x = walk_step(network, x, rng)?.head(network);
        match partition.component(x) {
            Some(c) => counts[c] += 1,
            None => unassigned += 1,
        }
    }
    Ok(FrequencyEstimate {
        counts,
        unassigned,
        steps,
    })
}
