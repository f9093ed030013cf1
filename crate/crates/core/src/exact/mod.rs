//! Exact oracles in rational arithmetic: spanning-tree enumeration,
//! matrix-tree totals, effective resistances, current flows and the exact
//! laws of conditioned and updated trees. [`numeric`] holds a
//! double-precision solver for large networks.

pub mod electrical;
pub mod enumerate;
pub mod linalg;
pub mod numeric;

pub use electrical::{
    effective_resistance, spanning_tree_count, tree_weight_total, unit_current_flow,
    unit_potentials, ust_edge_marginal, CurrentFlow,
};
pub use enumerate::{
    direction_distribution, enumerate_spanning_trees, exact_conditioned_distribution,
    exact_update_pushforward, exact_wired_update_pushforward, minor_tree_distribution,
    ExactTreeDistribution, ENUMERATION_LIMIT,
};
pub use numeric::{effective_resistance_f64, ust_edge_marginal_f64};
