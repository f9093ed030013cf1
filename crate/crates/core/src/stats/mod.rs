//! Component statistics of sampled forests, goodness-of-fit tests against
//! exact laws, and mass-transport and reversibility identities.

pub mod components;
pub mod frequency;
pub mod gof;
pub mod structure;
pub mod transport;

pub use components::{components, forest_components, ComponentPartition};
pub use frequency::{estimate_frequencies, FrequencyEstimate};
pub use gof::{chi_square_gof, EmpiricalDistribution, GofResult};
pub use structure::{
    average_degree, component_spine_log_conductance, core_vertices, ends_lower_bound, future_set,
    hausdorff_counts, log_rational, mean_log_conductance, past_set, spine_profile,
};
pub use transport::{biased_step_law, mtp_check, reversibility_check};
