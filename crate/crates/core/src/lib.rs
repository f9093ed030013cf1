//! Uniform spanning trees and forests on finite weighted networks.
//!
//! Networks carry exact rational conductances. Trees are sampled with
//! Wilson's algorithm on free and wired truncations, modified by the
//! cycle-breaking update, and checked against exact oracles built from
//! spanning-tree enumeration and Laplacian solves.

pub mod batch;
pub mod error;
pub mod exact;
pub mod forest;
pub mod format;
pub mod generators;
pub mod network;
pub mod rng;
pub mod stats;
pub mod update;
pub mod verify;
pub mod walk;
pub mod wilson;

pub use error::{Error, Result};
pub use forest::{BoundaryForest, ConfigKey, SpanningTree};
pub use network::{
    ratio, rational, AnyNetwork, Edge, Network, OrientedEdge, Rational, VertexMergeMap,
    WiredNetwork,
};
pub use rng::RngHandle;
