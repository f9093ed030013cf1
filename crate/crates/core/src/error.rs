use thiserror::Error;

/// Errors produced by network construction, exact oracles, samplers and updates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("network is disconnected")]
    DisconnectedNetwork,
    #[error("invalid edge {edge}: {reason}")]
    InvalidEdge { edge: usize, reason: String },
    #[error("edge {edge} has a non-positive conductance")]
    NonpositiveConductance { edge: usize },
    #[error("vertex {vertex} is out of range")]
    InvalidVertex { vertex: usize },
    #[error("vertex set must be a proper nonempty subset for wiring")]
    EmptyExterior,
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("contract set contains a cycle")]
    CycleInContractSet,
    #[error("delete and contract sets overlap on edge {edge}")]
    OverlappingMinorSets { edge: usize },
    #[error("network has {count} spanning trees, above the enumeration limit of {limit}")]
    TooManyTrees { count: String, limit: u64 },
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: usize },
    #[error("conditioning event has probability zero")]
    NullConditioningEvent,
    #[error("vertex {vertex} has no incident edges")]
    IsolatedVertex { vertex: usize },
    #[error("random walk exceeded the step cap of {cap}")]
    StepCapExceeded { cap: u64 },
    #[error("invalid vertex order: {0}")]
    InvalidVertexOrder(String),
    #[error("edge {edge} starts at the wired vertex")]
    WiredEndpoint { edge: usize },
    #[error("sampled configuration {key:?} is outside the exact support")]
    UnsupportedOutcome { key: Vec<usize> },
    #[error("transport assigns negative mass from {from} to {to}")]
    NegativeMass { from: usize, to: usize },
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
