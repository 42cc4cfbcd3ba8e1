//! Crushtaceans: trivalent graphs with a rotation system and green
//! crossing-circle edges, and the involution criteria on them.

mod forest;
mod graph;
mod involution;

pub use forest::{validate_forest, ForestTree, SpanningForest};
pub use graph::{build_pretzel_crushtacean, Edge, EdgeColor, EmbeddedGraph};
pub use involution::{
    automorphisms, cdw_criterion, find_edge_involution, find_involutions, CdwReport, EdgeCheck,
    GraphAutomorphism, GraphInvolution, InvolutionReport, Orientation,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("n = {0} is not allowed: the pretzel link needs n >= 3 to be hyperbolic")]
    NotHyperbolic(u64),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("edge {0} is not a green (crossing-circle) edge")]
    NotGreen(usize),
    #[error("twist vector has length {got}, expected {expected} (one per green edge)")]
    LengthMismatch { expected: usize, got: usize },
    #[error("forest does not span: vertices {0:?} are not covered")]
    NotSpanning(Vec<usize>),
    #[error("tree {0} of the forest contains a cycle")]
    Cyclic(usize),
    #[error("vertex {0} belongs to more than one tree of the forest")]
    TreesOverlap(usize),
    #[error("tree {0} of the forest is not connected")]
    DisconnectedTree(usize),
    #[error("cannot parse graph: {0}")]
    Parse(String),
}
