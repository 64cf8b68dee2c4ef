//! Tree decompositions of embedded planar graphs.
//!
//! The library computes tree decompositions whose width is bounded by a
//! constant multiple of the treewidth for planar graphs given with a
//! combinatorial embedding (rotation system plus designated outer face).
//! The pipeline peels the embedding into height layers, splits the graph
//! into single-summit regions along crest separators, cuts tall regions
//! off with small coast separators found by network flow, decomposes the
//! remaining flat parts with a modified nested-layers algorithm, and
//! stitches everything back together, recursing into the tall regions.
//!
//! Entry points: [`decompose::decompose`] for the full search over the
//! width budget, [`decompose::decompose_fixed_k`] for one budget, and the
//! validators and exact oracles in [`verify`].

pub mod coastsep;
pub mod crestsep;
pub mod decompose;
pub mod embed;
pub mod fmt;
pub mod gen;
pub mod layering;
pub mod mountain;
pub mod outer_td;
pub mod shortcuts;
pub mod verify;

pub use decompose::{decompose, decompose_fixed_k, DecomposeConfig, DecomposeStats};
pub use embed::EmbeddedGraph;
pub use layering::HeightMap;
pub use outer_td::TreeDecomposition;

/// Vertex identifier. Graphs are always indexed densely from zero.
pub type VertexId = u32;

/// Errors raised while building or transforming embedded graphs.
#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("not simple: {0}")]
    NotSimple(String),
    #[error("invalid rotation system: {0}")]
    BadRotation(String),
    #[error("embedding violation: {0}")]
    BadEmbedding(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Errors raised by the decomposition pipeline.
#[derive(Debug, thiserror::Error)]
pub enum DecomposeError {
    /// The width budget `k` is too small for the instance; certified by a
    /// missing coast separator or a violated size bound.
    #[error("k = {k} too small: {reason}")]
    KTooSmall { k: u32, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
