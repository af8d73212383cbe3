use thiserror::Error;

use crate::grid::{Square, Vertex};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid dimensions {p}x{q}: both must be at least 1")]
    InvalidDimensions { p: u32, q: u32 },

    #[error("vertex {vertex} lies outside the {p}x{q} grid")]
    VertexOutOfRange { vertex: Vertex, p: u32, q: u32 },

    #[error("square {square} lies outside the board of the {p}x{q} grid")]
    SquareOutOfRange { square: Square, p: u32, q: u32 },

    #[error("prefix length {r} out of range 1..={p}")]
    PrefixOutOfRange { r: u32, p: u32 },

    #[error("objects belong to different grids: {0}x{1} vs {2}x{3}")]
    GridMismatch(u32, u32, u32, u32),

    #[error("invalid domino: {0}")]
    InvalidDomino(String),

    #[error("invalid tiling: {0}")]
    InvalidTiling(String),

    #[error("not a Hamiltonian path: {0}")]
    NotHamiltonian(String),

    #[error("refusing to enumerate a {p}x{q} grid ({cells} vertices > soft limit {limit}); force to override")]
    EnumerationLimit {
        p: u32,
        q: u32,
        cells: u64,
        limit: u64,
    },

    #[error("render payload does not match kind {0}")]
    PayloadMismatch(&'static str),

    #[error("render cell size {0} is below the minimum of 8")]
    CellSizeTooSmall(u32),

    /// A structural claim of the bijection failed on a concrete instance.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
