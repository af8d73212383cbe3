//! Hamiltonian paths on odd-even directed grid graphs, the domino tilings
//! they correspond to, and the closed-form counts that go with them.

pub mod bijection;
pub mod closed_forms;
pub mod error;
pub mod grid;
pub mod ham;
pub mod par;
pub mod render;
pub mod tiling;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{build_grid, square_color, Arc, Grid, Square, SquareColor, Vertex};
pub use ham::{
    count_ham_paths, count_prefix, enumerate_ham_paths, fibonacci, predicted_endpoints,
    CountMethod, HamPath,
};
pub use par::Execution;
pub use tiling::{
    avoids, canonical_numbering, count_tilings_exact, enumerate_tilings, CanonicalNumbering,
    Domino, Orientation, Tiling, WhiteSide,
};
