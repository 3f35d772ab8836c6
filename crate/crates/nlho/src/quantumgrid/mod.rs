//! Finite-difference operator workbench: grids, stencil operators, the
//! banded oracle eigensolver, matrix functions, the quantum complexifier,
//! and coherent-state constructions.

pub mod coherent;
pub mod complexifier;
pub mod expm;
pub mod grid;
pub mod operators;

pub use grid::{Grid, GridState};
pub use operators::GridOperator;
