//! Classical and quantum one-dimensional nonlinear harmonic oscillator.

pub mod classical;
pub mod eigenfunctions;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod params;
pub mod quadrature;
pub mod quantumgrid;
pub mod spectrum;
pub mod validate;
