//! Numerical toolkit for the boundary-controlled 1-D heat equation on
//! `(0, π)` and the complex-analytic function spaces its reachable states
//! live in.
//!
//! The crate simulates the control system in Fourier-sine coefficient
//! space, synthesizes boundary controls for analytic targets, and verifies
//! by quadrature the structural facts behind the solver: the isometric
//! chain from controls to a sector Bergman space, Cauchy-transform
//! decomposition of boundary data into sector pieces, and a constructive
//! Cousin-type splitting through a Cauchy-Pompeiu dbar solver.

pub mod cauchy;
pub mod cousin;
pub mod error;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod heat;
pub mod quad;
pub mod report;
pub mod signal;
pub mod spaces;
pub mod transforms;

pub use error::{Error, Result};
