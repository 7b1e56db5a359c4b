//! Exact verification toolkit for quasi-split real forms of complex reductive groups.
//!
//! Everything is computed over the Gaussian rationals ℚ(i): Cartan decompositions,
//! restricted roots, Chevalley maps and Kostant-Rallis sections, regular centralizers,
//! cameral covers over a weighted projective line, and torus-valued sections over
//! finite cameral fibers.

// index loops mirror the linear algebra they implement
#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod cameral;
pub mod centralizers;
pub mod chevalley;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod lie;
pub mod matrix;
pub mod mpoly;
pub mod poly;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod sheaves;
pub mod torus;

pub use error::{Error, Result};
pub use matrix::{LinearSolution, Matrix};
pub use mpoly::{MPoly, PolyMatrix};
pub use poly::UPoly;
pub use scalar::Scalar;
