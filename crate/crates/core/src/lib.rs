//! Exact enumeration of T-tetromino tilings of `4m × 4n` rectangles, their
//! weighted generating function, and the multivariate Tutte polynomial of
//! the associated `m × n` grid graph.

pub mod baxter;
pub mod correspondence;
pub mod cycles;
pub mod enumerate;
pub mod error;
pub mod genfun;
pub mod lattice;
pub mod quadrature;
pub mod scalar;
pub mod tutte;
mod union_find;

pub use error::{Error, Result};
pub use scalar::{Complex64, Mode, Scalar, Value};
