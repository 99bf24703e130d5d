//! Exact scalar field and matrix kernel.

mod matrix;
mod scalar;

pub use matrix::{IndexSet, Matrix};
pub use scalar::GaussianRational;
