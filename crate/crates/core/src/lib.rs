//! Exact certification of low border rank for small 3-tensors.
//!
//! The crate decides membership of small complex 3-tensors in low secant
//! varieties by evaluating polynomial conditions exactly over Q(i):
//!
//! - border rank ≤ 3 and ≤ 4 for 3×3×3 tensors (commutation conditions and
//!   the degree-9 hypersurface),
//! - border rank ≤ 4 for 3×3×4 tensors (symmetrizer-system ranks plus a
//!   degree-16 identity),
//! - border rank ≤ 4 for 4×4×4 tensors (a complete decision procedure and a
//!   sampled polynomial certificate),
//! - rank = l for tensors whose third slice span has dimension l (quadric
//!   spaces of 2×2 minors and their orthogonal complements).
//!
//! All certification arithmetic is exact; every vanishing test is a zero
//! test in Q(i), never a tolerance comparison. The only floating-point code
//! is the advisory [`secant::decompose_numeric`] helper, which is quarantined
//! from every certification path.

mod fastint;

pub mod certify444;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod strassen;
pub mod symmetrize;
pub mod tensor;

pub use error::Error;
pub use linalg::{GaussianRational, IndexSet, Matrix};
pub use symmetrize::{Outcome, Verdict};
pub use tensor::{SliceSpace, Tensor3};
