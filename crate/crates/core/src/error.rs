//! Error type shared by all certification operations.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Shapes do not conform (non-square input, mismatched slice sizes, wrong
    /// tensor dimensions for a decision procedure).
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A parameter is outside its admissible range (compound order, index
    /// sets, zero trial counts).
    #[error("argument error: {0}")]
    Argument(String),
    /// A stated precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),
}
