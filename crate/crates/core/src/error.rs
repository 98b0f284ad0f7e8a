//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A tensor was constructed with a zero dimension or a value buffer of
    /// the wrong length.
    #[error("invalid tensor shape: dims {dims:?} require {expected} values, got {got}")]
    InvalidShape {
        dims: (usize, usize, usize),
        expected: usize,
        got: usize,
    },

    /// Mode-product (or contraction) size mismatch along one mode.
    #[error("mode-{mode} size mismatch: tensor has {tensor_len}, operand has {operand_len}")]
    ModeMismatch {
        mode: usize,
        tensor_len: usize,
        operand_len: usize,
    },

    /// Two tensors that must share dimensions do not.
    #[error("tensor dimensions differ: {left:?} vs {right:?}")]
    DimsMismatch {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },

    /// Two matrices that must share a shape (or column count) do not.
    #[error("matrix shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// Two vectors that must share a length do not.
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Requested rank outside the admissible range.
    #[error("rank {r} out of range, must be between 1 and {max}")]
    RankOutOfRange { r: usize, max: usize },

    /// An operation that requires a cubical tensor received a non-cubical one.
    #[error("tensor is not cubical: dims {dims:?}")]
    NotCubical { dims: (usize, usize, usize) },

    /// The first two dimensions must agree for partial antisymmetry.
    #[error("first two dimensions differ: {n1} vs {n2}")]
    NotSquareSlices { n1: usize, n2: usize },

    /// Input failed the antisymmetry validator.
    #[error("tensor is not antisymmetric within tolerance {tol:e}")]
    NotAntisymmetric { tol: f64 },

    /// Input failed the partial antisymmetry validator.
    #[error("tensor is not antisymmetric in modes 1 and 2 within tolerance {tol:e}")]
    NotPartiallyAntisymmetric { tol: f64 },

    /// A solver received the zero tensor.
    #[error("input tensor is zero")]
    ZeroTensor,

    /// A solver received NaN or infinite entries.
    #[error("input tensor has non-finite entries")]
    NonFinite,

    /// Tensor too small for the requested operation.
    #[error("dimension {n} too small, need at least {min}")]
    TooSmall { n: usize, min: usize },

    /// Solver configuration violates its invariants.
    #[error("invalid solve configuration: {reason}")]
    InvalidConfig { reason: String },

    /// The given vectors are (numerically) linearly dependent.
    #[error("vectors are linearly dependent")]
    DependentVectors,

    /// A matrix that must have orthonormal columns does not.
    #[error("columns are not orthonormal within tolerance {tol:e}")]
    NotOrthonormal { tol: f64 },

    /// A vector that must have unit norm does not.
    #[error("vector is not unit length within tolerance {tol:e}")]
    NotUnit { tol: f64 },

    /// A solver could not recover from degenerate iterates.
    #[error("solver degenerated: {reason}")]
    Degenerate { reason: String },

    /// Text-format parse failure.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
