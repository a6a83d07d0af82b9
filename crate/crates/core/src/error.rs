//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by any module of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Construction from an empty input vector.
    #[error("empty vector")]
    EmptyVector,

    /// Weight profiles can only be compared when their totals agree exactly.
    #[error("incomparable: totals differ")]
    IncomparableTotals,

    /// Robin-Hood transfer with an amount outside `(0, (w_i - w_j)/2)`.
    #[error("invalid transfer amount")]
    InvalidTransfer,

    /// Index outside the profile dimension.
    #[error("index {index} out of bounds for dimension {dim}")]
    IndexOutOfBounds { index: usize, dim: usize },

    /// Flattening requires at least one positive weight.
    #[error("zero vector has no flat form")]
    ZeroVectorFlatten,

    /// An operation that divides by the input norm received a zero vector.
    #[error("zero vector")]
    ZeroVector,

    /// Sign enumeration over the support would exceed the configured cap.
    #[error("enumeration too large: support {k} exceeds cap {cap}")]
    EnumerationTooLarge { k: usize, cap: usize },

    /// Exact convolution grew past the configured atom cap.
    #[error("instance too large for exact law: {atoms} atoms exceed cap {cap}")]
    AtomCapExceeded { atoms: usize, cap: usize },

    /// Exact sign enumeration needs all pairwise weight ratios to be perfect
    /// rational squares; this profile has none such representation.
    #[error("weights at index {index} are not square-commensurable with the support; exact enumeration unavailable")]
    Incommensurable { index: usize },

    /// Support too large for the Khintchine sign enumeration.
    #[error("support {k} exceeds enumeration cap {cap}, use flat-vector or Gaussian bound")]
    KhintchineCap { k: usize, cap: usize },

    /// An epsilon grid must be nonempty, positive and strictly increasing.
    #[error("eps grid must be nonempty, positive and strictly increasing")]
    InvalidGrid,

    /// Embedding density outside `(0, 1]`, or inconsistent with the scheme.
    #[error("invalid density {density} for scheme {scheme}")]
    InvalidDensity { density: f64, scheme: &'static str },

    /// Every input column was identically zero.
    #[error("all columns are zero")]
    AllColumnsZero,

    /// Catch-all for violated call preconditions.
    #[error("{0}")]
    Invalid(String),

    /// Parse failure in an input file, located by line.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
