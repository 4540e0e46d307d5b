//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors raised by constructors, parsers, and enumeration guards.
#[derive(Debug, Error)]
pub enum Error {
    /// The entries do not form a permutation of 1..=n.
    #[error("not a permutation: {0}")]
    NotPermutation(String),

    /// A textual form could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An enumeration over S_n was requested beyond the configured cap.
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    /// A mark index outside 1..=len.
    #[error("mark position {mark} out of range for pattern of length {len}")]
    MarkOutOfRange { mark: usize, len: usize },

    /// Pattern sets must be nonempty.
    #[error("pattern set is empty")]
    EmptyPatternSet,

    /// Pattern sets must contain patterns of one common length.
    #[error("pattern set mixes lengths")]
    MixedPatternLengths,

    /// The all-zero mesh spec matches every position of every permutation;
    /// it is rejected where a defining pattern set is requested.
    #[error("mesh spec (0,0,0,0) is trivial; no pattern set is derived for it")]
    TrivialMeshSpec,

    /// Invalid arguments to a value insertion.
    #[error("invalid insertion: {0}")]
    InvalidInsertion(String),

    /// A starred 132-avoider that violates its invariants.
    #[error("invalid marked avoider: {0}")]
    InvalidMarkedAvoider(String),

    /// An inverse construction needs exactly one marked match.
    #[error("no unique marked match: {0}")]
    NoUniqueMatch(String),

    /// A non-dominant cell set that no permutation diagram produces.
    #[error("inconsistent non-dominant set: {0}")]
    InconsistentNdSet(String),

    /// A Ferrers board with no filling.
    #[error("board has no filling: {0}")]
    Unfillable(String),

    /// Mismatched board/filling/set shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Any other invalid argument.
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
