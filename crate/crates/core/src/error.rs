use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A fixed-width scalar could not hold an intermediate value.
    #[error("integer overflow in scalar arithmetic")]
    Overflow,
    #[error("representation count exceeds u64")]
    CountOverflow,
    #[error("window is too large to tabulate")]
    WindowTooLarge,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The polynomial has no h-th root with 0/1 coefficients.
    #[error("no 0/1-coefficient {h}-th root: {reason}")]
    NoRoot { h: usize, reason: String },
    #[error("table support is truncated at window edge {edge}")]
    Truncation { edge: String },
    #[error("invalid gadget parameters: {0}")]
    InvalidGadget(String),
    #[error("fewer than two distinct sums")]
    Degenerate,
    #[error("no admissible sparsity parameter within budget: {0}")]
    Sparsity(String),
    #[error("pair fails A*+T = B*+T (mod m)")]
    Congruence,
    #[error("head has {found} members in [0, 2N-1], expected N = {expected}")]
    HeadCount { expected: usize, found: usize },
    #[error("enumeration of {needed} tuples exceeds budget {budget}")]
    Budget { needed: u128, budget: u128 },
    /// A guarantee of the underlying theorem failed to hold. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
