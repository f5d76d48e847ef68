use thiserror::Error;

/// Violations of the core domain invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("code point {0:#x} is not a Unicode scalar value")]
    InvalidSymbol(u32),
    #[error("range lower bound {lo:#x} exceeds upper bound {hi:#x}")]
    InvertedRange { lo: u32, hi: u32 },
    #[error("weight overflow adding {0} and {1}")]
    WeightOverflow(i64, i64),
    #[error("weight sequences of unequal length ({0} vs {1}) are not comparable")]
    LengthMismatch(usize, usize),
    #[error("unknown policy `{0}` (expected `min` or `max`)")]
    UnknownPolicy(String),
    #[error("invalid transducer: {0}")]
    InvalidMachine(String),
}
