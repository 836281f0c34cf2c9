use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid block ({n},{k}): need 0 <= k <= n and n >= {min_n}")]
    InvalidBlock { n: i64, k: i64, min_n: u32 },

    #[error("position {pos} out of range 0..={len}")]
    OutOfRange { pos: BigUint, len: BigUint },

    #[error("word of length {len} exceeds cap {cap}; use positional queries instead")]
    CapExceeded { len: BigUint, cap: u64 },

    #[error("degenerate renormalization denominator for block ({n},{k})")]
    DegenerateDenominator { n: u32, k: u32 },

    #[error("T undefined up to depth {depth}: point stays on a tower top at every level")]
    UndefinedAtDepth { depth: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
