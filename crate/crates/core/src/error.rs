use thiserror::Error;

/// Errors produced by the library. The CLI maps every variant to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order must satisfy 2 <= a <= {max}, got {got}")]
    InvalidOrder { got: u32, max: u32 },

    #[error("resolution {resolution} is too coarse: need {needed}")]
    ResolutionTooCoarse { resolution: u32, needed: String },

    #[error("cell index {index} out of range for resolution {resolution}")]
    CellOutOfRange { index: u64, resolution: u32 },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("grid of {cells} cells exceeds the cell cap of {cap}")]
    MemoryGuard { cells: u64, cap: u64 },

    #[error("lemma check infeasible at k = {requested}: largest feasible k is {largest_feasible}")]
    LemmaInfeasible {
        requested: u32,
        largest_feasible: i64,
    },

    #[error("value vector of length {len} is not a power of the order {order}")]
    NotPowerOfOrder { len: usize, order: u32 },

    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: u32, got: u32 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
