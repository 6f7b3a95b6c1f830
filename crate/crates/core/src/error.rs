use thiserror::Error;

/// Errors raised by the analytic engine and the Fock-space simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error("no table entry for {channel} {shape} nu={nu} (irrep {irrep}, rows {left_rows:?} / {right_rows:?})")]
    TableCoverage {
        channel: String,
        shape: String,
        nu: u8,
        irrep: String,
        left_rows: (usize, usize),
        right_rows: (usize, usize),
    },

    #[error("degenerate ensemble: {0}")]
    DegenerateEnsemble(String),

    #[error("Fock dimension {dim} exceeds cap {cap}")]
    ResourceLimit { dim: u128, cap: u128 },

    #[error("ambiguous Casimir block: {0}")]
    AmbiguousBlock(String),

    #[error("block dimension mismatch for {irrep}: expected {expected}, found {found}")]
    BlockDimensionMismatch {
        irrep: String,
        expected: u128,
        found: u128,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
