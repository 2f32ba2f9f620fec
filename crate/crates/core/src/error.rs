use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("group order {0} exceeds the supported maximum of 64")]
    OrderTooLarge(u64),
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
    #[error("invalid semidirect parameters: {0}")]
    InvalidSemidirect(String),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("subset is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("annihilator oracle refuses n = {0} (limit 12)")]
    OracleTooLarge(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("order {0} is outside the complete catalog range 1..=12")]
    CatalogRange(usize),
    #[error("group of order {order} exceeds the exhaustive search cap of {cap}; use force to override")]
    SearchCap { order: usize, cap: usize },
    #[error("incomplete representation system: sum of squared degrees {sum} != group order {order}")]
    IncompleteRepSystem { sum: usize, order: usize },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("eigensolver did not converge")]
    Indeterminate,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
