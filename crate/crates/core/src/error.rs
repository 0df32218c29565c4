use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WonderError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("generator {index} is not invertible")]
    NonInvertible { index: usize },
    #[error("{what} cap of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("unknown preset {name:?}; available: {available}")]
    UnknownPreset { name: String, available: String },
    #[error("invalid preset parameters: {0}")]
    PresetParams(String),
    #[error("degenerate arc: {0}")]
    DegenerateArc(String),
    #[error("retry budget exhausted while sampling {0}")]
    RetryBudget(String),
    #[error("building set is not contained in the larger one: {0}")]
    NotSubBuildingSet(String),
    #[error("building set is not stable under the group: {0}")]
    NotEquivariant(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = WonderError> = std::result::Result<T, E>;
