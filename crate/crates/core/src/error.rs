use thiserror::Error;

pub type Result<T> = std::result::Result<T, ScatterError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatterError {
    #[error("operator is not unitary (max |UU† - 1| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("product state factor is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("model has dimension {found}, operation requires dimension {expected}")]
    WrongDimension { expected: u8, found: u8 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("table {table} row {row}: sign constraint {condition} violated")]
    SignConstraint { table: &'static str, row: usize, condition: &'static str },

    #[error("table {table} has no row {row}")]
    InvalidRow { table: &'static str, row: usize },

    #[error("threshold maps to infinity under momentum inversion")]
    ThresholdToInfinity,

    #[error("model carries no symmetry family tag")]
    MissingFamily,

    #[error("momentum grid too coarse at p = {p}: phase jump {jump} exceeds {limit}; refine the grid")]
    GridTooCoarse { p: f64, jump: f64, limit: f64 },

    #[error("momentum grid must be strictly increasing and positive ({0})")]
    BadGrid(String),

    #[error("singular point at p = {p}: {what}")]
    Singular { p: f64, what: &'static str },

    #[error("zero separation between points")]
    ZeroSeparation,

    #[error("{0}")]
    Unsupported(String),

    #[error("integration failed at tau = {tau}: {reason}")]
    Integration { tau: f64, reason: String },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> ScatterError {
    ScatterError::InvalidParameter { name, reason: reason.into() }
}
