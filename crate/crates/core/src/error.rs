use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrcError {
    #[error("input must be parity-homogeneous: {0}")]
    MixedParity(String),
    #[error("raiser {raiser} is not defined for the {algebra} algebra")]
    RaiserMismatch { raiser: String, algebra: String },
    #[error("vector is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("vector is not singular: {0}")]
    NotSingular(String),
    #[error("density weight mismatch: expected {expected}, got {got}")]
    WeightMismatch { expected: String, got: String },
    #[error("no consistent weight dictionary: {0}")]
    NoConsistentWeight(String),
    #[error("both bracket parameters are zero")]
    ZeroParameters,
    #[error("subalgebra {subalgebra} does not lie in {algebra}")]
    SubalgebraMismatch { subalgebra: String, algebra: String },
    #[error("degree bound {bound} is below order + 2 = {needed}")]
    DegreeBoundTooSmall { bound: u32, needed: u32 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unknown output format: {0}")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GrcError>;
