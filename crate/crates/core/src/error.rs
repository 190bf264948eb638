use thiserror::Error;

/// Errors raised by the algebra, the verification checks and the scenario driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },

    #[error("chart dimension {0} is odd; the standard symplectic form needs an even dimension")]
    OddDimension(usize),

    #[error("chart dimension {0} unsupported (must be between 1 and {max})", max = crate::forms::MAX_DIM)]
    ChartDimension(usize),

    #[error("superbundle mismatch: ({0}, {1}) vs ({2}, {3})")]
    BundleMismatch(usize, usize, usize, usize),

    #[error("invalid superbundle ranks ({0}, {1})")]
    InvalidRanks(usize, usize),

    #[error("basis index {index} out of range for rank {rank}")]
    BasisIndex { index: usize, rank: usize },

    #[error("{what} must have {expected} total degree")]
    Parity { what: String, expected: &'static str },

    #[error("2-form is not closed: d(omega) = {0}")]
    NotClosed(String),

    #[error("symplectic form must be a pure 2-form")]
    NotTwoForm,

    #[error("the two primitive superconnections use different symplectic forms")]
    SymplecticMismatch,

    #[error("power series does not terminate: {0}")]
    SeriesDivergence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series operation needs constant term {expected}, found {found}")]
    ConstantTerm { expected: &'static str, found: String },

    #[error("operator is not identifiable with an endomorphism pair: {0}")]
    NotIdentifiable(String),

    #[error("parse error at byte {pos} in {input:?}: {msg}")]
    Parse { input: String, pos: usize, msg: String },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("invalid generator bounds: {0}")]
    InvalidBounds(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Scenario(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
