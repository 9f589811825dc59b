use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` is already registered")]
    DuplicateVariable(String),

    #[error("variable id {id} out of range for a registry of {len} variables")]
    VariableOutOfRange { id: usize, len: usize },

    #[error("random rank sampling requires substituted parameters; found {0:?}")]
    UnsampledParameters(Vec<String>),

    #[error("operation requires numeric structure constants; unsubstituted parameters {0:?}")]
    UnsubstitutedParameters(Vec<String>),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("generators {left} and {right} bracket outside the chosen span")]
    NotClosed { left: String, right: String },

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),

    #[error("expected an odd-dimensional algebra, got dimension {0}")]
    EvenDimension(usize),

    #[error("not a contraction along this spec: structure constant {0} has a pole at the limit")]
    Pole(String),

    #[error("basis change is singular")]
    Singular,

    #[error("coefficient tuple must be nonzero")]
    ZeroTuple,

    #[error("family constraint violated: {0}")]
    Constraint(String),

    #[error("Jacobi identity fails for {0}")]
    Jacobi(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
