use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no square root of {value} in field {field} (key {key})")]
    NoRootInField {
        key: String,
        value: String,
        field: String,
    },
    #[error("missing F-block {0:?}")]
    MissingBlock([usize; 4]),
    #[error("singular F-block {0:?}")]
    SingularBlock([usize; 4]),
    #[error("formula mismatch: {0}")]
    FormulaMismatch(String),
    #[error("rescaled M-matrix for {0:?} is not involutive")]
    NotInvolutive([usize; 3]),
    #[error("gauge block for {0:?} is not invertible")]
    NonInvertibleGauge([usize; 3]),
    #[error("power iteration for label {label} did not converge after {iterations} iterations")]
    NonConvergence { label: usize, iterations: usize },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("value {value} does not lie in field {field}")]
    FieldMismatch { value: String, field: String },
    #[error("invalid ring data: {0}")]
    RingInvalid(String),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("i/o error: {0}")]
    Io(String),
}
