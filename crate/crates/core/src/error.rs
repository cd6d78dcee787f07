use thiserror::Error;

/// Errors produced by field operations, the time stepper and the runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("padding factor {padding} cannot resolve a degree-{degree} product exactly")]
    InsufficientPadding { padding: String, degree: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("fixed-point iteration did not converge: tau fell to {tau:e} (residual {residual:e})")]
    PicardDivergence { tau: f64, residual: f64 },

    #[error("dense oracle limited to n <= {max}, got n = {n}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("config line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },

    #[error("config: {0}")]
    ConfigInvalid(String),

    #[error("file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status: 2 configuration, 3 solver, 4 I/O or format.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigParse { .. }
            | Error::ConfigInvalid(_)
            | Error::InvalidParam(_)
            | Error::InvalidGrid(_)
            | Error::InsufficientPadding { .. } => 2,
            Error::Io(_) | Error::Format(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn non_finite(context: impl Into<String>) -> Error {
    Error::NonFinite {
        context: context.into(),
    }
}
