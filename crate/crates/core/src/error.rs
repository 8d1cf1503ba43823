use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (symmetry defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("channel is not trace preserving (defect {defect:.3e})")]
    NotTracePreserving { defect: f64 },

    #[error("function undefined at retained eigenvalue {eigenvalue}")]
    FunctionUndefined { eigenvalue: f64 },

    #[error("spectral norm {norm} exceeds 1")]
    NormExceeded { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("certification failed in {stage}: {detail}")]
    Certification { stage: String, detail: String },

    #[error("amplification failed: {0}")]
    Amplification(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error at {field}: {detail}")]
    Config { field: String, detail: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn cert(stage: &str, detail: impl Into<String>) -> Self {
        Error::Certification {
            stage: stage.to_string(),
            detail: detail.into(),
        }
    }

    /// True for errors that represent a failed numerical certificate rather than bad input.
    pub fn is_certification_failure(&self) -> bool {
        matches!(self, Error::Certification { .. } | Error::Amplification(_))
    }
}
