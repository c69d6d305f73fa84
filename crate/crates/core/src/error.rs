use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: max |H - H^†| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("K = {k} is too small: E_{setting}^{{n+1}} has minimum eigenvalue {min_eigenvalue:e}")]
    KTooSmall {
        k: f64,
        setting: usize,
        min_eigenvalue: f64,
    },

    #[error("search space too large: {count} strategies exceed the limit of {limit}")]
    SearchTooLarge { count: u128, limit: u128 },

    #[error("degenerate denominator: classical bound {0:e} is not positive")]
    DegenerateDenominator(f64),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
