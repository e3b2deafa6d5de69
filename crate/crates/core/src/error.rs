use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge after {iterations} iterations (last change {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("operator is not Hermitian: max |A - A^dag| = {deviation:.3e} ({context})")]
    NotHermitian { deviation: f64, context: String },

    #[error("state norm {norm} deviates from 1")]
    BadNorm { norm: f64 },

    #[error("numerical inconsistency: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Validation errors are caller mistakes; everything else is a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter(_))
    }
}
