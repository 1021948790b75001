use thiserror::Error;

/// Errors raised across the packing library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is numerically rank deficient (smallest singular value {smallest:.3e}, threshold {threshold:.3e})")]
    RankDeficient { smallest: f64, threshold: f64 },

    #[error("Gram matrix is not positive semidefinite (min eigenvalue {min_eig:.3e}, max {max_eig:.3e})")]
    NotPsd { min_eig: f64, max_eig: f64 },

    #[error("Gram matrix rank exceeds {d}: eigenvalue {next:.3e} against leading {leading:.3e}")]
    RankExceeded { d: usize, next: f64, leading: f64 },

    #[error("diagonal block {block} is numerically singular (min eigenvalue {min_eig:.3e})")]
    SingularBlock { block: usize, min_eig: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("numerical failure at iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("initial configuration failed: accepted {accepted} of {wanted} subspaces after {draws} draws")]
    InitFailure {
        accepted: usize,
        wanted: usize,
        draws: usize,
    },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }
}
