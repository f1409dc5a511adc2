use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain where the model is defined.
    #[error("parameter `{param}` out of domain: {reason}")]
    Domain { param: &'static str, reason: String },

    /// The semiclassical working point could not be found.
    #[error("semiclassical solver failed: {0}")]
    Solver(String),

    /// A drift matrix has an eigenvalue with non-negative real part.
    #[error("drift matrix is not Hurwitz; eigenvalues: {eigenvalues:?}")]
    NotHurwitz { eigenvalues: Vec<(f64, f64)> },

    /// A linear system could not be solved.
    #[error("singular linear system: {0}")]
    Singular(String),

    /// No bracket around an interior minimum was found.
    #[error("bracketing failed: {0}")]
    Bracket(String),

    /// A numerical routine stopped before reaching its tolerance.
    #[error("not converged: {0}")]
    NotConverged(String),

    /// An operation was called outside its stated preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn domain(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            param,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
