use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The quadratic first-order condition has no real root.
    #[error("complex roots: T1={t1:e}, T2={t2:e}, T3={t3:e}")]
    ComplexRoots { t1: f64, t2: f64, t3: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("policy failed at step {step}, agent {agent}: {source}")]
    Policy {
        step: usize,
        agent: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Input { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::ComplexRoots { .. } | Error::Domain(_) | Error::Precondition(_) => true,
            Error::Policy { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
