use thiserror::Error;

/// Errors produced by the capacity library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root search could not find (or build) a bracket with a sign change.
    #[error("bracketing error: {0}")]
    Bracketing(String),

    /// An iterative method failed to reach its tolerance.
    #[error("numerical failure: {what} (best estimate {estimate:e}, error bound {error_bound:e})")]
    Numerical {
        what: String,
        estimate: f64,
        error_bound: f64,
    },

    /// A failure while solving for the occupancy of one mode of a grid.
    #[error("mode {index}: {source}")]
    Mode {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(what: impl Into<String>, estimate: f64, error_bound: f64) -> Self {
        Error::Numerical {
            what: what.into(),
            estimate,
            error_bound,
        }
    }

    /// True for errors caused by invalid input rather than by a numerical method.
    pub fn is_domain(&self) -> bool {
        match self {
            Error::Domain(_) => true,
            Error::Mode { source, .. } => source.is_domain(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
