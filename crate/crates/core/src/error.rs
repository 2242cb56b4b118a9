use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("conditioning failed: Gram condition number {condition_number:.3e} exceeds {limit:.1e}")]
    Conditioning { condition_number: f64, limit: f64 },

    #[error("root finder did not converge after {iterations} iterations (trial {trial:?}, max residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        trial: Option<u64>,
    },

    #[error("quadrature did not converge: {msg} (last two estimates {previous:.12e}, {current:.12e})")]
    Quadrature {
        msg: String,
        previous: f64,
        current: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    /// Attach a trial index, mainly so root-finder failures can be replayed.
    pub(crate) fn in_trial(self, trial: u64) -> Self {
        match self {
            Error::NonConvergence {
                iterations,
                residual,
                ..
            } => Error::NonConvergence {
                iterations,
                residual,
                trial: Some(trial),
            },
            e @ Error::Trial { .. } => e,
            other => Error::Trial {
                trial,
                source: Box::new(other),
            },
        }
    }
}
