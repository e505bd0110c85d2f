use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = IfeError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum IfeError {
    /// The interface crosses an element in a way the IFE construction does not
    /// cover (more than one cut point on an edge, or more than two per element).
    #[error("interface hypothesis violated{}: {reason}", element.map(|e| format!(" on element {e}")).unwrap_or_default())]
    HypothesisViolation {
        element: Option<usize>,
        reason: String,
    },

    #[error("local IFE system is singular (pivot ratio {pivot_ratio:.3e})")]
    SingularLocalSystem { pivot_ratio: f64 },

    #[error("conjugate gradients did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl IfeError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IfeError::Io {
            path: path.into(),
            source,
        }
    }
}
