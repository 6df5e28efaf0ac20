use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite integrand value {value} at node y = {node}")]
    NonFinite { node: f64, value: f64 },

    #[error(
        "coverage constraint infeasible: max attainable sum of log coverage {max_log_coverage:.6e} \
         is below the required {required:.6e}"
    )]
    Infeasible { max_log_coverage: f64, required: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("target family-wise coverage {target} not bracketed: attained range [{low}, {high}]")]
    NotBracketed { target: f64, low: f64, high: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
