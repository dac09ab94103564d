use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is well defined but not covered by this code path.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An integral that should be finite was found to diverge.
    #[error("divergent {quantity} near [{lo}, {hi}]: {reason}")]
    Divergent {
        quantity: String,
        lo: f64,
        hi: f64,
        reason: String,
    },

    /// The adaptive scheme ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {err_estimate:e}, worst panel [{worst_lo}, {worst_hi}])"
    )]
    NotConverged {
        estimate: f64,
        err_estimate: f64,
        subdivisions: usize,
        worst_lo: f64,
        worst_hi: f64,
    },

    /// The integrand produced NaN or an infinity at a sample point.
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// Divergence or convergence failure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergent { .. } | Error::NotConverged { .. } | Error::NonFinite { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
