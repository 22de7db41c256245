use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hypothesis needed for a bound or construction does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("incompatible quadratic fields: sqrt({0}) and sqrt({1})")]
    IncompatibleField(String, String),

    #[error("multitwist is not affine: twist/modulus ratios {0} and {1} differ")]
    NotAffine(String, String),

    #[error("not pseudo-Anosov: |trace| = {0} is at most 2")]
    NotPseudoAnosov(String),

    #[error("unknown curve label {0:?}")]
    UnknownCurve(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Adaptive quadrature did not reach its tolerance within the budget.
    #[error("quadrature did not converge: {intervals} subintervals used, last error estimate {estimate:e}")]
    Convergence { intervals: usize, estimate: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}
