use thiserror::Error;

use crate::kappa::Kappa;
use crate::quadrinomial::Family;
use crate::roots::RootSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,

    #[error("polynomial degree {degree} is below the required minimum {min}")]
    DegreeTooLow { degree: usize, min: usize },

    #[error("root solver did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
        /// Best iterate reached before the budget ran out.
        best: Box<RootSet>,
    },

    #[error("z = {root} is not a root: synthetic division stage {stage} left remainder {remainder:e}")]
    RootNotPresent {
        root: f64,
        stage: usize,
        remainder: f64,
    },

    #[error("no sign change of U'_{n} in bracket {index}")]
    BracketFailure { n: usize, index: usize },

    #[error("({family}, kappa = {kappa}, N = {n}) is not a tabulated limit case")]
    NotALimitCase { family: Family, kappa: Kappa, n: u32 },

    #[error("{what} requires {expected} N, got N = {n}")]
    ParityMismatch {
        what: &'static str,
        expected: &'static str,
        n: u32,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::BracketFailure { .. } | Error::RootNotPresent { .. }
        )
    }
}
