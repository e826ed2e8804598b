use thiserror::Error;

/// Errors raised by the numerical and physical routines.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} out of range: {value}")]
    Domain { name: &'static str, value: f64 },

    /// A 2x2 matrix failed the density-matrix checks.
    #[error("invalid density matrix: {0}")]
    InvalidState(&'static str),

    /// An integral did not reach its tolerance within the evaluation budget.
    /// Carries the best estimate found so far.
    #[error("integration did not converge after {evaluations} evaluations (estimate {value}, error {error_estimate})")]
    Convergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64) -> Self {
        Error::Domain { name, value }
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
