use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("empty sequence")]
    EmptySequence,

    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    /// A rollout produced a NaN or infinite state.
    #[error("rollout diverged: state {index} is not finite")]
    Divergence { index: usize },

    /// A log-barrier was evaluated outside the strictly feasible region.
    #[error("infeasible point at stage {stage}, constraint component {component} (value {value:e})")]
    Infeasible {
        stage: usize,
        component: usize,
        value: f64,
    },

    /// Cholesky factorization of a (regularized) control Hessian failed.
    #[error("matrix {what} is not positive definite at stage {stage}")]
    Definiteness { what: &'static str, stage: usize },

    /// `I + C Y` was singular while combining value elements.
    #[error("singular system while combining value elements")]
    Conditioning,

    #[error("regularization exceeded {alpha:e} without finding a descent step")]
    Stalled { alpha: f64 },

    #[error("derivative {name} disagrees with finite differences (abs {abs:e}, rel {rel:e})")]
    DerivativeMismatch { name: String, abs: f64, rel: f64 },

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Failures that signal the Newton subproblem was ill-posed for the
    /// current regularization, i.e. recoverable by increasing it.
    pub fn is_regularization_failure(&self) -> bool {
        matches!(self, Error::Definiteness { .. } | Error::Conditioning)
    }
}
