use num_complex::Complex64;
use thiserror::Error;

/// Errors raised across the library.
///
/// The CLI maps these onto exit codes via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented parameter range (tau, truncation order, sizes).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An eigenvalue sits on or to the right of the imaginary axis.
    #[error("matrix/eigenvalue not stable: {context} (lambda = {lambda})")]
    Stability { lambda: Complex64, context: String },

    /// A computed quantity could not be trusted to the working accuracy.
    /// `partial` carries the best value obtained.
    #[error("accuracy error: {message} (partial value {partial:e})")]
    Accuracy { message: String, partial: f64 },

    /// An iteration ran out of budget. `best` is the best iterate found so far.
    #[error("convergence error: {message} after {iterations} iterations (best iterate {best:?})")]
    Convergence {
        message: String,
        iterations: usize,
        best: Vec<f64>,
    },

    /// The root bracket search for the optimal scale found no sign change.
    #[error("bracket error: no sign change of dphi/dtau in [{lo:e}, {hi:e}]")]
    Bracket { lo: f64, hi: f64 },

    /// A dense linear-algebra kernel failed (QR sweeps exhausted, singular factor).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Matrix dimensions do not fit the operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// The input is valid but outside what is implemented (defective matrices).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A generator configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// Reading, writing or parsing an external file failed.
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    /// Process exit code for the CLI: 2 input, 3 stability, 4 convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stability { .. } => 3,
            Error::Convergence { .. } | Error::Bracket { .. } => 4,
            Error::Parameter(_)
            | Error::Domain(_)
            | Error::Shape(_)
            | Error::Config(_)
            | Error::Input(_)
            | Error::Unsupported(_) => 2,
            Error::Accuracy { .. } | Error::Numerical(_) => 1,
        }
    }

    /// Prefixes the message of eigenvalue-level errors with the offending index.
    pub(crate) fn at_eigenvalue(self, index: usize) -> Self {
        match self {
            Error::Stability { lambda, context } => Error::Stability {
                lambda,
                context: format!("eigenvalue #{index}: {context}"),
            },
            Error::Accuracy { message, partial } => Error::Accuracy {
                message: format!("eigenvalue #{index}: {message}"),
                partial,
            },
            Error::Domain(m) => Error::Domain(format!("eigenvalue #{index}: {m}")),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
