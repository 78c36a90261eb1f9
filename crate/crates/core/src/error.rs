use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of an operation (zero constant term,
    /// vanishing denominator, out-of-range slice parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("newton solver did not converge at theta={theta}, t={t} after {iterations} iterations (last residual {residual:e})")]
    Solver {
        theta: f64,
        t: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("singular Segre variety: |d rho/dw| = {0:e} at the base point")]
    SingularSegre(f64),

    #[error("conformal mapping failed: {0}")]
    Mapping(String),

    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    #[error("inconsistent weight: imaginary leak {leak:e} exceeds {threshold:e}")]
    Inconsistent { leak: f64, threshold: f64 },

    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("moment test and Cauchy transform disagree: {0}")]
    OracleMismatch(String),

    #[error("structural error in obstruction solver: {0}")]
    Structural(String),

    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
