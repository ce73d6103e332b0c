use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("non-finite {what} evaluation at x = {x:?}")]
    NonFiniteEvaluation { what: &'static str, x: Vec<f64> },

    #[error("steepest-descent subproblem did not converge (gap {gap:e})")]
    Subproblem { lambda: Vec<f64>, gap: f64 },

    #[error("degenerate denominator in {method} coefficient ({denominator:e})")]
    DegenerateDenominator {
        method: &'static str,
        denominator: f64,
    },

    #[error("line search failed: {0}")]
    LineSearch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            got,
        })
    }
}
