use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, LemniError>;

#[derive(Debug, Error)]
pub enum LemniError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge for target value {target} after {iterations} iterations")]
    RootFinding { target: Complex64, iterations: usize },

    #[error("configuration has no constraint tag; a bounding radius override is required")]
    MissingBoundingRadius,

    #[error("no contour found: {0}")]
    NoContour(String),

    #[error("coefficient overflow at k = {k}")]
    CoefficientOverflow { k: usize },

    #[error("required degree {required} exceeds the cap {cap}")]
    DegreeCap { required: u64, cap: u64 },

    #[error("candidate count {count} exceeds the budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl LemniError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        LemniError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn csv(path: &std::path::Path, source: csv::Error) -> Self {
        LemniError::Csv {
            path: path.display().to_string(),
            source,
        }
    }
}
