use thiserror::Error;

use crate::bundle::BundlePoint;

/// A sample of a trajectory: flow time and position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub point: BundlePoint,
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the domain of the operation (chart, bundle, shell...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation on the zero-section where the object is not defined.
    #[error("singular locus: {0}")]
    Singular(String),

    /// An integrated trajectory left the chart or reached the bundle boundary.
    #[error("trajectory escaped: {reason}")]
    Escape {
        reason: String,
        partial: Box<Vec<TrajectorySample>>,
    },

    /// A Reeb orbit whose iterate ratio is an integer.
    #[error("degenerate orbit: {0}")]
    Degenerate(String),

    /// A hypothesis of the computation does not hold; the message names it.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The enumerator produced a classification different from the expected one.
    #[error("classification failure: {message}")]
    Classification {
        message: String,
        survivors: Vec<String>,
    },

    /// The search space exceeded the configured budget.
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn escape(reason: impl Into<String>, partial: Vec<TrajectorySample>) -> Self {
        Error::Escape {
            reason: reason.into(),
            partial: Box::new(partial),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
