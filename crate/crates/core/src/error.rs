use thiserror::Error;

/// Errors raised by the geometric and algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate hull: the points are collinear or fewer than three")]
    DegenerateHull,
    #[error("not a Fano polygon: {0}")]
    NotFano(String),
    #[error("degenerate cone: generators are zero or parallel")]
    DegenerateCone,
    #[error("invalid mutation data: {0}")]
    InvalidMutationData(String),
    #[error("no inverse mutation found (this is a bug)")]
    NoInverseFound,
    #[error("genus is not an integer for this basket")]
    NonIntegerGenus,
    #[error("mutability constraints are inconsistent")]
    EmptySpace,
    #[error("ray coordinate {0} is not integral")]
    NonIntegralRay(String),
    #[error("polynomial is not affine-linear in its parameters")]
    NotAffine,
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
}

impl Error {
    pub fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
