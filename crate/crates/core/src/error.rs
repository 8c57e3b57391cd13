use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid function representation: {0}")]
    InvalidGridFn(String),

    #[error("rearrangement is identically +inf: every super-level set has infinite measure")]
    InfiniteRearrangement,

    #[error("function is not integrable near 0; the maximal function is identically +inf")]
    NonIntegrable,

    #[error("invalid Young function: {0}")]
    InvalidYoung(String),

    #[error("generalized inverse is unbounded: no t with A(t) >= {0}")]
    UnboundedInverse(f64),

    #[error("domination verdict inconclusive: {0}")]
    Inconclusive(String),

    #[error("regime classification ambiguous: {0}")]
    ClassificationAmbiguous(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inadmissible space: {0}")]
    Inadmissible(String),

    #[error("Luxemburg bisection did not converge: {0}")]
    NonconvergentBisection(String),

    #[error("function is not supported in (0,1)")]
    SupportViolation,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("verdict indeterminate: {0}")]
    Indeterminate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
