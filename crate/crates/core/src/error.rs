use thiserror::Error;

/// Syntax error in a term, polynomial, or operator expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Algebra(String),
    #[error("invalid term: {0}")]
    Term(String),
    #[error("undefined value at {0}")]
    Undefined(String),
    #[error("no recurrence found up to order {max_order}")]
    OrderExhausted { max_order: usize },
    #[error("elimination failed within bounds {0}")]
    BoundsExhausted(String),
    #[error("no WZ pair: {0}")]
    NotWz(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("dual claim refuted: {0}")]
    NotConstant(String),
    #[error("invalid document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
