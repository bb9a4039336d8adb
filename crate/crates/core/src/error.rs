use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not an obstruction candidate: {0}")]
    NotObstruction(String),
    #[error("norm is -inf / degenerate: {0}")]
    Degenerate(String),
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("linear program is infeasible: {0}")]
    Infeasible(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("comparison undecided after escalating to {0} bits")]
    Undecided(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
