use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero operator has no principal symbol")]
    ZeroOperator,
    #[error("unsupported decomposition: generator `{0}` is not a monomial")]
    NonMonomial(String),
    #[error("negative length bound {0}")]
    NegativeLength(i64),
    #[error("polynomial `{0}` is not homogeneous for the cotangent grading")]
    NotHomogeneous(String),
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("morphism is not filtered: {0}")]
    NotFiltered(String),
    #[error("morphism is not well defined: {0}")]
    NotWellDefined(String),
    #[error("presentation is already a left module")]
    AlreadyLeft,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("Gröbner computation exceeded the time limit")]
    Timeout,
}

pub type Result<T> = std::result::Result<T, Error>;
