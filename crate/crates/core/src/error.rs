use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("unknown generator `{0}`")]
    Registry(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("no μ-factorization: {0}")]
    Factorization(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("word has no jumps")]
    NoJump,
    #[error("decode error: {0}")]
    Decode(String),
    #[error("eigenvalue error: {0}")]
    Eigen(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}
