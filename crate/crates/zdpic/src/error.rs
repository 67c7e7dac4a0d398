use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("arity error: {0}")]
    Arity(String),
    #[error("diagram is not closed ({top} top, {bottom} bottom points)")]
    NotClosed { top: usize, bottom: usize },
    #[error("index error: {0}")]
    Index(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate refused: {0}")]
    CertificateRefused(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
