use thiserror::Error;

use crate::quiver::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("operands live over different quivers")]
    QuiverMismatch,
    #[error("truncation degree mismatch ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("term `{0}` is not a cyclic path")]
    NonCyclic(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("arrow `{0}` is a loop")]
    Loop(String),
    #[error("substitution image of `{0}` has the wrong endpoints")]
    BadImage(String),
    #[error("linear part of the substitution is singular")]
    SingularLinearPart,
    #[error("vertex {0} lies on an oriented 2-cycle")]
    TwoCycleThroughVertex(Vertex),
    #[error("consecutive repeated vertex {0} in mutation sequence")]
    RepeatedVertex(Vertex),
    #[error("degree-0 term in a potential")]
    ConstantInPotential,
    #[error("representation error: {0}")]
    Representation(String),
    #[error("truncation degree {have} is below the required {need}")]
    TruncationShortfall { have: usize, need: usize },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
