use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cap `{name}` exceeded: limit {limit}, requested {requested}")]
    CapExceeded {
        name: &'static str,
        limit: usize,
        requested: usize,
    },
    #[error("boundary arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("patch is degenerate")]
    DegeneratePatch,
    #[error("patch is not linked")]
    NotLinked,
    #[error("patch {0} is not refined")]
    NotRefined(usize),
    #[error("not embedded: {0}")]
    NotEmbedded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("no stabilization within {0} powers")]
    NoStabilization(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
