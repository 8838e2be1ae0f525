use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different root data (rank {0} vs {1})")]
    MixedData(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant {0} is not in the image of the Newton/Kottwitz map")]
    NotInImage(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("cache integrity error: {0}")]
    Integrity(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
