use thiserror::Error;

use crate::geometry::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid environment: {0}")]
    InvalidEnvironment(ValidationReport),

    #[error("grid would have {nodes} nodes, above the cap of {cap}")]
    NodeCap { nodes: u64, cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
