//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A required column is missing from an input header.
    #[error("schema error: missing column `{0}`")]
    Schema(String),

    /// A cell could not be parsed. Rows are 1-based data rows (header excluded).
    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    /// Ids required by one input are absent from another.
    #[error("coverage error: missing ids: {}", .0.join(", "))]
    Coverage(Vec<String>),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
