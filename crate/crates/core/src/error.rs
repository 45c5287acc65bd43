use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("unknown attribute `{0}`")]
    Key(String),

    #[error("cannot coerce attribute `{attribute}` to {target}: offending value `{value}`")]
    TypeCoercion {
        attribute: String,
        target: String,
        value: String,
    },

    #[error("alias `{alias}` for `{attribute}` collides with attribute `{existing}`")]
    AliasConflict {
        alias: String,
        attribute: String,
        existing: String,
    },

    #[error("lexical resource unavailable at {path}: {message}")]
    Resource { path: PathBuf, message: String },

    #[error("query is empty")]
    EmptyQuery,

    #[error("no visualization could be generated for the query")]
    NoVisualization,

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("invalid override: {0}")]
    InvalidOverride(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
