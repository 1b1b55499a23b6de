//! Errors shared across generation, sampling, encoding, and dataset IO.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown task id `{0}`")]
    UnknownTask(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    /// The task cannot supply the requested number of distinct cases.
    #[error("task {task}: needed {needed} distinct cases, only {available} available")]
    ExhaustedSpace {
        task: String,
        needed: usize,
        available: usize,
    },
    /// An instance would exceed its domain's per-instance case cap.
    #[error("requested {requested} {what} but the instance cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    /// A symbol value falls outside the categorical token vocabulary.
    #[error("{what} value {value} does not fit the token vocabulary")]
    VocabularyOverflow { what: &'static str, value: i64 },
    #[error("case with {len} rows exceeds the encoder maximum of {max}")]
    CaseTooLong { len: usize, max: usize },
    /// An atom does not have the shape this corpus generates.
    #[error("malformed case atom: {0}")]
    MalformedCase(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("term parse error: {0}")]
    Parse(#[from] logic_core::ParseError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
