use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the review pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),

    #[error("malformed record at {location}: {reason}")]
    Malformed { location: String, reason: String },

    #[error("unknown document id {0:?}")]
    UnknownDocId(String),

    #[error("training set must contain both relevant and non-relevant examples")]
    SingleClass,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no relevant document found in the BM25 ranking for topic {topic:?}; reformulate the seed query")]
    SeedNotFound { topic: String },

    #[error("seed for topic {topic:?} reduces to an empty feature vector")]
    VacuousSeed { topic: String },

    #[error("topic {topic:?}: {reason}")]
    MissingSeedInput { topic: String, reason: String },

    #[error("collection has {0} document(s); at least 2 are required")]
    DegenerateCollection(usize),

    #[error("stalled run for topic {topic:?}: {reason}")]
    StalledRun { topic: String, reason: String },

    #[error("topic {0:?} has no relevant documents in the gold standard")]
    UndefinedTopic(String),

    #[error("rankings are not over the same item set")]
    ItemSetMismatch,

    #[error("checksum mismatch for {what}: expected {expected}, found {found}")]
    ChecksumMismatch {
        what: String,
        expected: String,
        found: String,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(location: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Malformed {
            location: location.into(),
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::DuplicateDocId(_) => "duplicate_doc_id",
            Error::Malformed { .. } => "malformed",
            Error::UnknownDocId(_) => "unknown_doc_id",
            Error::SingleClass => "single_class",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::SeedNotFound { .. } => "seed_not_found",
            Error::VacuousSeed { .. } => "vacuous_seed",
            Error::MissingSeedInput { .. } => "missing_seed_input",
            Error::DegenerateCollection(_) => "degenerate_collection",
            Error::StalledRun { .. } => "stalled_run",
            Error::UndefinedTopic(_) => "undefined_topic",
            Error::ItemSetMismatch => "item_set_mismatch",
            Error::ChecksumMismatch { .. } => "checksum_mismatch",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
