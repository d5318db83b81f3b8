use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown label `{label}`{}", line_suffix(*.line))]
    UnknownLabel { label: String, line: Option<usize> },

    #[error("invalid label `{0}`: labels must be non-empty and contain no tab or newline")]
    InvalidLabel(String),

    #[error("duplicate label `{0}` in label space")]
    DuplicateLabel(String),

    #[error("label `{0}` has an empty group")]
    EmptyGroup(String),

    #[error("label space is empty")]
    EmptyLabelSpace,

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("label `{label}` has {available} instances, {requested} requested")]
    InsufficientData {
        label: String,
        available: usize,
        requested: usize,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("vocabulary is empty (no feature reaches the minimum document frequency)")]
    EmptyVocabulary,

    #[error("group `{0}` has no training instances")]
    EmptyGroupData(String),

    #[error("label `{0}` has no training instances")]
    UntrainedLabel(String),

    #[error("{context}: expected {expected} entries, found {found}")]
    LengthMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("unsupported output: {0}")]
    Unsupported(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn line_suffix(line: Option<usize>) -> String {
    match line {
        Some(n) => format!(" at line {n}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches the file an error came from.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        if matches!(self, Error::Io { .. } | Error::InFile { .. }) {
            return self;
        }
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
