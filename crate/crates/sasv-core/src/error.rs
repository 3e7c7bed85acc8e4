//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}{}", ctx_suffix(.context))]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("zero-norm embedding `{utt_id}` (degenerate vector)")]
    ZeroNormEmbedding { utt_id: String },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("empty input: {context}")]
    EmptyInput { context: String },

    #[error("trial {enroll_id} {test_id} has no label, but a labeled trial is required here")]
    UnlabeledTrial { enroll_id: String, test_id: String },

    #[error("no embedding for `{utt_id}` in the {role} store")]
    MissingEmbedding { utt_id: String, role: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate cost model: best trivial-system cost is zero, cannot normalize")]
    DegenerateCostModel,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("forward cache does not match the model it is applied to: {0}")]
    CacheMismatch(String),

    #[error("training diverged (non-finite loss) at epoch {epoch}, batch {batch}")]
    Divergence { epoch: usize, batch: usize },

    #[error("score files cover different trial sets; first differences: {differences:?}")]
    TrialSetMismatch { differences: Vec<String> },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn ctx_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

impl Error {
    pub(crate) fn dim(expected: usize, got: usize, context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            expected,
            got,
            context: context.into(),
        }
    }

    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &str, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }
}
