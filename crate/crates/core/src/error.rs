use thiserror::Error;

use crate::seq::L_MAX;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("letter {0} is outside 1..={max}", max = L_MAX)]
    LetterOutOfRange(u64),

    #[error("cannot parse sequence {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("pattern must be nonempty")]
    EmptyPattern,

    /// `k < ||v||` admits arbitrarily long v-free (k,r)-sparse sequences.
    #[error("k < ||v|| makes Ex infinite (k = {k}, ||v|| = {distinct})")]
    InfiniteExtremal { k: usize, distinct: usize },

    #[error("{name} must be at least {min}, got {value}")]
    TooSmall { name: &'static str, value: usize, min: usize },

    #[error("{name} must be at most {max}, got {value}")]
    TooLarge { name: &'static str, value: usize, max: usize },

    #[error("inconsistent sandwich inputs: {0}")]
    InconsistentBounds(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_owned(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by the filesystem rather than by bad input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
