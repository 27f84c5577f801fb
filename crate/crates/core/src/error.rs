use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed annotated corpus text.
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A line-oriented data file (dictionary, lexicon, weights, trace) is invalid.
    #[error("{origin}:{line}: {message}")]
    Data {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("token index {index} out of range (document has {len} tokens)")]
    TokenIndex { index: usize, len: usize },

    #[error("no pronoun with id {0}")]
    UnknownPronoun(u32),

    #[error("document has pronouns but none carries a gold antecedent")]
    MissingGold,

    #[error("resolutions do not match gold document: {0}")]
    Alignment(String),
}

impl Error {
    pub(crate) fn data(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Data {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
