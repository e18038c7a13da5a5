use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("document `{document}`{}: {message}", .annotation.map(|i| format!(", annotation {i}")).unwrap_or_default())]
    Validation {
        document: String,
        annotation: Option<usize>,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A statistic has no defined value for the given data.
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("remote scorer failed: {0}")]
    Remote(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(document: &str, annotation: Option<usize>, message: impl Into<String>) -> Self {
        Error::Validation {
            document: document.to_string(),
            annotation,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }
}
