use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter value outside the family's interval Θ.
    #[error("{family}: parameter {value} outside {interval}")]
    Domain {
        family: &'static str,
        value: f64,
        interval: String,
    },

    /// An observation outside the family's observable set. Indices are 0-based.
    #[error("{family}: value {value} at level {level}, index {index} is not observable")]
    NotObservable {
        family: &'static str,
        level: usize,
        index: usize,
        value: f64,
    },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("level range [{start}..={end}] invalid for {levels} levels")]
    IndexOutOfRange {
        start: usize,
        end: usize,
        levels: usize,
    },

    #[error("exhaustive search refused: {levels} levels exceeds limit of {limit}")]
    TooLarge { levels: usize, limit: usize },

    #[error("brute-force maximizer is not unique (margin {margin})")]
    NotUnique { margin: f64 },

    #[error("line {line}: invalid record: {message}")]
    Validation { line: usize, message: String },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
