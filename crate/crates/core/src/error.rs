//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by corpus handling, training, decoding and experiments.
///
/// `Internal` is reserved for invariant violations that indicate a bug
/// rather than bad input; callers map it to a distinct exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus input")]
    EmptyInput,

    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },

    #[error("untagged token {surface:?}; all tokens must carry a gold tag here")]
    UntaggedToken { surface: String },

    #[error("invalid train fraction {fraction}; expected a value in (0, 1]")]
    InvalidFraction { fraction: f64 },

    #[error("train fraction {fraction} leaves no test sentences")]
    EmptyTestSplit { fraction: f64 },

    #[error("sample size {requested} exceeds corpus token count {available}")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("scheme file line {line}: {msg}")]
    InvalidScheme { line: usize, msg: String },

    #[error("scheme code {code:?} does not match declared features {features:?}")]
    CodeMismatch { code: String, features: String },

    #[error("duplicate feature letter {letter:?}")]
    DuplicateFeature { letter: char },

    #[error("invalid feature letters: {msg}")]
    InvalidFeatures { msg: String },

    #[error("guesser file line {line}: {msg}")]
    InvalidGuesser { line: usize, msg: String },

    #[error("guesser rule {priority} names tag {tag:?} outside the open-class tagset")]
    GuesserTagUnknown { priority: u32, tag: String },

    #[error("unknown tag {tag:?}")]
    UnknownTag { tag: String },

    #[error("tag {tag:?} collides with the reserved boundary pseudo-tag")]
    ReservedTag { tag: String },

    #[error("no open-class tags available to hypothesize for unknown word {surface:?}")]
    EmptyOpenClass { surface: String },

    #[error("model file line {line}: {msg}")]
    InvalidModel { line: usize, msg: String },

    #[error("predictions cover {got} tokens but the test corpus has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("infeasible synthetic spec: {msg}")]
    InfeasibleSpec { msg: String },

    #[error("sweep variant {code:?} failed: {source}")]
    VariantFailed {
        code: String,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
