use thiserror::Error;

/// Errors surfaced by the library. Domain errors (poles, divergence,
/// admissibility) are deliberately distinct from parse and internal errors
/// so the CLI can map them to exit codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("malformed slice range: {0}")]
    Range(String),

    #[error("pole hit: summand n = {n} cancels the shift s = {s}")]
    PoleHit { n: i64, s: String },

    #[error("infinite interval unsupported here: {0}")]
    InfiniteInterval(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index not admissible: {0}")]
    NotAdmissible(String),

    #[error("divergent series: {0}")]
    Divergent(String),

    #[error("color level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),

    #[error("word decode error: {0}")]
    Decode(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("no certificate: {0}")]
    NoCertificate(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code class: 2 for usage/domain errors, per the exit-code
    /// contract (0 pass, 1 failed check, 2 usage/domain error).
    pub fn exit_code(&self) -> i32 {
        2
    }
}
