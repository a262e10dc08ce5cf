use thiserror::Error;

/// Errors raised by the solvers, oracles and harness.
///
/// Variants split into two families: precondition/spec errors caused by the
/// caller's input, and internal errors that indicate a bug (an invalid witness
/// or a contradiction in a procedure that is supposed to always succeed).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol id {id} is not in an alphabet of size {size}")]
    InvalidSymbol { id: usize, size: usize },

    #[error("byte {byte:#04x} is not part of the alphabet")]
    UnknownSymbol { byte: u8 },

    #[error("alphabet too large: {distinct} distinct bytes (limit 255)")]
    AlphabetTooLarge { distinct: usize },

    #[error("strings are over different alphabets")]
    AlphabetMismatch,

    #[error("invalid subalphabet: {0}")]
    InvalidSubalphabet(String),

    #[error("size limit exceeded: {needed} cells requested, cap is {cap}")]
    SizeLimit { needed: u64, cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("segmentation failed: end length {end} does not fit a string of length {len}")]
    Segmentation { end: usize, len: usize },

    #[error("invalid instance spec field `{field}`: {reason}")]
    Spec { field: &'static str, reason: String },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("internal contradiction: {0}")]
    Contradiction(String),

    #[error("invalid witness produced by {0}")]
    InvalidWitness(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::ContractViolation(_) | Error::Contradiction(_) | Error::InvalidWitness(_)
        )
    }

    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        if self.is_internal() {
            3
        } else {
            2
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
