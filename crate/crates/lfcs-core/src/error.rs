use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("deletion budget exceeded for symbol '{}': {used} > {budget}", *symbol as char)]
    BudgetViolation {
        symbol: u8,
        used: usize,
        budget: usize,
    },

    #[error("position {pos} out of range 1..={len}")]
    IndexOutOfRange { pos: usize, len: usize },

    #[error("instance too large for exhaustive enumeration: n = {n} > {max}")]
    InstanceTooLarge { n: usize, max: usize },

    #[error("invalid generator config: {0}")]
    ConfigInvalid(String),

    #[error("malformed instance file: {0}")]
    MalformedInstance(String),

    #[error("malformed WAV input: {0}")]
    MalformedWav(String),

    #[error("unsupported WAV encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("multiset exceeds reference histogram for symbol '{}'", *symbol as char)]
    HistogramUnderflow { symbol: u8 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
