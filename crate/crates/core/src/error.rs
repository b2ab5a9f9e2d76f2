use std::io;

use crate::fips::FipsRateReport;

/// Every failure the seeder can report.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("no monotonic clock is available on this platform")]
    UnsupportedClock,

    #[error("clock never advanced during resolution probing")]
    StuckClock,

    #[error("timer is not monotonic; refusing to collect")]
    NonMonotonicTimer,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid collector config: {0}")]
    InvalidConfig(String),

    #[error("timing trace is empty")]
    EmptyTrace,

    #[error("insufficient entropy: {distinct} distinct runtimes, floor is {floor}")]
    InsufficientEntropy { distinct: usize, floor: usize },

    #[error("no samples to aggregate")]
    EmptyInput,

    #[error("report has {available} unique values, {needed} required")]
    InsufficientValues { needed: usize, available: usize },

    #[error("FIPS block must be exactly 2500 bytes, got {0}")]
    WrongBlockSize(usize),

    #[error("stream ended after {} of {requested} blocks", partial.blocks_tested)]
    ShortStream {
        requested: u64,
        partial: FipsRateReport,
    },

    #[error("config parse error on line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
