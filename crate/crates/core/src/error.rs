//! Error type shared across the simulator core.

use thiserror::Error;

/// Errors raised by configuration validation and operation preconditions.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates a documented invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Distance fed to the pathloss model must be strictly positive.
    #[error("non-positive link distance: {0} km")]
    NonPositiveDistance(f64),

    /// An operation that requires at least one element received none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// The (n_tx, n_rx) pair is outside the supported antenna set.
    #[error("unsupported antenna configuration {n_tx}x{n_rx}")]
    UnsupportedAntenna { n_tx: usize, n_rx: usize },

    /// No codebook exists for this (n_tx, rank) combination.
    #[error("unsupported codebook request: n_tx={n_tx}, rank={rank}")]
    UnsupportedCodebook { n_tx: usize, rank: usize },

    /// Stream count exceeds min(n_tx, n_rx).
    #[error("stream count {m} exceeds min(n_tx, n_rx) = {max}")]
    TooManyStreams { m: usize, max: usize },

    /// Jain's index is undefined when every throughput is zero.
    #[error("fairness index undefined for an all-zero throughput vector")]
    AllZeroThroughput,

    /// Rate must be strictly positive in the scheduling priority function.
    #[error("priority function requires a strictly positive rate, got {0}")]
    RateNotPositive(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
