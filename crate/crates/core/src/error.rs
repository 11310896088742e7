use thiserror::Error;

/// Error type shared by the simulation, statistics and output layers.
#[derive(Debug, Error)]
pub enum SimError {
    /// A configuration value violates its invariant. The message names the
    /// offending parameter using its CLI flag spelling.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A statistic is undefined because no pairs survived detection
    /// (possible only at extreme thresholds).
    #[error("no data: {0}")]
    NoData(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
