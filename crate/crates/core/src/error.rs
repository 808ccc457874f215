use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("map is not a bijection on {dim} basis states")]
    NotBijective { dim: usize },

    #[error("state dimension {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: u128, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("attack `{attack}` cannot be run against {protocol}: {reason}")]
    Incompatible {
        attack: String,
        protocol: String,
        reason: String,
    },

    #[error("enumeration of {requested} entries exceeds the cap {cap}")]
    EnumerationCap { requested: u128, cap: u128 },

    #[error("insufficient samples: got {got}, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
