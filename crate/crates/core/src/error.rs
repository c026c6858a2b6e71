use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scalar literal `{0}`")]
    ParseScalar(String),

    #[error("CFL number must lie in (0, 1], got {0}")]
    CflOutOfRange(String),

    #[error("the shifted-grid scheme needs lambda <= 1/2, got {0}")]
    ShiftedLambda(String),

    #[error("{scheme} steps an integer-grid state, got a shifted one")]
    PhaseMismatch { scheme: &'static str },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid datum: {0}")]
    InvalidDatum(String),

    #[error("point {0} is not covered by any piece of the datum")]
    NotCovered(f64),

    #[error("trigonometric pieces are only available in binary64 arithmetic")]
    TrigInExactMode,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
