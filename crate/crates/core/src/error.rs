use thiserror::Error;

pub type Result<T> = std::result::Result<T, GfdError>;

#[derive(Debug, Error)]
pub enum GfdError {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("aliasing: harmonic {harmonic} is not representable with {samples} samples (max {max})")]
    Aliasing {
        harmonic: usize,
        samples: usize,
        max: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("analysis error: {0}")]
    Analysis(String),

    #[error("ill-conditioned basis at harmonic {harmonic}: determinant {determinant:e} below tolerance {tolerance:e}")]
    IllConditionedBasis {
        harmonic: usize,
        determinant: f64,
        tolerance: f64,
    },

    #[error("singular system: zero pivot in column {0}")]
    Singular(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GfdError {
    /// True for failures caused by reading or decoding input rather than by
    /// the mathematics of the request.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GfdError::Io(_) | GfdError::Csv(_) | GfdError::Json(_) | GfdError::Parse(_)
        )
    }
}
