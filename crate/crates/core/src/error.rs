use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular covariance: off-diagonal factor {factor} must be < 1 (x = {x})")]
    SingularCovariance { x: f64, factor: f64 },

    #[error("rejection sampler exceeded {attempts} attempts")]
    SamplingCap { attempts: u64 },

    #[error("degenerate density: truncation normalizer {normalizer:e} below 1e-12")]
    DegenerateDensity { normalizer: f64 },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Load { path: PathBuf, message: String },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("repetition {rep} of policy `{policy}` (seed {seed:#018x}) failed: {source}")]
    Repetition {
        policy: String,
        rep: usize,
        seed: u64,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by invalid user input rather than runtime failures.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::SingularCovariance { .. }
                | Error::Parse { .. }
                | Error::Load { .. }
                | Error::Config { .. }
                | Error::Json(_)
        )
    }
}
