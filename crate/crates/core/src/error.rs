use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular system at {context}: {detail}")]
    Singular { context: String, detail: String },

    #[error("rank-deficient ansatz basis (smallest/largest eigenvalue {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("near-degenerate spectrum: gap {gap:e} between levels {lower} and {upper} (tolerance {tolerance:e})")]
    NearDegeneracy {
        gap: f64,
        lower: usize,
        upper: usize,
        tolerance: f64,
    },

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("norm drift {drift:e} at t = {t} exceeds the abort threshold")]
    NormDrift { t: f64, drift: f64 },

    #[error("integrator exceeded {max_steps} steps at t = {t}")]
    MaxSteps { t: f64, max_steps: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("config error at line {line}, field `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
