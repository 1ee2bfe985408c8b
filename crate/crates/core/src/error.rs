use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degenerate grid: nodes {0} and {1} coincide")]
    DegenerateGrid(usize, usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point {index} lies within {distance:.3e} of the surface (minimum {required:.3e})")]
    NearField { index: usize, distance: f64, required: f64 },

    #[error("singular evaluation point: {0}")]
    SingularPoint(String),

    #[error(
        "near-resonant single-layer system at s = {s}: residual {residual:.3e}, condition estimate {condition:.3e}"
    )]
    NearResonance {
        s: Complex64,
        residual: f64,
        condition: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("power-law fit: {0}")]
    Fit(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
