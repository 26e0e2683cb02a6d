use thiserror::Error;

/// Errors raised by the simulator, the HHL pipeline and the chemistry layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Wiring, dimension or parameter mismatch between objects.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Projection onto an outcome that carries no probability.
    #[error("post-selection impossible: outcome {outcome} on qudit {qudit} has zero probability")]
    PostSelectionImpossible { qudit: usize, outcome: usize },

    /// The inversion constant exceeds a grid eigenvalue and the rotation is not clamped.
    #[error(
        "inversion constant too large: C = {c} exceeds grid eigenvalue {lambda} at clock value {value}"
    )]
    InversionConstantTooLarge { c: f64, lambda: f64, value: usize },

    /// An eigenphase falls outside (0, 1) for the chosen evolution time.
    #[error("eigenvalue {eigenvalue} maps to eigenphase {phase} outside (0, 1) for t = {t}")]
    EigenphaseOutOfRange { eigenvalue: f64, phase: f64, t: f64 },

    /// Malformed text input.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    /// Input parsed but failed a structural check.
    #[error("ingestion error: {0}")]
    Ingestion(String),

    /// Two computations that must agree did not.
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
