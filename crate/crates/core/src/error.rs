use thiserror::Error;

use crate::symbolic::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid chart: {0}")]
    Chart(String),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("singular metric: {0}")]
    SingularMetric(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid connection: {0}")]
    InvalidConnection(String),

    #[error("degenerate Lagrangian: {0}")]
    DegenerateLagrangian(String),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("not verifiable: {0}")]
    NotVerifiable(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("unbound function `{0}`")]
    UnboundFunction(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Variant name, stable across releases; used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Chart(_) => "ChartError",
            Error::ChartMismatch(_) => "ChartMismatch",
            Error::DegreeMismatch(_) => "DegreeMismatch",
            Error::Degree(_) => "DegreeError",
            Error::SingularMetric(_) => "SingularMetric",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::InvalidConnection(_) => "InvalidConnection",
            Error::DegenerateLagrangian(_) => "DegenerateLagrangian",
            Error::PatternMismatch(_) => "PatternMismatch",
            Error::NotVerifiable(_) => "NotVerifiable",
            Error::Domain(_) => "DomainError",
            Error::UnboundSymbol(_) => "UnboundSymbol",
            Error::UnboundFunction(_) => "UnboundFunction",
            Error::Invalid(_) => "Invalid",
        }
    }
}
