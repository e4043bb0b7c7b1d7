use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{field} out of range: {value}")]
    OutOfRange { field: &'static str, value: f64 },
    #[error("positions sampled at different instants ({0} vs {1})")]
    TimestampMismatch(String, String),
    #[error("empty access window")]
    EmptyWindow,
    #[error("sampling step must be positive, got {0}")]
    InvalidStep(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeplerError {
    #[error("eccentricity {0} outside [0, 1)")]
    Eccentricity(f64),
    #[error("Kepler iteration did not converge (M={mean_anomaly}, e={eccentricity})")]
    NoConvergence { mean_anomaly: f64, eccentricity: f64 },
    #[error("invalid orbital elements: {0}")]
    Elements(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TleError {
    #[error("line {line}: checksum mismatch (expected {expected}, found {found})")]
    Checksum { line: usize, expected: u32, found: u32 },
    #[error("line {line}: expected {expected} characters, found {found}")]
    LineLength { line: usize, expected: usize, found: usize },
    #[error("line {line}: expected line number '{expected}'")]
    LineNumber { line: usize, expected: char },
    #[error("line {line}, columns {start}-{end}: malformed {field}: {text:?}")]
    Field { line: usize, start: usize, end: usize, field: &'static str, text: String },
    #[error("line {line}: catalog number differs from line 1")]
    CatalogMismatch { line: usize },
    #[error("line {line}: incomplete element set")]
    Truncated { line: usize },
    #[error("line {line}: {source}")]
    Elements { line: usize, source: KeplerError },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstellationError {
    #[error("constellation must have at least one plane and one satellite per plane")]
    Empty,
    #[error("invalid constellation spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Elements(#[from] KeplerError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("no data rate for {link:?} in scenario {scenario}")]
    MissingRate { link: crate::topology::LinkType, scenario: String },
    #[error("resilience requires at least one outcome")]
    NoOutcomes,
    #[error("reliability requires at least one hop")]
    NoHops,
    #[error("aggregation requires at least one record")]
    NoRecords,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed scenario document: {0}")]
    Parse(String),
    #[error("unknown keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Tle { path: String, source: TleError },
    #[error(transparent)]
    Constellation(#[from] ConstellationError),
}

impl ConfigError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid { path: path.into(), message: message.into() }
    }
}
