use thiserror::Error;

pub type Result<T> = std::result::Result<T, GwError>;

#[derive(Debug, Error)]
pub enum GwError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid bandwidth: {0}")]
    InvalidBandwidth(String),

    /// Every neighbor of the focal point sits at distance zero, so a
    /// distance-decay kernel has no scale.
    #[error("degenerate geometry at location {focal}: effective bandwidth is zero")]
    DegenerateGeometry { focal: usize },

    #[error("singular local fit at location {focal}")]
    SingularFit { focal: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("formula error at position {position}: {message}")]
    Formula { position: usize, message: String },

    #[error("ingestion error: {0}")]
    Ingest(String),

    #[error("no feasible bandwidth among {candidates} candidates")]
    NoFeasibleBandwidth { candidates: usize },

    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl GwError {
    /// Stable short tag used in machine-readable CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            GwError::InvalidInput(_) => "invalid_input",
            GwError::InvalidBandwidth(_) => "invalid_bandwidth",
            GwError::DegenerateGeometry { .. } => "degenerate_geometry",
            GwError::SingularFit { .. } => "singular_fit",
            GwError::Config(_) => "config",
            GwError::Formula { .. } => "formula",
            GwError::Ingest(_) => "ingest",
            GwError::NoFeasibleBandwidth { .. } => "no_feasible_bandwidth",
            GwError::InvalidInterval { .. } => "invalid_interval",
            GwError::Io(_) => "io",
            GwError::Csv(_) => "csv",
            GwError::Json(_) => "json",
        }
    }
}
