use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite sample encountered in {0}")]
    NonFiniteSample(&'static str),

    #[error("open-ended data: {0}")]
    OpenEndedData(String),

    #[error("degenerate target: {0}")]
    DegenerateTarget(String),

    #[error("CFL violation: dt = {dt} exceeds limit {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("numerical blow-up: non-finite field values at t = {t}")]
    NumericalBlowup { t: f64 },

    #[error("config rejected: {0}")]
    ConfigRejected(String),

    #[error("insufficient interior energy: E_0^inf = {available}, need > {required}")]
    InsufficientInteriorEnergy { available: f64, required: f64 },

    #[error("cap too energetic: |psi(r_n) - C*| = {deviation} exceeds {limit}")]
    CapTooEnergetic { deviation: f64, limit: f64 },

    #[error("no bubbling certificate: {0}")]
    NoBubblingCertificate(String),

    #[error("no blow-up diagnosis on trace (stop reason {0})")]
    NoBlowupDiagnosis(String),

    #[error("insufficient sampling: {0}")]
    InsufficientSampling(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),
}
