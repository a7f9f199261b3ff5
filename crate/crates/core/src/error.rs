use thiserror::Error;

/// Errors produced by the chain simulation and channel analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("invalid sector: {sites} sites with 2*Sz = {twice_sz}")]
    InvalidSector { sites: usize, twice_sz: i64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("value {value} outside the allowed domain: {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("dense diagonalization refused: dimension {dim} exceeds cap {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("spectrum ordering: {0}")]
    Ordering(String),

    #[error("degenerate ground state: E0 = {e0}, E1 = {e1}")]
    DegenerateGround { e0: f64, e1: f64 },

    #[error("no threshold temperature: ground-state correlator {gzz} is not below -1/3")]
    NoThreshold { gzz: f64 },

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("no interior maximum found on [0, {t_max}]")]
    FlatCurve { t_max: f64 },

    #[error("krylov propagation failed: {0}")]
    Propagation(String),

    #[error("insufficient data: {needed} points needed, {got} available")]
    InsufficientData { needed: usize, got: usize },

    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "invalid-spec",
            Error::InvalidSector { .. } => "invalid-sector",
            Error::Dimension { .. } => "dimension",
            Error::Config(_) => "config",
            Error::Domain { .. } => "domain",
            Error::Convergence { .. } => "convergence",
            Error::TooLarge { .. } => "too-large",
            Error::Ordering(_) => "ordering",
            Error::DegenerateGround { .. } => "degenerate-ground",
            Error::NoThreshold { .. } => "no-threshold",
            Error::Unsupported(_) => "unsupported-regime",
            Error::FlatCurve { .. } => "flat-curve",
            Error::Propagation(_) => "propagation",
            Error::InsufficientData { .. } => "insufficient-data",
            Error::Consistency(_) => "consistency",
        }
    }
}
