use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("SQUID inductance diverges (denominator {denominator:e})")]
    DivergentInductance { denominator: f64 },

    #[error("static flux F = {flux} puts cos(F/2) at a singularity")]
    FluxSingularity { flux: f64 },

    #[error("participation ratio gamma = {gamma} is outside (0, 1)")]
    GammaOutOfRange { gamma: f64 },

    #[error("spectral bracket for mode {mode} does not change sign")]
    RootBracketFailure { mode: usize },

    #[error("pump order {order} is not supported here")]
    UnsupportedOrder { order: u32 },

    #[error("odd order {order} with a symmetric SQUID needs a higher-mode configuration")]
    MissingHigherMode { order: u32 },

    #[error("order {order} needs spectrum mode {needed}, only {available} solved")]
    InsufficientModes { order: u32, needed: usize, available: usize },

    #[error("operation requires the probe to be off")]
    ProbeActive,

    #[error("model has no stable fixed point")]
    NoStableState,

    #[error("adaptive step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("dt * gamma1 = {product} must be below 0.1")]
    StepTooLarge { product: f64 },

    #[error("trajectory {trajectory} left every bounded region at t = {t}")]
    TrajectoryDiverged { trajectory: usize, t: f64 },

    #[error("histograms have incompatible geometry")]
    IncompatibleHistograms,

    #[error("no histogram bin exceeds the cluster threshold")]
    NoClusters,

    #[error("expected {expected} non-central clusters, found {found}")]
    WrongMultiplicity { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("unknown command `{0}`")]
    CommandUnknown(String),

    #[error("malformed file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
