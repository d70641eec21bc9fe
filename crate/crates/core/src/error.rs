use thiserror::Error;

/// Every failure the simulation pipeline can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("missing required fields: {}", .0.join(", "))]
    MissingFields(Vec<String>),

    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("degenerate atomic configuration: {0}")]
    Degenerate(String),

    #[error("singular probe-coherence denominator at omega_pc = {omega_pc}")]
    SingularDenominator { omega_pc: f64 },

    #[error("frequency grid too coarse for the group-index derivative (stencils differ by {rel_diff:.3e})")]
    GridTooCoarse { rel_diff: f64 },

    #[error("time-window aliasing: {fraction:.3e} of the pulse energy lies near a window edge")]
    Aliasing { fraction: f64 },

    #[error("intensity maximum sits on the first or last sample")]
    BoundaryPeak,

    #[error("field envelopes do not share a time grid")]
    GridMismatch,

    #[error("post-selected intensity vanishes (energy fraction {fraction:.3e})")]
    VanishingIntensity { fraction: f64 },

    #[error("weak value denominator vanishes (beta = {beta}, phi = {phi})")]
    DegenerateWeakValue { beta: f64, phi: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("envelope carries zero energy")]
    ZeroEnergy,

    #[error("medium is not dispersive at the operating point (kappa = {0:e})")]
    ZeroKappa(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown figure {0} (expected one of 1, 3, 4, 5, 6, 7)")]
    UnknownFigure(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable identifier used on the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig { .. } => "invalid_config",
            Error::MissingFields(_) => "missing_fields",
            Error::Parse { .. } => "parse",
            Error::Degenerate(_) => "degenerate_config",
            Error::SingularDenominator { .. } => "singular_denominator",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::Aliasing { .. } => "aliasing",
            Error::BoundaryPeak => "boundary_peak",
            Error::GridMismatch => "grid_mismatch",
            Error::VanishingIntensity { .. } => "vanishing_intensity",
            Error::DegenerateWeakValue { .. } => "degenerate_weak_value",
            Error::NoSolution(_) => "no_solution",
            Error::ZeroEnergy => "zero_energy",
            Error::ZeroKappa(_) => "zero_kappa",
            Error::Domain(_) => "domain",
            Error::UnknownFigure(_) => "unknown_figure",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
