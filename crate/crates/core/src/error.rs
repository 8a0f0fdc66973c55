use serde::Serialize;
use thiserror::Error;

use crate::ode::OdeError;
use crate::roots::RootError;

/// Broad class of a failure; the CLI maps these to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Validation,
    Numerical,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shock-strength ratio delta = {delta} outside the admissible range (0, {max})")]
    InadmissibleDelta { delta: f64, max: f64 },
    #[error("{name} must be positive (got {value})")]
    NonPositiveInput { name: &'static str, value: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("frame velocity U = {0} is not positive")]
    NonPositiveU(f64),
    #[error("Rankine-Hugoniot relation violated: {0}")]
    RankineHugoniot(String),
    #[error("entropy condition violated: {0}")]
    EntropyViolation(String),
    #[error("coupling jump [g] = {g_jump} is degenerate (zero-strength shock)")]
    DegenerateCoupling { g_jump: f64 },
    #[error("inadmissible shock: u_plus = {u_plus} must be smaller than u_minus = {u_minus}")]
    InadmissibleShock { u_minus: f64, u_plus: f64 },
    #[error("coupling jump [g] = {g_jump} must be negative for the Hamer reduction")]
    HypothesisGViolated { g_jump: f64 },
    #[error("critical point P0 is degenerate: G'(0) = {g_prime0}, 2 nu^2 = {two_nu_sq}")]
    DegenerateP0 { g_prime0: f64, two_nu_sq: f64 },
    #[error("G'(0) = {g_prime0} <= 0: multi-jump regime is not supported")]
    UnsupportedRegime { g_prime0: f64 },
    #[error("manifold branch left its invariant region at x = {x}")]
    RegionViolation { x: f64 },
    #[error("branches do not intersect: h has no sign change on [{lo}, {hi}]")]
    NoIntersection { lo: f64, hi: f64 },
    #[error("ambiguous connection: {0}")]
    AmbiguousConnection(String),
    #[error("jump amplitude below floating point resolution (log|x_jump| = {log_x})")]
    JumpBelowResolution { log_x: f64 },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("profile has too few smooth samples ({got}, need {need})")]
    InsufficientSamples { got: usize, need: usize },
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Root(#[from] RootError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InadmissibleDelta { .. }
            | NonPositiveInput { .. }
            | InvalidParameter { .. }
            | NonPositiveU(_)
            | RankineHugoniot(_)
            | EntropyViolation(_)
            | DegenerateCoupling { .. }
            | InadmissibleShock { .. }
            | HypothesisGViolated { .. } => ErrorKind::Validation,
            UnsupportedRegime { .. } => ErrorKind::Unsupported,
            DegenerateP0 { .. }
            | RegionViolation { .. }
            | NoIntersection { .. }
            | AmbiguousConnection(_)
            | JumpBelowResolution { .. }
            | QuadratureFailure(_)
            | InsufficientSamples { .. }
            | Ode(_)
            | Root(_) => ErrorKind::Numerical,
        }
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            InadmissibleDelta { .. } => "InadmissibleDelta",
            NonPositiveInput { .. } => "NonPositiveInput",
            InvalidParameter { .. } => "InvalidParameter",
            NonPositiveU(_) => "NonPositiveU",
            RankineHugoniot(_) => "RankineHugoniot",
            EntropyViolation(_) => "EntropyViolation",
            DegenerateCoupling { .. } => "DegenerateCoupling",
            InadmissibleShock { .. } => "InadmissibleShock",
            HypothesisGViolated { .. } => "HypothesisGViolated",
            DegenerateP0 { .. } => "DegenerateP0",
            UnsupportedRegime { .. } => "UnsupportedRegime",
            RegionViolation { .. } => "RegionViolation",
            NoIntersection { .. } => "NoIntersection",
            AmbiguousConnection(_) => "AmbiguousConnection",
            JumpBelowResolution { .. } => "JumpBelowResolution",
            QuadratureFailure(_) => "QuadratureFailure",
            InsufficientSamples { .. } => "InsufficientSamples",
            Ode(OdeError::StepFailure { .. }) => "StepFailure",
            Ode(OdeError::NonFiniteRhs { .. }) => "NonFiniteRhs",
            Ode(_) => "IntegrationFailure",
            Root(RootError::NoBracket { .. }) => "NoBracket",
            Root(_) => "RootFailure",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
