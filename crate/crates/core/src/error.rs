use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("ill-conditioned lattice: normalization points differ by {gap:e}")]
    IllConditionedLattice { gap: f64 },

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("evaluation at a pole")]
    Pole,

    #[error("inconsistent evaluator: ratio dispersion {dispersion:e} exceeds {limit:e}")]
    InconsistentEvaluator { dispersion: f64, limit: f64 },

    #[error("degree count unreliable: {0}")]
    CountUnreliable(String),

    #[error("invalid Möbius map: {0}")]
    InvalidMap(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no induced involution: residual {residual:e} exceeds {tolerance:e}")]
    NoInducedInvolution { residual: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported torus shape: {0}")]
    UnsupportedShape(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("path passes within {distance:e} of an end (minimum {minimum:e})")]
    PathTooClose { distance: f64, minimum: f64 },

    #[error("quadrature tolerance not met: achieved {achieved:e}, requested {requested:e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },

    #[error("torus is not square: measured alpha = {alpha}")]
    NotSquare { alpha: f64 },

    #[error("construction precondition violated: {0}")]
    ConstructionPrecondition(String),

    #[error("period problem failed: {0}")]
    PeriodProblemFailed(String),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("mesh construction failed: {0}")]
    MeshFailure(String),
}
