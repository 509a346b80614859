use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or parser rejected a value that breaks a type invariant.
    #[error("invalid {field}: {reason}")]
    Invariant { field: &'static str, reason: String },

    #[error("unknown material preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown spec profile `{0}`")]
    UnknownProfile(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("cannot parse quantity `{input}`: {reason}")]
    Quantity { input: String, reason: String },

    #[error("invalid mode order {0}")]
    InvalidModeOrder(usize),

    /// The drive point sits on (or numerically at) a node of the requested mode.
    #[error("drive point {drive_point} is a node of mode {mode}")]
    SingularDrivePoint { mode: usize, drive_point: f64 },

    #[error("no characteristic root between {lo:.6e} and {hi:.6e} rad/s")]
    NoRoot { lo: f64, hi: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("requested {requested} modes but only {available} free dofs")]
    TooManyModes { requested: usize, available: usize },

    #[error("free body has {found} rigid-body modes, expected {expected}")]
    RigidBodyCount { found: usize, expected: usize },

    #[error("ambiguous angular order: harmonics {first} and {second} carry comparable energy")]
    AmbiguousOrder { first: usize, second: usize },

    #[error("zero bias voltage gives unbounded motional resistance")]
    ZeroBias,

    /// Electrostatic spring meets or exceeds the mechanical stiffness.
    #[error("electrostatic instability at {voltage:.4} V (k_e/k_r = {ratio:.4})")]
    Unstable { voltage: f64, ratio: f64 },

    #[error("detection kind mismatch: expected {0}")]
    DetectionMismatch(&'static str),

    #[error("invalid frequency range: {0}")]
    InvalidRange(String),

    #[error("Q extraction failed: {0}")]
    QExtraction(String),

    #[error("fabrication constraint `{rule}` violated: {reason}")]
    FabConstraint { rule: &'static str, reason: String },

    #[error("no feasible design; binding constraints: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Invariant {
        field,
        reason: reason.into(),
    }
}

/// Rejects anything that is not a finite value strictly above zero.
pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(invariant(field, format!("must be > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(invariant(field, format!("must be >= 0, got {value}")))
    }
}
