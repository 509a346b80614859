//! Application profiles, spec checking, bias tuning and design-space search.

pub mod candidate;
pub mod check;
pub mod config;
pub mod optimize;
pub mod profile;

pub use candidate::{tuning_range, Analysis, DesignCandidate, DesignInputs};
pub use check::{
    check_metrics, check_spec, CriterionResult, Metrics, SpecReport, Status, Tolerances,
    DEFAULT_FREQUENCY_TOLERANCE,
};
pub use config::{DesignConfig, MaterialRef, ModalConfig, SpaceConfig, SCHEMA_VERSION};
pub use optimize::{
    feasibility_failures, optimize, Bounds, DesignSpace, Family, OptimizerSettings,
    PULL_IN_FRACTION,
};
pub use profile::{
    builtin_profiles, find_profile, oscillator_profile, vco_profile, FrequencyTarget, Interval,
    SpecProfile,
};
