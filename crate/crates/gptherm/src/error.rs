use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state {coords:?} is not in the state space of theory `{theory}`: {detail}")]
    StateNotInSpace {
        theory: String,
        coords: Vec<f64>,
        detail: String,
    },

    #[error("effect evaluated to {value} on a valid state, outside [0, 1] beyond tolerance {tolerance}")]
    EffectRangeViolation { value: f64, tolerance: f64 },

    #[error("no duality entry for {kind} `{what}`")]
    NoDualEntry { kind: &'static str, what: String },

    #[error("effect is not pure: {detail}")]
    NotPureEffect { detail: String },

    #[error("state is not pure: {detail}")]
    NotPureState { detail: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid probability distribution: {detail}")]
    InvalidDistribution { detail: String },

    #[error("probability {value} out of range [0, 1]")]
    OutOfRange { value: f64 },

    #[error("operation requires a continuous-ball (qubit-like) theory, got `{theory}`")]
    NotQubitTheory { theory: String },

    #[error("no decomposition of the state into a perfectly distinguishable pure set exists")]
    NoValidDecomposition,

    #[error("no maximally fine-grained measurement can be assembled from the declared effects")]
    NoFineGrainedMeasurement,

    #[error("cycle premise violated: {detail}")]
    PremiseViolation { detail: String },

    #[error("mixture mismatch: components do not reassemble the target state (residual {residual:.3e})")]
    MixtureMismatch { residual: f64 },

    #[error("bad range: {detail}")]
    BadRange { detail: String },

    #[error("simulation requires at least one particle")]
    ZeroCount,

    #[error("unknown {kind} label `{label}`{context}")]
    UnknownLabel {
        kind: &'static str,
        label: String,
        context: String,
    },

    #[error("failed to parse theory file {path}: {message}")]
    TheoryFile { path: String, message: String },

    #[error("invalid theory `{theory}`: {detail}")]
    InvalidTheory { theory: String, detail: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code, one per failure class. Printed by the
    /// CLI and mapped to its exit status.
    pub fn code(&self) -> &'static str {
        match self {
            Error::StateNotInSpace { .. } => "state_not_in_space",
            Error::EffectRangeViolation { .. } => "effect_range_violation",
            Error::NoDualEntry { .. } => "no_dual_entry",
            Error::NotPureEffect { .. } => "not_pure_effect",
            Error::NotPureState { .. } => "not_pure_state",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidDistribution { .. } => "invalid_distribution",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NotQubitTheory { .. } => "not_qubit_theory",
            Error::NoValidDecomposition => "no_valid_decomposition",
            Error::NoFineGrainedMeasurement => "no_fine_grained_measurement",
            Error::PremiseViolation { .. } => "premise_violation",
            Error::MixtureMismatch { .. } => "mixture_mismatch",
            Error::BadRange { .. } => "bad_range",
            Error::ZeroCount => "zero_count",
            Error::UnknownLabel { .. } => "unknown_label",
            Error::TheoryFile { .. } => "theory_file",
            Error::InvalidTheory { .. } => "invalid_theory",
            Error::Io(_) => "io",
            Error::Usage(_) => "usage",
        }
    }
}
