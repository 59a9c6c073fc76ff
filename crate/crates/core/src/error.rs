use thiserror::Error;

/// Errors raised by the evaluators, the Fock-space oracle and the analysis layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("excitation number {n} exceeds the supported maximum {max}")]
    ExcitationTooLarge { n: usize, max: usize },

    #[error("degenerate state: {0}")]
    DegenerateState(&'static str),

    #[error(
        "thermo number state needs theta > 0; use wf_number_state for the zero-temperature limit"
    )]
    ZeroTemperatureThermoNumber,

    #[error("truncation dim {dim} too small, need at least {required}")]
    TruncationTooSmall { dim: usize, required: usize },

    #[error("state annihilated: trace {trace:e} after photon subtraction")]
    AnnihilatedState { trace: f64 },

    #[error("insufficient headroom for photon addition: top diagonal population {population:e}")]
    InsufficientHeadroom { population: f64 },

    #[error(
        "displacement |alpha|^2 = {alpha_sq} leaks out of truncation dim {dim} (need {required})"
    )]
    TruncationLeak {
        alpha_sq: f64,
        dim: usize,
        required: usize,
    },

    #[error("two-mode truncation deficit {deficit:e} exceeds tolerance")]
    TruncationDeficit { deficit: f64 },

    #[error("truncation dim {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("Wigner value has imaginary residue {residue:e}")]
    NonRealWigner { residue: f64 },

    #[error("integration box half-width {half_width} below the required {required}")]
    BoxTooSmall { half_width: f64, required: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
