//! Wigner functions of finite-temperature bosonic states.
//!
//! Closed-form evaluators for the thermo vacuum, photon-subtracted and
//! photon-added thermo vacuum, and thermo number states, together with an
//! independent truncated Fock-space oracle that rebuilds each state as a
//! density matrix and evaluates its Wigner function by displaced parity.

pub mod analysis;
pub mod closed_form;
pub mod error;
pub mod export;
pub mod fock_oracle;
pub mod specfun;
pub mod thermo_params;

pub use closed_form::{PhasePoint, StateFamily, StateSpec};
pub use error::{Error, Result};
pub use thermo_params::ThermalParams;
