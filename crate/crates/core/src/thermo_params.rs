//! Thermal parameterizations: `(omega, kT)`, the thermal squeeze parameter
//! `theta` with `tanh(theta) = exp(-omega / 2kT)`, and the mean thermal photon
//! number `n_c = sinh^2(theta)`.
//!
//! Units: `hbar = 1` and the Boltzmann constant is folded into `kT`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted squeeze parameter (`n_c` about 5500).
pub const MAX_THETA: f64 = 5.0;

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

/// `theta = artanh(exp(-omega / (2 kT)))`.
pub fn theta_from_temperature(omega: f64, kt: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("kT", kt)?;
    Ok((-omega / (2.0 * kt)).exp().atanh())
}

/// Bose-Einstein occupation `1 / (exp(omega / kT) - 1)`.
pub fn mean_photon_number(omega: f64, kt: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("kT", kt)?;
    Ok(1.0 / (omega / kt).exp_m1())
}

/// Canonical thermal parameter bundle. `theta` drives every formula; the
/// other fields are kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub theta: f64,
    pub n_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

/// Hyperbolic factors shared by the closed forms, computed once per call.
#[derive(Debug, Clone, Copy)]
pub struct Hyperbolic {
    pub cosh: f64,
    pub sinh: f64,
    pub cosh2: f64,
    pub sech2: f64,
    pub tanh2: f64,
}

impl ThermalParams {
    /// Zero temperature.
    pub const VACUUM: Self = Self {
        theta: 0.0,
        n_c: 0.0,
        omega: None,
        temperature: None,
    };

    pub fn from_theta(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must be finite and >= 0",
            });
        }
        if theta > MAX_THETA {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "exceeds the validated range theta <= 5",
            });
        }
        let s = theta.sinh();
        Ok(Self {
            theta,
            n_c: s * s,
            omega: None,
            temperature: None,
        })
    }

    pub fn from_mean_photon_number(n_c: f64) -> Result<Self> {
        if !n_c.is_finite() || n_c < 0.0 {
            return Err(Error::InvalidParameter {
                name: "n_c",
                value: n_c,
                reason: "must be finite and >= 0",
            });
        }
        Self::from_theta(n_c.sqrt().asinh())
    }

    pub fn from_temperature(omega: f64, kt: f64) -> Result<Self> {
        let theta = theta_from_temperature(omega, kt)?;
        Ok(Self {
            omega: Some(omega),
            temperature: Some(kt),
            ..Self::from_theta(theta)?
        })
    }

    pub fn hyperbolic(&self) -> Hyperbolic {
        let (sinh, cosh) = (self.theta.sinh(), self.theta.cosh());
        let cosh2 = (2.0 * self.theta).cosh();
        Hyperbolic {
            cosh,
            sinh,
            cosh2,
            sech2: 1.0 / cosh2,
            tanh2: (2.0 * self.theta).tanh(),
        }
    }
}

/// `ThermalParams` for a bare `theta` (no frequency/temperature attached).
pub fn params_from_theta(theta: f64) -> Result<ThermalParams> {
    ThermalParams::from_theta(theta)
}
