//! Closed-form Wigner functions of the thermo vacuum, photon-subtracted and
//! photon-added thermo vacuum, and thermo number states.
//!
//! Convention: `alpha = (q + i p) / sqrt(2)`, the vacuum peaks at `1/pi`, and
//! every Wigner function integrates to one against `dq dp`.

use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{factorial, hermite2, laguerre};
use crate::thermo_params::ThermalParams;

/// Largest excitation/subtraction/addition count accepted.
pub const MAX_EXCITATION: usize = 16;

/// Phase-space point `(q, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: Self = Self { q: 0.0, p: 0.0 };

    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn from_alpha(alpha: Complex64) -> Self {
        Self {
            q: alpha.re * std::f64::consts::SQRT_2,
            p: alpha.im * std::f64::consts::SQRT_2,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.q, self.p) * FRAC_1_SQRT_2
    }

    /// `|alpha|^2 = (q^2 + p^2) / 2`.
    pub fn abs_sq(&self) -> f64 {
        0.5 * (self.q * self.q + self.p * self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    ThermoVacuum,
    PhotonSubtracted,
    PhotonAdded,
    ThermoNumber,
}

impl StateFamily {
    pub const ALL: [StateFamily; 4] = [
        StateFamily::ThermoVacuum,
        StateFamily::PhotonSubtracted,
        StateFamily::PhotonAdded,
        StateFamily::ThermoNumber,
    ];
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateFamily::ThermoVacuum => "thermo-vacuum",
            StateFamily::PhotonSubtracted => "photon-subtracted",
            StateFamily::PhotonAdded => "photon-added",
            StateFamily::ThermoNumber => "thermo-number",
        })
    }
}

/// Which state, with how many photons, at which temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub family: StateFamily,
    pub n: usize,
    pub thermal: ThermalParams,
}

impl StateSpec {
    /// Validates the excitation cap. `n` is forced to zero for the vacuum.
    pub fn new(family: StateFamily, n: usize, thermal: ThermalParams) -> Result<Self> {
        check_excitation(n)?;
        let n = if family == StateFamily::ThermoVacuum {
            0
        } else {
            n
        };
        Ok(Self { family, n, thermal })
    }

    pub fn thermo_vacuum(thermal: ThermalParams) -> Self {
        Self {
            family: StateFamily::ThermoVacuum,
            n: 0,
            thermal,
        }
    }

    /// Closed-form Wigner value at `point`.
    ///
    /// A thermo number state at `theta = 0` evaluates the number-state limit.
    pub fn wigner(&self, point: PhasePoint) -> Result<f64> {
        match self.family {
            StateFamily::ThermoVacuum => Ok(wf_thermo_vacuum(point, &self.thermal)),
            StateFamily::PhotonSubtracted => wf_photon_subtracted(point, self.n, &self.thermal),
            StateFamily::PhotonAdded => wf_photon_added(point, self.n, &self.thermal),
            StateFamily::ThermoNumber if self.thermal.theta == 0.0 => {
                Ok(wf_number_state(point, self.n))
            }
            StateFamily::ThermoNumber => wf_thermo_number(point, self.n, &self.thermal),
        }
    }

    /// Characteristic width squared of the Gaussian envelope, `cosh(2 theta)`.
    pub fn envelope_scale(&self) -> f64 {
        (2.0 * self.thermal.theta).cosh()
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} theta={}",
            self.family, self.n, self.thermal.theta
        )
    }
}

fn check_excitation(n: usize) -> Result<()> {
    if n > MAX_EXCITATION {
        Err(Error::ExcitationTooLarge {
            n,
            max: MAX_EXCITATION,
        })
    } else {
        Ok(())
    }
}

fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Thermo vacuum: `(sech 2theta / pi) exp(-2 |alpha|^2 sech 2theta)`.
pub fn wf_thermo_vacuum(point: PhasePoint, thermal: &ThermalParams) -> f64 {
    let sech2 = 1.0 / (2.0 * thermal.theta).cosh();
    sech2 * FRAC_1_PI * (-2.0 * point.abs_sq() * sech2).exp()
}

/// `n`-photon-subtracted thermo vacuum, a Gaussian-Laguerre function that is
/// non-negative everywhere.
pub fn wf_photon_subtracted(point: PhasePoint, n: usize, thermal: &ThermalParams) -> Result<f64> {
    check_excitation(n)?;
    if n > 0 && thermal.theta == 0.0 {
        return Err(Error::DegenerateState(
            "photon subtraction from the zero-temperature vacuum",
        ));
    }
    let h = thermal.hyperbolic();
    let r2 = point.abs_sq();
    let envelope = (-2.0 * r2 * h.sech2).exp() * FRAC_1_PI * h.sech2.powi(n as i32 + 1);
    Ok(envelope * laguerre(n, -4.0 * h.sinh * h.sinh * h.sech2 * r2))
}

/// Same state as [`wf_photon_subtracted`], written in terms of the mean
/// thermal photon number.
pub fn wf_photon_subtracted_nc_form(point: PhasePoint, n: usize, n_c: f64) -> Result<f64> {
    check_excitation(n)?;
    if !n_c.is_finite() || n_c < 0.0 {
        return Err(Error::InvalidParameter {
            name: "n_c",
            value: n_c,
            reason: "must be finite and >= 0",
        });
    }
    if n > 0 && n_c == 0.0 {
        return Err(Error::DegenerateState(
            "photon subtraction from the zero-temperature vacuum",
        ));
    }
    let width = 2.0 * n_c + 1.0;
    let r2 = point.abs_sq();
    let envelope = (-2.0 * r2 / width).exp() / (std::f64::consts::PI * width.powi(n as i32 + 1));
    Ok(envelope * laguerre(n, -4.0 * n_c * r2 / width))
}

/// `n`-photon-added thermo vacuum. Negative near the origin for odd `n`.
pub fn wf_photon_added(point: PhasePoint, n: usize, thermal: &ThermalParams) -> Result<f64> {
    check_excitation(n)?;
    let h = thermal.hyperbolic();
    let r2 = point.abs_sq();
    let envelope = sign(n) * (-2.0 * r2 * h.sech2).exp() * FRAC_1_PI * h.sech2.powi(n as i32 + 1);
    Ok(envelope * laguerre(n, 4.0 * h.cosh * h.cosh * h.sech2 * r2))
}

/// Fock state `|n>`: `((-1)^n / pi) exp(-2|alpha|^2) L_n(4|alpha|^2)`.
pub fn wf_number_state(point: PhasePoint, n: usize) -> f64 {
    let r2 = point.abs_sq();
    sign(n) * FRAC_1_PI * (-2.0 * r2).exp() * laguerre(n, 4.0 * r2)
}

/// Thermo number state `S(theta)|n, n~>` traced over the tilde mode.
///
/// Double sum over `l, k = 0..=n` of
/// `(-1)^k sech^{l+k}(2theta) tanh^{2(n-l)}(2theta) / (l! k! [(n-l)! (n-k)!]^2)
///  * |H_{n-k, n-l}(E, F* / tanh 2theta)|^2`
/// with `E = 2 alpha sech2theta cosh theta`, `F = 2 alpha sech2theta sinh theta`,
/// scaled by `n!^2 exp(-2|alpha|^2 sech 2theta) / (pi cosh 2theta)`.
pub fn wf_thermo_number(point: PhasePoint, n: usize, thermal: &ThermalParams) -> Result<f64> {
    check_excitation(n)?;
    if thermal.theta == 0.0 {
        return Err(Error::ZeroTemperatureThermoNumber);
    }
    let h = thermal.hyperbolic();
    let alpha = point.alpha();
    let e = alpha * (2.0 * h.sech2 * h.cosh);
    let f = alpha * (2.0 * h.sech2 * h.sinh);
    let f_arg = f.conj() / h.tanh2;

    let mut sum = 0.0;
    for l in 0..=n {
        for k in 0..=n {
            let hk = hermite2(n - k, n - l, e, f_arg)?;
            let modulus = hk * hk.conj();
            debug_assert_eq!(modulus.im, 0.0);
            let weight = sign(k) * h.sech2.powi((l + k) as i32) * h.tanh2.powi(2 * (n - l) as i32)
                / (factorial(l)? * factorial(k)? * (factorial(n - l)? * factorial(n - k)?).powi(2));
            sum += weight * modulus.re;
        }
    }
    let nf = factorial(n)?;
    Ok(nf * nf * (-2.0 * point.abs_sq() * h.sech2).exp() * FRAC_1_PI * h.sech2 * sum)
}

/// `C_1 = 1 / (n! sinh^{2n} theta)`, normalization of `a^n rho_c a^{dag n}`.
pub fn norm_const_subtracted(n: usize, thermal: &ThermalParams) -> Result<f64> {
    check_excitation(n)?;
    if n > 0 && thermal.theta == 0.0 {
        return Err(Error::DegenerateState("C_1 diverges at zero temperature"));
    }
    Ok(1.0 / (factorial(n)? * thermal.theta.sinh().powi(2 * n as i32)))
}

/// `C_2 = 1 / (n! cosh^{2n} theta)`, normalization of `a^{dag n} rho_c a^n`.
pub fn norm_const_added(n: usize, thermal: &ThermalParams) -> Result<f64> {
    check_excitation(n)?;
    Ok(1.0 / (factorial(n)? * thermal.theta.cosh().powi(2 * n as i32)))
}
