//! Phase-space grids, Simpson quadrature, negativity, and closed-form versus
//! oracle verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{
    wf_number_state, wf_photon_subtracted, wf_photon_subtracted_nc_form, wf_thermo_vacuum,
    PhasePoint, StateFamily, StateSpec,
};
use crate::error::{Error, Result};
use crate::fock_oracle::{density_for, WignerOracle};
use crate::thermo_params::ThermalParams;

/// Which evaluator produced a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Oracle,
}

/// Uniform rectangular sampling of the `(q, p)` plane, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

impl GridSpec {
    /// `[-half_width, half_width]^2` with `res` nodes per axis.
    pub fn square(half_width: f64, res: usize) -> Self {
        Self {
            q_min: -half_width,
            q_max: half_width,
            p_min: -half_width,
            p_max: half_width,
            nq: res,
            np: res,
        }
    }

    /// Verification grid for a family: `[-4,4]^2` at 81x81, or `[-3,3]^2` at
    /// 49x49 for the thermo number state.
    pub fn default_for(family: StateFamily) -> Self {
        match family {
            StateFamily::ThermoNumber => Self::square(3.0, 49),
            _ => Self::square(4.0, 81),
        }
    }

    /// Square box wide enough for the normalization checks of `state`, with
    /// node spacing at most `spacing` and an odd node count.
    pub fn auto_for(state: &StateSpec, spacing: f64) -> Self {
        let half = state.envelope_scale().sqrt() * (4.0 + 2.0 * (state.n as f64).sqrt());
        let mut res = (2.0 * half / spacing).ceil() as usize + 1;
        if res % 2 == 0 {
            res += 1;
        }
        Self::square(half, res)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.q_min, self.q_max, self.p_min, self.p_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("bounds must be finite"));
        }
        if self.q_max <= self.q_min || self.p_max <= self.p_min {
            return Err(Error::InvalidGrid("box is degenerate"));
        }
        if self.nq < 2 || self.np < 2 {
            return Err(Error::InvalidGrid("need at least 2 nodes per axis"));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    /// Node at flat index `idx` (q-major).
    pub fn point(&self, idx: usize) -> PhasePoint {
        PhasePoint::new(self.q(idx / self.np), self.p(idx % self.np))
    }

    pub fn len(&self) -> usize {
        self.nq * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest `|alpha|^2` over the box corners.
    pub fn max_alpha_sq(&self) -> f64 {
        let q = self.q_min.abs().max(self.q_max.abs());
        let p = self.p_min.abs().max(self.p_max.abs());
        0.5 * (q * q + p * p)
    }

    /// Smallest distance from the origin to an edge of the box.
    pub fn inner_half_width(&self) -> f64 {
        (-self.q_min)
            .min(self.q_max)
            .min(-self.p_min)
            .min(self.p_max)
    }
}

/// Sampled Wigner function. `values[i * np + j]` is the value at `(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    #[serde(flatten)]
    pub grid: GridSpec,
    pub state: StateSpec,
    pub source: Source,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.np + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluates `state` at every node of `grid` with the requested evaluator.
pub fn sample_grid(state: &StateSpec, grid: GridSpec, source: Source) -> Result<WignerGrid> {
    grid.validate()?;
    let values = match source {
        Source::ClosedForm => (0..grid.len())
            .into_par_iter()
            .map(|idx| state.wigner(grid.point(idx)))
            .collect::<Result<Vec<_>>>()?,
        Source::Oracle => {
            let rho = density_for(state, grid.max_alpha_sq())?;
            let oracle = WignerOracle::new(&rho);
            (0..grid.len())
                .into_par_iter()
                .map(|idx| oracle.wigner(grid.point(idx)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(WignerGrid {
        grid,
        state: *state,
        source,
        values,
    })
}

/// Composite Simpson weights for `n` equally spaced nodes. An odd number of
/// intervals closes with Simpson's 3/8 rule on the last three.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    match n {
        0 | 1 => {}
        2 => {
            w[0] = h / 2.0;
            w[1] = h / 2.0;
        }
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
            let mut k = 0;
            while k + 2 <= simpson_end {
                w[k] += h / 3.0;
                w[k + 1] += 4.0 * h / 3.0;
                w[k + 2] += h / 3.0;
                k += 2;
            }
            if intervals % 2 == 1 {
                let s = simpson_end;
                w[s] += 3.0 * h / 8.0;
                w[s + 1] += 9.0 * h / 8.0;
                w[s + 2] += 9.0 * h / 8.0;
                w[s + 3] += 3.0 * h / 8.0;
            }
        }
    }
    w
}

fn check_integration_box(grid: &WignerGrid) -> Result<()> {
    let required = 4.0 * grid.state.envelope_scale().sqrt();
    let half_width = grid.grid.inner_half_width();
    if half_width < required {
        return Err(Error::BoxTooSmall {
            half_width,
            required,
        });
    }
    Ok(())
}

fn integrate(grid: &WignerGrid, f: impl Fn(f64) -> f64) -> f64 {
    let wq = simpson_weights(grid.grid.nq, grid.grid.dq());
    let wp = simpson_weights(grid.grid.np, grid.grid.dp());
    let mut total = 0.0;
    for (i, wi) in wq.iter().enumerate() {
        let row: f64 = wp
            .iter()
            .enumerate()
            .map(|(j, wj)| wj * f(grid.value(i, j)))
            .sum();
        total += wi * row;
    }
    total
}

/// `int W dq dp`; one for a normalized state.
pub fn normalization_integral(grid: &WignerGrid) -> Result<f64> {
    check_integration_box(grid)?;
    Ok(integrate(grid, |w| w))
}

/// Total negative mass `int (|W| - W) / 2 dq dp`.
pub fn negativity_volume(grid: &WignerGrid) -> Result<f64> {
    check_integration_box(grid)?;
    Ok(integrate(grid, |w| 0.5 * (w.abs() - w)).max(0.0))
}

/// Pass/fail thresholds for [`verify_state`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max pointwise `|closed form - oracle|`.
    pub pointwise: f64,
    /// Allowed `|int W - 1|`.
    pub normalization: f64,
    /// Allowed negativity volume for photon-subtracted states.
    pub subtracted_negativity: f64,
    /// Node spacing of the auto-sized normalization grid.
    pub norm_spacing: f64,
}

impl Tolerances {
    /// 1e-8 for single-mode oracles, 1e-6 where the two-mode exponential enters.
    pub fn for_family(family: StateFamily) -> Self {
        Self {
            pointwise: match family {
                StateFamily::ThermoNumber => 1e-6,
                _ => 1e-8,
            },
            normalization: 1e-4,
            subtracted_negativity: 1e-6,
            norm_spacing: 0.05,
        }
    }
}

/// Outcome of comparing the closed form with the oracle for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub state: StateSpec,
    pub grid: GridSpec,
    pub norm_grid: GridSpec,
    pub tolerances: Tolerances,
    pub max_abs_err: Option<f64>,
    pub mean_abs_err: Option<f64>,
    pub norm_integral: Option<f64>,
    pub negativity_volume: Option<f64>,
    pub errors: Vec<String>,
    pub pass: bool,
}

/// Samples both evaluators on `grid`, compares them pointwise, and checks
/// normalization and negativity on an auto-sized closed-form grid. Sub-errors
/// are collected into the report.
pub fn verify_state(
    state: &StateSpec,
    grid: GridSpec,
    tolerances: Tolerances,
) -> VerificationReport {
    let norm_grid = GridSpec::auto_for(state, tolerances.norm_spacing);
    let mut errors = Vec::new();

    let closed = sample_grid(state, grid, Source::ClosedForm)
        .map_err(|e| errors.push(format!("closed form: {e}")))
        .ok();
    let oracle = sample_grid(state, grid, Source::Oracle)
        .map_err(|e| errors.push(format!("oracle: {e}")))
        .ok();
    let (max_abs_err, mean_abs_err) = match (&closed, &oracle) {
        (Some(a), Some(b)) => {
            let diffs: Vec<f64> = a
                .values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| (x - y).abs())
                .collect();
            let max = diffs.iter().copied().fold(0.0, f64::max);
            let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
            (Some(max), Some(mean))
        }
        _ => (None, None),
    };

    let mut norm_integral = None;
    let mut negativity = None;
    match sample_grid(state, norm_grid, Source::ClosedForm) {
        Ok(g) => {
            match normalization_integral(&g) {
                Ok(v) => norm_integral = Some(v),
                Err(e) => errors.push(format!("normalization: {e}")),
            }
            match negativity_volume(&g) {
                Ok(v) => negativity = Some(v),
                Err(e) => errors.push(format!("negativity: {e}")),
            }
        }
        Err(e) => errors.push(format!("normalization grid: {e}")),
    }

    // NaN must fail, hence the explicit comparisons rather than negations.
    let mut pass = errors.is_empty();
    if max_abs_err.is_some_and(|err| err.is_nan() || err >= tolerances.pointwise) {
        pass = false;
    }
    if norm_integral.is_some_and(|norm| {
        (norm - 1.0).abs().is_nan() || (norm - 1.0).abs() > tolerances.normalization
    }) {
        pass = false;
    }
    if state.family == StateFamily::PhotonSubtracted {
        if let Some(neg) = negativity {
            if neg > tolerances.subtracted_negativity {
                pass = false;
            }
        }
    }

    VerificationReport {
        state: *state,
        grid,
        norm_grid,
        tolerances,
        max_abs_err,
        mean_abs_err,
        norm_integral,
        negativity_volume: negativity,
        errors,
        pass,
    }
}

/// One entry of [`limit_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub name: String,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn max_diff_on_grid(grid: &GridSpec, f: impl Fn(PhasePoint) -> Result<(f64, f64)>) -> Result<f64> {
    let mut worst = 0.0f64;
    for idx in 0..grid.len() {
        let (a, b) = f(grid.point(idx))?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

fn limit_check(name: String, tolerance: f64, diff: Result<f64>) -> LimitCheck {
    match diff {
        Ok(d) => LimitCheck {
            name,
            max_abs_diff: d,
            tolerance,
            pass: d < tolerance,
            error: None,
        },
        Err(e) => LimitCheck {
            name,
            max_abs_diff: f64::INFINITY,
            tolerance,
            pass: false,
            error: Some(e.to_string()),
        },
    }
}

/// Seed for the random samples of the parameterization check.
pub const LIMIT_SUITE_SEED: u64 = 0x7e_57_1e;

/// Reduction checks: `n = 0` against the thermo vacuum for every family,
/// `theta = 1e-6` against the zero-temperature forms, and the `theta` versus
/// `n_c` forms of the photon-subtracted state on random samples.
pub fn limit_suite() -> Vec<LimitCheck> {
    let mut out = Vec::new();
    let grid = GridSpec::square(4.0, 41);

    for family in [
        StateFamily::PhotonSubtracted,
        StateFamily::PhotonAdded,
        StateFamily::ThermoNumber,
    ] {
        for theta in [0.2, 0.5, 1.0] {
            let diff = ThermalParams::from_theta(theta)
                .and_then(|th| StateSpec::new(family, 0, th).map(|s| (s, th)))
                .and_then(|(spec, th)| {
                    max_diff_on_grid(&grid, |pt| {
                        Ok((spec.wigner(pt)?, wf_thermo_vacuum(pt, &th)))
                    })
                });
            out.push(limit_check(
                format!("n=0 {family} theta={theta} vs thermo vacuum"),
                1e-12,
                diff,
            ));
        }
    }

    let cold = ThermalParams::from_theta(1e-6).expect("valid theta");
    for n in 1..=3usize {
        for family in [StateFamily::PhotonAdded, StateFamily::ThermoNumber] {
            let diff = StateSpec::new(family, n, cold).and_then(|spec| {
                max_diff_on_grid(&grid, |pt| Ok((spec.wigner(pt)?, wf_number_state(pt, n))))
            });
            out.push(limit_check(
                format!("theta=1e-6 {family} n={n} vs number state"),
                1e-6,
                diff,
            ));
        }
        let diff = max_diff_on_grid(&grid, |pt| {
            let vacuum = std::f64::consts::FRAC_1_PI * (-2.0 * pt.abs_sq()).exp();
            Ok((wf_photon_subtracted(pt, n, &cold)?, vacuum))
        });
        out.push(limit_check(
            format!("theta=1e-6 photon-subtracted n={n} vs vacuum Gaussian"),
            1e-6,
            diff,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(LIMIT_SUITE_SEED);
    let mut worst = Ok(0.0f64);
    for _ in 0..100 {
        let theta = rng.gen_range(0.05..2.0);
        let n = rng.gen_range(0..=8usize);
        let pt = PhasePoint::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let d = ThermalParams::from_theta(theta).and_then(|th| {
            Ok(
                (wf_photon_subtracted(pt, n, &th)? - wf_photon_subtracted_nc_form(pt, n, th.n_c)?)
                    .abs(),
            )
        });
        worst = match (worst, d) {
            (Ok(w), Ok(d)) => Ok(w.max(d)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
    }
    out.push(limit_check(
        "theta form vs n_c form, 100 random samples".to_string(),
        1e-12,
        worst,
    ));
    out
}

/// Number of sign changes of `W` along the positive `q` axis for
/// `|alpha| in [0, r_max]`, sampled at `samples + 1` points. Exact zeros are
/// skipped.
pub fn radial_sign_changes(state: &StateSpec, r_max: f64, samples: usize) -> Result<usize> {
    let mut changes = 0;
    let mut last = 0.0f64;
    for i in 0..=samples {
        let r = r_max * i as f64 / samples as f64;
        let w = state.wigner(PhasePoint::new(r * std::f64::consts::SQRT_2, 0.0))?;
        if w == 0.0 {
            continue;
        }
        if last != 0.0 && w.signum() != last.signum() {
            changes += 1;
        }
        last = w;
    }
    Ok(changes)
}

/// One row of a temperature scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaScanRow {
    pub theta: f64,
    pub w0: f64,
    pub negativity_volume: f64,
}

/// `W(0)` and negativity volume of `family` with `n` photons at each `theta`.
pub fn scan_theta(
    family: StateFamily,
    n: usize,
    thetas: &[f64],
    spacing: f64,
) -> Result<Vec<ThetaScanRow>> {
    thetas
        .iter()
        .map(|&theta| {
            let spec = StateSpec::new(family, n, ThermalParams::from_theta(theta)?)?;
            let grid = sample_grid(
                &spec,
                GridSpec::auto_for(&spec, spacing),
                Source::ClosedForm,
            )?;
            Ok(ThetaScanRow {
                theta,
                w0: spec.wigner(PhasePoint::ORIGIN)?,
                negativity_volume: negativity_volume(&grid)?,
            })
        })
        .collect()
}
