//! Truncated Fock-space ground truth.
//!
//! States are built as density matrices in the number basis (thermal state,
//! conditional photon subtraction/addition, a two-mode squeezed number state
//! traced over the tilde mode) and their Wigner functions are read off as the
//! expectation of the displaced parity operator:
//!
//! ```text
//! W(alpha) = (1/pi) Tr[rho D(alpha) P D(alpha)^dag],   P = (-1)^{a^dag a}
//! ```
//!
//! Nothing here calls the closed forms.

use std::f64::consts::FRAC_1_PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::closed_form::{PhasePoint, StateFamily, StateSpec};
use crate::error::{Error, Result};

/// Largest per-mode truncation for the two-mode construction.
pub const MAX_TWO_MODE_DIM: usize = 32;

/// Population allowed beyond the truncation of a thermal state.
pub const THERMAL_TAIL_TOL: f64 = 1e-12;

/// Prefactor of the displaced-parity sum under `alpha = (q + i p)/sqrt(2)`.
/// Checked against the vacuum by [`calibration_residual`].
pub const PARITY_PREFACTOR: f64 = FRAC_1_PI;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_FLOOR: f64 = -1e-10;
const IMAG_RESIDUE_TOL: f64 = 1e-10;
const ANNIHILATED_TRACE: f64 = 1e-14;
const HEADROOM_TOL: f64 = 1e-12;
const TWO_MODE_DEFICIT_TOL: f64 = 1e-8;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Truncated annihilation and creation operators.
#[derive(Debug, Clone)]
pub struct LadderOps {
    pub dim: usize,
    pub annihilate: DMatrix<f64>,
    pub create: DMatrix<f64>,
}

impl LadderOps {
    pub fn new(dim: usize) -> Self {
        let mut a = DMatrix::zeros(dim, dim);
        for m in 0..dim.saturating_sub(1) {
            a[(m, m + 1)] = ((m + 1) as f64).sqrt();
        }
        Self {
            dim,
            create: a.transpose(),
            annihilate: a,
        }
    }

    fn power(op: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
        (0..n).fold(DMatrix::identity(op.nrows(), op.ncols()), |acc, _| {
            &acc * op
        })
    }
}

/// Density matrix in a truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    pub dim: usize,
    pub entries: DMatrix<Complex64>,
}

/// Result of a conditional photon operation: the renormalized state and the
/// trace before renormalization.
#[derive(Debug, Clone)]
pub struct Conditioned {
    pub state: FockDensityMatrix,
    pub raw_trace: f64,
}

impl FockDensityMatrix {
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::ShapeMismatch {
                expected: entries.nrows(),
                actual: entries.ncols(),
            });
        }
        Ok(Self {
            dim: entries.nrows(),
            entries,
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let entries = DMatrix::from_fn(
            dim,
            dim,
            |i, j| if i == j { c64(diag[i]) } else { c64(0.0) },
        );
        Self { dim, entries }
    }

    /// `|n><n|` in a `dim`-dimensional space.
    pub fn number_state(n: usize, dim: usize) -> Self {
        let mut diag = vec![0.0; dim];
        diag[n] = 1.0;
        Self::from_diagonal(&diag)
    }

    /// `|psi><psi|` for a (not necessarily normalized) ket, normalized.
    pub fn pure(ket: &DVector<Complex64>) -> Self {
        let mut entries = ket * ket.adjoint();
        let tr = entries.trace().re;
        entries /= c64(tr);
        Self {
            dim: ket.len(),
            entries,
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Largest entry of `|rho - rho^dag|`.
    pub fn hermiticity_error(&self) -> f64 {
        let diff = &self.entries - self.entries.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidParameter {
                name: "hermiticity error",
                value: herm,
                reason: "density matrix is not Hermitian",
            });
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidParameter {
                name: "trace",
                value: tr,
                reason: "density matrix is not normalized",
            });
        }
        let floor = self.min_eigenvalue();
        if floor < EIGEN_FLOOR {
            return Err(Error::InvalidParameter {
                name: "min eigenvalue",
                value: floor,
                reason: "density matrix is not positive",
            });
        }
        Ok(())
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_phase_invariant(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(idx, z)| idx % (self.dim + 1) == 0 || *z == c64(0.0))
    }

    /// Smallest `s` with diagonal population at indices `>= s` below `tol`.
    pub fn support(&self, tol: f64) -> usize {
        let diag = self.diagonal();
        let mut tail = 0.0;
        for s in (0..self.dim).rev() {
            tail += diag[s].abs();
            if tail >= tol {
                return s + 1;
            }
        }
        0
    }

    /// Zero-pads into a larger space.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::TruncationTooSmall {
                dim,
                required: self.dim,
            });
        }
        let mut entries = DMatrix::zeros(dim, dim);
        entries
            .view_mut((0, 0), (self.dim, self.dim))
            .copy_from(&self.entries);
        Ok(Self { dim, entries })
    }

    fn renormalized(entries: DMatrix<Complex64>) -> (Self, f64) {
        let raw = entries.trace().re;
        let dim = entries.nrows();
        (
            Self {
                dim,
                entries: entries / c64(raw),
            },
            raw,
        )
    }
}

/// Smallest truncation with thermal tail `(n_c/(n_c+1))^dim` below `tol`.
pub fn required_thermal_dim(n_c: f64, tol: f64) -> usize {
    if n_c <= 0.0 {
        return 1;
    }
    let x = n_c / (n_c + 1.0);
    ((tol.ln() / x.ln()).ceil() as usize).max(1)
}

/// Thermal state `sum_l n_c^l / (n_c+1)^{l+1} |l><l|`, renormalized to unit
/// trace after truncation.
pub fn thermal_density_matrix(n_c: f64, dim: usize) -> Result<FockDensityMatrix> {
    if !n_c.is_finite() || n_c < 0.0 {
        return Err(Error::InvalidParameter {
            name: "n_c",
            value: n_c,
            reason: "must be finite and >= 0",
        });
    }
    let required = required_thermal_dim(n_c, THERMAL_TAIL_TOL);
    if dim < required {
        return Err(Error::TruncationTooSmall { dim, required });
    }
    let x = n_c / (n_c + 1.0);
    let mut diag: Vec<f64> = (0..dim).map(|l| x.powi(l as i32) / (n_c + 1.0)).collect();
    let total: f64 = diag.iter().sum();
    diag.iter_mut().for_each(|d| *d /= total);
    Ok(FockDensityMatrix::from_diagonal(&diag))
}

/// `a^n rho a^{dag n}`, renormalized.
pub fn apply_subtraction(rho: &FockDensityMatrix, n: usize) -> Result<Conditioned> {
    if n == 0 {
        return Ok(Conditioned {
            state: rho.clone(),
            raw_trace: rho.trace(),
        });
    }
    let ops = LadderOps::new(rho.dim);
    let an = LadderOps::power(&ops.annihilate, n).map(c64);
    let out = &an * &rho.entries * an.adjoint();
    let (state, raw_trace) = FockDensityMatrix::renormalized(out);
    if raw_trace <= ANNIHILATED_TRACE {
        return Err(Error::AnnihilatedState { trace: raw_trace });
    }
    Ok(Conditioned { state, raw_trace })
}

/// `a^{dag n} rho a^n`, renormalized. The top `n` levels of `rho` must be
/// empty so the shift stays inside the truncation.
pub fn apply_addition(rho: &FockDensityMatrix, n: usize) -> Result<Conditioned> {
    if n == 0 {
        return Ok(Conditioned {
            state: rho.clone(),
            raw_trace: rho.trace(),
        });
    }
    let diag = rho.diagonal();
    let population: f64 = diag[rho.dim.saturating_sub(n)..]
        .iter()
        .map(|d| d.abs())
        .sum();
    if n >= rho.dim || population >= HEADROOM_TOL {
        return Err(Error::InsufficientHeadroom { population });
    }
    let ops = LadderOps::new(rho.dim);
    let adn = LadderOps::power(&ops.create, n).map(c64);
    let out = &adn * &rho.entries * adn.adjoint();
    let (state, raw_trace) = FockDensityMatrix::renormalized(out);
    Ok(Conditioned { state, raw_trace })
}

/// Traces out the second (tilde) factor of a `dim^2 x dim^2` two-mode matrix
/// indexed as `physical * dim + tilde`.
pub fn partial_trace_tilde(rho2: &DMatrix<Complex64>, dim: usize) -> Result<FockDensityMatrix> {
    let full = dim * dim;
    if rho2.nrows() != full || rho2.ncols() != full {
        return Err(Error::ShapeMismatch {
            expected: full,
            actual: rho2.nrows().max(rho2.ncols()),
        });
    }
    let entries = DMatrix::from_fn(dim, dim, |i, k| {
        (0..dim).map(|j| rho2[(i * dim + j, k * dim + j)]).sum()
    });
    Ok(FockDensityMatrix { dim, entries })
}

/// `exp(A) v` for a real matrix by scaled Taylor series.
pub fn expm_multiply(a: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    let norm1 = a
        .column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let steps = norm1.ceil().max(1.0) as usize;
    let scale = 1.0 / steps as f64;
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut sum = out.clone();
        for k in 1..=80 {
            term = (a * &term) * (scale / k as f64);
            sum += &term;
            if term.amax() <= f64::EPSILON * 1e-3 * sum.amax() {
                break;
            }
        }
        out = sum;
    }
    out
}

/// Per-mode truncation used for the thermo number state at `theta`.
pub fn two_mode_dim(n: usize, theta: f64) -> usize {
    let n_c = theta.sinh().powi(2);
    (n + 4 + 2 * required_thermal_dim(n_c, 1e-13)).min(MAX_TWO_MODE_DIM)
}

/// `Tr_tilde[S(theta) |n, n~><n, n~| S(theta)^dag]` with the two-mode squeeze
/// `S(theta) = exp[theta (a^dag a~^dag - a a~)]`.
pub fn thermo_number_reduced(n: usize, theta: f64, dim: usize) -> Result<FockDensityMatrix> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "must be finite and >= 0",
        });
    }
    if dim > MAX_TWO_MODE_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_TWO_MODE_DIM,
        });
    }
    if dim < n + 2 {
        return Err(Error::TruncationTooSmall {
            dim,
            required: n + 2,
        });
    }
    let ops = LadderOps::new(dim);
    let generator =
        (ops.create.kronecker(&ops.create) - ops.annihilate.kronecker(&ops.annihilate)) * theta;
    let mut start = DVector::zeros(dim * dim);
    start[n * dim + n] = 1.0;
    let psi = expm_multiply(&generator, &start);

    // Population in the last two levels of either mode, where the truncated
    // ladder operators stop being faithful.
    let deficit: f64 = (0..dim * dim)
        .filter(|idx| idx / dim + 2 >= dim || idx % dim + 2 >= dim)
        .map(|idx| psi[idx] * psi[idx])
        .sum();
    if deficit > TWO_MODE_DEFICIT_TOL {
        return Err(Error::TruncationDeficit { deficit });
    }

    let psi = psi.map(c64);
    let rho2 = &psi * psi.adjoint();
    let reduced = partial_trace_tilde(&rho2, dim)?;
    let (state, _) = FockDensityMatrix::renormalized(reduced.entries);
    Ok(state)
}

/// Spectral data of the truncated position-like generator `X = a + a^dag`,
/// from which every displacement in this truncation is assembled:
///
/// `D(r e^{i phi}) = Q exp(-i r Lambda) Q^dag`, `Q = diag(i^m e^{i phi m}) V`,
/// where `X = V Lambda V^T`.
#[derive(Debug, Clone)]
pub struct ParityKernel {
    dim: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    /// `V^T P V`.
    parity: DMatrix<f64>,
}

impl ParityKernel {
    pub fn new(dim: usize) -> Self {
        let ops = LadderOps::new(dim);
        let x = &ops.annihilate + &ops.create;
        let eig = SymmetricEigen::new(x);
        let v = eig.eigenvectors;
        let mut pv = v.clone();
        for (m, mut row) in pv.row_iter_mut().enumerate() {
            if m % 2 == 1 {
                row.neg_mut();
            }
        }
        let parity = v.transpose() * pv;
        Self {
            dim,
            eigenvalues: eig.eigenvalues,
            eigenvectors: v,
            parity,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn phases(&self, alpha: Complex64) -> Vec<Complex64> {
        let step = Complex64::i() * Complex64::from_polar(1.0, alpha.arg());
        let mut out = Vec::with_capacity(self.dim);
        let mut cur = c64(1.0);
        for _ in 0..self.dim {
            out.push(cur);
            cur *= step;
        }
        out
    }

    fn q_matrix(&self, alpha: Complex64) -> DMatrix<Complex64> {
        let ph = self.phases(alpha);
        DMatrix::from_fn(self.dim, self.dim, |m, j| ph[m] * self.eigenvectors[(m, j)])
    }

    fn spectral_phases(&self, alpha: Complex64) -> DVector<Complex64> {
        let r = alpha.norm();
        self.eigenvalues
            .map(|lam| Complex64::from_polar(1.0, -r * lam))
    }

    /// Displacement operator `exp(alpha a^dag - alpha* a)` in this truncation.
    pub fn displacement(&self, alpha: Complex64) -> DMatrix<Complex64> {
        let q = self.q_matrix(alpha);
        let e = self.spectral_phases(alpha);
        let mut qe = q.clone();
        for (j, mut col) in qe.column_iter_mut().enumerate() {
            col *= e[j];
        }
        qe * q.adjoint()
    }

    /// `V^T rho~ V` where `rho~_{mn} = rho_{mn} (i e^{i phi})^{n-m}`.
    fn rotated(&self, rho: &DMatrix<Complex64>, alpha: Complex64) -> DMatrix<Complex64> {
        let q = self.q_matrix(alpha);
        q.adjoint() * rho * q
    }

    fn parity_weights(&self, rotated: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |j, k| {
            rotated[(k, j)] * self.parity[(j, k)]
        })
    }

    fn contract(&self, weights: &DMatrix<Complex64>, alpha: Complex64) -> Result<f64> {
        let e = self.spectral_phases(alpha);
        let ec = e.map(|z| z.conj());
        let total = e.dot(&(weights * ec));
        let value = PARITY_PREFACTOR * total;
        if value.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::NonRealWigner {
                residue: value.im.abs(),
            });
        }
        Ok(value.re)
    }
}

/// Wigner evaluator for one density matrix, reusable across many points.
#[derive(Debug, Clone)]
pub struct WignerOracle {
    kernel: ParityKernel,
    rho: DMatrix<Complex64>,
    support: usize,
    /// Parity weights, when they do not depend on the displacement phase.
    invariant_weights: Option<DMatrix<Complex64>>,
}

impl WignerOracle {
    pub fn new(rho: &FockDensityMatrix) -> Self {
        let kernel = ParityKernel::new(rho.dim);
        let invariant_weights = rho.is_phase_invariant().then(|| {
            let rotated = kernel.rotated(&rho.entries, c64(0.0));
            kernel.parity_weights(&rotated)
        });
        Self {
            kernel,
            rho: rho.entries.clone(),
            support: rho.support(THERMAL_TAIL_TOL),
            invariant_weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim
    }

    /// Truncation needed to displace this state by `|alpha|^2 = alpha_sq`.
    pub fn required_dim(&self, alpha_sq: f64) -> usize {
        self.support + displacement_headroom(alpha_sq)
    }

    pub fn wigner(&self, point: PhasePoint) -> Result<f64> {
        let alpha_sq = point.abs_sq();
        let required = self.required_dim(alpha_sq);
        if required > self.kernel.dim {
            return Err(Error::TruncationLeak {
                alpha_sq,
                dim: self.kernel.dim,
                required,
            });
        }
        let alpha = point.alpha();
        match &self.invariant_weights {
            Some(w) => self.kernel.contract(w, alpha),
            None => {
                let rotated = self.kernel.rotated(&self.rho, alpha);
                self.kernel
                    .contract(&self.kernel.parity_weights(&rotated), alpha)
            }
        }
    }
}

/// Displacement headroom `max(10, ceil(8 |alpha|^2))`.
pub fn displacement_headroom(alpha_sq: f64) -> usize {
    ((8.0 * alpha_sq).ceil() as usize).max(10)
}

/// Displaced-parity Wigner value of `rho` at `point`.
pub fn wigner_from_density(rho: &FockDensityMatrix, point: PhasePoint) -> Result<f64> {
    WignerOracle::new(rho).wigner(point)
}

/// Same quantity, computed literally: form `D^dag rho D` and sum its diagonal
/// with alternating signs. `O(dim^3)` per point.
pub fn wigner_direct(rho: &FockDensityMatrix, point: PhasePoint) -> Result<f64> {
    let kernel = ParityKernel::new(rho.dim);
    let alpha_sq = point.abs_sq();
    let required = rho.support(THERMAL_TAIL_TOL) + displacement_headroom(alpha_sq);
    if required > rho.dim {
        return Err(Error::TruncationLeak {
            alpha_sq,
            dim: rho.dim,
            required,
        });
    }
    let d = kernel.displacement(point.alpha());
    let displaced = d.adjoint() * &rho.entries * d;
    let mut total = c64(0.0);
    for k in 0..rho.dim {
        let z = displaced[(k, k)];
        if k % 2 == 0 {
            total += z;
        } else {
            total -= z;
        }
    }
    let value = total * PARITY_PREFACTOR;
    if value.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::NonRealWigner {
            residue: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// `|W_vacuum(0) - 1/pi|` from the oracle; zero up to rounding when the
/// parity prefactor matches the closed-form convention.
pub fn calibration_residual() -> f64 {
    let vacuum = FockDensityMatrix::number_state(0, 16);
    let w = wigner_from_density(&vacuum, PhasePoint::ORIGIN).unwrap_or(f64::NAN);
    (w - FRAC_1_PI).abs()
}

/// Builds the oracle density matrix for `spec`, sized so that displacements
/// with `|alpha|^2 <= alpha_max_sq` stay inside the truncation.
pub fn density_for(spec: &StateSpec, alpha_max_sq: f64) -> Result<FockDensityMatrix> {
    let n = spec.n;
    let n_c = spec.thermal.n_c;
    let base = required_thermal_dim(n_c, THERMAL_TAIL_TOL);
    let pad = displacement_headroom(alpha_max_sq).max(4 * n + (8.0 * alpha_max_sq).ceil() as usize);
    match spec.family {
        StateFamily::ThermoVacuum => thermal_density_matrix(n_c, base + pad),
        StateFamily::PhotonSubtracted => {
            let rho = thermal_density_matrix(n_c, base + 4 * n + pad)?;
            Ok(apply_subtraction(&rho, n)?.state)
        }
        StateFamily::PhotonAdded => {
            let rho = thermal_density_matrix(n_c, base + 4 * n + pad + n)?;
            Ok(apply_addition(&rho, n)?.state)
        }
        StateFamily::ThermoNumber => {
            let theta = spec.thermal.theta;
            let reduced = thermo_number_reduced(n, theta, two_mode_dim(n, theta))?;
            let support = reduced.support(THERMAL_TAIL_TOL);
            reduced.embed(reduced.dim.max(support + pad))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo_params::params_from_theta;
    use approx::assert_relative_eq;

    fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn ladder_commutator_interior() {
        let ops = LadderOps::new(12);
        let comm = &ops.annihilate * &ops.create - &ops.create * &ops.annihilate;
        for i in 0..11 {
            for j in 0..11 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - expect).abs() < 1e-14);
            }
        }
        assert_eq!(ops.create, ops.annihilate.transpose());
    }

    #[test]
    fn thermal_examples() {
        let rho = thermal_density_matrix(0.0, 4).unwrap();
        assert_eq!(rho.diagonal(), vec![1.0, 0.0, 0.0, 0.0]);
        let rho = thermal_density_matrix(1.0, 80).unwrap();
        assert_relative_eq!(rho.diagonal()[0], 0.5, max_relative = 1e-12);
        for &t in &[0.2, 0.5, 1.0] {
            let n_c = params_from_theta(t).unwrap().n_c;
            let rho = thermal_density_matrix(n_c, 200).unwrap();
            let mean: f64 = rho
                .diagonal()
                .iter()
                .enumerate()
                .map(|(l, p)| l as f64 * p)
                .sum();
            assert_relative_eq!(mean, n_c, max_relative = 1e-10);
            rho.validate().unwrap();
        }
    }

    #[test]
    fn thermal_rejects_short_truncation() {
        let err = thermal_density_matrix(1.0, 10).unwrap_err();
        assert_eq!(
            err,
            Error::TruncationTooSmall {
                dim: 10,
                required: 40
            }
        );
        assert!(err.to_string().contains("40"));
    }

    #[test]
    fn subtraction_examples() {
        let vac = thermal_density_matrix(0.0, 8).unwrap();
        assert!(matches!(
            apply_subtraction(&vac, 1),
            Err(Error::AnnihilatedState { .. })
        ));
        let rho = thermal_density_matrix(1.0, 120).unwrap();
        let out = apply_subtraction(&rho, 1).unwrap();
        assert_relative_eq!(out.raw_trace, 1.0, max_relative = 1e-10);
        out.state.validate().unwrap();
        let same = apply_subtraction(&rho, 0).unwrap();
        assert_eq!(same.state, rho);
    }

    #[test]
    fn addition_examples() {
        let vac = thermal_density_matrix(0.0, 8).unwrap();
        let out = apply_addition(&vac, 1).unwrap();
        assert_eq!(out.state, FockDensityMatrix::number_state(1, 8));
        let n_c = params_from_theta(0.5).unwrap().n_c;
        let rho = thermal_density_matrix(n_c, 80).unwrap();
        let out = apply_addition(&rho, 1).unwrap();
        assert_relative_eq!(out.raw_trace, 0.5f64.cosh().powi(2), max_relative = 1e-10);
        assert_eq!(apply_addition(&rho, 0).unwrap().state, rho);
        let tight = thermal_density_matrix(1.0, 40).unwrap();
        assert!(matches!(
            apply_addition(&tight, 2),
            Err(Error::InsufficientHeadroom { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let dim = 3;
        let mut vac2 = DMatrix::zeros(9, 9);
        vac2[(0, 0)] = c64(1.0);
        let red = partial_trace_tilde(&vac2, dim).unwrap();
        assert_eq!(red, FockDensityMatrix::number_state(0, 3));

        let rho = DMatrix::from_row_slice(3, 3, &[0.5, 0.1, 0.0, 0.1, 0.3, 0.05, 0.0, 0.05, 0.2])
            .map(c64);
        let sigma = DMatrix::from_row_slice(3, 3, &[0.6, 0.0, 0.2, 0.0, 0.3, 0.0, 0.2, 0.0, 0.1])
            .map(c64)
            * c64(2.0);
        let red = partial_trace_tilde(&rho.kronecker(&sigma), dim).unwrap();
        assert!(max_abs_diff(&red.entries, &(rho * sigma.trace())) < 1e-15);

        assert!(matches!(
            partial_trace_tilde(&DMatrix::zeros(8, 8), 3),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn squeezed_vacuum_reduces_to_thermal() {
        let theta = 0.3;
        let reduced = thermo_number_reduced(0, theta, 24).unwrap();
        let thermal = thermal_density_matrix(theta.sinh().powi(2), 24).unwrap();
        assert!(max_abs_diff(&reduced.entries, &thermal.entries) < 1e-12);
        reduced.validate().unwrap();
    }

    #[test]
    fn thermo_number_at_zero_theta() {
        let rho = thermo_number_reduced(1, 0.0, 8).unwrap();
        assert_eq!(rho, FockDensityMatrix::number_state(1, 8));
        let rho = thermo_number_reduced(1, 1e-9, 8).unwrap();
        assert!((rho.diagonal()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thermo_number_limits() {
        assert!(matches!(
            thermo_number_reduced(1, 0.5, 33),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(matches!(
            thermo_number_reduced(1, 2.0, 12),
            Err(Error::TruncationDeficit { .. })
        ));
        let rho = thermo_number_reduced(2, 0.5, 32).unwrap();
        rho.validate().unwrap();
        assert!(rho.is_phase_invariant());
    }

    #[test]
    fn expm_multiply_matches_rotation() {
        // exp(t [[0, -1], [1, 0]]) is a rotation by t.
        let t = 7.3;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let v = expm_multiply(&a, &DVector::from_vec(vec![1.0, 0.0]));
        assert!((v[0] - t.cos()).abs() < 1e-13 && (v[1] - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let kernel = ParityKernel::new(60);
        let alpha = Complex64::new(0.8, -1.1);
        let d = kernel.displacement(alpha);
        let unitary_err = max_abs_diff(&(d.adjoint() * &d), &DMatrix::identity(60, 60));
        assert!(unitary_err < 1e-12);
        let norm = (-0.5 * alpha.norm_sqr()).exp();
        let mut coeff = c64(norm);
        for m in 0..20 {
            assert!((d[(m, 0)] - coeff).norm() < 1e-12, "m={m}");
            coeff = coeff * alpha / ((m + 1) as f64).sqrt();
        }
    }

    #[test]
    fn vacuum_and_single_photon_at_origin() {
        assert!(calibration_residual() < 1e-15);
        let one = FockDensityMatrix::number_state(1, 16);
        assert_relative_eq!(
            wigner_from_density(&one, PhasePoint::ORIGIN).unwrap(),
            -FRAC_1_PI,
            epsilon = 1e-14
        );
    }

    #[test]
    fn thermal_point_matches_gaussian() {
        let th = params_from_theta(0.2).unwrap();
        let rho = density_for(&StateSpec::thermo_vacuum(th), 1.0).unwrap();
        let pt = PhasePoint::new(1.0, 0.0);
        let w = wigner_from_density(&rho, pt).unwrap();
        let sech2 = 1.0 / 0.4f64.cosh();
        let expect = sech2 / std::f64::consts::PI * (-2.0 * pt.abs_sq() * sech2).exp();
        assert!((w - expect).abs() < 1e-8);
    }

    #[test]
    fn coherent_state_uses_general_path() {
        // Off-diagonal state: W = (1/pi) exp(-2 |alpha - beta|^2).
        let dim = 60;
        let beta = Complex64::new(0.6, 0.4);
        let kernel = ParityKernel::new(dim);
        let mut ket = DVector::zeros(dim);
        ket[0] = c64(1.0);
        let rho = FockDensityMatrix::pure(&(kernel.displacement(beta) * ket));
        assert!(!rho.is_phase_invariant());
        let oracle = WignerOracle::new(&rho);
        for &(q, p) in &[(0.0, 0.0), (0.85, 0.57), (-1.0, 1.5), (2.0, -0.3)] {
            let pt = PhasePoint::new(q, p);
            let expect = FRAC_1_PI * (-2.0 * (pt.alpha() - beta).norm_sqr()).exp();
            assert!((oracle.wigner(pt).unwrap() - expect).abs() < 1e-10);
            assert!((wigner_direct(&rho, pt).unwrap() - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn fast_and_direct_paths_agree() {
        let th = params_from_theta(0.6).unwrap();
        let spec = StateSpec::new(StateFamily::PhotonAdded, 2, th).unwrap();
        let rho = density_for(&spec, 4.0).unwrap();
        let oracle = WignerOracle::new(&rho);
        for &(q, p) in &[(0.0, 0.0), (1.3, -0.7), (-2.0, 2.0)] {
            let pt = PhasePoint::new(q, p);
            let a = oracle.wigner(pt).unwrap();
            let b = wigner_direct(&rho, pt).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn leak_is_reported() {
        let rho = FockDensityMatrix::number_state(1, 16);
        let err = wigner_from_density(&rho, PhasePoint::new(3.0, 3.0)).unwrap_err();
        assert!(matches!(err, Error::TruncationLeak { .. }));
    }

    #[test]
    fn oracle_states_are_valid() {
        let th = params_from_theta(0.5).unwrap();
        for family in StateFamily::ALL {
            let spec = StateSpec::new(family, 2, th).unwrap();
            let rho = density_for(&spec, 2.0).unwrap();
            rho.validate().unwrap();
            assert!(rho.hermiticity_error() < 1e-12);
        }
    }
}
