//! Material description: pinning cells, the material model, the hysteresis
//! memory and the solver settings.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::error::{HysteresisError, Result};

/// Vacuum permeability in T·m/A.
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

/// A `D`-component magnetic vector (A/m for fields, T for fluxes and polarizations).
pub type FieldVector<const D: usize> = SVector<f64, D>;

/// A `D`×`D` matrix acting on [`FieldVector`]s.
pub type BlockMatrix<const D: usize> = SMatrix<f64, D, D>;

/// One partial-polarization channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinningCell {
    /// Energy scale `A_s` in A/m.
    pub a_s: f64,
    /// Saturation polarization `J_s` in T.
    pub j_s: f64,
    /// Pinning strength in A/m.
    pub chi: f64,
}

impl PinningCell {
    pub fn new(a_s: f64, j_s: f64, chi: f64) -> Result<Self> {
        let cell = PinningCell { a_s, j_s, chi };
        cell.validate()?;
        Ok(cell)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_s > 0.0 && self.a_s.is_finite()) {
            return Err(HysteresisError::InvalidParameter(format!(
                "a_s must be positive, got {}",
                self.a_s
            )));
        }
        if !(self.j_s > 0.0 && self.j_s.is_finite()) {
            return Err(HysteresisError::InvalidParameter(format!(
                "j_s must be positive, got {}",
                self.j_s
            )));
        }
        if !(self.chi >= 0.0 && self.chi.is_finite()) {
            return Err(HysteresisError::InvalidParameter(format!(
                "chi must be non-negative, got {}",
                self.chi
            )));
        }
        Ok(())
    }

    /// Lower bound on the curvature of the internal energy, `a_s·π/(2 j_s)`.
    pub fn convexity(&self) -> f64 {
        self.a_s * std::f64::consts::FRAC_PI_2 / self.j_s
    }
}

/// `μ0` plus an ordered list of pinning cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    pub mu0: f64,
    pub cells: Vec<PinningCell>,
}

impl MaterialModel {
    pub fn new(mu0: f64, cells: Vec<PinningCell>) -> Result<Self> {
        let model = MaterialModel { mu0, cells };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return Err(HysteresisError::InvalidParameter(format!(
                "mu0 must be positive, got {}",
                self.mu0
            )));
        }
        if self.cells.is_empty() {
            return Err(HysteresisError::InvalidParameter(
                "material needs at least one pinning cell".into(),
            ));
        }
        self.cells.iter().try_for_each(PinningCell::validate)
    }

    pub fn nu0(&self) -> f64 {
        1.0 / self.mu0
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Strong convexity constant used in regularization error bounds:
    /// the smallest per-cell curvature bound.
    pub fn gamma(&self) -> f64 {
        self.cells
            .iter()
            .map(PinningCell::convexity)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn total_chi(&self) -> f64 {
        self.cells.iter().map(|c| c.chi).sum()
    }

    /// Total saturation polarization `Σ j_s`.
    pub fn saturation(&self) -> f64 {
        self.cells.iter().map(|c| c.j_s).sum()
    }
}

/// The `K` previous partial polarizations: the hysteresis memory.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationState<const D: usize> {
    pub j_prev: Vec<FieldVector<D>>,
}

impl<const D: usize> MagnetizationState<D> {
    /// All partial polarizations zero.
    pub fn demagnetized(k: usize) -> Self {
        MagnetizationState {
            j_prev: vec![FieldVector::zeros(); k],
        }
    }

    pub fn new(j_prev: Vec<FieldVector<D>>) -> Self {
        MagnetizationState { j_prev }
    }

    pub fn len(&self) -> usize {
        self.j_prev.len()
    }

    pub fn is_empty(&self) -> bool {
        self.j_prev.is_empty()
    }

    /// Total polarization `Σ_k J_k`.
    pub fn total(&self) -> FieldVector<D> {
        self.j_prev.iter().sum()
    }

    /// Checks that the state matches `model` and lies strictly inside every
    /// cell's energy domain.
    pub fn check_feasible(&self, model: &MaterialModel) -> Result<()> {
        if self.j_prev.len() != model.cells.len() {
            return Err(HysteresisError::InvalidParameter(format!(
                "state has {} polarizations but the material has {} cells",
                self.j_prev.len(),
                model.cells.len()
            )));
        }
        for (k, (j, cell)) in self.j_prev.iter().zip(&model.cells).enumerate() {
            let magnitude = j.norm();
            if !(magnitude < cell.j_s) {
                return Err(HysteresisError::DomainViolation {
                    magnitude,
                    saturation: cell.j_s,
                }
                .in_cell(k));
            }
        }
        Ok(())
    }
}

/// Regularization and damped Newton settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Smoothing parameter of the pinning norm, in T².
    pub eps: f64,
    /// Relative gradient reduction that terminates Newton.
    pub tol: f64,
    /// Absolute gradient floor (A/m); terminates when the gradient is already tiny.
    pub abs_tol: f64,
    /// Backtracking factor.
    pub rho: f64,
    /// Armijo slope factor.
    pub sigma: f64,
    pub max_newton: usize,
    pub max_backtracks: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps: 1e-8,
            tol: 1e-8,
            // just above the round-off floor of the inverse gradient, ν0·|B|·1e-16 ≈ 1e-10
            abs_tol: 1e-9,
            rho: 0.5,
            sigma: 0.1,
            max_newton: 100,
            max_backtracks: 60,
        }
    }
}

impl SolverConfig {
    /// Default settings with `eps` and `tol` both set to `eps`.
    pub fn with_eps(eps: f64) -> Self {
        SolverConfig {
            eps,
            tol: eps,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(HysteresisError::InvalidParameter(what.to_string()));
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return bad("eps must be finite and non-negative");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad("tol must lie in (0, 1)");
        }
        if !(self.abs_tol >= 0.0) {
            return bad("abs_tol must be non-negative");
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad("rho must lie in (0, 1)");
        }
        if !(self.sigma > 0.0 && self.sigma < 0.5) {
            return bad("sigma must lie in (0, 1/2)");
        }
        if self.max_newton == 0 || self.max_backtracks == 0 {
            return bad("iteration caps must be at least 1");
        }
        Ok(())
    }

    /// Newton needs a smooth objective; reject `eps = 0` on top of [`Self::validate`].
    pub(crate) fn validate_for_newton(&self) -> Result<()> {
        self.validate()?;
        if self.eps <= 0.0 {
            return Err(HysteresisError::InvalidParameter(
                "newton solvers require eps > 0".into(),
            ));
        }
        Ok(())
    }
}
