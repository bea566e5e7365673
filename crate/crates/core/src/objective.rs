//! Smoothed forward and inverse objective functions with their derivatives.
//!
//! Forward, one cell:  `F(J) = U(J) − ⟨H, J⟩ + χ |J − J_p|_ε`.
//!
//! Inverse, all cells: `G(J_1..J_K) = (ν0/2)|B − Σ J_k|² + Σ_k g_k(J_k)` with
//! `g_k(J) = U_k(J) + χ_k |J − J_k,p|_ε`.
//!
//! Both expose a `change` method returning `f(x + s) − f(x)` assembled from
//! cancellation-free per-term differences, which is what the Armijo test
//! compares against near convergence.

use nalgebra::DMatrix;

use crate::error::{HysteresisError, Result};
use crate::material::{BlockMatrix, FieldVector, MaterialModel, PinningCell};
use crate::norm::{smooth_norm, smooth_norm_change, smooth_norm_grad, smooth_norm_hess};

/// Value, gradient and Hessian of an objective at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<G, H> {
    pub value: f64,
    pub grad: G,
    pub hess: H,
}

#[derive(Debug, Clone, Copy)]
pub struct ForwardObjective<'a, const D: usize> {
    pub cell: &'a PinningCell,
    pub h: FieldVector<D>,
    pub j_prev: FieldVector<D>,
    pub eps: f64,
}

impl<'a, const D: usize> ForwardObjective<'a, D> {
    pub fn new(cell: &'a PinningCell, h: FieldVector<D>, j_prev: FieldVector<D>, eps: f64) -> Self {
        ForwardObjective { cell, h, j_prev, eps }
    }

    pub fn value(&self, j: &FieldVector<D>) -> Result<f64> {
        Ok(self.cell.energy_value(j)? - self.h.dot(j)
            + self.cell.chi * smooth_norm(&(j - self.j_prev), self.eps))
    }

    pub fn gradient(&self, j: &FieldVector<D>) -> Result<FieldVector<D>> {
        self.gradient_from(j, &(j - self.j_prev))
    }

    pub fn hessian(&self, j: &FieldVector<D>) -> Result<BlockMatrix<D>> {
        self.hessian_from(j, &(j - self.j_prev))
    }

    pub fn evaluate(&self, j: &FieldVector<D>) -> Result<Evaluation<FieldVector<D>, BlockMatrix<D>>> {
        Ok(Evaluation {
            value: self.value(j)?,
            grad: self.gradient(j)?,
            hess: self.hessian(j)?,
        })
    }

    /// `F(J + s) − F(J)`; `None` (objective `+∞`) outside the domain.
    pub fn change(&self, j: &FieldVector<D>, s: &FieldVector<D>) -> Option<f64> {
        self.change_from(j, &(j - self.j_prev), s)
    }

    /// Gradient at `J = J_p + step` with the increment supplied exactly.
    pub(crate) fn gradient_from(&self, j: &FieldVector<D>, step: &FieldVector<D>) -> Result<FieldVector<D>> {
        Ok(pinned_grad(self.cell, j, step, self.eps)? - self.h)
    }

    pub(crate) fn hessian_from(&self, j: &FieldVector<D>, step: &FieldVector<D>) -> Result<BlockMatrix<D>> {
        pinned_hess(self.cell, j, step, self.eps)
    }

    pub(crate) fn change_from(&self, j: &FieldVector<D>, step: &FieldVector<D>, s: &FieldVector<D>) -> Option<f64> {
        let du = self.cell.energy_change(j, s)?;
        Some(du - self.h.dot(s) + self.cell.chi * smooth_norm_change(step, s, self.eps))
    }
}

// The pinning curvature reaches χ/√ε, so recovering the increment `J − J_p`
// from `J` by subtraction would amplify round-off past any useful tolerance.
// The Newton solvers iterate on the increments and pass them in directly.

fn pinned_hess<const D: usize>(
    cell: &PinningCell,
    j: &FieldVector<D>,
    step: &FieldVector<D>,
    eps: f64,
) -> Result<BlockMatrix<D>> {
    let mut hess = cell.energy_hess(j)?;
    if cell.chi > 0.0 {
        hess += smooth_norm_hess(step, eps)? * cell.chi;
    }
    Ok(hess)
}

fn pinned_grad<const D: usize>(
    cell: &PinningCell,
    j: &FieldVector<D>,
    step: &FieldVector<D>,
    eps: f64,
) -> Result<FieldVector<D>> {
    let mut g = cell.energy_grad(j)?;
    if cell.chi > 0.0 {
        g += smooth_norm_grad(step, eps)? * cell.chi;
    }
    Ok(g)
}

/// `∇²U(J) + χ ∇²|J − J_p|_ε`: the block Hessian shared by both operators.
pub(crate) fn pinned_energy_hess<const D: usize>(
    cell: &PinningCell,
    j: &FieldVector<D>,
    j_prev: &FieldVector<D>,
    eps: f64,
) -> Result<BlockMatrix<D>> {
    pinned_hess(cell, j, &(j - j_prev), eps)
}

/// Hessian of the inverse objective: block diagonal `blockdiag(∇²g_k)` plus
/// `ν0` times the all-ones block pattern (every `(k, ℓ)` block gains `ν0·I`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledHessian<const D: usize> {
    pub blocks: Vec<BlockMatrix<D>>,
    pub nu0: f64,
}

impl<const D: usize> CoupledHessian<D> {
    /// The assembled `Kd × Kd` matrix.
    pub fn dense(&self) -> DMatrix<f64> {
        assemble_dense(&self.blocks, self.nu0)
    }

    /// Matrix-vector product in block form.
    pub fn apply(&self, x: &[FieldVector<D>]) -> Vec<FieldVector<D>> {
        let total: FieldVector<D> = x.iter().sum();
        self.blocks
            .iter()
            .zip(x)
            .map(|(a, xk)| a * xk + total * self.nu0)
            .collect()
    }
}

pub(crate) fn assemble_dense<const D: usize>(blocks: &[BlockMatrix<D>], nu0: f64) -> DMatrix<f64> {
    let n = blocks.len() * D;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..blocks.len() {
        for l in 0..blocks.len() {
            for i in 0..D {
                m[(k * D + i, l * D + i)] += nu0;
            }
        }
        let mut diag = m.fixed_view_mut::<D, D>(k * D, k * D);
        diag += &blocks[k];
    }
    m
}

#[derive(Debug, Clone, Copy)]
pub struct InverseObjective<'a, const D: usize> {
    pub model: &'a MaterialModel,
    pub b: FieldVector<D>,
    pub j_prev: &'a [FieldVector<D>],
    pub eps: f64,
}

impl<'a, const D: usize> InverseObjective<'a, D> {
    pub fn new(
        model: &'a MaterialModel,
        b: FieldVector<D>,
        j_prev: &'a [FieldVector<D>],
        eps: f64,
    ) -> Result<Self> {
        if j_prev.len() != model.cells.len() {
            return Err(HysteresisError::InvalidParameter(format!(
                "{} previous polarizations for {} cells",
                j_prev.len(),
                model.cells.len()
            )));
        }
        Ok(InverseObjective { model, b, j_prev, eps })
    }

    fn check_len(&self, js: &[FieldVector<D>]) -> Result<()> {
        if js.len() == self.model.cells.len() {
            Ok(())
        } else {
            Err(HysteresisError::InvalidParameter(format!(
                "{} polarizations for {} cells",
                js.len(),
                self.model.cells.len()
            )))
        }
    }

    /// `B − Σ J_k`.
    pub fn residual(&self, js: &[FieldVector<D>]) -> FieldVector<D> {
        self.b - js.iter().sum::<FieldVector<D>>()
    }

    pub fn value(&self, js: &[FieldVector<D>]) -> Result<f64> {
        self.check_len(js)?;
        let mut value = 0.5 * self.model.nu0() * self.residual(js).norm_squared();
        for (k, ((cell, j), jp)) in self.model.cells.iter().zip(js).zip(self.j_prev).enumerate() {
            value += cell.energy_value(j).map_err(|e| e.in_cell(k))?
                + cell.chi * smooth_norm(&(j - jp), self.eps);
        }
        Ok(value)
    }

    pub fn gradient(&self, js: &[FieldVector<D>]) -> Result<Vec<FieldVector<D>>> {
        self.check_len(js)?;
        self.gradient_from(js, &self.steps_of(js), &self.residual(js))
    }

    pub fn hessian(&self, js: &[FieldVector<D>]) -> Result<CoupledHessian<D>> {
        self.check_len(js)?;
        self.hessian_from(js, &self.steps_of(js))
    }

    pub fn evaluate(
        &self,
        js: &[FieldVector<D>],
    ) -> Result<Evaluation<Vec<FieldVector<D>>, CoupledHessian<D>>> {
        Ok(Evaluation {
            value: self.value(js)?,
            grad: self.gradient(js)?,
            hess: self.hessian(js)?,
        })
    }

    /// `G(J + s) − G(J)`; `None` when any cell leaves its domain.
    pub fn change(&self, js: &[FieldVector<D>], steps: &[FieldVector<D>]) -> Option<f64> {
        self.change_from(js, &self.steps_of(js), &self.residual(js), steps)
    }

    fn steps_of(&self, js: &[FieldVector<D>]) -> Vec<FieldVector<D>> {
        js.iter().zip(self.j_prev).map(|(j, jp)| j - jp).collect()
    }

    /// Gradient at `J_k = J_k,p + steps[k]`, with the increments and the
    /// residual `B − Σ J_k` supplied by the caller.
    pub(crate) fn gradient_from(
        &self,
        js: &[FieldVector<D>],
        steps: &[FieldVector<D>],
        residual: &FieldVector<D>,
    ) -> Result<Vec<FieldVector<D>>> {
        let coupling = residual * self.model.nu0();
        self.model
            .cells
            .iter()
            .zip(js)
            .zip(steps)
            .enumerate()
            .map(|(k, ((cell, j), step))| {
                pinned_grad(cell, j, step, self.eps)
                    .map(|g| g - coupling)
                    .map_err(|e| e.in_cell(k))
            })
            .collect()
    }

    pub(crate) fn hessian_from(&self, js: &[FieldVector<D>], steps: &[FieldVector<D>]) -> Result<CoupledHessian<D>> {
        let blocks = self
            .model
            .cells
            .iter()
            .zip(js)
            .zip(steps)
            .enumerate()
            .map(|(k, ((cell, j), step))| pinned_hess(cell, j, step, self.eps).map_err(|e| e.in_cell(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoupledHessian {
            blocks,
            nu0: self.model.nu0(),
        })
    }

    pub(crate) fn change_from(
        &self,
        js: &[FieldVector<D>],
        steps: &[FieldVector<D>],
        residual: &FieldVector<D>,
        moves: &[FieldVector<D>],
    ) -> Option<f64> {
        let total: FieldVector<D> = moves.iter().sum();
        let mut change = 0.5 * self.model.nu0() * (total.norm_squared() - 2.0 * residual.dot(&total));
        for (((cell, j), step), s) in self.model.cells.iter().zip(js).zip(steps).zip(moves) {
            change += cell.energy_change(j, s)? + cell.chi * smooth_norm_change(step, s, self.eps);
        }
        Some(change)
    }
}
