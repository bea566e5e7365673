//! Forward operator `B = 𝓑(H; {J_k,p})`: `K` independent smoothed
//! minimizations, one per pinning cell, each solved by damped Newton.

use nalgebra::Cholesky;

use crate::error::{HysteresisError, Result};
use crate::material::{BlockMatrix, FieldVector, MagnetizationState, MaterialModel, PinningCell, SolverConfig};
use crate::newton::{damped_newton, NewtonProblem, StepRecord, DOMAIN_GUARD};
use crate::objective::{pinned_energy_hess, ForwardObjective};

/// Iteration bookkeeping for one operator evaluation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    /// Total Newton iterations (summed over cells for the forward operator).
    pub newton_iters: usize,
    /// Per-cell iterations; empty for the coupled inverse solve.
    pub cell_iters: Vec<usize>,
    pub backtracks: usize,
    /// Gradient norm at the start of each Newton solve (one per cell for the
    /// forward operator, one for the inverse).
    pub initial_grad: Vec<f64>,
    /// Gradient norm at termination, same layout as `initial_grad`.
    pub final_grad: Vec<f64>,
}

/// Converged output of [`evaluate_forward`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSolution<const D: usize> {
    pub b: FieldVector<D>,
    pub state: MagnetizationState<D>,
    pub stats: SolveStats,
}

/// Newton on the increment `s = J − J_prev`.
struct CellProblem<'a, const D: usize> {
    objective: ForwardObjective<'a, D>,
}

impl<const D: usize> CellProblem<'_, D> {
    fn at(&self, s: &FieldVector<D>) -> FieldVector<D> {
        self.objective.j_prev + s
    }
}

impl<const D: usize> NewtonProblem for CellProblem<'_, D> {
    type Point = FieldVector<D>;

    fn gradient(&self, s: &FieldVector<D>) -> Result<FieldVector<D>> {
        self.objective.gradient_from(&self.at(s), s)
    }

    fn norm(&self, g: &FieldVector<D>) -> f64 {
        g.norm()
    }

    fn dot(&self, a: &FieldVector<D>, b: &FieldVector<D>) -> f64 {
        a.dot(b)
    }

    fn direction(&mut self, s: &FieldVector<D>, g: &FieldVector<D>) -> Result<FieldVector<D>> {
        let hess = self.objective.hessian_from(&self.at(s), s)?;
        let chol = Cholesky::new(hess).ok_or(HysteresisError::Singular)?;
        Ok(-chol.solve(g))
    }

    fn admissible(&self, s: &FieldVector<D>, d: &FieldVector<D>, tau: f64) -> bool {
        (self.at(s) + d * tau).norm() <= DOMAIN_GUARD * self.objective.cell.j_s
    }

    fn change(&self, s: &FieldVector<D>, d: &FieldVector<D>, tau: f64) -> Option<f64> {
        self.objective.change_from(&self.at(s), s, &(d * tau))
    }

    fn advance(&self, s: &mut FieldVector<D>, d: &FieldVector<D>, tau: f64) {
        *s += d * tau;
    }
}

/// Minimizes `U(J) − ⟨H, J⟩ + χ|J − J_prev|_ε` starting from `J_prev`.
pub fn newton_solve_cell<const D: usize>(
    cell: &PinningCell,
    h: &FieldVector<D>,
    j_prev: &FieldVector<D>,
    cfg: &SolverConfig,
) -> Result<(FieldVector<D>, SolveStats)> {
    solve_cell(cell, h, j_prev, cfg, None)
}

/// [`newton_solve_cell`] that also records every accepted step.
pub fn newton_solve_cell_traced<const D: usize>(
    cell: &PinningCell,
    h: &FieldVector<D>,
    j_prev: &FieldVector<D>,
    cfg: &SolverConfig,
    trace: &mut Vec<StepRecord>,
) -> Result<(FieldVector<D>, SolveStats)> {
    solve_cell(cell, h, j_prev, cfg, Some(trace))
}

fn solve_cell<const D: usize>(
    cell: &PinningCell,
    h: &FieldVector<D>,
    j_prev: &FieldVector<D>,
    cfg: &SolverConfig,
    trace: Option<&mut Vec<StepRecord>>,
) -> Result<(FieldVector<D>, SolveStats)> {
    cfg.validate_for_newton()?;
    if !cell.in_domain(j_prev) {
        return Err(HysteresisError::DomainViolation {
            magnitude: j_prev.norm(),
            saturation: cell.j_s,
        });
    }
    let mut problem = CellProblem {
        objective: ForwardObjective::new(cell, *h, *j_prev, cfg.eps),
    };
    let mut step = FieldVector::<D>::zeros();
    let outcome = damped_newton(&mut problem, &mut step, cfg, trace)?;
    Ok((
        j_prev + step,
        SolveStats {
            newton_iters: outcome.iterations,
            cell_iters: vec![outcome.iterations],
            backtracks: outcome.backtracks,
            initial_grad: vec![outcome.initial_grad_norm],
            final_grad: vec![outcome.final_grad_norm],
        },
    ))
}

/// Evaluates `B = μ0 H + Σ_k J_k` with each `J_k` minimizing its cell problem.
pub fn evaluate_forward<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    h: &FieldVector<D>,
    state: &MagnetizationState<D>,
) -> Result<ForwardSolution<D>> {
    state.check_feasible(model)?;
    let mut stats = SolveStats::default();
    let mut j_new = Vec::with_capacity(model.cells.len());
    for (k, (cell, jp)) in model.cells.iter().zip(&state.j_prev).enumerate() {
        let (j, cell_stats) = newton_solve_cell(cell, h, jp, cfg).map_err(|e| e.in_cell(k))?;
        stats.newton_iters += cell_stats.newton_iters;
        stats.backtracks += cell_stats.backtracks;
        stats.cell_iters.push(cell_stats.newton_iters);
        stats.initial_grad.extend(cell_stats.initial_grad);
        stats.final_grad.extend(cell_stats.final_grad);
        j_new.push(j);
    }
    let state = MagnetizationState::new(j_new);
    Ok(ForwardSolution {
        b: h * model.mu0 + state.total(),
        state,
        stats,
    })
}

/// `∇_H 𝓑 = μ0 I + Σ_k [∇²F_k(J_k)]⁻¹`, from differentiating `∇F_k(J_k; H) = 0`.
///
/// `prior` is the state the evaluation started from and `solved` its result;
/// the cell Hessians depend on both.
pub fn forward_jacobian<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    prior: &MagnetizationState<D>,
    solved: &MagnetizationState<D>,
) -> Result<BlockMatrix<D>> {
    Ok(BlockMatrix::<D>::identity() * model.mu0 + compliance_sum(model, cfg, prior, solved)?)
}

/// `Σ_k [∇²g_k(J_k)]⁻¹`, the quantity both operator Jacobians are built from.
pub(crate) fn compliance_sum<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    prior: &MagnetizationState<D>,
    solved: &MagnetizationState<D>,
) -> Result<BlockMatrix<D>> {
    prior.check_feasible(model)?;
    solved.check_feasible(model)?;
    let mut sum = BlockMatrix::<D>::zeros();
    for (k, ((cell, jp), j)) in model.cells.iter().zip(&prior.j_prev).zip(&solved.j_prev).enumerate() {
        let hess = pinned_energy_hess(cell, j, jp, cfg.eps).map_err(|e| e.in_cell(k))?;
        let chol = Cholesky::new(hess).ok_or_else(|| HysteresisError::Singular.in_cell(k))?;
        sum += chol.inverse();
    }
    Ok(sum)
}
