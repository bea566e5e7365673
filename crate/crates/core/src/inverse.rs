//! Inverse operator `H = 𝓗(B; {J_k,p})`.
//!
//! All partial polarizations are found together by minimizing
//! `(ν0/2)|B − Σ J_k|² + Σ_k g_k(J_k)`. The Hessian is block diagonal apart
//! from the `ν0` coupling shared by every block pair, so the Newton system
//!
//! ```text
//! A_k δ_k + ν0 Σ_ℓ δ_ℓ = r_k,   k = 1..K
//! ```
//!
//! reduces to a single `d × d` system for the aggregate `S = Σ_ℓ δ_ℓ`:
//!
//! ```text
//! (I + ν0 Σ_k A_k⁻¹) S = Σ_k A_k⁻¹ r_k,   δ_k = A_k⁻¹ (r_k − ν0 S).
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DVector};

use crate::error::{HysteresisError, Result};
use crate::forward::{compliance_sum, SolveStats};
use crate::material::{BlockMatrix, FieldVector, MagnetizationState, MaterialModel, SolverConfig};
use crate::newton::{damped_newton, NewtonProblem, StepRecord, DOMAIN_GUARD};
use crate::objective::{assemble_dense, InverseObjective};

/// How the coupled Newton system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NewtonDirectionMethod {
    /// Assemble the full `Kd × Kd` matrix and factor it: `O(K³)`.
    Dense,
    /// Eliminate the aggregate update: `O(K)`.
    #[default]
    Schur,
}

impl fmt::Display for NewtonDirectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NewtonDirectionMethod::Dense => "dense",
            NewtonDirectionMethod::Schur => "schur",
        })
    }
}

impl FromStr for NewtonDirectionMethod {
    type Err = HysteresisError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(NewtonDirectionMethod::Dense),
            "schur" => Ok(NewtonDirectionMethod::Schur),
            other => Err(HysteresisError::InvalidParameter(format!(
                "unknown newton direction method '{other}'"
            ))),
        }
    }
}

/// Work performed by one Schur-complement solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SchurOpCounts {
    /// Per-block `d × d` factorizations (each yields `A_k⁻¹`).
    pub factorizations: usize,
    /// `A_k⁻¹ v` products.
    pub block_products: usize,
    /// `d × d` aggregate solves.
    pub schur_solves: usize,
}

fn check_system<const D: usize>(
    blocks: &[BlockMatrix<D>],
    nu0: f64,
    grad: &[FieldVector<D>],
) -> Result<()> {
    if blocks.is_empty() || blocks.len() != grad.len() {
        return Err(HysteresisError::InvalidParameter(format!(
            "{} hessian blocks for {} gradient blocks",
            blocks.len(),
            grad.len()
        )));
    }
    if !(nu0 > 0.0) {
        return Err(HysteresisError::InvalidParameter("nu0 must be positive".into()));
    }
    Ok(())
}

/// Solves the assembled system `(ν0 EᵀE + blockdiag(A_k)) δ = −grad`.
pub fn dense_newton_direction<const D: usize>(
    hess_blocks: &[BlockMatrix<D>],
    nu0: f64,
    grad: &[FieldVector<D>],
) -> Result<Vec<FieldVector<D>>> {
    check_system(hess_blocks, nu0, grad)?;
    let matrix = assemble_dense(hess_blocks, nu0);
    let rhs = DVector::from_iterator(grad.len() * D, grad.iter().flat_map(|g| g.iter().map(|v| -v)));
    let chol = Cholesky::new(matrix).ok_or(HysteresisError::Singular)?;
    let x = chol.solve(&rhs);
    Ok((0..grad.len())
        .map(|k| FieldVector::<D>::from_fn(|i, _| x[k * D + i]))
        .collect())
}

/// Same system as [`dense_newton_direction`], solved by eliminating the
/// aggregate update.
pub fn schur_newton_direction<const D: usize>(
    hess_blocks: &[BlockMatrix<D>],
    nu0: f64,
    grad: &[FieldVector<D>],
) -> Result<Vec<FieldVector<D>>> {
    let mut counts = SchurOpCounts::default();
    schur_newton_direction_counted(hess_blocks, nu0, grad, &mut counts)
}

/// [`schur_newton_direction`] with operation counters.
pub fn schur_newton_direction_counted<const D: usize>(
    hess_blocks: &[BlockMatrix<D>],
    nu0: f64,
    grad: &[FieldVector<D>],
    counts: &mut SchurOpCounts,
) -> Result<Vec<FieldVector<D>>> {
    check_system(hess_blocks, nu0, grad)?;
    let mut inverses = Vec::with_capacity(hess_blocks.len());
    let mut compliance = BlockMatrix::<D>::zeros();
    let mut reduced_rhs = FieldVector::<D>::zeros();
    for (a, g) in hess_blocks.iter().zip(grad) {
        let inv = Cholesky::new(*a).ok_or(HysteresisError::Singular)?.inverse();
        counts.factorizations += 1;
        reduced_rhs -= inv * g;
        counts.block_products += 1;
        compliance += inv;
        inverses.push(inv);
    }
    let schur = BlockMatrix::<D>::identity() + compliance * nu0;
    let aggregate = Cholesky::new(schur).ok_or(HysteresisError::Singular)?.solve(&reduced_rhs);
    counts.schur_solves += 1;
    let coupling = aggregate * nu0;
    Ok(inverses
        .iter()
        .zip(grad)
        .map(|(inv, g)| {
            counts.block_products += 1;
            -(inv * (g + coupling))
        })
        .collect())
}

/// Converged output of [`evaluate_inverse`].
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSolution<const D: usize> {
    pub h: FieldVector<D>,
    pub state: MagnetizationState<D>,
    pub stats: SolveStats,
}

/// Newton on the increments `s_k = J_k − J_k,p`.
struct CoupledProblem<'a, const D: usize> {
    objective: InverseObjective<'a, D>,
    method: NewtonDirectionMethod,
    /// `B − Σ_k J_k,p`
    base_residual: FieldVector<D>,
}

impl<const D: usize> CoupledProblem<'_, D> {
    fn at(&self, steps: &[FieldVector<D>]) -> Vec<FieldVector<D>> {
        self.objective.j_prev.iter().zip(steps).map(|(jp, s)| jp + s).collect()
    }

    fn residual(&self, steps: &[FieldVector<D>]) -> FieldVector<D> {
        self.base_residual - steps.iter().sum::<FieldVector<D>>()
    }
}

impl<const D: usize> NewtonProblem for CoupledProblem<'_, D> {
    type Point = Vec<FieldVector<D>>;

    fn gradient(&self, steps: &Self::Point) -> Result<Self::Point> {
        self.objective.gradient_from(&self.at(steps), steps, &self.residual(steps))
    }

    fn norm(&self, g: &Self::Point) -> f64 {
        g.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    fn dot(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
    }

    fn direction(&mut self, steps: &Self::Point, g: &Self::Point) -> Result<Self::Point> {
        let hess = self.objective.hessian_from(&self.at(steps), steps)?;
        match self.method {
            NewtonDirectionMethod::Dense => dense_newton_direction(&hess.blocks, hess.nu0, g),
            NewtonDirectionMethod::Schur => schur_newton_direction(&hess.blocks, hess.nu0, g),
        }
    }

    fn admissible(&self, steps: &Self::Point, d: &Self::Point, tau: f64) -> bool {
        self.objective
            .model
            .cells
            .iter()
            .zip(self.objective.j_prev)
            .zip(steps.iter().zip(d))
            .all(|((cell, jp), (sk, dk))| (jp + sk + dk * tau).norm() <= DOMAIN_GUARD * cell.j_s)
    }

    fn change(&self, steps: &Self::Point, d: &Self::Point, tau: f64) -> Option<f64> {
        let moves: Vec<FieldVector<D>> = d.iter().map(|v| v * tau).collect();
        self.objective
            .change_from(&self.at(steps), steps, &self.residual(steps), &moves)
    }

    fn advance(&self, steps: &mut Self::Point, d: &Self::Point, tau: f64) {
        for (sk, dk) in steps.iter_mut().zip(d) {
            *sk += dk * tau;
        }
    }
}

/// Evaluates `H = ν0 (B − Σ_k J_k)` with the `J_k` jointly minimizing the
/// coupled objective, starting from the previous state.
pub fn evaluate_inverse<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    b: &FieldVector<D>,
    state: &MagnetizationState<D>,
    method: NewtonDirectionMethod,
) -> Result<InverseSolution<D>> {
    solve_inverse(model, cfg, b, state, method, None)
}

/// [`evaluate_inverse`] that also records every accepted step.
pub fn evaluate_inverse_traced<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    b: &FieldVector<D>,
    state: &MagnetizationState<D>,
    method: NewtonDirectionMethod,
    trace: &mut Vec<StepRecord>,
) -> Result<InverseSolution<D>> {
    solve_inverse(model, cfg, b, state, method, Some(trace))
}

fn solve_inverse<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    b: &FieldVector<D>,
    state: &MagnetizationState<D>,
    method: NewtonDirectionMethod,
    trace: Option<&mut Vec<StepRecord>>,
) -> Result<InverseSolution<D>> {
    cfg.validate_for_newton()?;
    state.check_feasible(model)?;
    let mut problem = CoupledProblem {
        objective: InverseObjective::new(model, *b, &state.j_prev, cfg.eps)?,
        method,
        base_residual: b - state.total(),
    };
    let mut steps = vec![FieldVector::<D>::zeros(); state.len()];
    let outcome = damped_newton(&mut problem, &mut steps, cfg, trace)?;
    let h = problem.residual(&steps) * model.nu0();
    let state = MagnetizationState::new(problem.at(&steps));
    Ok(InverseSolution {
        h,
        stats: SolveStats {
            newton_iters: outcome.iterations,
            cell_iters: Vec::new(),
            backtracks: outcome.backtracks,
            initial_grad: vec![outcome.initial_grad_norm],
            final_grad: vec![outcome.final_grad_norm],
        },
        state,
    })
}

/// `∇_B 𝓗 = ν0 (I + ν0 Σ_k A_k⁻¹)⁻¹`, from differentiating the coupled
/// optimality system in `B`; `A_k` are the cell Hessians at `solved`.
pub fn inverse_jacobian<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    prior: &MagnetizationState<D>,
    solved: &MagnetizationState<D>,
) -> Result<BlockMatrix<D>> {
    let nu0 = model.nu0();
    let schur = BlockMatrix::<D>::identity() + compliance_sum(model, cfg, prior, solved)? * nu0;
    let inv = Cholesky::new(schur).ok_or(HysteresisError::Singular)?.inverse();
    Ok(inv * nu0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::evaluate_forward;
    use crate::material::{PinningCell, MU0};

    type V1 = FieldVector<1>;
    type V2 = FieldVector<2>;

    #[test]
    fn symmetric_scalar_case() {
        let blocks = vec![BlockMatrix::<1>::identity(); 3];
        let grad = vec![V1::new(-1.0); 3];
        let dense = dense_newton_direction(&blocks, 1.0, &grad).unwrap();
        let mut counts = SchurOpCounts::default();
        let schur = schur_newton_direction_counted(&blocks, 1.0, &grad, &mut counts).unwrap();
        for (d, s) in dense.iter().zip(&schur) {
            assert!((d[0] - 0.25).abs() < 1e-15);
            assert!((s[0] - 0.25).abs() < 1e-15);
        }
        let aggregate: f64 = schur.iter().map(|v| v[0]).sum();
        assert!((aggregate - 0.75).abs() < 1e-15);
        assert_eq!(
            counts,
            SchurOpCounts {
                factorizations: 3,
                block_products: 6,
                schur_solves: 1
            }
        );
    }

    #[test]
    fn single_block_is_one_solve() {
        let a = BlockMatrix::<2>::new(3.0, 1.0, 1.0, 2.0);
        let g = vec![V2::new(1.0, -2.0)];
        let nu0 = 0.5;
        let expected = (a + BlockMatrix::<2>::identity() * nu0).try_inverse().unwrap() * (-g[0]);
        for d in [
            dense_newton_direction(&[a], nu0, &g).unwrap(),
            schur_newton_direction(&[a], nu0, &g).unwrap(),
        ] {
            assert!((d[0] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let blocks = vec![BlockMatrix::<1>::identity(); 2];
        assert!(dense_newton_direction(&blocks, 1.0, &[V1::new(1.0)]).is_err());
        assert!(schur_newton_direction(&blocks, 0.0, &[V1::new(1.0); 2]).is_err());
        assert!(schur_newton_direction::<1>(&[], 1.0, &[]).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("dense".parse::<NewtonDirectionMethod>().unwrap(), NewtonDirectionMethod::Dense);
        assert_eq!("schur".parse::<NewtonDirectionMethod>().unwrap(), NewtonDirectionMethod::Schur);
        assert!("lu".parse::<NewtonDirectionMethod>().is_err());
        assert_eq!(NewtonDirectionMethod::default(), NewtonDirectionMethod::Schur);
    }

    fn model(k: usize) -> MaterialModel {
        let cells = (0..k)
            .map(|i| PinningCell::new(50.0, 1.545 / k as f64, 140.0 * i as f64 / (k - 1).max(1) as f64).unwrap())
            .collect();
        MaterialModel::new(MU0, cells).unwrap()
    }

    #[test]
    fn demagnetized_zero_flux() {
        let m = model(4);
        let sol = evaluate_inverse(&m, &SolverConfig::default(), &V2::zeros(), &MagnetizationState::demagnetized(4), NewtonDirectionMethod::Schur).unwrap();
        assert_eq!(sol.h, V2::zeros());
        assert_eq!(sol.stats.newton_iters, 0);
    }

    #[test]
    fn inverts_forward_evaluation() {
        let m = model(6);
        let cfg = SolverConfig::with_eps(1e-8);
        let start = evaluate_forward(&m, &cfg, &V2::new(150.0, -40.0), &MagnetizationState::demagnetized(6)).unwrap();
        let prior = start.state;
        let h0 = V2::new(180.0, -60.0);
        let fwd = evaluate_forward(&m, &cfg, &h0, &prior).unwrap();
        for method in [NewtonDirectionMethod::Dense, NewtonDirectionMethod::Schur] {
            let inv = evaluate_inverse(&m, &cfg, &fwd.b, &prior, method).unwrap();
            assert!((inv.h - h0).norm() <= 1e-6 * h0.norm(), "{method}: {} vs {h0}", inv.h);
        }
    }

    #[test]
    fn traced_steps_satisfy_armijo() {
        let m = model(5);
        let cfg = SolverConfig::with_eps(1e-8);
        let mut trace = Vec::new();
        let sol = evaluate_inverse_traced(&m, &cfg, &V2::new(1.2, 0.4), &MagnetizationState::demagnetized(5), NewtonDirectionMethod::Schur, &mut trace).unwrap();
        assert_eq!(trace.len(), sol.stats.newton_iters);
        assert!(trace.iter().all(|s| s.satisfies_armijo(cfg.sigma) && s.change <= 0.0));
    }

    #[test]
    fn frozen_polarizations_give_vacuum_jacobian() {
        let cells = vec![PinningCell::new(50.0, 0.3, 1e9).unwrap(); 3];
        let m = MaterialModel::new(MU0, cells).unwrap();
        let prior = MagnetizationState::new(vec![V2::new(0.1, 0.0), V2::zeros(), V2::new(0.0, 0.2)]);
        let cfg = SolverConfig::with_eps(1e-8);
        let b = V2::new(0.4, 0.25);
        let sol = evaluate_inverse(&m, &cfg, &b, &prior, NewtonDirectionMethod::Schur).unwrap();
        let jac = inverse_jacobian(&m, &cfg, &prior, &sol.state).unwrap();
        let vacuum = BlockMatrix::<2>::identity() * m.nu0();
        assert!((jac - vacuum).norm() <= 1e-6 * vacuum.norm(), "{jac}");
    }
}
