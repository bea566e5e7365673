//! Reference solutions independent of the Newton solvers' regularization:
//! the exact scalar play response, the unregularized stuck predicate, and
//! a tiny-`ε` proxy for the unregularized minimizers.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::forward::evaluate_forward;
use crate::inverse::{evaluate_inverse, NewtonDirectionMethod};
use crate::material::{FieldVector, MagnetizationState, MaterialModel, PinningCell, SolverConfig};
use crate::OperatorMode;

/// Smoothing used by [`reference_unregularized`].
pub const REFERENCE_EPS: f64 = 1e-14;
/// Relative gradient tolerance used by [`reference_unregularized`].
pub const REFERENCE_TOL: f64 = 1e-12;

/// Iteration cap of the reference solves. Near `ε = 1e-14` the pinning kinks
/// are sharp enough that single coupled steps take up to ~10³ iterations.
pub const REFERENCE_MAX_NEWTON: usize = 20_000;

pub fn reference_config() -> SolverConfig {
    SolverConfig {
        eps: REFERENCE_EPS,
        tol: REFERENCE_TOL,
        max_newton: REFERENCE_MAX_NEWTON,
        max_backtracks: 200,
        ..Default::default()
    }
}

/// Exact unregularized minimizer of the one-dimensional cell problem.
///
/// With `u'(j) = a_s tan(πj/(2 j_s))` and its inverse
/// `g(y) = (2 j_s/π)·atan(y/a_s)`: the polarization stays at `j_prev` while
/// `|h − u'(j_prev)| ≤ χ`, and otherwise follows `g(h ∓ χ)`.
pub fn scalar_play_exact(cell: &PinningCell, h: f64, j_prev: f64) -> f64 {
    let c = FRAC_PI_2 / cell.j_s;
    let force = h - cell.a_s * (c * j_prev).tan();
    let anhysteretic = |y: f64| (y / cell.a_s).atan() / c;
    if force.abs() <= cell.chi {
        j_prev
    } else if force > cell.chi {
        anhysteretic(h - cell.chi)
    } else {
        anhysteretic(h + cell.chi)
    }
}

/// Whether the unregularized minimizer is exactly `j_prev`:
/// `|H − ∇U(J_prev)| ≤ χ`.
pub fn is_stuck<const D: usize>(cell: &PinningCell, h: &FieldVector<D>, j_prev: &FieldVector<D>) -> Result<bool> {
    let force = h - cell.energy_grad(j_prev)?;
    Ok(force.norm() <= cell.chi)
}

/// Tiny-`ε` proxy for the unregularized partial polarizations.
///
/// `input` is `H` in forward mode and `B` in inverse mode. The result is the
/// regularized solution at [`REFERENCE_EPS`] with tolerance
/// [`REFERENCE_TOL`], whose distance to the `ε = 0` minimizers is bounded by
/// `sqrt(2 χ_k √ε / γ)` per cell.
pub fn reference_unregularized<const D: usize>(
    model: &MaterialModel,
    input: &FieldVector<D>,
    state: &MagnetizationState<D>,
    mode: OperatorMode,
) -> Result<Vec<FieldVector<D>>> {
    let cfg = reference_config();
    let solved = match mode {
        OperatorMode::Forward => evaluate_forward(model, &cfg, input, state)?.state,
        OperatorMode::Inverse => {
            evaluate_inverse(model, &cfg, input, state, NewtonDirectionMethod::Schur)?.state
        }
    };
    Ok(solved.j_prev)
}
