//! Regularized energy-based vector hysteresis operators at a single material
//! point.
//!
//! The forward operator maps a field `H` to a flux `B = μ0 H + Σ_k J_k`, each
//! partial polarization `J_k` minimizing a smoothed, strongly convex cell
//! energy. The inverse operator maps `B` back to `H = ν0 (B − Σ_k J_k)` by one
//! coupled minimization whose Newton systems are solved in `O(K)` through a
//! Schur complement. Both operators expose their Jacobians.
//!
//! ```
//! use vector_hysteresis::{evaluate_forward, evaluate_inverse, experiments::benchmark_material};
//! use vector_hysteresis::{FieldVector, MagnetizationState, NewtonDirectionMethod, SolverConfig};
//!
//! let model = benchmark_material(20).unwrap();
//! let cfg = SolverConfig::default();
//! let state = MagnetizationState::demagnetized(20);
//! let h = FieldVector::<2>::new(200.0, 50.0);
//!
//! let fwd = evaluate_forward(&model, &cfg, &h, &state).unwrap();
//! let inv = evaluate_inverse(&model, &cfg, &fwd.b, &state, NewtonDirectionMethod::Schur).unwrap();
//! assert!((inv.h - h).norm() < 1e-5 * h.norm());
//! ```

mod energy;
mod error;
pub mod experiments;
mod forward;
mod inverse;
pub mod io;
mod material;
mod newton;
mod norm;
mod objective;
pub mod oracles;

use std::fmt;
use std::str::FromStr;

pub use error::{HysteresisError, Result};
pub use forward::{evaluate_forward, forward_jacobian, newton_solve_cell, newton_solve_cell_traced, ForwardSolution, SolveStats};
pub use inverse::{
    dense_newton_direction, evaluate_inverse, evaluate_inverse_traced, inverse_jacobian, schur_newton_direction,
    schur_newton_direction_counted, InverseSolution, NewtonDirectionMethod, SchurOpCounts,
};
pub use material::{BlockMatrix, FieldVector, MagnetizationState, MaterialModel, PinningCell, SolverConfig, MU0};
pub use newton::StepRecord;
pub use norm::{smooth_norm, smooth_norm_grad, smooth_norm_hess};
pub use objective::{CoupledHessian, Evaluation, ForwardObjective, InverseObjective};

/// Which operator a loop or reference evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorMode {
    /// `H ↦ B`.
    Forward,
    /// `B ↦ H`.
    Inverse,
}

impl fmt::Display for OperatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorMode::Forward => "forward",
            OperatorMode::Inverse => "inverse",
        })
    }
}

impl FromStr for OperatorMode {
    type Err = HysteresisError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(OperatorMode::Forward),
            "inverse" => Ok(OperatorMode::Inverse),
            other => Err(HysteresisError::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}
