use std::time::Instant;

use crate::error::Result;
use crate::forward::evaluate_forward;
use crate::inverse::{evaluate_inverse, NewtonDirectionMethod};
use crate::material::{FieldVector, MagnetizationState, MaterialModel, SolverConfig};
use crate::OperatorMode;

use super::excitation::time_at;

/// One time step of a hysteresis loop.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep<const D: usize> {
    pub t: f64,
    pub h: FieldVector<D>,
    pub b: FieldVector<D>,
    pub j: Vec<FieldVector<D>>,
    /// Newton iterations of this step, summed over cells in forward mode.
    pub newton_iters: usize,
    pub backtracks: usize,
    /// Seconds spent in the operator evaluation.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<const D: usize> {
    pub mode: OperatorMode,
    pub steps: Vec<TrajectoryStep<D>>,
}

impl<const D: usize> TrajectoryRecord<D> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn fields(&self) -> Vec<FieldVector<D>> {
        self.steps.iter().map(|s| s.h).collect()
    }

    pub fn fluxes(&self) -> Vec<FieldVector<D>> {
        self.steps.iter().map(|s| s.b).collect()
    }

    pub fn total_iterations(&self) -> usize {
        self.steps.iter().map(|s| s.newton_iters).sum()
    }

    pub fn total_wall_time(&self) -> f64 {
        self.steps.iter().map(|s| s.wall_time).sum()
    }

    /// Newton iterations per step, averaged over steps and, in forward mode,
    /// over the independently solved cells.
    pub fn mean_iterations(&self) -> f64 {
        if self.steps.is_empty() {
            return 0.0;
        }
        let per_solve = match self.mode {
            OperatorMode::Forward => self.steps[0].j.len().max(1),
            OperatorMode::Inverse => 1,
        };
        self.total_iterations() as f64 / (self.steps.len() * per_solve) as f64
    }
}

/// Time-steps the operator from the demagnetized state.
///
/// `inputs` are `H` samples in forward mode and `B` samples in inverse mode;
/// each step starts from the polarizations of the previous one. `method`
/// only matters in inverse mode.
pub fn run_loop<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    inputs: &[FieldVector<D>],
    mode: OperatorMode,
    method: NewtonDirectionMethod,
) -> Result<TrajectoryRecord<D>> {
    model.validate()?;
    let n = inputs.len();
    let mut state = MagnetizationState::demagnetized(model.cells.len());
    let mut steps = Vec::with_capacity(n);
    for (i, input) in inputs.iter().enumerate() {
        let start = Instant::now();
        let (h, b, next, stats) = match mode {
            OperatorMode::Forward => {
                let sol = evaluate_forward(model, cfg, input, &state).map_err(|e| e.at_step(i))?;
                (*input, sol.b, sol.state, sol.stats)
            }
            OperatorMode::Inverse => {
                let sol = evaluate_inverse(model, cfg, input, &state, method).map_err(|e| e.at_step(i))?;
                (sol.h, *input, sol.state, sol.stats)
            }
        };
        let wall_time = start.elapsed().as_secs_f64();
        steps.push(TrajectoryStep {
            t: time_at(i, n),
            h,
            b,
            j: next.j_prev.clone(),
            newton_iters: stats.newton_iters,
            backtracks: stats.backtracks,
            wall_time,
        });
        state = next;
    }
    Ok(TrajectoryRecord { mode, steps })
}
