use serde::Serialize;

use crate::error::Result;
use crate::inverse::NewtonDirectionMethod;
use crate::material::{FieldVector, MaterialModel, SolverConfig};
use crate::OperatorMode;

use super::metrics::relative_error_sq;
use super::trajectory::run_loop;

/// How well the inverse loop recovers the field driving a forward loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub steps: usize,
    /// Largest `|H_inv − H|` relative to the peak `|H|` of the excitation.
    pub max_rel_err: f64,
    /// Mean of the same per-step deviations.
    pub mean_rel_err: f64,
    /// Relative squared error over the whole trajectory.
    pub rel_err_sq: f64,
}

/// Runs `excitation` forward, feeds the flux trajectory to the inverse loop
/// and compares the recovered field with the excitation.
pub fn roundtrip<const D: usize>(
    model: &MaterialModel,
    cfg: &SolverConfig,
    excitation: &[FieldVector<D>],
    method: NewtonDirectionMethod,
) -> Result<RoundtripReport> {
    let forward = run_loop(model, cfg, excitation, OperatorMode::Forward, method)?;
    let inverse = run_loop(model, cfg, &forward.fluxes(), OperatorMode::Inverse, method)?;
    let recovered = inverse.fields();
    let peak = excitation.iter().map(|h| h.norm()).fold(0.0, f64::max);
    let deviations: Vec<f64> = recovered
        .iter()
        .zip(excitation)
        .map(|(a, b)| if peak > 0.0 { (a - b).norm() / peak } else { (a - b).norm() })
        .collect();
    let n = deviations.len().max(1) as f64;
    Ok(RoundtripReport {
        steps: excitation.len(),
        max_rel_err: deviations.iter().copied().fold(0.0, f64::max),
        mean_rel_err: deviations.iter().sum::<f64>() / n,
        rel_err_sq: if peak > 0.0 { relative_error_sq(&recovered, excitation)? } else { 0.0 },
    })
}
