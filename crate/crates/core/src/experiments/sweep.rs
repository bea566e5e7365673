use serde::Serialize;

use crate::error::{HysteresisError, Result};
use crate::inverse::NewtonDirectionMethod;
use crate::material::{FieldVector, MaterialModel, SolverConfig};
use crate::oracles::reference_config;
use crate::OperatorMode;

use super::metrics::relative_error_sq;
use super::trajectory::run_loop;
use super::benchmark_material;

/// Regularization error at one smoothing level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub err_forward: f64,
    pub err_inverse: f64,
}

/// Relative squared errors of the regularized forward (`B`) and inverse (`H`)
/// loops against the tiny-`ε` reference, for each `ε` in `eps_list` with the
/// Newton tolerance set to `ε`.
///
/// The reference flux trajectory comes from a forward reference loop over
/// `excitation`; it is also the input of every inverse loop, and the
/// reference field is the inverse reference loop over it.
pub fn eps_sweep<const D: usize>(
    k: usize,
    excitation: &[FieldVector<D>],
    eps_list: &[f64],
) -> Result<Vec<SweepRow>> {
    eps_sweep_with(&benchmark_material(k)?, excitation, eps_list)
}

/// [`eps_sweep`] for an explicit material.
pub fn eps_sweep_with<const D: usize>(
    model: &MaterialModel,
    excitation: &[FieldVector<D>],
    eps_list: &[f64],
) -> Result<Vec<SweepRow>> {
    if eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(HysteresisError::InvalidParameter("eps values must be positive".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(HysteresisError::InvalidParameter("eps values must be strictly descending".into()));
    }
    let reference = reference_config();
    let method = NewtonDirectionMethod::Schur;
    let b_ref = run_loop(model, &reference, excitation, OperatorMode::Forward, method)?.fluxes();
    let h_ref = run_loop(model, &reference, &b_ref, OperatorMode::Inverse, method)?.fields();

    eps_list
        .iter()
        .map(|&eps| {
            let cfg = SolverConfig::with_eps(eps);
            let b = run_loop(model, &cfg, excitation, OperatorMode::Forward, method)?.fluxes();
            let h = run_loop(model, &cfg, &b_ref, OperatorMode::Inverse, method)?.fields();
            Ok(SweepRow {
                eps,
                err_forward: relative_error_sq(&b, &b_ref)?,
                err_inverse: relative_error_sq(&h, &h_ref)?,
            })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(HysteresisError::Sequence("slope fit needs two or more paired samples".into()));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return Err(HysteresisError::Sequence("slope fit needs positive samples".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(HysteresisError::Sequence("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}
