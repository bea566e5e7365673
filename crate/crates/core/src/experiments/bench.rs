use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{HysteresisError, Result};
use crate::inverse::NewtonDirectionMethod;
use crate::material::{FieldVector, SolverConfig};
use crate::OperatorMode;

use super::benchmark_material;
use super::trajectory::{run_loop, TrajectoryRecord};

/// Operator implementations compared by [`bench`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BenchMethod {
    Forward,
    InverseDense,
    InverseSchur,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 3] = [BenchMethod::Forward, BenchMethod::InverseDense, BenchMethod::InverseSchur];
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchMethod::Forward => "forward",
            BenchMethod::InverseDense => "inverse-dense",
            BenchMethod::InverseSchur => "inverse-schur",
        })
    }
}

impl FromStr for BenchMethod {
    type Err = HysteresisError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(BenchMethod::Forward),
            "inverse-dense" => Ok(BenchMethod::InverseDense),
            "inverse-schur" => Ok(BenchMethod::InverseSchur),
            other => Err(HysteresisError::InvalidParameter(format!("unknown bench method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    pub k: usize,
    pub method: BenchMethod,
    /// Wall time of the whole loop in milliseconds (best of the repeats).
    pub time_ms: f64,
    pub mean_iters: f64,
}

fn timed<F>(repeats: usize, mut run: F) -> Result<(f64, TrajectoryRecord<2>)>
where
    F: FnMut() -> Result<TrajectoryRecord<2>>,
{
    // warm-up
    let mut record = run()?;
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        record = run()?;
        best = best.min(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok((best, record))
}

/// Times full loops over `excitation` for every `(K, method)` pair on the
/// benchmark material. Inverse loops replay the flux trajectory of a forward
/// loop run with the same settings; that preparatory run is not timed.
pub fn bench(
    k_list: &[usize],
    methods: &[BenchMethod],
    excitation: &[FieldVector<2>],
    cfg: &SolverConfig,
    repeats: usize,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(k_list.len() * methods.len());
    for &k in k_list {
        let model = benchmark_material(k)?;
        let fluxes = run_loop(&model, cfg, excitation, OperatorMode::Forward, NewtonDirectionMethod::Schur)?.fluxes();
        for &method in methods {
            let (time_ms, record) = match method {
                BenchMethod::Forward => timed(repeats, || {
                    run_loop(&model, cfg, excitation, OperatorMode::Forward, NewtonDirectionMethod::Schur)
                })?,
                BenchMethod::InverseDense => timed(repeats, || {
                    run_loop(&model, cfg, &fluxes, OperatorMode::Inverse, NewtonDirectionMethod::Dense)
                })?,
                BenchMethod::InverseSchur => timed(repeats, || {
                    run_loop(&model, cfg, &fluxes, OperatorMode::Inverse, NewtonDirectionMethod::Schur)
                })?,
            };
            rows.push(BenchRow {
                k,
                method,
                time_ms,
                mean_iters: record.mean_iterations(),
            });
        }
    }
    Ok(rows)
}
