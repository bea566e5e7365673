//! Benchmark material, excitations, the time-stepping driver and the studies
//! built on it: regularization sweep, forward/inverse roundtrip, dissipation
//! and timing.

mod bench;
mod excitation;
mod metrics;
mod roundtrip;
mod sweep;
mod trajectory;

pub use bench::{bench, BenchMethod, BenchRow};
pub use excitation::{excitation_rot, excitation_uni, time_at, ExcitationKind, ExcitationSequence};
pub use metrics::{dissipation_increment, relative_error_sq};
pub use roundtrip::{roundtrip, RoundtripReport};
pub use sweep::{eps_sweep, eps_sweep_with, fit_loglog_slope, SweepRow};
pub use trajectory::{run_loop, TrajectoryRecord, TrajectoryStep};

use crate::material::{MaterialModel, PinningCell, MU0};

/// Total saturation polarization of the benchmark material, in T.
pub const BENCHMARK_SATURATION: f64 = 1.545;
/// Energy scale of every benchmark cell, in A/m.
pub const BENCHMARK_A_S: f64 = 50.0;
/// Pinning strength of the last benchmark cell, in A/m.
pub const BENCHMARK_CHI_MAX: f64 = 140.0;

/// The `K`-cell benchmark material: `a_s = 50 A/m`, `j_s = 1.545/K T` and
/// pinning strengths spread uniformly over `[0, 140] A/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkMaterial {
    pub k: usize,
}

impl BenchmarkMaterial {
    pub fn new(k: usize) -> Self {
        BenchmarkMaterial { k }
    }

    /// `χ_k = 140·(k−1)/(K−1)` for `k = 1..K`; a single cell is unpinned.
    pub fn chi(&self, index: usize) -> f64 {
        if self.k <= 1 {
            0.0
        } else {
            BENCHMARK_CHI_MAX * index as f64 / (self.k - 1) as f64
        }
    }

    pub fn model(&self) -> crate::Result<MaterialModel> {
        let j_s = BENCHMARK_SATURATION / self.k as f64;
        let cells = (0..self.k)
            .map(|i| PinningCell::new(BENCHMARK_A_S, j_s, self.chi(i)))
            .collect::<crate::Result<Vec<_>>>()?;
        MaterialModel::new(MU0, cells)
    }
}

/// Shorthand for `BenchmarkMaterial::new(k).model()`.
pub fn benchmark_material(k: usize) -> crate::Result<MaterialModel> {
    BenchmarkMaterial::new(k).model()
}
