#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vector_hysteresis::{FieldVector, MagnetizationState, MaterialModel};

/// Uniform sample of the disc of the given radius.
pub fn in_disc(rng: &mut ChaCha8Rng, radius: f64) -> FieldVector<2> {
    let r = radius * rng.gen::<f64>().sqrt();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    FieldVector::<2>::new(r * phi.cos(), r * phi.sin())
}

/// Random feasible state with every `|J_k| ≤ fill · j_s,k`.
pub fn random_state(rng: &mut ChaCha8Rng, model: &MaterialModel, fill: f64) -> MagnetizationState<2> {
    MagnetizationState::new(model.cells.iter().map(|c| in_disc(rng, fill * c.j_s)).collect())
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
