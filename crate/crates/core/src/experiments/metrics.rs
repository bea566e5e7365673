use crate::error::{HysteresisError, Result};
use crate::material::{FieldVector, MagnetizationState, MaterialModel};

/// `Σ_i |a_i − b_i|² / Σ_i |b_i|²` (squared, not square-rooted).
pub fn relative_error_sq<const D: usize>(a: &[FieldVector<D>], b: &[FieldVector<D>]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(HysteresisError::Sequence(format!(
            "sequences differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let denom: f64 = b.iter().map(|v| v.norm_squared()).sum();
    if denom == 0.0 {
        return Err(HysteresisError::Sequence("reference sequence is identically zero".into()));
    }
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_squared()).sum();
    Ok(num / denom)
}

/// Energy dissipated by pinning when moving from `before` to `after`,
/// `Σ_k χ_k |J_k' − J_k|` in J/m³.
pub fn dissipation_increment<const D: usize>(
    model: &MaterialModel,
    before: &MagnetizationState<D>,
    after: &MagnetizationState<D>,
) -> f64 {
    model
        .cells
        .iter()
        .zip(before.j_prev.iter().zip(&after.j_prev))
        .map(|(cell, (j0, j1))| cell.chi * (j1 - j0).norm())
        .sum()
}
