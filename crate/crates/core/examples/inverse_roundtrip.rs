//! The inverse operator replaying a forward loop recovers the field, for both
//! excitations and both Newton direction solvers.
//!
//!     cargo run --release --example inverse_roundtrip

use vector_hysteresis::experiments::{benchmark_material, roundtrip, ExcitationKind, ExcitationSequence};
use vector_hysteresis::{NewtonDirectionMethod, SolverConfig};

fn main() -> vector_hysteresis::Result<()> {
    let model = benchmark_material(20)?;
    let cfg = SolverConfig::default();
    println!("{:<6} {:<6} {:>12} {:>12} {:>12}", "exc", "solver", "max_rel", "mean_rel", "rel_err_sq");
    for kind in [ExcitationKind::Uni, ExcitationKind::Rot] {
        let seq = ExcitationSequence::<2>::generate(kind, 500)?;
        for method in [NewtonDirectionMethod::Schur, NewtonDirectionMethod::Dense] {
            let r = roundtrip(&model, &cfg, &seq.samples, method)?;
            println!(
                "{:<6} {:<6} {:>12.3e} {:>12.3e} {:>12.3e}",
                kind.to_string(),
                method.to_string(),
                r.max_rel_err,
                r.mean_rel_err,
                r.rel_err_sq
            );
        }
    }
    Ok(())
}
