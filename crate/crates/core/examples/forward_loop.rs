//! Major loop of the benchmark material under the unidirectional excitation,
//! with remanence, coercive field and the dissipated energy of the loop.
//!
//!     cargo run --release --example forward_loop [out.csv]

use std::fs::File;

use vector_hysteresis::experiments::{benchmark_material, dissipation_increment, run_loop, ExcitationSequence};
use vector_hysteresis::{io, MagnetizationState, NewtonDirectionMethod, OperatorMode, SolverConfig};

fn main() -> vector_hysteresis::Result<()> {
    let model = benchmark_material(20)?;
    let cfg = SolverConfig::default();
    let seq = ExcitationSequence::uni(500);
    let rec = run_loop(&model, &cfg, &seq.samples, OperatorMode::Forward, NewtonDirectionMethod::Schur)?;

    // descending branch: H goes from +500 to −500 between t = 0.2 and t = 0.6
    let descending = &rec.steps[100..300];
    let remanence = descending.windows(2).find(|w| w[0].h[0] >= 0.0 && w[1].h[0] < 0.0).map(|w| w[0].b[0]);
    let coercive = descending.windows(2).find(|w| w[0].b[0] >= 0.0 && w[1].b[0] < 0.0).map(|w| w[1].h[0].abs());
    println!("peak B       {:.4} T", rec.steps.iter().map(|s| s.b[0]).fold(f64::MIN, f64::max));
    println!("remanence    {:.4} T", remanence.unwrap_or(f64::NAN));
    println!("coercivity   {:.1} A/m", coercive.unwrap_or(f64::NAN));

    let mut loss = 0.0;
    let mut prev = MagnetizationState::demagnetized(model.len());
    for step in &rec.steps {
        let next = MagnetizationState::new(step.j.clone());
        loss += dissipation_increment(&model, &prev, &next);
        prev = next;
    }
    println!("dissipated   {loss:.1} J/m^3");
    println!("mean Newton iterations per cell solve {:.2}", rec.mean_iterations());

    if let Some(path) = std::env::args().nth(1) {
        let file = File::create(&path).map_err(|e| vector_hysteresis::HysteresisError::Format(e.to_string()))?;
        io::write_trajectory(file, &rec)?;
        println!("trajectory written to {path}");
    }
    Ok(())
}
