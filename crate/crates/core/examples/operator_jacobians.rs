//! Jacobians of the forward and inverse operators at a point on the loop,
//! checked against central differences; their product is the identity.
//!
//!     cargo run --release --example operator_jacobians

use vector_hysteresis::experiments::benchmark_material;
use vector_hysteresis::{
    evaluate_forward, evaluate_inverse, forward_jacobian, inverse_jacobian, BlockMatrix, FieldVector, MagnetizationState,
    NewtonDirectionMethod, SolverConfig,
};

fn main() -> vector_hysteresis::Result<()> {
    let model = benchmark_material(5)?;
    let cfg = SolverConfig {
        tol: 1e-13,
        ..Default::default()
    };
    // magnetize along x, then turn the field: some cells move, others stay pinned
    let prior = evaluate_forward(&model, &cfg, &FieldVector::<2>::new(300.0, 0.0), &MagnetizationState::demagnetized(5))?.state;
    let h = FieldVector::<2>::new(250.0, 120.0);
    let fwd = evaluate_forward(&model, &cfg, &h, &prior)?;

    let jf = forward_jacobian(&model, &cfg, &prior, &fwd.state)?;
    let step = 1e-3;
    let fd = BlockMatrix::<2>::from_fn(|i, j| {
        let mut e = FieldVector::<2>::zeros();
        e[j] = step;
        let plus = evaluate_forward(&model, &cfg, &(h + e), &prior).unwrap().b[i];
        let minus = evaluate_forward(&model, &cfg, &(h - e), &prior).unwrap().b[i];
        (plus - minus) / (2.0 * step)
    });
    println!("dB/dH analytic{jf}dB/dH central differences{fd}");

    let inv = evaluate_inverse(&model, &cfg, &fwd.b, &prior, NewtonDirectionMethod::Schur)?;
    let ji = inverse_jacobian(&model, &cfg, &prior, &inv.state)?;
    println!("dH/dB analytic{ji}");
    println!("|dB/dH · dH/dB − I| = {:.2e}", (jf * ji - BlockMatrix::<2>::identity()).norm());
    Ok(())
}
