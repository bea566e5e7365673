//! A hand-specified three-cell material read from JSON, driven by a rotating
//! field in three dimensions.
//!
//!     cargo run --release --example custom_material

use vector_hysteresis::experiments::run_loop;
use vector_hysteresis::{io, FieldVector, NewtonDirectionMethod, OperatorMode};

const MATERIAL: &str = r#"{
    "cells": [
        {"a_s": 40.0, "j_s": 0.6, "chi": 0.0},
        {"a_s": 60.0, "j_s": 0.5, "chi": 80.0},
        {"a_s": 60.0, "j_s": 0.4, "chi": 200.0}
    ]
}"#;

const CONFIG: &str = r#"{"eps": 1e-10, "tol": 1e-10}"#;

fn main() -> vector_hysteresis::Result<()> {
    let model = io::read_material(MATERIAL.as_bytes())?;
    let cfg = io::read_config(CONFIG.as_bytes())?;

    // field sweeping a cone around z
    let n = 200;
    let h: Vec<FieldVector<3>> = (0..n)
        .map(|i| {
            let phi = std::f64::consts::TAU * 2.0 * i as f64 / (n - 1) as f64;
            let amp = 400.0 * (i as f64 / 50.0).min(1.0);
            FieldVector::<3>::new(amp * phi.cos() * 0.6, amp * phi.sin() * 0.6, amp * 0.8)
        })
        .collect();
    let rec = run_loop(&model, &cfg, &h, OperatorMode::Forward, NewtonDirectionMethod::Schur)?;
    for step in rec.steps.iter().step_by(25) {
        let lag = step.b.angle(&step.h).to_degrees();
        println!("t={:.3}  |H|={:6.1}  B=({:+.3}, {:+.3}, {:+.3})  angle(B,H)={:5.1}°", step.t, step.h.norm(), step.b[0], step.b[1], step.b[2], lag);
    }
    Ok(())
}
