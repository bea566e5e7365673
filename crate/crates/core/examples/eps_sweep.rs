//! Regularization error of both operators against the tiny-ε reference.
//!
//!     cargo run --release --example eps_sweep

use vector_hysteresis::experiments::{eps_sweep, fit_loglog_slope, ExcitationSequence};

fn main() -> vector_hysteresis::Result<()> {
    let eps: Vec<f64> = (2..=8).map(|e| 10f64.powi(-e)).collect();
    for (name, seq) in [("uni", ExcitationSequence::uni(500)), ("rot", ExcitationSequence::rot(500))] {
        let rows = eps_sweep(20, &seq.samples, &eps)?;
        println!("{name}: {:>8} {:>12} {:>12}", "eps", "forward", "inverse");
        for r in &rows {
            println!("     {:>8.0e} {:>12.3e} {:>12.3e}", r.eps, r.err_forward, r.err_inverse);
        }
        let fwd: Vec<f64> = rows.iter().map(|r| r.err_forward).collect();
        let inv: Vec<f64> = rows.iter().map(|r| r.err_inverse).collect();
        println!(
            "     log-log slope: forward {:.2}, inverse {:.2}\n",
            fit_loglog_slope(&eps, &fwd)?,
            fit_loglog_slope(&eps, &inv)?
        );
    }
    Ok(())
}
