//! One-dimensional cell: the regularized Newton solve against the closed-form
//! play response.
//!
//!     cargo run --example scalar_play

use vector_hysteresis::oracles::scalar_play_exact;
use vector_hysteresis::{newton_solve_cell, FieldVector, PinningCell, SolverConfig};

fn main() -> vector_hysteresis::Result<()> {
    let cell = PinningCell::new(50.0, 1.545, 140.0)?;
    let j_prev = 0.3;

    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "h", "exact", "eps=1e-4", "eps=1e-8", "eps=1e-12");
    for i in 0..=16 {
        let h = -400.0 + 50.0 * i as f64;
        let exact = scalar_play_exact(&cell, h, j_prev);
        let mut row = format!("{h:>8.1} {exact:>12.6}");
        for eps in [1e-4, 1e-8, 1e-12] {
            let cfg = SolverConfig {
                eps,
                tol: 1e-12,
                ..Default::default()
            };
            let (j, _) = newton_solve_cell(&cell, &FieldVector::<1>::new(h), &FieldVector::<1>::new(j_prev), &cfg)?;
            row += &format!(" {:>12.6}", j[0]);
        }
        println!("{row}");
    }
    // inside the stuck band |h − u'(j_prev)| ≤ χ the polarization does not move
    Ok(())
}
