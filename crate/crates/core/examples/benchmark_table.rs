//! Wall time and mean Newton iterations of the forward operator and both
//! inverse solvers over 500 steps of the unidirectional loop.
//!
//!     cargo run --release --example benchmark_table

use vector_hysteresis::experiments::{bench, BenchMethod, ExcitationSequence};
use vector_hysteresis::SolverConfig;

fn main() -> vector_hysteresis::Result<()> {
    let ks = [5, 10, 20, 50, 100];
    let seq = ExcitationSequence::uni(500);
    let rows = bench(&ks, &BenchMethod::ALL, &seq.samples, &SolverConfig::default(), 3)?;

    println!("{:>5} {:>22} {:>22} {:>22}", "K", "forward", "inverse-dense", "inverse-schur");
    println!("{:>5} {:>22} {:>22} {:>22}", "", "ms / iters", "ms / iters", "ms / iters");
    for k in ks {
        let cell = |m: BenchMethod| {
            let r = rows.iter().find(|r| r.k == k && r.method == m).expect("every cell is benchmarked");
            format!("{:.1} / {:.2}", r.time_ms, r.mean_iters)
        };
        println!(
            "{k:>5} {:>22} {:>22} {:>22}",
            cell(BenchMethod::Forward),
            cell(BenchMethod::InverseDense),
            cell(BenchMethod::InverseSchur)
        );
    }
    Ok(())
}
