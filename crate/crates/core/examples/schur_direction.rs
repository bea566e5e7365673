//! The coupled Newton system solved densely and by Schur elimination, with
//! timings as the number of cells grows.
//!
//!     cargo run --release --example schur_direction

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vector_hysteresis::{
    dense_newton_direction, schur_newton_direction_counted, BlockMatrix, FieldVector, SchurOpCounts, MU0,
};

fn main() -> vector_hysteresis::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let nu0 = 1.0 / MU0;
    println!("{:>5} {:>12} {:>12} {:>10} {:>22}", "K", "dense [us]", "schur [us]", "max diff", "fact/products/solves");
    for k in [1, 5, 20, 100, 400] {
        let blocks: Vec<BlockMatrix<2>> = (0..k)
            .map(|_| {
                let m = BlockMatrix::<2>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
                m * m.transpose() * 1e3 + BlockMatrix::identity() * 50.0
            })
            .collect();
        let grad: Vec<FieldVector<2>> = (0..k).map(|_| FieldVector::from_fn(|_, _| rng.gen_range(-100.0..100.0))).collect();

        let t = Instant::now();
        let dense = dense_newton_direction(&blocks, nu0, &grad)?;
        let t_dense = t.elapsed().as_secs_f64() * 1e6;
        let mut counts = SchurOpCounts::default();
        let t = Instant::now();
        let schur = schur_newton_direction_counted(&blocks, nu0, &grad, &mut counts)?;
        let t_schur = t.elapsed().as_secs_f64() * 1e6;

        let scale = dense.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let diff = dense.iter().zip(&schur).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        println!(
            "{k:>5} {t_dense:>12.1} {t_schur:>12.1} {diff:>10.1e} {:>22}",
            format!("{}/{}/{}", counts.factorizations, counts.block_products, counts.schur_solves)
        );
    }
    Ok(())
}
