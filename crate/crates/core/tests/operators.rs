mod common;

use common::{in_disc, random_state};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vector_hysteresis::experiments::benchmark_material;
use vector_hysteresis::oracles::{reference_unregularized, REFERENCE_EPS};
use vector_hysteresis::{
    evaluate_forward, evaluate_inverse, forward_jacobian, inverse_jacobian, BlockMatrix, FieldVector,
    NewtonDirectionMethod, OperatorMode, SolverConfig, MU0,
};

type V2 = FieldVector<2>;

fn tight(eps: f64) -> SolverConfig {
    SolverConfig {
        eps,
        tol: 1e-13,
        ..Default::default()
    }
}

#[test]
fn forward_operator_is_monotone() {
    let model = benchmark_material(10).unwrap();
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let prior = random_state(&mut rng, &model, 0.8);
        let (h1, h2) = (in_disc(&mut rng, 600.0), in_disc(&mut rng, 600.0));
        let b1 = evaluate_forward(&model, &cfg, &h1, &prior).unwrap().b;
        let b2 = evaluate_forward(&model, &cfg, &h2, &prior).unwrap().b;
        // μ0|ΔH|² is a lower bound: every J_k(H) is the gradient of a convex function
        assert!((b1 - b2).dot(&(h1 - h2)) >= MU0 * (h1 - h2).norm_squared() * (1.0 - 1e-9));
    }
}

#[test]
fn cell_order_does_not_matter() {
    let model = benchmark_material(7).unwrap();
    let mut reversed = model.clone();
    reversed.cells.reverse();
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let prior = random_state(&mut rng, &model, 0.7);
        let mut prior_rev = prior.clone();
        prior_rev.j_prev.reverse();
        let h = in_disc(&mut rng, 500.0);
        let b = evaluate_forward(&model, &cfg, &h, &prior).unwrap().b;
        let b_rev = evaluate_forward(&reversed, &cfg, &h, &prior_rev).unwrap().b;
        assert!((b - b_rev).norm() <= 1e-12 * b.norm().max(1e-3));
        let inv = evaluate_inverse(&model, &cfg, &b, &prior, NewtonDirectionMethod::Schur).unwrap().h;
        let inv_rev = evaluate_inverse(&reversed, &cfg, &b, &prior_rev, NewtonDirectionMethod::Schur).unwrap().h;
        assert!((inv - inv_rev).norm() <= 1e-6 * h.norm().max(1.0));
    }
}

#[test]
fn inverse_undoes_forward() {
    let model = benchmark_material(12).unwrap();
    let cfg = tight(1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let prior = random_state(&mut rng, &model, 0.8);
        let h = in_disc(&mut rng, 500.0);
        let fwd = evaluate_forward(&model, &cfg, &h, &prior).unwrap();
        for method in [NewtonDirectionMethod::Schur, NewtonDirectionMethod::Dense] {
            let inv = evaluate_inverse(&model, &cfg, &fwd.b, &prior, method).unwrap();
            assert!((inv.h - h).norm() <= 1e-6 * h.norm().max(1.0), "{} vs {h}", inv.h);
            for (a, b) in inv.state.j_prev.iter().zip(&fwd.state.j_prev) {
                assert!((a - b).norm() <= 1e-9);
            }
        }
    }
}

#[test]
fn jacobians_match_differences_and_invert_each_other() {
    let model = benchmark_material(5).unwrap();
    let cfg = tight(1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let prior = random_state(&mut rng, &model, 0.6);
        let h = in_disc(&mut rng, 400.0);
        let fwd = evaluate_forward(&model, &cfg, &h, &prior).unwrap();
        let jf = forward_jacobian(&model, &cfg, &prior, &fwd.state).unwrap();
        let step = 1e-3;
        let fd = BlockMatrix::<2>::from_fn(|i, j| {
            let e = V2::from_fn(|r, _| if r == j { step } else { 0.0 });
            let plus = evaluate_forward(&model, &cfg, &(h + e), &prior).unwrap().b[i];
            let minus = evaluate_forward(&model, &cfg, &(h - e), &prior).unwrap().b[i];
            (plus - minus) / (2.0 * step)
        });
        assert!((jf - fd).norm() <= 1e-5 * jf.norm(), "{jf} vs {fd}");
        assert!((jf - jf.transpose()).norm() <= 1e-12 * jf.norm());

        let inv = evaluate_inverse(&model, &cfg, &fwd.b, &prior, NewtonDirectionMethod::Schur).unwrap();
        let ji = inverse_jacobian(&model, &cfg, &prior, &inv.state).unwrap();
        assert!((jf * ji - BlockMatrix::<2>::identity()).norm() <= 1e-8);
    }
}

#[test]
fn regularization_error_within_strong_convexity_bound() {
    let model = benchmark_material(8).unwrap();
    let gamma = model.gamma();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for eps in [1e-4, 1e-6, 1e-8] {
        let cfg = tight(eps);
        for _ in 0..10 {
            let prior = random_state(&mut rng, &model, 0.8);
            let h = in_disc(&mut rng, 500.0);
            let reference = reference_unregularized(&model, &h, &prior, OperatorMode::Forward).unwrap();
            let fwd = evaluate_forward(&model, &cfg, &h, &prior).unwrap();
            for ((cell, j), r) in model.cells.iter().zip(&fwd.state.j_prev).zip(&reference) {
                // (γ/2)|J − J^ε|² ≤ χ√ε, with the reference carrying its own share
                let bound = (2.0 * cell.chi * eps.sqrt() / gamma).sqrt() + (2.0 * cell.chi * REFERENCE_EPS.sqrt() / gamma).sqrt();
                assert!((j - r).norm() <= bound + 1e-12, "eps {eps}: {} > {bound}", (j - r).norm());
            }

            let b = fwd.b;
            let reference = reference_unregularized(&model, &b, &prior, OperatorMode::Inverse).unwrap();
            let inv = evaluate_inverse(&model, &cfg, &b, &prior, NewtonDirectionMethod::Schur).unwrap();
            let err_sq: f64 = inv.state.j_prev.iter().zip(&reference).map(|(a, b)| (a - b).norm_squared()).sum();
            let bound = 2.0 * model.total_chi() * (eps.sqrt() + REFERENCE_EPS.sqrt()) / gamma;
            assert!(err_sq.sqrt() <= 2.0 * bound.sqrt(), "eps {eps}: {err_sq} vs {bound}");
        }
    }
}
