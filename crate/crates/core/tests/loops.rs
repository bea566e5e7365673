use vector_hysteresis::experiments::{
    benchmark_material, dissipation_increment, run_loop, ExcitationSequence, TrajectoryRecord,
};
use vector_hysteresis::{FieldVector, MagnetizationState, NewtonDirectionMethod, OperatorMode, SolverConfig};

// N = 501 puts the turning points t = 0.2, 0.6, 1.0 on samples 100, 300, 500
const N: usize = 501;

fn uni_loop() -> TrajectoryRecord<2> {
    let model = benchmark_material(20).unwrap();
    let h = ExcitationSequence::uni(N).samples;
    run_loop(&model, &SolverConfig::default(), &h, OperatorMode::Forward, NewtonDirectionMethod::Schur).unwrap()
}

fn state_at(rec: &TrajectoryRecord<2>, i: usize) -> MagnetizationState<2> {
    MagnetizationState::new(rec.steps[i].j.clone())
}

#[test]
fn major_loop_is_point_symmetric() {
    let rec = uni_loop();
    let b = rec.fluxes();
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for m in 0..=200 {
        let (down, up) = (&rec.steps[100 + m], &rec.steps[300 + m]);
        assert!((down.h + up.h).norm() < 1e-9);
        assert!((b[100 + m] + b[300 + m]).norm() <= 1e-3 * scale, "m={m}");
    }
}

#[test]
fn loop_closes_after_one_period() {
    let rec = uni_loop();
    let b = rec.fluxes();
    assert!((b[500] - b[100]).norm() <= 1e-6 * b[100].norm());
    assert!(b[100][0] > 1.0 && b[300][0] < -1.0);
    assert!(b.iter().all(|v| v[1] == 0.0));
}

#[test]
fn remanence_and_coercivity_have_the_right_sign() {
    let rec = uni_loop();
    // H = 0 on the descending branch at t = 0.4
    let rem = rec.steps[200].b[0];
    assert!(rec.steps[200].h.norm() < 1e-9);
    assert!(rem > 0.1, "remanence {rem}");
    // B crosses zero while H is already negative
    let crossing = (200..300).find(|&i| rec.steps[i].b[0] < 0.0).unwrap();
    assert!(rec.steps[crossing].h[0] < 0.0);
}

#[test]
fn loop_area_equals_pinning_dissipation() {
    let rec = uni_loop();
    let model = benchmark_material(20).unwrap();
    let (mut left, mut right, mut dissipated) = (0.0, 0.0, 0.0);
    for i in 100..500 {
        let (a, b) = (&rec.steps[i], &rec.steps[i + 1]);
        left += a.h.dot(&(b.b - a.b));
        right += b.h.dot(&(b.b - a.b));
        dissipated += dissipation_increment(&model, &state_at(&rec, i), &state_at(&rec, i + 1));
    }
    assert!(dissipated > 0.0);
    assert!(left <= dissipated && dissipated <= right);
}

#[test]
fn starts_from_the_virgin_state() {
    let rec = uni_loop();
    assert_eq!(rec.steps[0].h, FieldVector::<2>::zeros());
    assert!(rec.steps[0].b.norm() < 1e-6);
    assert_eq!(rec.steps[0].t, 0.0);
    assert_eq!(rec.steps[N - 1].t, 1.0);
    // virgin curve lies between the branches at the same field
    let (virgin, ascending, descending) = (rec.steps[50].b[0], rec.steps[450].b[0], rec.steps[150].b[0]);
    assert!((rec.steps[50].h - rec.steps[450].h).norm() < 1e-9);
    assert!(ascending <= virgin && virgin <= descending);
}

#[test]
fn each_step_is_the_forward_operator_of_the_previous_state() {
    let rec = uni_loop();
    for i in 1..N {
        let bsum: FieldVector<2> = rec.steps[i].j.iter().sum::<FieldVector<2>>() + rec.steps[i].h * vector_hysteresis::MU0;
        assert!((bsum - rec.steps[i].b).norm() < 1e-14);
    }
    assert!(rec.mean_iterations() > 0.0);
}

#[test]
fn rotational_loop_saturates_and_turns() {
    let model = benchmark_material(20).unwrap();
    let h = ExcitationSequence::rot(N).samples;
    let rec = run_loop(&model, &SolverConfig::default(), &h, OperatorMode::Forward, NewtonDirectionMethod::Schur).unwrap();
    let last = &rec.steps[N - 1];
    // at full amplitude the polarization lags behind the field direction
    let j: FieldVector<2> = last.j.iter().sum();
    assert!(j.norm() > 1.0 && j.norm() < model.saturation());
    let lag = last.h.perp(&j) / (last.h.norm() * j.norm());
    assert!(lag.abs() > 1e-3);
    let inv = run_loop(&model, &SolverConfig::default(), &rec.fluxes(), OperatorMode::Inverse, NewtonDirectionMethod::Schur).unwrap();
    for (a, b) in inv.fields().iter().zip(rec.fields()) {
        assert!((a - b).norm() <= 1e-5 * b.norm().max(1.0));
    }
}
