//! Consistency, convergence order and reversibility of the time steppers.

use std::sync::Arc;

use num_complex::Complex64;
use srsp_core::diagnostics::oracles::fit_slope;
use srsp_core::{
    advance, duhamel_midpoint_step, hartree_rhs, record, run, state_distance, strang_step, Damping,
    DomainSpec, Ensemble, Scheme, SpectralBasis, StepParams, Weights,
};

fn test_ensemble(k: usize, n: usize, seed: u64) -> Ensemble {
    let basis = Arc::new(SpectralBasis::new(DomainSpec::unit(1, n, 2).unwrap()));
    Ensemble::seeded(basis, Weights::uniform(k).unwrap(), 1.0, seed, Damping::Algebraic(1.0)).unwrap()
}

#[test]
fn strang_is_consistent_with_the_rhs() {
    // (S(dt) e - e) / dt approaches the right side at first order in dt
    let e = test_ensemble(2, 16, 1);
    let rhs = hartree_rhs(&e);
    let mut errs = Vec::new();
    for i in 0..4 {
        let dt = 1e-2 / 2f64.powi(i);
        let stepped = strang_step(&e, dt);
        let fd: Vec<_> = stepped
            .psi()
            .iter()
            .zip(e.psi())
            .map(|(a, b)| a.sub(b).scaled(Complex64::new(1.0 / dt, 0.0)))
            .collect();
        let diff: f64 = fd
            .iter()
            .zip(&rhs)
            .zip(e.weights().as_slice())
            .map(|((a, b), &l)| l * a.sub(b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        errs.push(diff);
    }
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!(rate > 0.8 && rate < 1.3, "observed consistency rate {rate}");
    }
}

#[test]
fn strang_self_convergence_is_second_order() {
    let e = test_ensemble(2, 32, 2);
    let t_final = 0.32;
    let base_steps = 40;
    let levels = 6;
    let finals: Vec<Ensemble> = (0..levels)
        .map(|i| {
            let steps = base_steps << i;
            let dt = t_final / steps as f64;
            let mut s = e.clone();
            for _ in 0..steps {
                s = strang_step(&s, dt);
            }
            s
        })
        .collect();
    let errs: Vec<f64> = finals.windows(2).map(|w| state_distance(&w[0], &w[1])).collect();
    let xs: Vec<f64> = (0..errs.len()).map(|i| -(i as f64)).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
    let slope = fit_slope(&xs, &ys);
    assert!(
        (slope - 2.0).abs() <= 0.2,
        "self-convergence slope {slope}, errors {errs:?}"
    );
}

#[test]
fn strang_time_reversal() {
    let e = test_ensemble(3, 32, 3);
    let dt = 1e-2;
    let back = strang_step(&strang_step(&e, dt), -dt);
    let err = state_distance(&e, &back);
    assert!(err <= 1e-10, "reversal error {err}");
}

#[test]
fn duhamel_agrees_with_strang_at_third_order() {
    let e = test_ensemble(2, 32, 4);
    let mut errs = Vec::new();
    for i in 0..5 {
        let dt = 1e-2 / 2f64.powi(i);
        let a = strang_step(&e, dt);
        let b = duhamel_midpoint_step(&e, dt);
        errs.push(state_distance(&a, &b));
    }
    let xs: Vec<f64> = (0..errs.len()).map(|i| -(i as f64)).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
    let slope = fit_slope(&xs, &ys);
    assert!(slope >= 2.7, "per-step difference slope {slope}, errors {errs:?}");
}

#[test]
fn lie_step_is_first_order_against_strang_reference() {
    let e = test_ensemble(2, 16, 5);
    let t_final = 0.2;
    let mut errs = Vec::new();
    for i in 0..3 {
        let steps = 20 << i;
        let dt = t_final / steps as f64;
        let mut lie = e.clone();
        let mut reference = e.clone();
        for _ in 0..steps {
            lie = advance(&lie, dt, Scheme::Lie, true);
        }
        let fine = steps * 16;
        let dt_fine = t_final / fine as f64;
        for _ in 0..fine {
            reference = strang_step(&reference, dt_fine);
        }
        errs.push(state_distance(&lie, &reference));
    }
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!(rate > 0.7 && rate < 1.4, "lie rate {rate} from {errs:?}");
    }
}

#[test]
fn free_run_masses_stay_constant() {
    let e = test_ensemble(2, 16, 6);
    let params = StepParams {
        dt: 1e-3,
        scheme: Scheme::Strang,
        steps: 1000,
        cadence: 100,
        coupling: false,
        guard_factor: 1e3,
    };
    let mut masses = Vec::new();
    run(&e, &params, &mut |rec, _| {
        masses.push(rec.mass);
        Ok(())
    })
    .unwrap();
    assert_eq!(masses.len(), 11);
    for m in &masses {
        assert!((m - masses[0]).abs() <= 1e-12 * masses[0]);
    }
}

#[test]
fn run_emits_final_record_off_cadence() {
    let e = test_ensemble(1, 8, 7);
    let params = StepParams {
        dt: 1e-3,
        scheme: Scheme::Strang,
        steps: 25,
        cadence: 10,
        coupling: true,
        guard_factor: 1e3,
    };
    let mut ts = Vec::new();
    run(&e, &params, &mut |rec, _| {
        ts.push(rec.t);
        Ok(())
    })
    .unwrap();
    assert_eq!(ts.len(), 4); // t = 0, 10 dt, 20 dt, 25 dt
    assert!((ts[3] - 0.025).abs() < 1e-15);
}

#[test]
fn phase_wrap_ratio_reported() {
    let e = test_ensemble(1, 64, 8);
    let params = StepParams {
        dt: 1e-3,
        scheme: Scheme::Strang,
        steps: 1,
        cadence: 1,
        coupling: true,
        guard_factor: 1e3,
    };
    let r = params.phase_wrap_ratio(e.basis(), e.mass());
    assert!(r > 0.0 && r < 1.0, "baseline-sized steps stay under the wrap limit, got {r}");
    let rec = record(&e, 0.0);
    assert!(rec.is_finite());
}
