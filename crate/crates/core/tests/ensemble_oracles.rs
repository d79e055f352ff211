//! State-level functionals checked against quadrature and finite differences.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use srsp_core::diagnostics::oracles;
use srsp_core::ensemble::random_family;
use srsp_core::{
    density, free_flow, gram_defect, hartree_rhs, kinetic_rhs, nonlinearity, poisson_solve,
    verify_poisson_fd, Damping, DomainSpec, Ensemble, SpectralBasis, SpectralCoeffs, Weights,
};

fn arc_basis(d: usize, n: usize) -> Arc<SpectralBasis> {
    Arc::new(SpectralBasis::new(DomainSpec::unit(d, n, 2).unwrap()))
}

fn seeded(basis: &Arc<SpectralBasis>, k: usize, seed: u64) -> Ensemble {
    Ensemble::seeded(basis.clone(), Weights::uniform(k).unwrap(), 1.0, seed, Damping::Algebraic(1.0)).unwrap()
}

#[test]
fn density_integral_matches_parseval() {
    let b = arc_basis(1, 16);
    let psi = random_family(&b, 4, 5, Damping::Algebraic(1.0));
    let w = Weights::new(vec![4.0, 3.0, 2.0, 1.0]).unwrap();
    let expect: f64 = w
        .as_slice()
        .iter()
        .zip(&psi)
        .map(|(&l, c)| l * c.norm_sqr())
        .sum();
    let e = Ensemble::new(b.clone(), w, 1.0, psi).unwrap();
    let total = b.quadrature(&density(&e)).re;
    assert!((total - expect).abs() <= 1e-10 * expect);
}

#[test]
fn poisson_fd_oracle_converges_at_second_order() {
    let report = verify_poisson_fd(1.0, &[64, 128, 256], 9);
    assert!(report.passed(), "{report}");
    for &p in &report.orders {
        assert!(p >= 1.9, "observed order {p}");
    }
}

#[test]
fn fd_solver_reproduces_quadratic_closed_form() {
    // -V'' = 2 has the exact solution x (L - x); the stencil is exact on quadratics
    let m = 16;
    let n = vec![2.0; m - 1];
    let v = oracles::fd_poisson_1d(&n, 1.0);
    for (i, val) in v.iter().enumerate() {
        let x = (i + 1) as f64 / m as f64;
        assert!((val - x * (1.0 - x)).abs() < 1e-13);
    }
}

#[test]
fn poisson_residual_and_positivity_on_random_states() {
    let b = arc_basis(1, 32);
    for seed in 0..5 {
        let e = seeded(&b, 3, seed);
        let n = density(&e);
        let v = poisson_solve(&b, &n);
        let nhat = b.analyze(&n).unwrap();
        let mut res = 0.0;
        let mut nrm = 0.0;
        for ((vc, nc), &mu) in v.coeffs().0.iter().zip(&nhat.0).zip(b.eigenvalues()) {
            res += (mu * vc - nc).norm_sqr();
            nrm += nc.norm_sqr();
        }
        assert!((res / nrm).sqrt() <= 1e-10);
        assert!(v.grid().min_real() >= -1e-10, "undershoot {}", v.grid().min_real());
    }
}

#[test]
fn hartree_rhs_zero_state() {
    let b = arc_basis(1, 8);
    let e = Ensemble::new(
        b.clone(),
        Weights::uniform(2).unwrap(),
        1.0,
        vec![SpectralCoeffs::zeros(b.mode_len()); 2],
    )
    .unwrap();
    for c in hartree_rhs(&e) {
        assert_eq!(c.norm(), 0.0);
    }
}

#[test]
fn hartree_rhs_homogeneity_split() {
    // kinetic part scales like s, potential part like s^3
    let b = arc_basis(1, 16);
    let e = seeded(&b, 2, 11);
    let s = 2.0;
    let es = e.scaled(s);
    for (a, c) in kinetic_rhs(&es).iter().zip(kinetic_rhs(&e)) {
        let err = a.sub(&c.scaled(Complex64::new(s, 0.0))).norm();
        assert!(err <= 1e-12 * a.norm());
    }
    for (a, c) in nonlinearity(&es).iter().zip(nonlinearity(&e)) {
        let err = a.sub(&c.scaled(Complex64::new(s * s * s, 0.0))).norm();
        assert!(err <= 1e-12 * a.norm());
    }
}

#[test]
fn hartree_rhs_single_mode_against_quadrature() {
    let b = arc_basis(1, 4);
    let mut c = SpectralCoeffs::zeros(b.mode_len());
    c.0[0] = Complex64::new(1.0, 0.0);
    let e = Ensemble::new(b.clone(), Weights::uniform(1).unwrap(), 1.0, vec![c]).unwrap();

    let kin = kinetic_rhs(&e).remove(0);
    let want = Complex64::new(0.0, -((PI * PI + 1.0).sqrt() - 1.0));
    assert!((kin.0[0] - want).norm() < 1e-13);

    // potential part against the direct quadrature of V psi e_n
    let pot = nonlinearity(&e).remove(0);
    let v = poisson_solve(&b, &density(&e));
    let psi = b.synthesize(&e.psi()[0]).unwrap();
    let prod: Vec<Complex64> = v
        .grid()
        .values()
        .iter()
        .zip(psi.values())
        .map(|(a, p)| a * p)
        .collect();
    for flat in 0..b.mode_len() {
        let direct = oracles::project_mode(b.dom(), &prod, flat) * Complex64::new(0.0, -1.0);
        assert!(
            (pot.0[flat] - direct).norm() <= 1e-11,
            "mode {flat}: {} vs {direct}",
            pot.0[flat]
        );
    }
}

#[test]
fn potential_scaling_is_quadratic() {
    let b = arc_basis(1, 16);
    let e = seeded(&b, 3, 13);
    let v1 = poisson_solve(&b, &density(&e));
    let v2 = poisson_solve(&b, &density(&e.scaled(3.0)));
    for (a, c) in v2.grid().values().iter().zip(v1.grid().values()) {
        assert!((a.re - 9.0 * c.re).abs() <= 1e-12 * a.re.abs().max(1e-12));
    }
}

#[test]
fn field_energy_matches_quadrature_of_v_times_n() {
    // spectral sum_n mu |Vhat|^2 equals the grid quadrature of V n by parts
    let b = arc_basis(1, 32);
    let e = seeded(&b, 4, 17);
    let n = density(&e);
    let v = poisson_solve(&b, &n);
    let spectral = v.gradient_norm_sqr(&b);
    let quad: f64 = b.quadrature_weight()
        * v.grid()
            .values()
            .iter()
            .zip(n.values())
            .map(|(a, c)| a.re * c.re)
            .sum::<f64>();
    assert!((spectral - quad).abs() <= 1e-10 * spectral.max(1e-30));
}

#[test]
fn cubic_homogeneity_of_nonlinearity() {
    let b = arc_basis(1, 16);
    let e = seeded(&b, 2, 19);
    let f1 = nonlinearity(&e);
    for &s in &[2.0, 10.0] {
        let fs = nonlinearity(&e.scaled(s));
        for (a, c) in fs.iter().zip(&f1) {
            let err = a.sub(&c.scaled(Complex64::new(s * s * s, 0.0))).norm();
            assert!(err <= 1e-12 * a.norm(), "s={s}: rel err {}", err / a.norm());
        }
    }
}

#[test]
fn gram_invariant_under_free_flow() {
    let b = arc_basis(1, 16);
    let e = seeded(&b, 3, 23);
    let flowed = free_flow(&e, 1.7);
    assert!(gram_defect(&flowed) <= 1e-12);
}

#[test]
fn density_matrix_trace_is_one() {
    let b = arc_basis(1, 8);
    let e = seeded(&b, 3, 29);
    let n = density(&e);
    let trace = b.quadrature(&n).re;
    assert!((trace - 1.0).abs() <= 1e-12);
}

#[test]
fn lifted_fd_density_stays_nonnegative() {
    // spec guard: lifted densities remain nonnegative on the oracle ladder
    let report = verify_poisson_fd(1.0, &[64, 128], 31);
    assert!(report.min_potential >= -1e-10);
}
