//! Monitored quantities and the seedable verification probes.
//!
//! The probes restate the analytic inequalities at the discrete per-mode level,
//! where they hold exactly in exact arithmetic; violations are counted against
//! a roundoff slack of one part in 1e12.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::basis::{kinetic_symbol_raw, SpectralBasis, SpectralCoeffs};
use crate::ensemble::{
    density_from_grids, family_sobolev_norm, field_energy, gram_defect, kinetic_energy,
    nonlinearity_with, poisson_solve, random_family, sobolev_norm, Damping, Ensemble,
    KineticVariant, NormKind, SobolevOrder, Weights,
};
use crate::field::GridField;

const ROUNDOFF_SLACK: f64 = 1e-12;

/// One time sample of every conserved or monitored quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// Weighted `L^2` norm of the family.
    pub mass: f64,
    /// Massive kinetic energy plus field energy.
    pub energy_tm: f64,
    /// Massless (half-power) kinetic energy plus field energy.
    pub energy_half_p: f64,
    /// `1/2 |nabla V|^2`.
    pub potential_energy: f64,
    /// Homogeneous half-order norm.
    pub h12: f64,
    /// Homogeneous first-order norm.
    pub h1: f64,
    /// Largest entrywise deviation of the Gram matrix from the identity.
    pub gram_defect: f64,
    /// Most negative grid value of the density.
    pub density_min: f64,
}

impl DiagnosticsRecord {
    pub const CSV_HEADER: &'static str =
        "t,mass,energy_Tm,energy_half_p,potential_energy,h12,h1,gram_defect,density_min";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.t,
            self.mass,
            self.energy_tm,
            self.energy_half_p,
            self.potential_energy,
            self.h12,
            self.h1,
            self.gram_defect,
            self.density_min
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.mass,
            self.energy_tm,
            self.energy_half_p,
            self.potential_energy,
            self.h12,
            self.h1,
            self.gram_defect,
            self.density_min,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Fill every monitored field from the ensemble-state operations.
pub fn record(e: &Ensemble, t: f64) -> DiagnosticsRecord {
    record_with(e, t, true)
}

/// Like [`record`], but for uncoupled runs the field term is identically zero:
/// the free model carries no potential, so its energies are purely kinetic.
pub fn record_with(e: &Ensemble, t: f64, coupling: bool) -> DiagnosticsRecord {
    let grids = e.grid_values();
    let n = density_from_grids(e.weights(), &grids);
    let pe = if coupling {
        field_energy(e.basis(), &poisson_solve(e.basis(), &n))
    } else {
        0.0
    };
    DiagnosticsRecord {
        t,
        mass: sobolev_norm(e, SobolevOrder::Zero, NormKind::Homogeneous),
        energy_tm: kinetic_energy(e, KineticVariant::Tm) + pe,
        energy_half_p: kinetic_energy(e, KineticVariant::HalfP) + pe,
        potential_energy: pe,
        h12: sobolev_norm(e, SobolevOrder::Half, NormKind::Homogeneous),
        h1: sobolev_norm(e, SobolevOrder::One, NormKind::Homogeneous),
        gram_defect: gram_defect(e),
        density_min: n.min_real(),
    }
}

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("conservation report needs at least 2 records, got {0}")]
    TooFewRecords(usize),
    #[error("probe needs at least one trial")]
    NoTrials,
}

/// Outcome of one verification probe.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub name: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub violations: usize,
    /// Tightest observed ratio against the bound (probe-specific meaning).
    pub worst: f64,
    /// The analytic bound the ratio is held against, when one exists.
    pub bound: Option<f64>,
    pub notes: Vec<String>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: seed={} trials={} violations={} worst={:.6e}",
            self.name, self.seed, self.trials, self.violations, self.worst
        )?;
        if let Some(b) = self.bound {
            write!(f, " bound={b:.6e}")?;
        }
        for n in &self.notes {
            write!(f, " [{n}]")?;
        }
        write!(f, " {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Check the two-sided norm-equivalence bounds
/// `1 <= inhom/hom <= sqrt(1 + 1/c_p^s)` with `c_p` the smallest eigenvalue,
/// over seeded random families. Both bounds are attained only through the
/// per-mode inequality `mu >= c_p`, so any tampering with the eigenvalue table
/// shows up here.
pub fn verify_norm_equivalence(basis: &SpectralBasis, k: usize, seed: u64, trials: usize) -> ProbeReport {
    let cp = basis.poincare_constant();
    let bound_half = (1.0 + 1.0 / cp.sqrt()).sqrt();
    let bound_one = (1.0 + 1.0 / cp).sqrt();
    let weights = Weights::uniform(k).expect("k >= 1");
    let mut violations = 0;
    let mut worst = 1.0_f64;
    for trial in 0..trials {
        let family = random_family(basis, k, seed.wrapping_add(trial as u64), Damping::Algebraic(1.0));
        for (order, bound) in [(SobolevOrder::Half, bound_half), (SobolevOrder::One, bound_one)] {
            let hom = family_sobolev_norm(basis, &weights, &family, order, NormKind::Homogeneous);
            let inhom = family_sobolev_norm(basis, &weights, &family, order, NormKind::Inhomogeneous);
            if hom == 0.0 {
                continue;
            }
            let ratio = inhom / hom;
            worst = worst.max(ratio / bound);
            if ratio < 1.0 - ROUNDOFF_SLACK || ratio > bound * (1.0 + ROUNDOFF_SLACK) {
                violations += 1;
            }
        }
    }
    ProbeReport {
        name: "norm-equivalence",
        seed,
        trials,
        violations,
        worst,
        bound: Some(1.0),
        notes: vec![format!("c_p={cp:.6e}"), format!("bound_h12={bound_half:.12}"), format!("bound_h1={bound_one:.12}")],
    }
}

/// Check the kinetic domain bound
/// `|T_m Psi|^2 <= |Psi|_{H1}^2 + 2 m^2 |Psi|^2` on seeded random families;
/// per mode this is `(sqrt(mu + m^2) - m)^2 <= mu + 2 m^2`.
pub fn verify_kinetic_bound(basis: &SpectralBasis, m: f64, seed: u64, trials: usize) -> ProbeReport {
    let weights_cache: Vec<f64>;
    let eigs = basis.eigenvalues();
    let mut violations = 0;
    let mut worst = 0.0_f64;
    weights_cache = eigs.iter().map(|&mu| kinetic_symbol_raw(mu, m).powi(2)).collect();
    for trial in 0..trials {
        let family = random_family(basis, 2, seed.wrapping_add(trial as u64), Damping::Algebraic(0.5));
        for c in &family {
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for ((v, &sym2), &mu) in c.0.iter().zip(&weights_cache).zip(eigs) {
                let w = v.norm_sqr();
                lhs += sym2 * w;
                rhs += (mu + 2.0 * m * m) * w;
            }
            if rhs > 0.0 {
                worst = worst.max(lhs / rhs);
            }
            if lhs > rhs * (1.0 + ROUNDOFF_SLACK) {
                violations += 1;
            }
        }
    }
    ProbeReport {
        name: "kinetic-bound",
        seed,
        trials,
        violations,
        worst,
        bound: Some(1.0),
        notes: vec![format!("m={m}")],
    }
}

/// Structure probe for the nonlinearity `F_V[Psi] = -i V[Psi] Psi`.
#[derive(Debug, Clone)]
pub struct LipschitzReport {
    pub seed: u64,
    pub pairs: usize,
    /// Largest normalized quotient
    /// `|F(Psi)-F(Phi)| / ((|Psi|^2 + |Phi|^2) |Psi - Phi|)` in the
    /// inhomogeneous first-order norm.
    pub max_quotient: f64,
    /// Worst relative error of the exact `s^2` scaling of the raw quotient.
    pub scaling_error: f64,
    /// Worst relative error of the cubic homogeneity `F(s Psi) = s^3 F(Psi)`.
    pub homogeneity_error: f64,
}

impl fmt::Display for LipschitzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lipschitz-probe: seed={} pairs={} max_quotient={:.6e} scaling_err={:.3e} homogeneity_err={:.3e}",
            self.seed, self.pairs, self.max_quotient, self.scaling_error, self.homogeneity_error
        )
    }
}

fn apply_nonlinearity(basis: &SpectralBasis, weights: &Weights, family: &[SpectralCoeffs]) -> Vec<SpectralCoeffs> {
    let grids: Vec<GridField> = family
        .iter()
        .map(|c| basis.synthesize(c).expect("family matches basis"))
        .collect();
    let v = poisson_solve(basis, &density_from_grids(weights, &grids));
    nonlinearity_with(basis, &v, &grids)
}

fn family_diff(a: &[SpectralCoeffs], b: &[SpectralCoeffs]) -> Vec<SpectralCoeffs> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn rescale_family(basis: &SpectralBasis, weights: &Weights, family: &mut [SpectralCoeffs], target: f64) {
    let now = family_sobolev_norm(basis, weights, family, SobolevOrder::One, NormKind::Inhomogeneous);
    let s = Complex64::new(target / now, 0.0);
    for c in family.iter_mut() {
        c.scale(s);
    }
}

/// Sample pairs `(Psi, Phi)` with first-order norms in `[1/2, 2]`, track the
/// normalized Lipschitz quotient, and verify the exact homogeneity structure:
/// the raw quotient scales by `s^2` under `(Psi, Phi) -> (s Psi, s Phi)` and
/// the nonlinearity itself is cubic. No numeric value is asserted for the
/// Lipschitz constant itself.
pub fn probe_lipschitz(basis: &SpectralBasis, k: usize, seed: u64, pairs: usize) -> LipschitzReport {
    let weights = Weights::uniform(k).expect("k >= 1");
    let mut max_quotient = 0.0_f64;
    let mut scaling_error = 0.0_f64;
    let mut homogeneity_error = 0.0_f64;
    let h1 = |fam: &[SpectralCoeffs]| {
        family_sobolev_norm(basis, &weights, fam, SobolevOrder::One, NormKind::Inhomogeneous)
    };
    for pair in 0..pairs {
        let s0 = seed.wrapping_add((2 * pair) as u64);
        let s1 = seed.wrapping_add((2 * pair + 1) as u64);
        let mut psi = random_family(basis, k, s0, Damping::Algebraic(1.0));
        let mut phi = random_family(basis, k, s1, Damping::Algebraic(1.0));
        // spread targets deterministically over [1/2, 2]
        let t0 = 0.5 + 1.5 * ((pair as f64 * 0.618_033_988_749_895).fract());
        let t1 = 0.5 + 1.5 * ((pair as f64 * 0.414_213_562_373_095).fract());
        rescale_family(basis, &weights, &mut psi, t0);
        rescale_family(basis, &weights, &mut phi, t1);

        let f_psi = apply_nonlinearity(basis, &weights, &psi);
        let f_phi = apply_nonlinearity(basis, &weights, &phi);
        let num = h1(&family_diff(&f_psi, &f_phi));
        let den = (h1(&psi).powi(2) + h1(&phi).powi(2)) * h1(&family_diff(&psi, &phi));
        if den > 0.0 {
            max_quotient = max_quotient.max(num / den);
        }

        if pair < 2 {
            // raw-quotient scaling and cubic homogeneity, exact up to roundoff
            for s in [2.0, 10.0] {
                let psi_s: Vec<SpectralCoeffs> =
                    psi.iter().map(|c| c.scaled(Complex64::new(s, 0.0))).collect();
                let phi_s: Vec<SpectralCoeffs> =
                    phi.iter().map(|c| c.scaled(Complex64::new(s, 0.0))).collect();
                let f_psi_s = apply_nonlinearity(basis, &weights, &psi_s);
                let f_phi_s = apply_nonlinearity(basis, &weights, &phi_s);
                let raw = num / h1(&family_diff(&psi, &phi));
                let raw_s = h1(&family_diff(&f_psi_s, &f_phi_s)) / h1(&family_diff(&psi_s, &phi_s));
                scaling_error = scaling_error.max((raw_s / (s * s * raw) - 1.0).abs());

                let mut cubic = f_psi.clone();
                for c in &mut cubic {
                    c.scale(Complex64::new(s * s * s, 0.0));
                }
                let dev = h1(&family_diff(&f_psi_s, &cubic)) / h1(&cubic);
                homogeneity_error = homogeneity_error.max(dev);
            }
        }
    }
    LipschitzReport { seed, pairs, max_quotient, scaling_error, homogeneity_error }
}

/// Compare the fast transform path against literal double-loop summation:
/// synthesis against direct series evaluation, analysis against direct
/// quadrature projection, plus the exact roundtrip and Parseval identities.
pub fn verify_transforms(basis: &SpectralBasis, seed: u64, trials: usize) -> ProbeReport {
    let mut violations = 0;
    let mut worst = 0.0_f64;
    let dom = basis.dom();
    let sample_cap = 24.min(basis.grid_len());
    for trial in 0..trials {
        let family = random_family(basis, 1, seed.wrapping_add(trial as u64), Damping::Algebraic(0.5));
        let c = &family[0];
        let f = basis.synthesize(c).expect("length agrees");
        let scale = c.norm().max(1e-30);

        // synthesis vs direct series evaluation at a spread of points
        for s in 0..sample_cap {
            let flat = (s * basis.grid_len()) / sample_cap;
            let x = basis.grid_point(flat);
            let direct = oracles::eval_series(dom, &c.0, &x);
            let err = (f.values()[flat] - direct).norm() / scale;
            worst = worst.max(err);
            if err > 1e-12 {
                violations += 1;
            }
        }

        // roundtrip and Parseval
        let back = basis.analyze(&f).expect("length agrees");
        let rt = back.sub(c).norm() / scale;
        worst = worst.max(rt);
        if rt > 1e-12 {
            violations += 1;
        }
        let parseval = (c.norm_sqr() - basis.grid_norm_sqr(&f)).abs() / scale.powi(2);
        worst = worst.max(parseval);
        if parseval > 1e-12 {
            violations += 1;
        }

        // analysis vs direct quadrature projection on a spread of modes
        for s in 0..sample_cap {
            let flat = (s * basis.mode_len()) / sample_cap;
            let direct = oracles::project_mode(dom, f.values(), flat);
            let err = (back.0[flat] - direct).norm() / scale;
            worst = worst.max(err);
            if err > 1e-12 {
                violations += 1;
            }
        }
    }
    ProbeReport {
        name: "transform-oracle",
        seed,
        trials,
        violations,
        worst,
        bound: Some(1e-12),
        notes: vec![],
    }
}

/// Result of the spectral-vs-finite-difference ladder for the Poisson solve.
#[derive(Debug, Clone)]
pub struct PoissonFdReport {
    pub intervals: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
    /// Spectral residual `|mu Vhat - nhat| / |nhat|`, worst over the ladder.
    pub residual: f64,
    /// Most negative potential value seen for a nonnegative density.
    pub min_potential: f64,
}

impl PoissonFdReport {
    /// The finite-difference solution must converge to the spectral one at
    /// second order, the spectral residual must sit at roundoff, and the
    /// potential must stay nonnegative up to truncation undershoot.
    pub fn passed(&self) -> bool {
        self.orders.iter().all(|&p| p >= 1.9) && self.residual <= 1e-10 && self.min_potential >= -1e-10
    }
}

impl fmt::Display for PoissonFdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "poisson-fd-oracle: M={:?} errors={:?} orders={:?} residual={:.3e} min_V={:.3e} {}",
            self.intervals,
            self.errors,
            self.orders,
            self.residual,
            self.min_potential,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Solve `-V'' = n` spectrally and with the tridiagonal second-order stencil on
/// one-dimensional grids `M in intervals`, for a fixed band-limited density; the
/// finite-difference error against the spectral solution must shrink at order 2.
pub fn verify_poisson_fd(length: f64, intervals: &[usize], seed: u64) -> PoissonFdReport {
    use crate::domain::DomainSpec;
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n_modes = 8;
    let amps: Vec<f64> = (0..n_modes).map(|_| rng.gen_range(-1.0..1.0)).collect();

    let mut errors = Vec::new();
    let mut residual = 0.0_f64;
    let mut min_potential = f64::INFINITY;
    for &m in intervals {
        let dom = DomainSpec::new(vec![length], vec![m / 2], 2).expect("even interval counts");
        let basis = SpectralBasis::new(dom);
        // band-limited density, sampled exactly on this grid
        let vals: Vec<f64> = (1..m)
            .map(|j| {
                let x = j as f64 / m as f64;
                let mut acc = 1.5; // lift to keep the density nonnegative
                for (i, &a) in amps.iter().enumerate() {
                    acc += a * (2.0 / length).sqrt() * ((i + 1) as f64 * std::f64::consts::PI * x).sin();
                }
                acc * (std::f64::consts::PI * x).sin().powi(2)
            })
            .collect();
        let n = GridField::real(vals.clone());
        let v = poisson_solve(&basis, &n);
        min_potential = min_potential.min(v.grid().min_real());

        let nhat = basis.analyze(&n).expect("length agrees");
        let mut res = 0.0;
        let mut nrm = 0.0;
        for ((vc, nc), &mu) in v.coeffs().0.iter().zip(&nhat.0).zip(basis.eigenvalues()) {
            res += (mu * vc - nc).norm_sqr();
            nrm += nc.norm_sqr();
        }
        residual = residual.max((res / nrm).sqrt());

        let fd = oracles::fd_poisson_1d(&vals, length);
        let h = length / m as f64;
        let mut err = 0.0;
        let mut scale = 0.0;
        for (a, b) in fd.iter().zip(v.grid().values()) {
            err += h * (a - b.re).powi(2);
            scale += h * b.re.powi(2);
        }
        errors.push((err / scale).sqrt());
    }
    let orders = errors
        .windows(2)
        .zip(intervals.windows(2))
        .map(|(e, m)| (e[0] / e[1]).log2() / (m[1] as f64 / m[0] as f64).log2())
        .collect();
    PoissonFdReport { intervals: intervals.to_vec(), errors, orders, residual, min_potential }
}

/// Per-quantity drift summary over a run.
#[derive(Debug, Clone)]
pub struct ConservationSummary {
    pub initial: DiagnosticsRecord,
    pub mass_drift: f64,
    pub energy_tm_drift: f64,
    pub energy_half_p_drift: f64,
    pub max_gram_defect: f64,
    pub min_density: f64,
    /// Which kinetic variant drifts less over this run.
    pub conserved_variant: KineticVariant,
    /// Least-squares slope of `ln h1` against `t`.
    pub gronwall_slope: f64,
    /// Smallest slope of a linear upper envelope of `ln h1` through the start.
    pub gronwall_envelope: f64,
}

impl fmt::Display for ConservationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mass drift           {:.6e}", self.mass_drift)?;
        writeln!(f, "energy_Tm drift      {:.6e}", self.energy_tm_drift)?;
        writeln!(f, "energy_half_p drift  {:.6e}", self.energy_half_p_drift)?;
        writeln!(f, "max gram defect      {:.6e}", self.max_gram_defect)?;
        writeln!(f, "min density          {:.6e}", self.min_density)?;
        writeln!(
            f,
            "conserved variant    {}",
            match self.conserved_variant {
                KineticVariant::Tm => "energy_Tm",
                KineticVariant::HalfP => "energy_half_p",
            }
        )?;
        writeln!(f, "gronwall slope       {:.6e}", self.gronwall_slope)?;
        write!(f, "gronwall envelope    {:.6e}", self.gronwall_envelope)
    }
}

fn rel_drift(values: impl Iterator<Item = f64>, base: f64) -> f64 {
    let dev = values.map(|v| (v - base).abs()).fold(0.0, f64::max);
    if dev == 0.0 {
        0.0
    } else {
        dev / base.abs()
    }
}

/// Max relative drift of each conserved quantity from the first record, which
/// energy variant drifts less, and the growth envelope of the first-order norm.
pub fn conservation_report(records: &[DiagnosticsRecord]) -> Result<ConservationSummary, DiagnosticsError> {
    if records.len() < 2 {
        return Err(DiagnosticsError::TooFewRecords(records.len()));
    }
    let first = &records[0];
    let mass_drift = rel_drift(records.iter().map(|r| r.mass), first.mass);
    let energy_tm_drift = rel_drift(records.iter().map(|r| r.energy_tm), first.energy_tm);
    let energy_half_p_drift = rel_drift(records.iter().map(|r| r.energy_half_p), first.energy_half_p);
    let max_gram_defect = records.iter().map(|r| r.gram_defect).fold(0.0, f64::max);
    let min_density = records.iter().map(|r| r.density_min).fold(f64::INFINITY, f64::min);
    let conserved_variant = if energy_tm_drift <= energy_half_p_drift {
        KineticVariant::Tm
    } else {
        KineticVariant::HalfP
    };

    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.h1 > 0.0)
        .map(|r| (r.t, r.h1.ln()))
        .collect();
    let gronwall_slope = if pts.len() >= 2 {
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        oracles::fit_slope(&xs, &ys)
    } else {
        0.0
    };
    let base = pts.first().map(|p| p.1).unwrap_or(0.0);
    let gronwall_envelope = pts
        .iter()
        .skip(1)
        .filter(|p| p.0 > 0.0)
        .map(|p| (p.1 - base) / p.0)
        .fold(0.0, f64::max);

    Ok(ConservationSummary {
        initial: first.clone(),
        mass_drift,
        energy_tm_drift,
        energy_half_p_drift,
        max_gram_defect,
        min_density,
        conserved_variant,
        gronwall_slope,
        gronwall_envelope,
    })
}

/// Independent reference computations: literal summation, direct quadrature,
/// and the second-order finite-difference solve. Nothing here touches the
/// precomputed tables of `SpectralBasis`.
pub mod oracles {
    use num_complex::Complex64;
    use std::f64::consts::PI;

    use crate::domain::{DomainSpec, ModeIndex};

    /// Evaluate `sum_n c[n] e_n(x)` by direct summation over every mode.
    pub fn eval_series(dom: &DomainSpec, c: &[Complex64], x: &[f64]) -> Complex64 {
        let bandwidth = dom.bandwidth();
        let norm: f64 = dom.lengths().iter().map(|&l| (2.0 / l).sqrt()).product();
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, coeff) in c.iter().enumerate() {
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let idx = ModeIndex::from_flat(flat, &bandwidth);
            let mut e = norm;
            for ((&n, &xi), &l) in idx.0.iter().zip(x).zip(dom.lengths()) {
                e *= (n as f64 * PI * xi / l).sin();
            }
            acc += coeff * e;
        }
        acc
    }

    /// Direct quadrature projection of grid samples onto one mode:
    /// `w * sum_j f(x_j) e_n(x_j)` with the trapezoid weight `w = prod L_i / M_i`
    /// (boundary terms vanish under Dirichlet data).
    pub fn project_mode(dom: &DomainSpec, f: &[Complex64], mode_flat: usize) -> Complex64 {
        let bandwidth = dom.bandwidth();
        let intervals = dom.grid_intervals();
        let mode = ModeIndex::from_flat(mode_flat, &bandwidth);
        let norm: f64 = dom.lengths().iter().map(|&l| (2.0 / l).sqrt()).product();
        let w: f64 = dom
            .lengths()
            .iter()
            .zip(&intervals)
            .map(|(&l, &m)| l / m as f64)
            .product();
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, v) in f.iter().enumerate() {
            let j = ModeIndex::from_flat(flat, &bandwidth);
            let mut e = norm;
            for ((&ji, &ni), &m) in j.0.iter().zip(&mode.0).zip(&intervals) {
                e *= (ni as f64 * ji as f64 * PI / m as f64).sin();
            }
            acc += v * e;
        }
        acc * w
    }

    /// Tridiagonal second-order solve of `-V'' = n`, `V(0) = V(L) = 0`, on the
    /// interior points of a uniform grid with `n.len() + 1` intervals.
    pub fn fd_poisson_1d(n: &[f64], length: f64) -> Vec<f64> {
        let pts = n.len();
        let h = length / (pts + 1) as f64;
        let h2 = h * h;
        // Thomas sweep with constant stencil (2, -1)
        let mut c_prime = vec![0.0; pts];
        let mut d_prime = vec![0.0; pts];
        c_prime[0] = -1.0 / 2.0;
        d_prime[0] = n[0] * h2 / 2.0;
        for i in 1..pts {
            let denom = 2.0 - (-1.0) * c_prime[i - 1];
            c_prime[i] = -1.0 / denom;
            d_prime[i] = (n[i] * h2 + d_prime[i - 1]) / denom;
        }
        let mut v = vec![0.0; pts];
        v[pts - 1] = d_prime[pts - 1];
        for i in (0..pts - 1).rev() {
            v[i] = d_prime[i] - c_prime[i] * v[i + 1];
        }
        v
    }

    /// Least-squares slope of `y` against `x`.
    pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut den = 0.0;
        for (&xi, &yi) in x.iter().zip(y) {
            num += (xi - mx) * (yi - my);
            den += (xi - mx) * (xi - mx);
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }
}
