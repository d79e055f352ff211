//! The truncated mixed state `(Psi, lambda)`: density, mean-field potential,
//! the nonlinearity, and every norm and energy functional defined on it.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::basis::{kinetic_symbol_raw, mode_inner_product, pointwise_product, SpectralBasis, SpectralCoeffs};
use crate::domain::{DomainSpec, ModeIndex};
use crate::error::EnsembleError;
use crate::field::GridField;

/// Occupation weights, strictly positive and normalized to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    /// Normalize a raw positive weight list; any entry `<= 0` (or non-finite)
    /// is rejected so the weighted norms stay genuine norms.
    pub fn new(raw: Vec<f64>) -> Result<Self, EnsembleError> {
        if raw.is_empty() {
            return Err(EnsembleError::EmptyWeights);
        }
        for (index, &value) in raw.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(EnsembleError::NonPositiveWeight { index, value });
            }
        }
        let total: f64 = raw.iter().sum();
        Ok(Weights(raw.into_iter().map(|w| w / total).collect()))
    }

    /// Accept an already-normalized list without renormalizing, so stored
    /// states roundtrip bit-exactly.
    pub fn from_normalized(raw: Vec<f64>) -> Result<Self, EnsembleError> {
        if raw.is_empty() {
            return Err(EnsembleError::EmptyWeights);
        }
        for (index, &value) in raw.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(EnsembleError::NonPositiveWeight { index, value });
            }
        }
        let total: f64 = raw.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(EnsembleError::NotNormalized { total });
        }
        Ok(Weights(raw))
    }

    pub fn uniform(k: usize) -> Result<Self, EnsembleError> {
        Self::new(vec![1.0; k])
    }

    /// `lambda_k` proportional to `r^k`, `k = 1..=K`.
    pub fn geometric(k: usize, r: f64) -> Result<Self, EnsembleError> {
        Self::new((1..=k).map(|i| r.powi(i as i32)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Shape of the initial-data damping applied per mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping {
    /// `(1 + mu_n)^(-gamma)`; `gamma = 1` is the default profile.
    Algebraic(f64),
    /// `exp(-alpha * max_i n_i / N_i)`; decays faster than any power of the
    /// mode number, used for spectral-tail studies.
    Exponential(f64),
}

/// The truncated state `(Psi, lambda)`: `K` coefficient vectors over the working
/// band, their weights, and the particle mass entering the kinetic symbol.
#[derive(Debug, Clone)]
pub struct Ensemble {
    basis: Arc<SpectralBasis>,
    weights: Weights,
    mass: f64,
    psi: Vec<SpectralCoeffs>,
}

impl Ensemble {
    pub fn new(
        basis: Arc<SpectralBasis>,
        weights: Weights,
        mass: f64,
        psi: Vec<SpectralCoeffs>,
    ) -> Result<Self, EnsembleError> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(EnsembleError::InvalidMass(mass));
        }
        if weights.len() != psi.len() {
            return Err(EnsembleError::CountMismatch { weights: weights.len(), psi: psi.len() });
        }
        for (k, c) in psi.iter().enumerate() {
            if c.len() != basis.mode_len() {
                return Err(EnsembleError::CoefficientLength {
                    k,
                    expected: basis.mode_len(),
                    got: c.len(),
                });
            }
        }
        Ok(Ensemble { basis, weights, mass, psi })
    }

    /// Seeded initial data: complex Gaussian coefficients on the cutoff block
    /// `1..=N_i`, damped per mode, then orthonormalized by modified Gram-Schmidt
    /// in mode space.
    pub fn seeded(
        basis: Arc<SpectralBasis>,
        weights: Weights,
        mass: f64,
        seed: u64,
        damping: Damping,
    ) -> Result<Self, EnsembleError> {
        let k = weights.len();
        let mut psi = random_family(&basis, k, seed, damping);
        mgs_orthonormalize(&mut psi)?;
        Ensemble::new(basis, weights, mass, psi)
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn psi(&self) -> &[SpectralCoeffs] {
        &self.psi
    }

    pub fn psi_mut(&mut self) -> &mut [SpectralCoeffs] {
        &mut self.psi
    }

    pub fn count(&self) -> usize {
        self.psi.len()
    }

    /// Same weights and mass, new coefficient vectors.
    pub fn with_psi(&self, psi: Vec<SpectralCoeffs>) -> Ensemble {
        debug_assert_eq!(psi.len(), self.count());
        Ensemble { basis: self.basis.clone(), weights: self.weights.clone(), mass: self.mass, psi }
    }

    /// Every wavefunction scaled by `s` (used by homogeneity probes).
    pub fn scaled(&self, s: f64) -> Ensemble {
        let s = Complex64::new(s, 0.0);
        self.with_psi(self.psi.iter().map(|c| c.scaled(s)).collect())
    }

    /// Grid values of every wavefunction, synthesized once.
    pub fn grid_values(&self) -> Vec<GridField> {
        self.psi
            .iter()
            .map(|c| self.basis.synthesize(c).expect("ensemble coefficients match basis"))
            .collect()
    }
}

/// Random damped coefficient family on the cutoff block (not orthonormalized).
pub fn random_family(basis: &SpectralBasis, k: usize, seed: u64, damping: Damping) -> Vec<SpectralCoeffs> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = basis.dom();
    let bandwidth = basis.bandwidth().to_vec();
    let cutoffs = dom.cutoffs();
    let normal = StandardNormal;
    (0..k)
        .map(|_| {
            let mut c = SpectralCoeffs::zeros(basis.mode_len());
            for block in 0..dom.cutoff_len() {
                let idx = ModeIndex::from_flat(block, cutoffs);
                let flat = idx.to_flat(&bandwidth).expect("cutoff block lies inside the working band");
                let re: f64 = normal.sample(&mut rng);
                let im: f64 = normal.sample(&mut rng);
                let damp = match damping {
                    Damping::Algebraic(gamma) => (1.0 + basis.eigenvalues()[flat]).powf(-gamma),
                    Damping::Exponential(alpha) => {
                        let rel = idx
                            .0
                            .iter()
                            .zip(cutoffs)
                            .map(|(&n, &nc)| n as f64 / nc as f64)
                            .fold(0.0_f64, f64::max);
                        (-alpha * rel).exp()
                    }
                };
                c.0[flat] = Complex64::new(re, im) * damp;
            }
            c
        })
        .collect()
}

/// Modified Gram-Schmidt in mode space (the mode-space dot IS the `L^2` inner
/// product, so this orthonormalizes in `L^2(Omega)`).
pub fn mgs_orthonormalize(psi: &mut [SpectralCoeffs]) -> Result<(), EnsembleError> {
    if psi.is_empty() {
        return Ok(());
    }
    let modes = psi[0].len();
    if psi.len() > modes {
        return Err(EnsembleError::TooManyVectors { k: psi.len(), modes });
    }
    for k in 0..psi.len() {
        for l in 0..k {
            let proj = mode_inner_product(&psi[l], &psi[k]).expect("lengths agree");
            let prev = psi[l].clone();
            psi[k].axpy(-proj, &prev);
        }
        let norm = psi[k].norm();
        if norm < 1e-12 {
            return Err(EnsembleError::DependentVectors { k });
        }
        psi[k].scale(Complex64::new(1.0 / norm, 0.0));
    }
    Ok(())
}

/// Density `n(x_j) = sum_k lambda_k |psi_k(x_j)|^2`; real and nonnegative.
pub fn density(e: &Ensemble) -> GridField {
    density_from_grids(e.weights(), &e.grid_values())
}

pub(crate) fn density_from_grids(weights: &Weights, grids: &[GridField]) -> GridField {
    let len = grids.first().map_or(0, GridField::len);
    let mut n = vec![0.0; len];
    for (&lambda, g) in weights.as_slice().iter().zip(grids) {
        for (acc, v) in n.iter_mut().zip(g.values()) {
            *acc += lambda * v.norm_sqr();
        }
    }
    GridField::real(n)
}

/// The mean-field potential: grid values plus the sine-band coefficients it was
/// solved in. Zero boundary values are built into the expansion.
#[derive(Debug, Clone)]
pub struct PotentialField {
    dom: DomainSpec,
    grid: GridField,
    coeffs: SpectralCoeffs,
}

impl PotentialField {
    pub fn dom(&self) -> &DomainSpec {
        &self.dom
    }

    pub fn grid(&self) -> &GridField {
        &self.grid
    }

    pub fn coeffs(&self) -> &SpectralCoeffs {
        &self.coeffs
    }

    /// `|nabla V|^2 = sum_n mu_n |Vhat[n]|^2` (exact by parts under Dirichlet data).
    pub fn gradient_norm_sqr(&self, basis: &SpectralBasis) -> f64 {
        self.coeffs
            .0
            .iter()
            .zip(basis.eigenvalues())
            .map(|(v, &mu)| mu * v.norm_sqr())
            .sum()
    }
}

/// Solve `-Delta V = n` with zero boundary values by dividing each sine
/// coefficient by its eigenvalue. All modes up to the grid band are retained,
/// so `V` is not artificially smoothed before it multiplies the wavefunctions.
pub fn poisson_solve(basis: &SpectralBasis, n: &GridField) -> PotentialField {
    assert_eq!(n.len(), basis.grid_len(), "density lives on the basis grid");
    let nhat = basis.analyze(n).expect("length checked");
    let coeffs = basis
        .apply_multiplier(&nhat, |mu| 1.0 / mu)
        .expect("no zero eigenvalue in the Dirichlet basis");
    let mut grid = basis.synthesize(&coeffs).expect("length preserved");
    // the data were real, so scrub the roundoff-level imaginary parts
    let re: Vec<f64> = grid.values().iter().map(|v| v.re).collect();
    grid = GridField::real(re);
    PotentialField { dom: basis.dom().clone(), grid, coeffs }
}

/// The potential part of the right side, `F_V[Psi] = -i V[Psi] Psi`, one
/// coefficient vector per wavefunction. Grid multiplication followed by
/// projection onto the working band.
pub fn nonlinearity(e: &Ensemble) -> Vec<SpectralCoeffs> {
    let grids = e.grid_values();
    let v = poisson_solve(e.basis(), &density_from_grids(e.weights(), &grids));
    nonlinearity_with(e.basis(), &v, &grids)
}

pub(crate) fn nonlinearity_with(
    basis: &SpectralBasis,
    v: &PotentialField,
    grids: &[GridField],
) -> Vec<SpectralCoeffs> {
    let minus_i = Complex64::new(0.0, -1.0);
    grids
        .iter()
        .map(|g| {
            let prod = pointwise_product(v.grid(), g);
            let mut c = basis.analyze(&prod).expect("grid sizes agree");
            c.scale(minus_i);
            c
        })
        .collect()
}

/// Kinetic part of the right side, `-i T_m psi_k` per wavefunction.
pub fn kinetic_rhs(e: &Ensemble) -> Vec<SpectralCoeffs> {
    let m = e.mass();
    let minus_i = Complex64::new(0.0, -1.0);
    e.psi()
        .iter()
        .map(|c| {
            let mut out = e
                .basis()
                .apply_multiplier(c, |mu| kinetic_symbol_raw(mu, m))
                .expect("kinetic symbol is finite");
            out.scale(minus_i);
            out
        })
        .collect()
}

/// Full right side `-i (T_m psi_k + V[Psi] psi_k)` per wavefunction.
pub fn hartree_rhs(e: &Ensemble) -> Vec<SpectralCoeffs> {
    let mut out = kinetic_rhs(e);
    for (acc, pot) in out.iter_mut().zip(nonlinearity(e)) {
        acc.axpy(Complex64::new(1.0, 0.0), &pot);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevOrder {
    Zero,
    Half,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Homogeneous,
    Inhomogeneous,
}

/// Weighted Sobolev norm of the family: per mode `mu^s |c|^2` (homogeneous) or
/// `(1 + mu^s) |c|^2` (inhomogeneous), summed with the occupation weights. Both
/// kinds coincide at `s = 0` with the plain weighted `L^2` norm.
pub fn sobolev_norm(e: &Ensemble, order: SobolevOrder, kind: NormKind) -> f64 {
    family_sobolev_norm(e.basis(), e.weights(), e.psi(), order, kind)
}

pub fn family_sobolev_norm(
    basis: &SpectralBasis,
    weights: &Weights,
    psi: &[SpectralCoeffs],
    order: SobolevOrder,
    kind: NormKind,
) -> f64 {
    let eigs = basis.eigenvalues();
    let mut total = 0.0;
    for (&lambda, c) in weights.as_slice().iter().zip(psi) {
        let mut s = 0.0;
        for (v, &mu) in c.0.iter().zip(eigs) {
            let pow = match order {
                SobolevOrder::Zero => 1.0,
                SobolevOrder::Half => mu.sqrt(),
                SobolevOrder::One => mu,
            };
            let factor = match (order, kind) {
                (SobolevOrder::Zero, _) => 1.0,
                (_, NormKind::Homogeneous) => pow,
                (_, NormKind::Inhomogeneous) => 1.0 + pow,
            };
            s += factor * v.norm_sqr();
        }
        total += lambda * s;
    }
    total.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticVariant {
    /// Massive symbol `sqrt(mu + m^2) - m` per mode.
    Tm,
    /// Massless symbol `sqrt(mu)` per mode (the half-power homogeneous norm).
    HalfP,
}

/// Kinetic part of the energy, `sum_k lambda_k sum_n g(mu_n) |c_k[n]|^2`.
pub fn kinetic_energy(e: &Ensemble, variant: KineticVariant) -> f64 {
    let m = e.mass();
    let eigs = e.basis().eigenvalues();
    e.weights()
        .as_slice()
        .iter()
        .zip(e.psi())
        .map(|(&lambda, c)| {
            lambda
                * c.0
                    .iter()
                    .zip(eigs)
                    .map(|(v, &mu)| {
                        let g = match variant {
                            KineticVariant::Tm => kinetic_symbol_raw(mu, m),
                            KineticVariant::HalfP => mu.sqrt(),
                        };
                        g * v.norm_sqr()
                    })
                    .sum::<f64>()
        })
        .sum()
}

/// Field energy `1/2 |nabla V|^2` of a solved potential.
pub fn field_energy(basis: &SpectralBasis, v: &PotentialField) -> f64 {
    0.5 * v.gradient_norm_sqr(basis)
}

/// Field energy of the ensemble's own potential.
pub fn potential_energy(e: &Ensemble) -> f64 {
    field_energy(e.basis(), &poisson_solve(e.basis(), &density(e)))
}

/// Total energy: kinetic part of the chosen variant plus `1/2 |nabla V|^2`.
pub fn energy(e: &Ensemble, variant: KineticVariant) -> f64 {
    kinetic_energy(e, variant) + potential_energy(e)
}

/// `K x K` Gram matrix `G_{kl} = (psi_k, psi_l)`, row-major.
pub fn gram_matrix(e: &Ensemble) -> Vec<Complex64> {
    let k = e.count();
    let mut g = vec![Complex64::new(0.0, 0.0); k * k];
    for a in 0..k {
        for b in a..k {
            let v = mode_inner_product(&e.psi()[a], &e.psi()[b]).expect("lengths agree");
            g[a * k + b] = v;
            g[b * k + a] = v.conj();
        }
    }
    g
}

/// Largest entrywise deviation of the Gram matrix from the identity.
pub fn gram_defect(e: &Ensemble) -> f64 {
    let k = e.count();
    gram_matrix(e)
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let target = if i / k == i % k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            (v - target).norm()
        })
        .fold(0.0, f64::max)
}

/// One kernel value `rho(x, y) = sum_k lambda_k psi_k(x) conj(psi_k(y))` at a
/// pair of collocation points; off-grid coordinates are rejected.
pub fn density_matrix_element(e: &Ensemble, x: &[f64], y: &[f64]) -> Result<Complex64, EnsembleError> {
    let ix = e.basis().grid_index_of(x)?;
    let iy = e.basis().grid_index_of(y)?;
    let grids = e.grid_values();
    let mut rho = Complex64::new(0.0, 0.0);
    for (&lambda, g) in e.weights().as_slice().iter().zip(&grids) {
        rho += lambda * g.values()[ix] * g.values()[iy].conj();
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn basis_1d(n: usize) -> Arc<SpectralBasis> {
        Arc::new(SpectralBasis::new(DomainSpec::unit(1, n, 2).unwrap()))
    }

    fn single_mode_ensemble(basis: &Arc<SpectralBasis>, flat: usize) -> Ensemble {
        let mut c = SpectralCoeffs::zeros(basis.mode_len());
        c.0[flat] = Complex64::new(1.0, 0.0);
        Ensemble::new(basis.clone(), Weights::uniform(1).unwrap(), 1.0, vec![c]).unwrap()
    }

    #[test]
    fn weights_normalize_and_reject() {
        let w = Weights::new(vec![2.0, 1.0, 1.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.5, 0.25, 0.25]);
        assert!(Weights::new(vec![1.0, 0.0]).is_err());
        assert!(Weights::new(vec![1.0, -0.5]).is_err());
        assert!(Weights::new(vec![]).is_err());
        let g = Weights::geometric(2, 0.5).unwrap();
        assert!((g.as_slice()[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        let b = basis_1d(4);
        let w = Weights::uniform(2).unwrap();
        let ok = vec![SpectralCoeffs::zeros(b.mode_len()); 2];
        assert!(Ensemble::new(b.clone(), w.clone(), 1.0, ok.clone()).is_ok());
        assert!(Ensemble::new(b.clone(), w.clone(), 0.0, ok.clone()).is_err());
        assert!(Ensemble::new(b.clone(), w.clone(), 1.0, vec![SpectralCoeffs::zeros(3); 2]).is_err());
        assert!(Ensemble::new(b, w, 1.0, ok[..1].to_vec()).is_err());
    }

    #[test]
    fn density_of_single_mode() {
        let b = basis_1d(4);
        let e = single_mode_ensemble(&b, 0);
        let n = density(&e);
        for (j, v) in n.values().iter().enumerate() {
            let x = (j + 1) as f64 / 8.0;
            let want = 2.0 * (PI * x).sin().powi(2);
            assert!((v.re - want).abs() < 1e-13);
        }
        let total = b.quadrature(&n).re;
        assert!((total - 1.0).abs() < 1e-13);
        assert!(n.min_real() >= 0.0);
    }

    #[test]
    fn density_integral_two_modes() {
        let b = basis_1d(4);
        let mut c0 = SpectralCoeffs::zeros(b.mode_len());
        c0.0[0] = Complex64::new(1.0, 0.0);
        let mut c1 = SpectralCoeffs::zeros(b.mode_len());
        c1.0[1] = Complex64::new(1.0, 0.0);
        let e = Ensemble::new(b.clone(), Weights::new(vec![0.5, 0.5]).unwrap(), 1.0, vec![c0, c1]).unwrap();
        assert!((b.quadrature(&density(&e)).re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn poisson_single_mode_divides_by_eigenvalue() {
        let b = basis_1d(4);
        let e = single_mode_ensemble(&b, 0);
        let psi = &e.grid_values()[0];
        // n = sqrt(2) sin(pi x): feed the eigenfunction itself as a density
        let n = GridField::real(psi.values().iter().map(|v| v.re).collect());
        let v = poisson_solve(&b, &n);
        assert!((v.coeffs().0[0].re - 1.0 / (PI * PI)).abs() < 1e-14);
        for (j, val) in v.grid().values().iter().enumerate() {
            let x = (j + 1) as f64 / 8.0;
            let want = 2.0_f64.sqrt() * (PI * x).sin() / (PI * PI);
            assert!((val.re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn poisson_zero_density() {
        let b = basis_1d(4);
        let v = poisson_solve(&b, &GridField::real(vec![0.0; b.grid_len()]));
        assert!(v.grid().values().iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn sobolev_norm_closed_forms() {
        let b = basis_1d(4);
        let e = single_mode_ensemble(&b, 0);
        assert!((sobolev_norm(&e, SobolevOrder::Zero, NormKind::Homogeneous) - 1.0).abs() < 1e-14);
        assert!((sobolev_norm(&e, SobolevOrder::One, NormKind::Homogeneous) - PI).abs() < 1e-13);
        let hom = sobolev_norm(&e, SobolevOrder::Half, NormKind::Homogeneous);
        let inh = sobolev_norm(&e, SobolevOrder::Half, NormKind::Inhomogeneous);
        assert!((inh / hom - (1.0 + 1.0 / PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn kinetic_energy_single_mode() {
        let b = basis_1d(4);
        let e = single_mode_ensemble(&b, 0);
        let want = (PI * PI + 1.0).sqrt() - 1.0;
        assert!((kinetic_energy(&e, KineticVariant::Tm) - want).abs() < 1e-13);
        assert!((kinetic_energy(&e, KineticVariant::HalfP) - PI).abs() < 1e-13);
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let b = basis_1d(4);
        let e = Ensemble::new(
            b,
            Weights::uniform(1).unwrap(),
            1.0,
            vec![SpectralCoeffs::zeros(7)],
        )
        .unwrap();
        assert_eq!(energy(&e, KineticVariant::Tm), 0.0);
        assert_eq!(energy(&e, KineticVariant::HalfP), 0.0);
    }

    #[test]
    fn seeded_ensembles_are_orthonormal_and_reproducible() {
        let b = basis_1d(8);
        let w = Weights::geometric(4, 0.5).unwrap();
        let e1 = Ensemble::seeded(b.clone(), w.clone(), 1.0, 7, Damping::Algebraic(1.0)).unwrap();
        let e2 = Ensemble::seeded(b, w, 1.0, 7, Damping::Algebraic(1.0)).unwrap();
        assert!(gram_defect(&e1) < 1e-12);
        for (a, c) in e1.psi().iter().zip(e2.psi()) {
            assert_eq!(a, c);
        }
    }

    #[test]
    fn gram_identity_fresh() {
        let b = basis_1d(8);
        let e = Ensemble::seeded(
            b,
            Weights::uniform(3).unwrap(),
            1.0,
            11,
            Damping::Algebraic(1.0),
        )
        .unwrap();
        let g = gram_matrix(&e);
        for a in 0..3 {
            for c in 0..3 {
                let want = if a == c { 1.0 } else { 0.0 };
                assert!((g[a * 3 + c] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn density_matrix_kernel_properties() {
        let b = basis_1d(4);
        let e = Ensemble::seeded(
            b.clone(),
            Weights::new(vec![2.0, 1.0]).unwrap(),
            1.0,
            3,
            Damping::Algebraic(1.0),
        )
        .unwrap();
        let x = b.grid_point(2);
        let y = b.grid_point(5);
        let rho_xy = density_matrix_element(&e, &x, &y).unwrap();
        let rho_yx = density_matrix_element(&e, &y, &x).unwrap();
        assert!((rho_xy - rho_yx.conj()).norm() < 1e-13);
        let diag = density_matrix_element(&e, &x, &x).unwrap();
        assert!(diag.im.abs() < 1e-14);
        assert!((diag.re - density(&e).values()[2].re).abs() < 1e-13);
        assert!(density_matrix_element(&e, &[0.131], &x).is_err());
    }

    #[test]
    fn too_many_vectors_rejected() {
        // one-mode basis cannot hold two orthonormal vectors
        let mut psi = vec![SpectralCoeffs::zeros(1); 2];
        psi[0].0[0] = Complex64::new(1.0, 0.0);
        psi[1].0[0] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            mgs_orthonormalize(&mut psi),
            Err(EnsembleError::TooManyVectors { .. })
        ));
    }
}
