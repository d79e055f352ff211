//! Shared fixtures for the benchmark targets.

use std::sync::Arc;

use srsp_core::{Damping, DomainSpec, Ensemble, SpectralBasis, Weights};

/// Seeded coupled ensemble on the unit box.
pub fn fixture(d: usize, n: usize, k: usize) -> Ensemble {
    let basis = Arc::new(SpectralBasis::new(DomainSpec::unit(d, n, 2).unwrap()));
    Ensemble::seeded(basis, Weights::uniform(k).unwrap(), 1.0, 1234, Damping::Algebraic(1.0)).unwrap()
}
