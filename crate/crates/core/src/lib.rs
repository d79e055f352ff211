//! Pseudo-spectral propagation of mixed-state wavefunction ensembles under a
//! semi-relativistic mean-field coupling, on a box with Dirichlet walls.
//!
//! The state is a weighted family `(psi_k, lambda_k)` of wavefunctions expanded
//! in the sine eigenbasis of the Dirichlet Laplacian. The kinetic operator
//! `sqrt(-Delta + m^2) - m` acts diagonally there; the coupling feeds the
//! ensemble density through a Poisson solve back into each wavefunction. Time
//! stepping is operator splitting built from two exactly unitary sub-flows.

pub mod basis;
pub mod diagnostics;
pub mod domain;
pub mod ensemble;
pub mod error;
pub mod field;
pub mod integrator;

pub use basis::{kinetic_symbol, mode_inner_product, SpectralBasis, SpectralCoeffs};
pub use diagnostics::{
    conservation_report, probe_lipschitz, record, record_with, verify_kinetic_bound,
    verify_norm_equivalence, verify_poisson_fd, verify_transforms, ConservationSummary,
    DiagnosticsRecord, LipschitzReport, PoissonFdReport, ProbeReport,
};
pub use domain::{DomainSpec, ModeIndex};
pub use ensemble::{
    density, density_matrix_element, energy, gram_defect, gram_matrix, hartree_rhs, kinetic_energy,
    kinetic_rhs, nonlinearity, poisson_solve, potential_energy, sobolev_norm, Damping, Ensemble,
    KineticVariant, NormKind, PotentialField, SobolevOrder, Weights,
};
pub use error::{EnsembleError, SpectralError};
pub use field::{FieldKind, GridField};
pub use integrator::{
    advance, duhamel_midpoint_step, free_flow, lie_step, potential_kick, run, state_distance,
    strang_step, RunError, Scheme, StepParams,
};
