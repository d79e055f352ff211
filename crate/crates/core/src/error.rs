use thiserror::Error;

/// Errors from the spectral layer (domain setup, transforms, multipliers).
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("mode index {index:?} out of range for bandwidth {bandwidth:?}")]
    ModeOutOfRange { index: Vec<usize>, bandwidth: Vec<usize> },
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("negative argument to kinetic symbol: mu = {mu}, m = {m}")]
    NegativeSymbolArgument { mu: f64, m: f64 },
    #[error("spectral multiplier is not finite at eigenvalue {mu} (mode {flat})")]
    NonFiniteMultiplier { mu: f64, flat: usize },
    #[error("point {coords:?} is not an interior collocation point")]
    OffGridPoint { coords: Vec<f64> },
    #[error("field has wrong kind: expected {expected}")]
    WrongFieldKind { expected: &'static str },
}

/// Errors from ensemble construction and state-level operations.
#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("weights must be strictly positive and finite: lambda[{index}] = {value}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("weights claimed normalized but sum to {total}")]
    NotNormalized { total: f64 },
    #[error("particle mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("ensemble has {weights} weights but {psi} wavefunctions")]
    CountMismatch { weights: usize, psi: usize },
    #[error("wavefunction {k} has {got} coefficients, basis has {expected} modes")]
    CoefficientLength { k: usize, expected: usize, got: usize },
    #[error("cannot orthonormalize {k} vectors in a {modes}-mode basis")]
    TooManyVectors { k: usize, modes: usize },
    #[error("orthonormalization hit a numerically dependent vector at k = {k}")]
    DependentVectors { k: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
