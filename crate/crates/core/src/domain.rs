//! Box geometry, spectral cutoffs and the shared flat mode ordering.

use crate::error::SpectralError;

/// Geometry and resolution of one run: a `d`-dimensional box `(0, L_1) x ... x (0, L_d)`
/// with per-dimension mode cutoffs `N_i` and an oversampling factor `q`.
///
/// The collocation grid has `M_i = q * N_i` intervals per dimension, i.e. `M_i - 1`
/// interior points, and the working sine basis spans modes `1 ..= M_i - 1` per
/// dimension. The cutoffs `N_i` bound the band of freshly generated initial data;
/// `q >= 2` guarantees that pairwise products of those modes are resolved on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    lengths: Vec<f64>,
    cutoffs: Vec<usize>,
    oversampling: usize,
}

impl DomainSpec {
    pub fn new(lengths: Vec<f64>, cutoffs: Vec<usize>, oversampling: usize) -> Result<Self, SpectralError> {
        let d = lengths.len();
        if d == 0 || d > 3 {
            return Err(SpectralError::InvalidDomain(format!(
                "dimension must be 1, 2 or 3, got {d}"
            )));
        }
        if cutoffs.len() != d {
            return Err(SpectralError::InvalidDomain(format!(
                "{} box lengths but {} mode cutoffs",
                d,
                cutoffs.len()
            )));
        }
        for (i, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(SpectralError::InvalidDomain(format!("L_{} = {l} must be positive", i + 1)));
            }
        }
        for (i, &n) in cutoffs.iter().enumerate() {
            if n < 1 {
                return Err(SpectralError::InvalidDomain(format!("N_{} must be >= 1", i + 1)));
            }
        }
        if oversampling < 2 {
            return Err(SpectralError::InvalidDomain(format!(
                "oversampling factor must be >= 2, got {oversampling}"
            )));
        }
        Ok(Self { lengths, cutoffs, oversampling })
    }

    /// Unit box `(0,1)^d` with uniform cutoff `n` and oversampling `q`.
    pub fn unit(d: usize, n: usize, q: usize) -> Result<Self, SpectralError> {
        Self::new(vec![1.0; d], vec![n; d], q)
    }

    pub fn dimension(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    /// Grid intervals per dimension, `M_i = q * N_i`.
    pub fn grid_intervals(&self) -> Vec<usize> {
        self.cutoffs.iter().map(|&n| n * self.oversampling).collect()
    }

    /// Working bandwidth per dimension: the sine modes `1 ..= M_i - 1` carried by
    /// every coefficient vector (equal to the number of interior grid points).
    pub fn bandwidth(&self) -> Vec<usize> {
        self.grid_intervals().iter().map(|&m| m - 1).collect()
    }

    /// Total number of working modes = total number of interior collocation points.
    pub fn mode_len(&self) -> usize {
        self.bandwidth().iter().product()
    }

    /// Number of interior collocation points (same as `mode_len`).
    pub fn grid_len(&self) -> usize {
        self.mode_len()
    }

    /// Number of modes inside the declared cutoff block `1 ..= N_i`.
    pub fn cutoff_len(&self) -> usize {
        self.cutoffs.iter().product()
    }
}

/// Multi-index of one Dirichlet eigenfunction, `1 <= n_i`.
///
/// The flat ordering is row-major over `(n_1, ..., n_d)` and is shared by every
/// module, so coefficient vectors and snapshots are portable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeIndex(pub Vec<usize>);

impl ModeIndex {
    pub fn to_flat(&self, dims: &[usize]) -> Option<usize> {
        if self.0.len() != dims.len() {
            return None;
        }
        let mut flat = 0;
        for (&n, &len) in self.0.iter().zip(dims) {
            if n < 1 || n > len {
                return None;
            }
            flat = flat * len + (n - 1);
        }
        Some(flat)
    }

    pub fn from_flat(mut flat: usize, dims: &[usize]) -> Self {
        let mut idx = vec![0; dims.len()];
        for (slot, &len) in idx.iter_mut().zip(dims).rev() {
            *slot = flat % len + 1;
            flat /= len;
        }
        ModeIndex(idx)
    }
}
