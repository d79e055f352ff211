//! Point values on the interior collocation grid.

use num_complex::Complex64;

use crate::error::SpectralError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Real,
    Complex,
}

/// Values over the interior collocation points, flat row-major, same ordering as
/// mode coefficients. Real-kind fields keep imaginary parts exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    kind: FieldKind,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn real(values: Vec<f64>) -> Self {
        GridField {
            kind: FieldKind::Real,
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn complex(values: Vec<Complex64>) -> Self {
        GridField { kind: FieldKind::Complex, values }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.kind = FieldKind::Complex;
        &mut self.values
    }

    /// Real parts, available only for real-kind fields.
    pub fn real_values(&self) -> Result<Vec<f64>, SpectralError> {
        match self.kind {
            FieldKind::Real => Ok(self.values.iter().map(|v| v.re).collect()),
            FieldKind::Complex => Err(SpectralError::WrongFieldKind { expected: "real" }),
        }
    }

    /// Smallest real part over the grid (for real-kind monitoring fields).
    pub fn min_real(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }
}
