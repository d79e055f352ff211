//! Binary state snapshots.
//!
//! Layout, all little-endian: magic `SRSP`, format version (u32), dimension d
//! (u32), the per-dimension mode counts of the stored coefficient blocks (d x
//! u32), K (u32), particle mass (f64), the K weights (f64 each), then K
//! coefficient arrays of P pairs (real f64, imaginary f64) in flat row-major
//! mode order. Writing then reading reproduces the ensemble bit for bit.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use srsp_core::{Ensemble, SpectralBasis, SpectralCoeffs, Weights};
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"SRSP";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("bad magic {0:?}, expected SRSP")]
    BadMagic([u8; 4]),
    #[error("unsupported snapshot version {0}")]
    BadVersion(u32),
    #[error("truncated snapshot file")]
    Truncated,
    #[error("snapshot stores dimension {found_d} with modes {found:?}, run expects dimension {expected_d} with modes {expected:?}")]
    DimensionMismatch {
        expected_d: usize,
        expected: Vec<usize>,
        found_d: usize,
        found: Vec<usize>,
    },
    #[error("invalid snapshot payload: {0}")]
    InvalidPayload(String),
}

fn eof_as_truncated(e: io::Error) -> SnapshotError {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        SnapshotError::Truncated
    } else {
        SnapshotError::Io(e)
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32, SnapshotError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(eof_as_truncated)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64(r: &mut impl Read) -> Result<f64, SnapshotError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(eof_as_truncated)?;
    Ok(f64::from_le_bytes(buf))
}

pub fn write_snapshot(path: &Path, e: &Ensemble) -> Result<(), SnapshotError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    let dims = e.basis().bandwidth();
    w.write_all(&(dims.len() as u32).to_le_bytes())?;
    for &n in dims {
        w.write_all(&(n as u32).to_le_bytes())?;
    }
    w.write_all(&(e.count() as u32).to_le_bytes())?;
    w.write_all(&e.mass().to_le_bytes())?;
    for &lambda in e.weights().as_slice() {
        w.write_all(&lambda.to_le_bytes())?;
    }
    for c in e.psi() {
        for v in &c.0 {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path, basis: &Arc<SpectralBasis>) -> Result<Ensemble, SnapshotError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(eof_as_truncated)?;
    if magic != MAGIC {
        return Err(SnapshotError::BadMagic(magic));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(SnapshotError::BadVersion(version));
    }
    let d = read_u32(&mut r)? as usize;
    if d == 0 || d > 3 {
        return Err(SnapshotError::InvalidPayload(format!("dimension {d}")));
    }
    let mut dims = Vec::with_capacity(d);
    for _ in 0..d {
        dims.push(read_u32(&mut r)? as usize);
    }
    let expected = basis.bandwidth().to_vec();
    if d != expected.len() || dims != expected {
        return Err(SnapshotError::DimensionMismatch {
            expected_d: expected.len(),
            expected,
            found_d: d,
            found: dims,
        });
    }
    let k = read_u32(&mut r)? as usize;
    if k == 0 || k > 1 << 20 {
        return Err(SnapshotError::InvalidPayload(format!("wavefunction count {k}")));
    }
    let mass = read_f64(&mut r)?;
    let mut lambda = Vec::with_capacity(k);
    for _ in 0..k {
        lambda.push(read_f64(&mut r)?);
    }
    let weights = Weights::from_normalized(lambda)
        .map_err(|e| SnapshotError::InvalidPayload(e.to_string()))?;
    let p: usize = basis.mode_len();
    let mut psi = Vec::with_capacity(k);
    for _ in 0..k {
        let mut c = SpectralCoeffs::zeros(p);
        for v in &mut c.0 {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            *v = Complex64::new(re, im);
        }
        psi.push(c);
    }
    // anything after the payload is a malformed file
    let mut trailer = [0u8; 1];
    match r.read(&mut trailer)? {
        0 => {}
        _ => return Err(SnapshotError::InvalidPayload("trailing bytes after payload".into())),
    }
    Ensemble::new(basis.clone(), weights, mass, psi)
        .map_err(|e| SnapshotError::InvalidPayload(e.to_string()))
}
