//! Snapshot format: bit-exact roundtrips and typed failure modes.

use std::fs;
use std::sync::Arc;

use proptest::prelude::*;
use srsp_cli::snapshot::{read_snapshot, write_snapshot, SnapshotError, MAGIC};
use srsp_core::{Damping, DomainSpec, Ensemble, SpectralBasis, Weights};

fn arc_basis(d: usize, n: usize) -> Arc<SpectralBasis> {
    Arc::new(SpectralBasis::new(DomainSpec::unit(d, n, 2).unwrap()))
}

fn sample_ensemble(seed: u64) -> (Arc<SpectralBasis>, Ensemble) {
    let basis = arc_basis(1, 8);
    let e = Ensemble::seeded(
        basis.clone(),
        Weights::new(vec![2.0, 1.0, 1.0]).unwrap(),
        1.5,
        seed,
        Damping::Algebraic(1.0),
    )
    .unwrap();
    (basis, e)
}

#[test]
fn roundtrip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.srsp");
    let (basis, e) = sample_ensemble(12);
    write_snapshot(&path, &e).unwrap();
    let back = read_snapshot(&path, &basis).unwrap();
    assert_eq!(back.mass().to_bits(), e.mass().to_bits());
    for (a, b) in back.weights().as_slice().iter().zip(e.weights().as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    for (a, b) in back.psi().iter().zip(e.psi()) {
        for (x, y) in a.0.iter().zip(&b.0) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
    // and the rewritten file is byte-identical too
    let path2 = dir.path().join("state2.srsp");
    write_snapshot(&path2, &back).unwrap();
    assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
}

#[test]
fn corrupted_magic_is_a_typed_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.srsp");
    let (basis, e) = sample_ensemble(13);
    write_snapshot(&path, &e).unwrap();
    let mut bytes = fs::read(&path).unwrap();
    bytes[0] = b'X';
    fs::write(&path, &bytes).unwrap();
    match read_snapshot(&path, &basis) {
        Err(SnapshotError::BadMagic(m)) => assert_ne!(m, MAGIC),
        other => panic!("expected BadMagic, got {other:?}"),
    }
}

#[test]
fn truncated_file_is_a_typed_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.srsp");
    let (basis, e) = sample_ensemble(14);
    write_snapshot(&path, &e).unwrap();
    let bytes = fs::read(&path).unwrap();
    fs::write(&path, &bytes[..bytes.len() - 9]).unwrap();
    assert!(matches!(read_snapshot(&path, &basis), Err(SnapshotError::Truncated)));
}

#[test]
fn wrong_resolution_is_a_dimension_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.srsp");
    let (_, e) = sample_ensemble(15);
    write_snapshot(&path, &e).unwrap();
    let other = arc_basis(1, 16);
    assert!(matches!(
        read_snapshot(&path, &other),
        Err(SnapshotError::DimensionMismatch { .. })
    ));
    let other_d = arc_basis(2, 8);
    assert!(matches!(
        read_snapshot(&path, &other_d),
        Err(SnapshotError::DimensionMismatch { .. })
    ));
}

#[test]
fn bad_version_is_a_typed_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.srsp");
    let (basis, e) = sample_ensemble(16);
    write_snapshot(&path, &e).unwrap();
    let mut bytes = fs::read(&path).unwrap();
    bytes[4] = 0xFF;
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(read_snapshot(&path, &basis), Err(SnapshotError::BadVersion(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn roundtrip_for_random_states(seed in 0u64..1_000_000, k in 1usize..4, mass in 0.1f64..10.0) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.srsp");
        let basis = arc_basis(2, 3);
        let e = Ensemble::seeded(
            basis.clone(),
            Weights::geometric(k, 0.7).unwrap(),
            mass,
            seed,
            Damping::Algebraic(1.0),
        )
        .unwrap();
        write_snapshot(&path, &e).unwrap();
        let back = read_snapshot(&path, &basis).unwrap();
        prop_assert_eq!(back.mass().to_bits(), e.mass().to_bits());
        for (a, b) in back.psi().iter().zip(e.psi()) {
            for (x, y) in a.0.iter().zip(&b.0) {
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}
