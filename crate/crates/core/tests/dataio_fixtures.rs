//! Fixture-driven checks of the MatrixMarket reader: every bundled good
//! file loads with the right shape, every corrupted one is rejected with a
//! located error.

use std::path::PathBuf;

use radproj_core::dataio::{read_matrix_market, sparsity_stats};

fn fixture(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(relative)
}

#[test]
fn all_good_fixtures_load() {
    let dir = fixture("good");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let loaded = read_matrix_market(&path);
        assert!(loaded.is_ok(), "{path:?}: {:?}", loaded.err());
        count += 1;
    }
    assert_eq!(count, 7);
}

#[test]
fn all_corrupt_fixtures_are_rejected_with_location() {
    let dir = fixture("corrupt");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let err = read_matrix_market(&path).expect_err(&format!("{path:?} must fail"));
        let msg = err.to_string();
        // every rejection names the file and a line number
        assert!(
            msg.contains(path.file_name().unwrap().to_str().unwrap()),
            "no path in: {msg}"
        );
        let located = msg
            .split(':')
            .any(|part| part.chars().all(|c| c.is_ascii_digit()) && !part.is_empty());
        assert!(located, "no line number in: {msg}");
        count += 1;
    }
    assert_eq!(count, 9);
}

#[test]
fn coordinate_general_has_expected_columns() {
    let d = read_matrix_market(fixture("good/coord_real_general.mtx")).unwrap();
    assert_eq!((d.rows, d.cols), (4, 3));
    let ks: Vec<usize> = d.columns.iter().map(|c| c.k()).collect();
    assert_eq!(ks, vec![1, 3, 0]);
    assert_eq!(d.columns[1].indices, vec![1, 2, 3]);
    assert_eq!(d.columns[1].values, vec![4.0, 0.25, -1.5]);
}

#[test]
fn duplicates_sum_and_zeros_drop() {
    let d = read_matrix_market(fixture("good/coord_real_duplicates.mtx")).unwrap();
    assert_eq!(d.columns[0].values, vec![3.0, 5.0]);

    let z = read_matrix_market(fixture("good/explicit_zeros.mtx")).unwrap();
    assert_eq!(z.dropped_zeros, 2);
    let ks: Vec<usize> = z.columns.iter().map(|c| c.k()).collect();
    assert_eq!(ks, vec![1, 1]);
}

#[test]
fn pattern_and_symmetric_fixtures() {
    let p = read_matrix_market(fixture("good/coord_pattern.mtx")).unwrap();
    assert!(p.columns.iter().flat_map(|c| &c.values).all(|&v| v == 1.0));
    assert_eq!(p.nnz(), 3);

    let s = read_matrix_market(fixture("good/coord_symmetric.mtx")).unwrap();
    assert_eq!(s.columns[0].indices, vec![0, 1, 2]);
    assert_eq!(s.columns[1].indices, vec![0]);
    assert_eq!(s.columns[2].indices, vec![0, 2]);
    assert_eq!(s.columns[2].values, vec![0.5, 7.0]);
}

#[test]
fn array_fixtures_are_column_major() {
    let a = read_matrix_market(fixture("good/array_general.mtx")).unwrap();
    assert_eq!((a.rows, a.cols), (2, 3));
    assert_eq!(a.column_dense(0), vec![1.0, 2.0]);
    assert_eq!(a.column_dense(1), vec![0.0, 4.0]);
    assert_eq!(a.dropped_zeros, 1);

    let s = read_matrix_market(fixture("good/array_symmetric.mtx")).unwrap();
    assert_eq!(s.column_dense(0), vec![1.0, 5.0]);
    assert_eq!(s.column_dense(1), vec![5.0, 3.0]);
}

#[test]
fn stats_rank_fixture_columns_by_spread() {
    let d = read_matrix_market(fixture("good/coord_real_general.mtx")).unwrap();
    let stats = sparsity_stats(&d);
    assert_eq!(stats[0].k, 1);
    assert!((stats[0].flatness - 1.0).abs() < 1e-15);
    assert_eq!(stats[2].k, 0);
    assert_eq!(stats[2].flatness, 0.0);
    assert!(stats[1].flatness > 0.0 && stats[1].flatness < 1.0);
}

#[test]
fn checksums_are_stable_per_content() {
    let a = read_matrix_market(fixture("good/coord_pattern.mtx")).unwrap();
    let b = read_matrix_market(fixture("good/coord_pattern.mtx")).unwrap();
    assert_eq!(a.checksum, b.checksum);
    let other = read_matrix_market(fixture("good/array_general.mtx")).unwrap();
    assert_ne!(a.checksum, other.checksum);
}
