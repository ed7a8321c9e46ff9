use std::collections::{BTreeMap, HashSet};
use std::fs;

use cyclophi::census::{
    points_of_rows, recheck_rows, scan_first_appearances, split_by_sign, Census, Point, PointSet,
    RecheckEngine,
};
use cyclophi::coeff::phi_poly_series;
use cyclophi::exec::Executor;
use cyclophi::store::{self, load_manifest, manifest_path, run_census, Dataset, StoreError};
use cyclophi::symmetry::{self, reflect};

#[test]
fn first_records_are_minimal() {
    let a = scan_first_appearances(25, 100_000).unwrap();
    assert!(a.is_complete());
    assert_eq!(a.records.len(), 25);
    // Exhaustive rescan with the direct engine, no reductions.
    let last = a.records.last().unwrap().n;
    let mut first_seen: BTreeMap<i64, u64> = BTreeMap::new();
    for n in 1..=last {
        for c in phi_poly_series(n).unwrap().value_set() {
            first_seen.entry(c).or_insert(n);
        }
    }
    for r in &a.records {
        assert_eq!(first_seen[&r.c], r.n, "record {r:?}");
    }
    for w in a.records.windows(2) {
        assert!((w[0].n, w[0].c) < (w[1].n, w[1].c));
        assert_eq!(w[0].ordinal + 1, w[1].ordinal);
    }
}

#[test]
fn census_matches_division_engine() {
    let fast = Census::default().scan(1000).unwrap();
    let oracle = recheck_rows(&Executor::sequential(), RecheckEngine::Division, 1000).unwrap();
    assert_eq!(fast, oracle);
}

#[test]
fn worker_count_does_not_change_rows() {
    let seq = Census::new(Executor::sequential()).scan(6000).unwrap();
    let par = Census::new(Executor::with_workers(3))
        .with_chunk(500)
        .scan(6000)
        .unwrap();
    assert_eq!(seq, par);
}

#[test]
fn resume_equals_single_pass() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let two = dir.path().join("two.csv");
    let census = Census::default();
    run_census(&census, &one, 4000, false).unwrap();
    run_census(&census, &two, 1500, true).unwrap();
    let run = run_census(&census, &two, 4000, true).unwrap();
    assert_eq!(run.scanned_from, Some(1501));
    assert_eq!(fs::read(&one).unwrap(), fs::read(&two).unwrap());
    assert_eq!(
        fs::read(manifest_path(&one)).unwrap(),
        fs::read(manifest_path(&two)).unwrap()
    );
    // Nothing left to do: file untouched.
    let again = run_census(&census, &two, 4000, true).unwrap();
    assert_eq!(again.scanned_from, None);
    assert_eq!(fs::read(&one).unwrap(), fs::read(&two).unwrap());
}

#[test]
fn resume_rejects_tampered_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("b.csv");
    run_census(&Census::default(), &p, 500, false).unwrap();
    assert_eq!(load_manifest(&p).unwrap().scanned_to, 500);
    let mut text = fs::read_to_string(&p).unwrap();
    text.push_str("501,7\n");
    fs::write(&p, text).unwrap();
    assert!(matches!(
        run_census(&Census::default(), &p, 800, true),
        Err(StoreError::Manifest { .. })
    ));
    fs::remove_file(manifest_path(&p)).unwrap();
    assert!(matches!(
        run_census(&Census::default(), &p, 800, true),
        Err(StoreError::Io { .. })
    ));
}

#[test]
fn census_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("b.csv");
    let rows = Census::default().scan(3000).unwrap();
    store::write_census_csv(&p, &rows).unwrap();
    assert_eq!(store::read_dataset(&p).unwrap(), Dataset::Census(rows));
    let head = fs::read_to_string(&p).unwrap();
    assert!(head.starts_with("n,c\n105,-2\n165,2\n"));
}

#[test]
fn first_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.csv");
    let a = scan_first_appearances(40, 100_000).unwrap();
    store::write_first_csv(&p, &a.records).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("ordinal,c,n\n1,-2,105\n2,2,165\n"));
    assert_eq!(store::read_dataset(&p).unwrap(), Dataset::First(a.records));
}

#[test]
fn split_reflect_merge_is_bijective() {
    let b = points_of_rows(&Census::default().scan(5000).unwrap());
    let (pos, neg) = split_by_sign(&b).unwrap();
    let merged = pos.union(&reflect(&reflect(&neg)));
    assert_eq!(merged, b);
    let mirrored: HashSet<Point> = reflect(&neg).iter().copied().collect();
    assert!(mirrored.iter().all(|p| p.c > 0));
    assert_eq!(mirrored.len(), neg.len());
}

#[test]
fn report_csv_layout() {
    let mut cut = BTreeMap::new();
    cut.insert(
        1u64,
        [Point::new(-2, 105)].into_iter().collect::<PointSet>(),
    );
    cut.insert(
        2u64,
        [Point::new(-2, 105), Point::new(2, 165)]
            .into_iter()
            .collect::<PointSet>(),
    );
    let reports = symmetry::symmetry_series(&cut, 0.02, &Executor::sequential()).unwrap();
    let mut buf = Vec::new();
    store::write_reports(&mut buf, &reports).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "k,c_k,n_k,count_pos,count_neg,hausdorff_full,hausdorff_trimmed,trim,degenerate"
    );
    assert_eq!(lines[1], "1,2,105,0,1,,,0.02,true");
    assert_eq!(
        lines[2],
        "2,2,165,1,1,0.36363636363636365,0.36363636363636365,0.02,false"
    );
}
