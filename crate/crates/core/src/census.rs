//! Nontrivial-coefficient census over `Phi_1 .. Phi_N`.
//!
//! Set B holds every point `(c, n)` with `c` a nontrivial coefficient
//! (`|c| >= 2`) of `Phi_n`; set A keeps only the first index at which each
//! value appears, enumerated by `n` and then by `c`.
//!
//! Only odd squarefree indices are ever expanded. `Phi_n(x)` is
//! `Phi_rad(n)(x^(n / rad(n)))`, which adds zeros but no new values, and
//! `Phi_2m(x) = Phi_m(-x)` for odd `m`. So the value set of any `Phi_n` is the
//! plain or sign-twisted value set of a single odd squarefree `Phi_m`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::coeff::{self, DivisionEngine};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::numthy;

/// Identifies the coefficient engine and reduction scheme behind a census file.
pub const ENGINE_VERSION: &str = "cyclophi-series-radical-v1";

const DEFAULT_CHUNK: u64 = 2048;

/// Lattice point `(c, n)`; ordered by `n`, then `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub n: u64,
    pub c: i64,
}

impl Point {
    pub fn new(c: i64, n: u64) -> Self {
        Point { n, c }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointSet {
    points: BTreeSet<Point>,
}

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        self.points.insert(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    /// Points in `(n, c)` order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> + '_ {
        self.points.iter()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.points.union(&other.points).copied().collect()
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        PointSet {
            points: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::collections::btree_set::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Distinct nontrivial coefficient values of one `Phi_n`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: u64,
    pub values: Vec<i64>,
}

impl CensusRow {
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.values.iter().map(move |&c| Point::new(c, self.n))
    }
}

/// One point of set A with its 1-based enumeration position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstAppearanceRecord {
    pub ordinal: u64,
    pub c: i64,
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanStatus {
    Complete,
    /// The index bound was exhausted before enough points were found.
    Incomplete {
        scanned_to: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstAppearances {
    pub records: Vec<FirstAppearanceRecord>,
    pub status: ScanStatus,
}

impl FirstAppearances {
    pub fn is_complete(&self) -> bool {
        self.status == ScanStatus::Complete
    }
}

/// Odd squarefree `m` and whether `Phi_n` is the `x -> -x` twist of its inflation.
fn reduce(n: u64) -> Result<(u64, bool)> {
    let rad = numthy::radical(n)?;
    Ok(if rad % 2 == 0 {
        (rad / 2, true)
    } else {
        (rad, false)
    })
}

/// Nontrivial values of `Phi_m` and of `Phi_m(-x)` for odd squarefree `m`.
fn value_sets(m: u64) -> Result<(Vec<i64>, Vec<i64>)> {
    if m == 1 {
        return Ok((Vec::new(), Vec::new()));
    }
    let fac = numthy::factorize(m)?;
    // phi(m) is even for m > 2, so the mirrored upper half repeats the same
    // (sign-adjusted) values and the lower half suffices for both sets.
    let half = coeff::lower_half(&fac)?;
    let mut plain = Vec::new();
    let mut twisted = Vec::new();
    for (j, &c) in half.iter().enumerate() {
        if c.unsigned_abs() >= 2 {
            plain.push(c);
            twisted.push(if j % 2 == 1 { -c } else { c });
        }
    }
    for v in [&mut plain, &mut twisted] {
        v.sort_unstable();
        v.dedup();
    }
    Ok((plain, twisted))
}

/// Census scanner. Work is split into chunks of consecutive indices; each
/// chunk expands its distinct odd squarefree kernels through the executor.
#[derive(Debug, Default)]
pub struct Census {
    exec: Executor,
    chunk: Option<u64>,
}

impl Census {
    pub fn new(exec: Executor) -> Self {
        Census { exec, chunk: None }
    }

    pub fn with_chunk(mut self, chunk: u64) -> Self {
        self.chunk = Some(chunk.max(1));
        self
    }

    pub fn executor(&self) -> &Executor {
        &self.exec
    }

    fn chunk(&self) -> u64 {
        self.chunk.unwrap_or(DEFAULT_CHUNK)
    }

    /// All rows with `n <= n_limit`.
    pub fn scan(&self, n_limit: u64) -> Result<Vec<CensusRow>> {
        self.scan_range(1, n_limit)
    }

    /// Rows for `lo <= n <= hi`, in ascending `n`.
    pub fn scan_range(&self, lo: u64, hi: u64) -> Result<Vec<CensusRow>> {
        let mut rows = Vec::new();
        let mut start = lo.max(1);
        while start <= hi {
            let end = hi.min(start.saturating_add(self.chunk() - 1));
            rows.extend(self.scan_chunk(start, end)?);
            if end == u64::MAX {
                break;
            }
            start = end + 1;
        }
        Ok(rows)
    }

    fn scan_chunk(&self, lo: u64, hi: u64) -> Result<Vec<CensusRow>> {
        let keys: Vec<(u64, bool)> = (lo..=hi).map(reduce).collect::<Result<_>>()?;
        let mut kernels: Vec<u64> = keys
            .iter()
            .map(|&(m, _)| m)
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        kernels.sort_unstable();
        let sets = self
            .exec
            .try_map(&kernels, |&m| value_sets(m).map_err(|e| (m, e)))
            .map_err(|(m, e)| match e {
                Error::Overflow { .. } => {
                    let n = (lo..=hi)
                        .zip(&keys)
                        .find(|(_, k)| k.0 == m)
                        .map_or(m, |(n, _)| n);
                    Error::Overflow { n }
                }
                other => other,
            })?;
        let by_kernel: HashMap<u64, (Vec<i64>, Vec<i64>)> = kernels.into_iter().zip(sets).collect();
        Ok((lo..=hi)
            .zip(keys)
            .filter_map(|(n, (m, twist))| {
                let (plain, twisted) = &by_kernel[&m];
                let values = if twist { twisted } else { plain };
                (!values.is_empty()).then(|| CensusRow {
                    n,
                    values: values.clone(),
                })
            })
            .collect())
    }

    /// First `k` points of set A, scanning no further than `n_limit`.
    pub fn first_appearances(&self, k: usize, n_limit: u64) -> Result<FirstAppearances> {
        let mut seen = HashSet::new();
        let mut records = Vec::with_capacity(k);
        let mut start = 1u64;
        while start <= n_limit && records.len() < k {
            let end = n_limit.min(start.saturating_add(self.chunk() - 1));
            for row in self.scan_chunk(start, end)? {
                for &c in &row.values {
                    if records.len() < k && seen.insert(c) {
                        records.push(FirstAppearanceRecord {
                            ordinal: records.len() as u64 + 1,
                            c,
                            n: row.n,
                        });
                    }
                }
            }
            if end == u64::MAX {
                break;
            }
            start = end + 1;
        }
        let status = if records.len() >= k {
            ScanStatus::Complete
        } else {
            ScanStatus::Incomplete {
                scanned_to: n_limit,
            }
        };
        Ok(FirstAppearances { records, status })
    }
}

pub fn scan_census(n_limit: u64) -> Result<Vec<CensusRow>> {
    Census::default().scan(n_limit)
}

pub fn scan_first_appearances(k: usize, n_limit: u64) -> Result<FirstAppearances> {
    Census::default().first_appearances(k, n_limit)
}

/// Which engine recomputes a row directly from `n`, without the radical or
/// twist reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecheckEngine {
    Series,
    Division,
}

/// Independent recomputation of rows `1..=n_limit`, one full polynomial per index.
pub fn recheck_rows(
    exec: &Executor,
    engine: RecheckEngine,
    n_limit: u64,
) -> Result<Vec<CensusRow>> {
    let ns: Vec<u64> = (1..=n_limit).collect();
    let rows = match engine {
        RecheckEngine::Series => exec.try_map(&ns, |&n| {
            coeff::phi_poly_series(n).map(|v| nontrivial_row(n, v.coeffs()))
        })?,
        // The division memo is single-owner; the oracle runs sequentially.
        RecheckEngine::Division => {
            let mut engine = DivisionEngine::default();
            ns.iter()
                .map(|&n| engine.compute(n).map(|v| nontrivial_row(n, v.coeffs())))
                .collect::<Result<_>>()?
        }
    };
    Ok(rows.into_iter().flatten().collect())
}

fn nontrivial_row(n: u64, coeffs: &[i64]) -> Option<CensusRow> {
    let mut values: Vec<i64> = coeffs
        .iter()
        .copied()
        .filter(|c| c.unsigned_abs() >= 2)
        .collect();
    values.sort_unstable();
    values.dedup();
    (!values.is_empty()).then_some(CensusRow { n, values })
}

pub fn points_of_records(records: &[FirstAppearanceRecord]) -> PointSet {
    records.iter().map(|r| Point::new(r.c, r.n)).collect()
}

pub fn points_of_rows(rows: &[CensusRow]) -> PointSet {
    rows.iter().flat_map(CensusRow::points).collect()
}

/// `(c > 0, c < 0)` partition. Trivial points are rejected.
pub fn split_by_sign(s: &PointSet) -> Result<(PointSet, PointSet)> {
    if let Some(p) = s.iter().find(|p| p.c.unsigned_abs() <= 1) {
        return Err(Error::TrivialPoint { c: p.c, n: p.n });
    }
    Ok(s.iter().partition(|p| p.c > 0))
}

impl Extend<Point> for PointSet {
    fn extend<I: IntoIterator<Item = Point>>(&mut self, iter: I) {
        self.points.extend(iter)
    }
}

impl<'a> Extend<&'a Point> for PointSet {
    fn extend<I: IntoIterator<Item = &'a Point>>(&mut self, iter: I) {
        self.points.extend(iter.into_iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_below_105() {
        assert!(scan_census(104).unwrap().is_empty());
        let rows = scan_census(105).unwrap();
        assert_eq!(
            rows,
            vec![CensusRow {
                n: 105,
                values: vec![-2]
            }]
        );
    }

    #[test]
    fn first_two_records() {
        let a = scan_first_appearances(2, 1000).unwrap();
        assert!(a.is_complete());
        assert_eq!(
            a.records,
            vec![
                FirstAppearanceRecord {
                    ordinal: 1,
                    c: -2,
                    n: 105
                },
                FirstAppearanceRecord {
                    ordinal: 2,
                    c: 2,
                    n: 165
                },
            ]
        );
    }

    #[test]
    fn incomplete_scan_is_flagged() {
        let a = scan_first_appearances(10, 104).unwrap();
        assert!(a.records.is_empty());
        assert_eq!(a.status, ScanStatus::Incomplete { scanned_to: 104 });
    }

    #[test]
    fn chunking_does_not_change_output() {
        let a = Census::default().with_chunk(7).scan(2000).unwrap();
        let b = Census::default().with_chunk(5000).scan(2000).unwrap();
        assert_eq!(a, b);
        let a = Census::default()
            .with_chunk(3)
            .first_appearances(20, 5000)
            .unwrap();
        let b = Census::default().first_appearances(20, 5000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matches_direct_series_rows() {
        let fast = scan_census(1500).unwrap();
        let direct = recheck_rows(&Executor::sequential(), RecheckEngine::Series, 1500).unwrap();
        assert_eq!(fast, direct);
    }

    #[test]
    fn point_sets() {
        assert!(points_of_records(&[]).is_empty());
        let rec = [FirstAppearanceRecord {
            ordinal: 1,
            c: -2,
            n: 105,
        }];
        let ps = points_of_records(&rec);
        assert_eq!(
            ps.iter().copied().collect::<Vec<_>>(),
            vec![Point::new(-2, 105)]
        );
        let b = points_of_rows(&scan_census(210).unwrap());
        assert!(b.contains(&Point::new(2, 210)));
    }

    #[test]
    fn sign_split() {
        let s: PointSet = [Point::new(-2, 105), Point::new(2, 165)]
            .into_iter()
            .collect();
        let (pos, neg) = split_by_sign(&s).unwrap();
        assert_eq!(
            pos.iter().copied().collect::<Vec<_>>(),
            vec![Point::new(2, 165)]
        );
        assert_eq!(
            neg.iter().copied().collect::<Vec<_>>(),
            vec![Point::new(-2, 105)]
        );
        let (pos, neg) = split_by_sign(&PointSet::new()).unwrap();
        assert!(pos.is_empty() && neg.is_empty());

        let b = points_of_rows(&scan_census(1000).unwrap());
        let (pos, neg) = split_by_sign(&b).unwrap();
        assert_eq!(pos.len() + neg.len(), b.len());

        let bad: PointSet = [Point::new(1, 3)].into_iter().collect();
        assert_eq!(split_by_sign(&bad), Err(Error::TrivialPoint { c: 1, n: 3 }));
    }
}
