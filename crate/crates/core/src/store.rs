//! CSV persistence for census data, first-appearance lists, coefficient
//! vectors, and symmetry reports, plus the resume manifest for census files.
//!
//! Formats:
//!
//! * set B: header `n,c`, one row per point, sorted by `(n, c)`;
//! * set A: header `ordinal,c,n`, in enumeration order;
//! * coefficients: header `exponent,coefficient`;
//! * symmetry: header `k,c_k,n_k,count_pos,count_neg,hausdorff_full,hausdorff_trimmed,trim,degenerate`.
//!
//! A census CSV at `path` is accompanied by `path.manifest`, a `key=value`
//! text file with the highest fully scanned `n`, the engine version, the data
//! row count, and the SHA-256 of the CSV bytes.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::census::{
    points_of_records, points_of_rows, Census, CensusRow, FirstAppearanceRecord, PointSet,
    ENGINE_VERSION,
};
use crate::coeff::CoeffVec;
use crate::error::Error;
use crate::symmetry::SymmetryReport;

pub const CENSUS_HEADER: &str = "n,c";
pub const FIRST_HEADER: &str = "ordinal,c,n";
pub const COEFFS_HEADER: &str = "exponent,coefficient";
pub const REPORT_HEADER: &str =
    "k,c_k,n_k,count_pos,count_neg,hausdorff_full,hausdorff_trimmed,trim,degenerate";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Malformed {
        path: PathBuf,
        line: u64,
        msg: String,
    },
    #[error("manifest mismatch for {}: {msg}", path.display())]
    Manifest { path: PathBuf, msg: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, StoreError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

pub fn write_census_rows<W: Write>(w: &mut W, rows: &[CensusRow]) -> io::Result<()> {
    for row in rows {
        for c in &row.values {
            writeln!(w, "{},{}", row.n, c)?;
        }
    }
    Ok(())
}

pub fn write_census_csv(path: &Path, rows: &[CensusRow]) -> Result<(), StoreError> {
    let mut w = create(path)?;
    writeln!(w, "{CENSUS_HEADER}")
        .and_then(|_| write_census_rows(&mut w, rows))
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

pub fn write_first<W: Write>(w: &mut W, records: &[FirstAppearanceRecord]) -> io::Result<()> {
    writeln!(w, "{FIRST_HEADER}")?;
    for r in records {
        writeln!(w, "{},{},{}", r.ordinal, r.c, r.n)?;
    }
    Ok(())
}

pub fn write_first_csv(path: &Path, records: &[FirstAppearanceRecord]) -> Result<(), StoreError> {
    let mut w = create(path)?;
    write_first(&mut w, records)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

pub fn write_coeffs<W: Write>(w: &mut W, v: &CoeffVec) -> io::Result<()> {
    writeln!(w, "{COEFFS_HEADER}")?;
    for (j, c) in v.coeffs().iter().enumerate() {
        writeln!(w, "{j},{c}")?;
    }
    Ok(())
}

pub fn write_coeffs_csv(path: &Path, v: &CoeffVec) -> Result<(), StoreError> {
    let mut w = create(path)?;
    write_coeffs(&mut w, v)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_reports<W: Write>(w: &mut W, reports: &[SymmetryReport]) -> io::Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            r.c_k,
            r.n_k,
            r.count_pos,
            r.count_neg,
            opt(r.hausdorff_full),
            opt(r.hausdorff_trimmed),
            r.trim,
            r.degenerate
        )?;
    }
    Ok(())
}

pub fn write_report_csv(path: &Path, reports: &[SymmetryReport]) -> Result<(), StoreError> {
    let mut w = create(path)?;
    write_reports(&mut w, reports)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

/// Contents of a CSV produced by `first` or `census`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dataset {
    /// A zero-byte file.
    Empty,
    First(Vec<FirstAppearanceRecord>),
    Census(Vec<CensusRow>),
}

impl Dataset {
    pub fn points(&self) -> PointSet {
        match self {
            Dataset::Empty => PointSet::new(),
            Dataset::First(r) => points_of_records(r),
            Dataset::Census(r) => points_of_rows(r),
        }
    }

    /// `A_k` (first `k` records) or `B_k` (rows with `n <= k`).
    pub fn points_upto(&self, k: u64) -> PointSet {
        match self {
            Dataset::Empty => PointSet::new(),
            Dataset::First(r) => points_of_records(&r[..r.len().min(k as usize)]),
            Dataset::Census(r) => {
                let end = r.partition_point(|row| row.n <= k);
                points_of_rows(&r[..end])
            }
        }
    }
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    line: u64,
    rec: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T, StoreError> {
    let raw = rec.get(idx).unwrap_or("");
    raw.parse().map_err(|_| StoreError::Malformed {
        path: path.to_path_buf(),
        line,
        msg: format!("field `{name}` is not an integer: {raw:?}"),
    })
}

/// Reads a set-A or set-B CSV, choosing the format from the header line.
pub fn read_dataset(path: &Path) -> Result<Dataset, StoreError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    if bytes.is_empty() {
        return Ok(Dataset::Empty);
    }
    let malformed = |line: u64, msg: String| StoreError::Malformed {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(bytes.as_slice());
    let mut records = rdr.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(malformed(1, e.to_string())),
        None => return Ok(Dataset::Empty),
    };
    let header = header.iter().collect::<Vec<_>>().join(",");
    if header == FIRST_HEADER {
        let mut out: Vec<FirstAppearanceRecord> = Vec::new();
        for rec in records {
            let rec =
                rec.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != 3 {
                return Err(malformed(
                    line,
                    format!("expected 3 fields, found {}", rec.len()),
                ));
            }
            let r = FirstAppearanceRecord {
                ordinal: parse_field(path, line, &rec, 0, "ordinal")?,
                c: parse_field(path, line, &rec, 1, "c")?,
                n: parse_field(path, line, &rec, 2, "n")?,
            };
            if r.ordinal != out.len() as u64 + 1 {
                return Err(malformed(
                    line,
                    format!("ordinal {} out of sequence", r.ordinal),
                ));
            }
            if r.c.unsigned_abs() <= 1 || r.n == 0 {
                return Err(malformed(
                    line,
                    format!("({}, {}) is not a nontrivial point", r.c, r.n),
                ));
            }
            out.push(r);
        }
        Ok(Dataset::First(out))
    } else if header == CENSUS_HEADER {
        let mut rows: Vec<CensusRow> = Vec::new();
        let mut last: Option<(u64, i64)> = None;
        for rec in records {
            let rec =
                rec.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != 2 {
                return Err(malformed(
                    line,
                    format!("expected 2 fields, found {}", rec.len()),
                ));
            }
            let n: u64 = parse_field(path, line, &rec, 0, "n")?;
            let c: i64 = parse_field(path, line, &rec, 1, "c")?;
            if c.unsigned_abs() <= 1 || n == 0 {
                return Err(malformed(
                    line,
                    format!("({c}, {n}) is not a nontrivial point"),
                ));
            }
            if last.is_some_and(|prev| prev >= (n, c)) {
                return Err(malformed(line, "rows not strictly sorted by (n, c)".into()));
            }
            last = Some((n, c));
            match rows.last_mut() {
                Some(row) if row.n == n => row.values.push(c),
                _ => rows.push(CensusRow { n, values: vec![c] }),
            }
        }
        Ok(Dataset::Census(rows))
    } else {
        Err(malformed(1, format!("unrecognized header {header:?}")))
    }
}

pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub scanned_to: u64,
    pub engine: String,
    pub rows: u64,
    pub sha256: String,
}

impl Manifest {
    pub fn render(&self) -> String {
        format!(
            "engine={}\nscanned_to={}\nrows={}\nsha256={}\n",
            self.engine, self.scanned_to, self.rows, self.sha256
        )
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self, StoreError> {
        let mismatch = |msg: String| StoreError::Manifest {
            path: path.to_path_buf(),
            msg,
        };
        let (mut engine, mut scanned_to, mut rows, mut sha) = (None, None, None, None);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| mismatch(format!("unparseable line {line:?}")))?;
            let num = || {
                value
                    .parse::<u64>()
                    .map_err(|_| mismatch(format!("bad {key} {value:?}")))
            };
            match key {
                "engine" => engine = Some(value.to_string()),
                "scanned_to" => scanned_to = Some(num()?),
                "rows" => rows = Some(num()?),
                "sha256" => sha = Some(value.to_string()),
                other => return Err(mismatch(format!("unknown key {other:?}"))),
            }
        }
        Ok(Manifest {
            engine: engine.ok_or_else(|| mismatch("missing engine".into()))?,
            scanned_to: scanned_to.ok_or_else(|| mismatch("missing scanned_to".into()))?,
            rows: rows.ok_or_else(|| mismatch("missing rows".into()))?,
            sha256: sha.ok_or_else(|| mismatch("missing sha256".into()))?,
        })
    }
}

fn digest_file(path: &Path) -> Result<(String, u64), StoreError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let rows = bytes
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        .saturating_sub(1) as u64;
    Ok((hex::encode(Sha256::digest(&bytes)), rows))
}

fn write_manifest(csv: &Path, scanned_to: u64) -> Result<Manifest, StoreError> {
    let (sha256, rows) = digest_file(csv)?;
    let manifest = Manifest {
        scanned_to,
        engine: ENGINE_VERSION.to_string(),
        rows,
        sha256,
    };
    let mpath = manifest_path(csv);
    fs::write(&mpath, manifest.render()).map_err(io_err(&mpath))?;
    Ok(manifest)
}

/// Loads and validates the manifest of an existing census CSV.
pub fn load_manifest(csv: &Path) -> Result<Manifest, StoreError> {
    let mpath = manifest_path(csv);
    let text = fs::read_to_string(&mpath).map_err(io_err(&mpath))?;
    let manifest = Manifest::parse(&mpath, &text)?;
    let mismatch = |msg: String| StoreError::Manifest {
        path: mpath.clone(),
        msg,
    };
    if manifest.engine != ENGINE_VERSION {
        return Err(mismatch(format!(
            "engine {:?} differs from {ENGINE_VERSION:?}",
            manifest.engine
        )));
    }
    let (sha256, rows) = digest_file(csv)?;
    if sha256 != manifest.sha256 || rows != manifest.rows {
        return Err(mismatch(
            "CSV contents do not match recorded checksum".into(),
        ));
    }
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRun {
    /// First index scanned in this run; `None` if nothing was left to scan.
    pub scanned_from: Option<u64>,
    pub scanned_to: u64,
    pub new_rows: usize,
    pub manifest: Manifest,
}

/// Writes the set-B census up to `n_limit` to `path`. With `resume`, an
/// existing file whose manifest checks out is extended instead of rebuilt.
pub fn run_census(
    census: &Census,
    path: &Path,
    n_limit: u64,
    resume: bool,
) -> Result<CensusRun, StoreError> {
    if resume && path.exists() {
        let manifest = load_manifest(path)?;
        if n_limit <= manifest.scanned_to {
            return Ok(CensusRun {
                scanned_from: None,
                scanned_to: manifest.scanned_to,
                new_rows: 0,
                manifest,
            });
        }
        let from = manifest.scanned_to + 1;
        let rows = census.scan_range(from, n_limit)?;
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        write_census_rows(&mut w, &rows)
            .and_then(|_| w.flush())
            .map_err(io_err(path))?;
        drop(w);
        let manifest = write_manifest(path, n_limit)?;
        return Ok(CensusRun {
            scanned_from: Some(from),
            scanned_to: n_limit,
            new_rows: rows.len(),
            manifest,
        });
    }
    let rows = census.scan(n_limit)?;
    write_census_csv(path, &rows)?;
    let manifest = write_manifest(path, n_limit)?;
    Ok(CensusRun {
        scanned_from: Some(1),
        scanned_to: n_limit,
        new_rows: rows.len(),
        manifest,
    })
}
