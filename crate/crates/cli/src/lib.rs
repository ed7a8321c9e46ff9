//! Command-line front end: `coeffs`, `verify`, `census`, `first`, `plot`,
//! `symmetry`.
//!
//! Exit statuses are listed in [`exit`].

use std::collections::BTreeMap;
use std::env;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use cyclophi::census::{self, Census, RecheckEngine, ScanStatus};
use cyclophi::coeff::{self, CoeffVec};
use cyclophi::exec::Executor;
use cyclophi::newton;
use cyclophi::plot::scatter_svg;
use cyclophi::store::{self, Dataset, StoreError};
use cyclophi::symmetry::{self, DEFAULT_TRIM};
use cyclophi::Error;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Bad arguments (also what clap uses for parse failures).
    pub const USAGE: i32 = 2;
    /// `first` exhausted `--n-limit` before finding `k` points.
    pub const INCOMPLETE: i32 = 3;
    /// A coefficient did not fit the engine's integer width.
    pub const OVERFLOW: i32 = 4;
    /// A theorem check or an engine cross-check failed.
    pub const VERIFY_FAILED: i32 = 5;
    pub const IO: i32 = 6;
    /// A census manifest is missing, stale, or does not match its CSV.
    pub const MANIFEST: i32 = 7;
    /// An input CSV could not be parsed.
    pub const MALFORMED: i32 = 8;
}

/// Environment variable naming the cache directory for default output paths.
pub const CACHE_ENV: &str = "CYCLOPHI_CACHE_DIR";
pub const DEFAULT_CACHE: &str = ".cyclophi-cache";

#[derive(Debug, Parser)]
#[command(
    name = "cyclophi",
    version,
    about = "Cyclotomic polynomial coefficient toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Series,
    Division,
    /// Series engine, cross-checked against long division for n <= 2000.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecheckChoice {
    Series,
    Division,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    ScatterA,
    ScatterB,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the coefficient list of Phi_n as CSV and summarize it.
    Coeffs {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineChoice,
        /// Defaults to `<cache>/coeffs_<n>.csv`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the coefficient range guaranteed for Phi_2n, n = product of the primes.
    Verify {
        #[arg(required = true, value_parser = clap::value_parser!(u64).range(1..))]
        primes: Vec<u64>,
    },
    /// Build (or extend) the CSV of all nontrivial coefficient points (c, n), n <= N.
    Census {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n_limit: u64,
        /// 0 = one per core, 1 = sequential.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        resume: bool,
        /// Defaults to `<cache>/census_b.csv`.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Recompute every row directly with the chosen engine and compare.
        #[arg(long, value_enum)]
        recheck_with: Option<RecheckChoice>,
    },
    /// List the first k first-appearance points in enumeration order.
    First {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, default_value_t = 500_000, value_parser = clap::value_parser!(u64).range(1..))]
        n_limit: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render a CSV from `first` or `census` as an SVG scatter plot.
    Plot {
        input: PathBuf,
        /// Must match the CSV header when given.
        #[arg(long, value_enum)]
        kind: Option<PlotKind>,
        /// Plot only A_k (first k points) or B_k (n <= k).
        #[arg(long)]
        cutoff: Option<u64>,
        #[arg(long)]
        title: Option<String>,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Hausdorff symmetry diagnostics of a `first` or `census` CSV at the given cutoffs.
    Symmetry {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        cutoffs: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_TRIM)]
        trim: f64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A failed command: exit status plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow { .. } => exit::OVERFLOW,
            Error::InexactDivision { .. } => exit::VERIFY_FAILED,
            _ => exit::USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let code = match &e {
            StoreError::Engine(inner) => return Failure::from(inner.clone()),
            StoreError::Io { .. } => exit::IO,
            StoreError::Malformed { .. } => exit::MALFORMED,
            StoreError::Manifest { .. } => exit::MANIFEST,
        };
        Failure::new(code, e.to_string())
    }
}

fn io_failure(what: &Path, e: io::Error) -> Failure {
    Failure::new(exit::IO, format!("I/O error on {}: {e}", what.display()))
}

pub type CmdResult = Result<(), Failure>;

pub fn cache_dir() -> PathBuf {
    env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(()) => exit::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {f}");
            f.code
        }
    }
}

pub fn dispatch<W: Write>(command: Command, out: &mut W) -> CmdResult {
    match command {
        Command::Coeffs { n, engine, output } => {
            let path = output.unwrap_or_else(|| cache_dir().join(format!("coeffs_{n}.csv")));
            cmd_coeffs(n, engine, &path, out)
        }
        Command::Verify { primes } => cmd_verify(&primes, out),
        Command::Census {
            n_limit,
            workers,
            resume,
            output,
            recheck_with,
        } => {
            let path = output.unwrap_or_else(|| cache_dir().join("census_b.csv"));
            cmd_census(n_limit, workers, resume, &path, recheck_with, out)
        }
        Command::First {
            k,
            n_limit,
            workers,
            output,
        } => cmd_first(k, n_limit, workers, output.as_deref(), out),
        Command::Plot {
            input,
            kind,
            cutoff,
            title,
            output,
        } => cmd_plot(&input, kind, cutoff, title, output.as_deref(), out),
        Command::Symmetry {
            input,
            cutoffs,
            trim,
            workers,
            output,
        } => cmd_symmetry(&input, &cutoffs, trim, workers, output.as_deref(), out),
    }
}

fn emit<W: Write>(out: &mut W, text: fmt::Arguments<'_>) -> CmdResult {
    out.write_fmt(text)
        .map_err(|e| Failure::new(exit::IO, format!("cannot write output: {e}")))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_coeffs<W: Write>(n: u64, engine: EngineChoice, path: &Path, out: &mut W) -> CmdResult {
    if n == 0 {
        return Err(Failure::new(exit::USAGE, "n must be positive"));
    }
    let v: CoeffVec = match engine {
        EngineChoice::Series => coeff::phi_poly_series(n)?,
        EngineChoice::Division => coeff::phi_poly_division(n)?,
        EngineChoice::Auto => {
            let v = coeff::phi_poly_series(n)?;
            if n <= 2000 && coeff::phi_poly_division(n)? != v {
                return Err(Failure::new(
                    exit::VERIFY_FAILED,
                    format!("series and division engines disagree on Phi_{n}"),
                ));
            }
            v
        }
    };
    store::write_coeffs_csv(path, &v)?;
    emit(
        out,
        format_args!(
            "n: {n}\ndegree: {}\nvalues: {}\nmax_abs: {}\nwritten: {}\n",
            v.degree(),
            join(v.value_set()),
            v.max_abs(),
            path.display()
        ),
    )
}

pub fn cmd_verify<W: Write>(primes: &[u64], out: &mut W) -> CmdResult {
    let rep = newton::verify_theorem_main(primes)?;
    let witnesses = rep
        .witness
        .iter()
        .map(|(v, e)| format!("{v}@x^{e}"))
        .collect::<Vec<_>>()
        .join(" ");
    emit(
        out,
        format_args!(
            "n: {} (Phi_{} inspected)\nprimes: {}\nt: {}\nr: {}\nguaranteed: {}\nextra_minus: {}\nwitnesses: {}\nverified: {}\n",
            rep.n,
            2 * rep.n as u128,
            join(&rep.primes),
            rep.t,
            rep.r,
            join(&rep.guaranteed),
            rep.extra_minus,
            witnesses,
            rep.verified
        ),
    )?;
    if rep.verified {
        Ok(())
    } else {
        Err(Failure::new(
            exit::VERIFY_FAILED,
            format!(
                "no witness for {} in Phi_{}",
                join(&rep.missing),
                2 * rep.n as u128
            ),
        ))
    }
}

pub fn cmd_census<W: Write>(
    n_limit: u64,
    workers: usize,
    resume: bool,
    path: &Path,
    recheck: Option<RecheckChoice>,
    out: &mut W,
) -> CmdResult {
    let census = Census::new(Executor::with_workers(workers));
    let run = store::run_census(&census, path, n_limit, resume)?;
    match run.scanned_from {
        Some(from) => emit(
            out,
            format_args!(
                "scanned: {from}..={}\nnew_rows: {}\n",
                run.scanned_to, run.new_rows
            ),
        )?,
        None => emit(
            out,
            format_args!("scanned: nothing new (already at {})\n", run.scanned_to),
        )?,
    }
    emit(
        out,
        format_args!(
            "points: {}\nsha256: {}\nwritten: {}\n",
            run.manifest.rows,
            run.manifest.sha256,
            path.display()
        ),
    )?;
    if let Some(choice) = recheck {
        let engine = match choice {
            RecheckChoice::Series => RecheckEngine::Series,
            RecheckChoice::Division => RecheckEngine::Division,
        };
        let expected = census::recheck_rows(census.executor(), engine, n_limit)?;
        let stored = match store::read_dataset(path)? {
            Dataset::Census(rows) => rows,
            Dataset::Empty | Dataset::First(_) => Vec::new(),
        };
        let stored: Vec<_> = stored.into_iter().filter(|r| r.n <= n_limit).collect();
        if stored != expected {
            let first_diff = stored
                .iter()
                .zip(&expected)
                .find(|(a, b)| a != b)
                .map_or_else(|| "row count".to_string(), |(a, _)| format!("n = {}", a.n));
            return Err(Failure::new(
                exit::VERIFY_FAILED,
                format!("recheck with {choice:?} engine disagrees at {first_diff}"),
            ));
        }
        emit(
            out,
            format_args!("recheck: {choice:?} engine agrees on n <= {n_limit}\n"),
        )?;
    }
    Ok(())
}

pub fn cmd_first<W: Write>(
    k: u64,
    n_limit: u64,
    workers: usize,
    output: Option<&Path>,
    out: &mut W,
) -> CmdResult {
    let census = Census::new(Executor::with_workers(workers));
    let found = census.first_appearances(k as usize, n_limit)?;
    match output {
        Some(path) => store::write_first_csv(path, &found.records)?,
        None => store::write_first(out, &found.records)
            .map_err(|e| Failure::new(exit::IO, format!("cannot write output: {e}")))?,
    }
    match found.status {
        ScanStatus::Complete => Ok(()),
        ScanStatus::Incomplete { scanned_to } => Err(Failure::new(
            exit::INCOMPLETE,
            format!(
                "incomplete: found {} of {k} points with n <= {scanned_to}",
                found.records.len()
            ),
        )),
    }
}

fn write_text<W: Write>(output: Option<&Path>, text: &str, out: &mut W) -> CmdResult {
    match output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
            }
            fs::write(path, text).map_err(|e| io_failure(path, e))
        }
        None => emit(out, format_args!("{text}")),
    }
}

pub fn cmd_plot<W: Write>(
    input: &Path,
    kind: Option<PlotKind>,
    cutoff: Option<u64>,
    title: Option<String>,
    output: Option<&Path>,
    out: &mut W,
) -> CmdResult {
    let data = store::read_dataset(input)?;
    let (label, detected) = match &data {
        Dataset::Empty => ("", None),
        Dataset::First(_) => ("A", Some(PlotKind::ScatterA)),
        Dataset::Census(_) => ("B", Some(PlotKind::ScatterB)),
    };
    if let (Some(want), Some(have)) = (kind, detected) {
        if want != have {
            return Err(Failure::new(
                exit::USAGE,
                format!(
                    "--kind {want:?} does not match the {have:?} data in {}",
                    input.display()
                ),
            ));
        }
    }
    let label = match (label, kind) {
        ("", Some(PlotKind::ScatterA)) => "A",
        ("", Some(PlotKind::ScatterB)) => "B",
        (l, _) => l,
    };
    let points = match cutoff {
        Some(k) => data.points_upto(k),
        None => data.points(),
    };
    let title = title.unwrap_or_else(|| match cutoff {
        Some(k) => format!("{label}_{k}"),
        None => label.to_string(),
    });
    write_text(output, &scatter_svg(&points, &title), out)
}

pub fn cmd_symmetry<W: Write>(
    input: &Path,
    cutoffs: &[u64],
    trim: f64,
    workers: usize,
    output: Option<&Path>,
    out: &mut W,
) -> CmdResult {
    if cutoffs.is_empty() || cutoffs.contains(&0) {
        return Err(Failure::new(exit::USAGE, "cutoffs must be positive"));
    }
    let data = store::read_dataset(input)?;
    let by_cutoff: BTreeMap<u64, _> = cutoffs.iter().map(|&k| (k, data.points_upto(k))).collect();
    let reports = symmetry::symmetry_series(&by_cutoff, trim, &Executor::with_workers(workers))?;
    let mut buf = Vec::new();
    store::write_reports(&mut buf, &reports).expect("writing to memory");
    write_text(output, &String::from_utf8(buf).expect("ASCII CSV"), out)?;
    for r in &reports {
        if let Some(ratio) = r.trimmed_ratio {
            eprintln!("k = {}: trimmed ratio to first cutoff = {ratio}", r.k);
        } else if r.degenerate {
            eprintln!("k = {}: degenerate (one sign class empty)", r.k);
        }
    }
    Ok(())
}
