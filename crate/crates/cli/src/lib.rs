//! The `polysolve` command line: root counts, solving, Gröbner bases,
//! Lagrange systems and the bundled demos.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use polysolve_core::groebner::{buchberger, eliminate, GroebnerError};
use polysolve_core::homotopy::{solve_homotopy, trace_csv, HomotopyError, PathStatus, TrackerConfig};
use polysolve_core::macaulay::{dump_csv, quotient_basis, solve_eigen, solve_with_basis, EigenConfig, MacaulayError};
use polysolve_core::poly::{format_polynomial, parse_system, ParseError};
use polysolve_core::root_counts::{count_report, RootCountError, RootCountReport};
use polysolve_core::solution::{matching_distance, Provenance, Solution, SolutionSet};
use polysolve_core::{Complex, MonomialOrder, OrderKind, PolyError, PolySystem, Polynomial, Rational};

pub mod demo;
pub mod lagrange;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    RootCount(#[from] RootCountError),
    #[error(transparent)]
    Macaulay(#[from] MacaulayError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("{0} expectation(s) not met")]
    Mismatch(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Input(_) | CliError::Poly(_) => EXIT_PARSE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_NUMERICAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polysolve", version, about = "Solve systems of polynomial equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bézout, Kushnirenko and BKK root counts.
    Count {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Numerical solutions of a square system.
    Solve(SolveArgs),
    /// Reduced Gröbner basis, one generator per line.
    Groebner {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Grevlex)]
        order: Order,
        /// Keep only generators in the first J variables (lex elimination).
        #[arg(long, value_name = "J")]
        eliminate: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Critical-point system of an objective (first polynomial) under
    /// equality constraints (remaining polynomials).
    Lagrange {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Worked examples with their expected results.
    Demo {
        #[arg(value_enum)]
        name: demo::DemoName,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Eigen,
    Homotopy,
    GroebnerEigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Lex,
    Grlex,
    Grevlex,
}

impl Order {
    fn kind(self) -> OrderKind {
        match self {
            Order::Lex => OrderKind::Lex,
            Order::Grlex => OrderKind::Grlex,
            Order::Grevlex => OrderKind::Grevlex,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Eigen)]
    pub method: Method,
    /// Residual tolerance for accepting a solution.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    /// Write the Macaulay matrix, its reduction and the multiplication
    /// matrices as CSV (to stdout when no file is given).
    #[arg(long, value_name = "FILE", num_args = 0..=1)]
    pub dump_macaulay: Option<Option<PathBuf>>,
    /// Write per-step path data as CSV (homotopy only).
    #[arg(long, value_name = "FILE")]
    pub trace_paths: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Where a JSON record came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Origin {
    Eigen(usize),
    Path(usize),
}

/// One solution as written by `solve --json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    /// `[re, im]` per coordinate.
    pub coordinates: Vec<[f64; 2]>,
    pub residual: f64,
    pub is_real: bool,
    pub provenance: Origin,
}

impl From<&Solution> for SolutionRecord {
    fn from(s: &Solution) -> Self {
        SolutionRecord {
            coordinates: s.coordinates.iter().map(|z| [z.re, z.im]).collect(),
            residual: s.residual,
            is_real: s.is_real,
            provenance: match s.provenance {
                Provenance::Eigen(i) => Origin::Eigen(i),
                Provenance::Path(i) => Origin::Path(i),
            },
        }
    }
}

impl SolutionRecord {
    pub fn point(&self) -> Vec<Complex> {
        self.coordinates.iter().map(|&[re, im]| Complex::new(re, im)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub bezout: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kushnirenko: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bkk: Option<u128>,
}

impl From<&RootCountReport> for CountRecord {
    fn from(r: &RootCountReport) -> Self {
        CountRecord { bezout: r.bezout, kushnirenko: r.kushnirenko, bkk: r.bkk }
    }
}

pub fn read_system(path: &Path) -> Result<PolySystem<Rational>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_system(&text)
        .map(|f| f.system)
        .map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn format_f64(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn format_complex(z: Complex) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", format_f64(z.re), format_f64(-z.im))
    } else {
        format!("{}+{}i", format_f64(z.re), format_f64(z.im))
    }
}

pub fn solutions_text(set: &SolutionSet, vars: &[String]) -> String {
    let mut out = format!("{} solutions\n", set.len());
    for s in &set.solutions {
        let coords: Vec<String> = vars.iter().zip(&s.coordinates).map(|(v, z)| format!("{v} = {}", format_complex(*z))).collect();
        out.push_str(&format!(
            "{}  residual {:.2e}{}\n",
            coords.join(", "),
            s.residual,
            if s.is_real { "  real" } else { "" }
        ));
    }
    out
}

pub fn records(set: &SolutionSet) -> Vec<SolutionRecord> {
    set.solutions.iter().map(SolutionRecord::from).collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Solutions by the requested method. The returned string holds a Macaulay
/// dump when one was requested without a file.
pub fn solve_system(
    system: &PolySystem<Rational>,
    args: &SolveArgs,
    log: &mut dyn Write,
) -> Result<(SolutionSet, Option<String>), CliError> {
    let eigen = EigenConfig { seed: args.seed, residual_tol: args.tol, ..EigenConfig::default() };
    let mut dump = None;
    if let Some(target) = &args.dump_macaulay {
        match quotient_basis(system, eigen.max_extra_degree) {
            Ok(r) => {
                let csv = dump_csv(&r);
                match target {
                    Some(path) => write_file(path, &csv)?,
                    None => dump = Some(csv),
                }
            }
            Err(e @ (MacaulayError::Inconsistent | MacaulayError::NotZeroDimensional { .. })) => {
                let _ = writeln!(log, "no Macaulay dump: {e}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    let set = match args.method {
        Method::Eigen => solve_eigen(system, &eigen)?,
        Method::GroebnerEigen => {
            let gb = buchberger(system, &MonomialOrder::grevlex(system.nvars()))?;
            if gb.is_unit() {
                SolutionSet::default()
            } else {
                solve_with_basis(system, &gb.quotient_basis()?, &eigen)?
            }
        }
        Method::Homotopy => {
            let cfg = TrackerConfig {
                seed: args.seed,
                residual_tol: args.tol,
                record_trace: args.trace_paths.is_some(),
                ..TrackerConfig::default()
            };
            let run = solve_homotopy(system, &cfg)?;
            if let Some(path) = &args.trace_paths {
                write_file(path, &trace_csv(&run.paths, system.vars()))?;
            }
            let _ = writeln!(
                log,
                "{} paths: {} converged, {} diverged, {} failed",
                run.paths.len(),
                run.count(PathStatus::Converged),
                run.count(PathStatus::Diverged),
                run.count(PathStatus::Failed)
            );
            run.solutions
        }
    };
    for w in &set.warnings {
        let _ = writeln!(log, "warning: {w}");
    }
    Ok((set, dump))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => write_file(path, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source }),
    }
}

fn run_command(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Count { file, json } => {
            let system = read_system(&file)?;
            let report = count_report(&system)?;
            let text = if json {
                to_json(&CountRecord::from(&report))
            } else {
                let mut t = format!("bezout: {}\n", report.bezout);
                if let Some(k) = report.kushnirenko {
                    t.push_str(&format!("kushnirenko: {k}\n"));
                }
                if let Some(b) = report.bkk {
                    t.push_str(&format!("bkk: {b}\n"));
                }
                for n in &report.notes {
                    t.push_str(&format!("note: {n}\n"));
                }
                t
            };
            emit(&text, None, out)
        }
        Command::Solve(args) => {
            let system = read_system(&args.file)?;
            let (set, dump) = solve_system(&system, &args, err)?;
            if let Some(csv) = dump {
                if args.json && args.output.is_none() {
                    let _ = err.write_all(csv.as_bytes());
                } else {
                    emit(&csv, None, out)?;
                }
            }
            let text = if args.json { to_json(&records(&set)) } else { solutions_text(&set, system.vars()) };
            emit(&text, args.output.as_deref(), out)
        }
        Command::Groebner { file, order, eliminate: keep, json } => {
            let system = read_system(&file)?;
            let names = system.vars().to_vec();
            let gens: Vec<Polynomial<Rational>> = match keep {
                Some(j) => eliminate(&system, j)?,
                None => {
                    let ord = MonomialOrder::new(order.kind(), system.nvars());
                    buchberger(&system, &ord)?.generators().to_vec()
                }
            };
            let lines: Vec<String> = gens.iter().map(|g| format_polynomial(g, &names)).collect();
            let text = if json {
                to_json(&lines)
            } else {
                lines.iter().map(|l| format!("{l}\n")).collect()
            };
            emit(&text, None, out)
        }
        Command::Lagrange { file, output } => {
            let system = read_system(&file)?;
            let built = lagrange::lagrange_system(&system)?;
            emit(&lagrange::system_text(&built), output.as_deref(), out)
        }
        Command::Demo { name, json, seed } => {
            let report = demo::run_demo(name, seed)?;
            let text = if json { to_json(&report) } else { report.text() };
            emit(&text, None, out)?;
            let failed = report.checks.iter().filter(|c| !c.ok).count();
            if failed > 0 {
                return Err(CliError::Mismatch(failed));
            }
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match run_command(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Largest greedy-matching distance between two solution sets.
pub fn solution_distance(a: &SolutionSet, b: &SolutionSet) -> Option<f64> {
    matching_distance(&a.points(), &b.points())
}
