//! The `bspline` command-line tool.
//!
//! Exit codes: 0 success, 1 invariant failure (`check`), 2 invalid input,
//! 3 I/O error.

pub mod check;
pub mod spline_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::basismatrix::{cumulative_matrix, general_basis_matrix, uniform_basis_matrix, BasisMatrix};
use crate::error::Error;
use crate::scalar::{format_sig17, parse_rational, Rational, Scalar};
use crate::SpanIndex;

pub use check::{run_check, CheckConfig, CheckReport};
pub use spline_file::SplineFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn io_error(context: &str) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{context}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "bspline", version, about = "B-spline basis matrices and curve evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the basis matrix (rows = powers of u) for a degree and span.
    BasisMatrix(BasisMatrixArgs),
    /// Evaluate a spline file at one parameter value.
    Eval(EvalArgs),
    /// Sample a spline file at equally spaced parameters into CSV.
    Sample(SampleArgs),
    /// Cross-check basis matrices and evaluation paths on random input.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Coxdeboor,
    Matrix,
    Cumulative,
}

#[derive(Debug, Args)]
pub struct BasisMatrixArgs {
    #[arg(long)]
    pub degree: usize,
    /// JSON knot file (array, uniform spec, or an object with a `knots` field).
    /// Without it the uniform matrix is printed.
    #[arg(long)]
    pub knots: Option<PathBuf>,
    /// Span index j; defaults to the first non-degenerate span.
    #[arg(long)]
    pub span: Option<usize>,
    /// Print the cumulative-form matrix instead.
    #[arg(long)]
    pub cumulative: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub spline: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: String,
    #[arg(long, value_enum, default_value_t = Method::Matrix)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub spline: PathBuf,
    #[arg(long)]
    pub n: usize,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 3)]
    pub degree_max: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupt the matrices under test; the check must then fail.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// Serialized basis or cumulative matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub degree: usize,
    pub span: Option<usize>,
    pub kind: String,
    pub orientation: String,
    pub entries: Vec<Vec<String>>,
}

impl MatrixDocument {
    pub fn rationals(&self) -> Result<Vec<Vec<Rational>>, Error> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect())
            .collect()
    }
}

pub fn basis_matrix_document(args: &BasisMatrixArgs) -> Result<MatrixDocument, CliError> {
    let matrix: BasisMatrix<Rational> = match &args.knots {
        None => {
            if args.span.is_some() {
                return Err(CliError::Validation("--span requires --knots".into()));
            }
            uniform_basis_matrix(args.degree)?
        }
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(io_error(&path.display().to_string()))?;
            let kv = spline_file::parse_knots_document(&text)?;
            let span = match args.span {
                Some(j) => SpanIndex(j),
                None => kv.spans(args.degree).next().ok_or_else(|| {
                    CliError::Validation(format!("knot vector has no non-degenerate span for degree {}", args.degree))
                })?,
            };
            general_basis_matrix(&kv, args.degree, span)?
        }
    };
    let span = matrix.span().map(SpanIndex::index);
    let (kind, entries) = if args.cumulative {
        ("cumulative", cumulative_matrix(&matrix).entries().to_vec())
    } else {
        ("basis", matrix.entries().to_vec())
    };
    Ok(MatrixDocument {
        degree: args.degree,
        span,
        kind: kind.into(),
        orientation: "rows=powers".into(),
        entries: entries.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
    })
}

fn render_matrix(doc: &MatrixDocument, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(serde_json::to_string(doc).expect("matrix documents serialize") + "\n"),
        Format::Csv => {
            let span = doc.span.map_or_else(|| "uniform".to_string(), |j| j.to_string());
            let mut out = format!(
                "# degree={} span={} kind={} orientation={}\n",
                doc.degree, span, doc.kind, doc.orientation
            );
            let header: Vec<String> = (0..doc.entries.len()).map(|c| format!("c{c}")).collect();
            out.push_str(&format!("power,{}\n", header.join(",")));
            for (r, row) in doc.rationals()?.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|q| format_sig17(Scalar::to_f64(q))).collect();
                out.push_str(&format!("{r},{}\n", cells.join(",")));
            }
            Ok(out)
        }
    }
}

fn parse_tau(text: &str) -> Result<f64, CliError> {
    let tau: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("invalid tau {text:?}")))?;
    if !tau.is_finite() {
        return Err(CliError::Validation("tau outside evaluable domain: not finite".into()));
    }
    Ok(tau)
}

pub fn eval_point(args: &EvalArgs) -> Result<Vec<f64>, CliError> {
    let curve = SplineFile::read(&args.spline)?.to_curve()?;
    let tau = parse_tau(&args.tau)?;
    let point = match args.method {
        Method::Coxdeboor => curve.eval_coxdeboor(&tau),
        Method::Matrix => curve.eval_matrix(&tau),
        Method::Cumulative => curve.eval_cumulative(&tau),
    }?;
    Ok(point)
}

pub fn sample_csv(args: &SampleArgs) -> Result<String, CliError> {
    let curve = SplineFile::read(&args.spline)?.to_curve()?;
    let samples = curve.sample(args.n)?;
    let header: Vec<String> = (0..curve.dimension()).map(|i| format!("x{i}")).collect();
    let mut out = format!("tau,{}\n", header.join(","));
    for (tau, point) in samples {
        let cells: Vec<String> = std::iter::once(tau).chain(point).map(format_sig17).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout = io_error("standard output");
    match command {
        Command::BasisMatrix(args) => {
            let doc = basis_matrix_document(args)?;
            out.write_all(render_matrix(&doc, args.format)?.as_bytes()).map_err(&stdout)?;
        }
        Command::Eval(args) => {
            let point = eval_point(args)?;
            let text: Vec<String> = point.into_iter().map(format_sig17).collect();
            writeln!(out, "{}", text.join(",")).map_err(&stdout)?;
        }
        Command::Sample(args) => {
            let csv = sample_csv(args)?;
            match &args.out {
                Some(path) => std::fs::write(path, csv).map_err(io_error(&path.display().to_string()))?,
                None => out.write_all(csv.as_bytes()).map_err(&stdout)?,
            }
        }
        Command::Check(args) => {
            let report = run_check(&CheckConfig {
                degree_max: args.degree_max,
                trials: args.trials,
                seed: args.seed,
                inject_fault: args.inject_fault,
            })?;
            for d in &report.degrees {
                writeln!(
                    out,
                    "degree {:>2}: structure {} basis max rel err {:.3e} curve max rel err {:.3e} {}",
                    d.degree,
                    if d.structure_ok { "ok" } else { "FAILED" },
                    d.basis_error,
                    d.curve_error,
                    if d.passed() { "PASS" } else { "FAIL" },
                )
                .map_err(&stdout)?;
            }
            if !report.passed() {
                return Err(CliError::Invariant(format!(
                    "invariant check failed (tolerance {:e})",
                    check::CHECK_TOLERANCE
                )));
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
