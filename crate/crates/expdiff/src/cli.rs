//! Command-line interface.
//!
//! Exit codes: 0 for a completed computation (a no-solution answer is an
//! answer), 1 for a failed verification or a solver/oracle disagreement,
//! 2 for malformed input.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::form::BilinearForm;
use crate::oracle::oracle_agrees;
use crate::scalar::{FieldTag, Scalar};
use crate::solver::{solve_matrix, SolutionSet, Witness};
use crate::verifier::{verify, Candidate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "expdiff",
    version,
    about = "Solve and verify f(x+y) = f(x)f(y) - phi(x,y) for bilinear forms phi(x,y) = x^T M y"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the solution set of the equation for a given form
    Solve(SolveArgs),
    /// Check a candidate function against a form
    Verify(VerifyArgs),
    /// Re-derive the solution set with the brute-force oracle and compare
    Oracle(OracleArgs),
    /// Solver/oracle agreement sweep over an exhaustive small-matrix corpus
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for FieldTag {
    fn from(f: FieldArg) -> FieldTag {
        match f {
            FieldArg::Real => FieldTag::Real,
            FieldArg::Complex => FieldTag::Complex,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Text,
    Json,
}

/// Exactly one input source per invocation.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct InputSource {
    /// Scalar coefficient for the form phi(x, y) = alpha * x * y.
    /// Integers and fractions are exact; decimals are floating.
    #[arg(long, value_name = "SCALAR")]
    pub alpha: Option<String>,
    /// Path to a form as JSON: {"field": "real"|"complex", "dim": n,
    /// "entries": [[..], ..]}
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputSource,
    /// Field for --alpha (ignored for --matrix, which carries its own)
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    /// Relative tolerance for floating-backend decisions
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    pub output: OutputMode,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputSource,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    /// Path to the candidate as JSON, e.g.
    /// {"kind": "affine", "w": ["2"], "c": "1"}
    #[arg(long, value_name = "PATH")]
    pub candidate: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Sample count for the randomized paths
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed for the deterministic sample generator
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    pub output: OutputMode,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputSource,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    pub output: OutputMode,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Corpus dimension (1 or 2)
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Corpus entries range over the integers [-bound, bound]
    #[arg(long, default_value_t = 2)]
    pub bound: i64,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    pub output: OutputMode,
    /// Test hook: report an artificial disagreement
    #[arg(long, hide = true)]
    pub inject_bug: bool,
}

#[derive(Debug)]
struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError(e.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {what} file `{}`: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError(format!("invalid {what} JSON in `{}`: {e}", path.display())))
}

fn load_form(input: &InputSource, field: FieldArg) -> Result<BilinearForm, CliError> {
    match (&input.alpha, &input.matrix) {
        (Some(alpha), None) => {
            let alpha = Scalar::from_str(alpha)?;
            let tag = FieldTag::from(field);
            if tag.is_real() && !alpha.is_real() {
                return Err(CliError(
                    "--field real cannot take a complex --alpha".into(),
                ));
            }
            Ok(BilinearForm::from_scalar(alpha, tag)?)
        }
        (None, Some(path)) => read_json(path, "matrix"),
        _ => Err(CliError("exactly one of --alpha and --matrix".into())),
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError("--tol must be a positive number".into()))
    }
}

fn scalar_coeff_text(s: &Scalar) -> String {
    if s.is_real() {
        let neg = match s.exact_parts() {
            Some((re, _)) => num_traits::Signed::is_negative(re),
            None => s.re_f64() < 0.0,
        };
        if neg {
            format!("- {}x", -s)
        } else {
            format!("+ {s}x")
        }
    } else {
        format!("+ ({s})x")
    }
}

fn solution_text(sol: &SolutionSet) -> String {
    match sol {
        SolutionSet::TwoAffine {
            plus,
            minus,
            params,
        } => {
            let mut out = if plus.dim() == 1 {
                format!(
                    "two solutions: f(x) = 1 {}, f(x) = 1 {}",
                    scalar_coeff_text(plus.w().get(0)),
                    scalar_coeff_text(minus.w().get(0)),
                )
            } else {
                format!(
                    "two solutions: f(x) = w.x + 1 with w = {} or w = {}",
                    plus.w(),
                    minus.w(),
                )
            };
            if let Some(p) = params {
                out.push_str(&format!("\nparametrization: a = {}, z0 = {}", p.a, p.z0));
            }
            out
        }
        SolutionSet::NoSolution { reason, witness } => {
            let witness_text = match witness {
                Some(Witness::Pair([i, j])) => format!("; witness entries ({i}, {j})"),
                Some(Witness::Vector(z0)) => format!("; witness z0 = {z0}"),
                None => String::new(),
            };
            format!("no solution ({reason}{witness_text})")
        }
        SolutionSet::ExponentialFamily(d) => {
            format!("exponential family: {}", d.note)
        }
    }
}

fn run_solve(args: &SolveArgs) -> Result<i32, CliError> {
    check_tol(args.tol)?;
    let m = load_form(&args.input, args.field)?;
    let sol = solve_matrix(&m, args.tol);
    match args.output {
        OutputMode::Json => println!("{}", serde_json::to_string(&sol).expect("serializable")),
        OutputMode::Text => println!("{}", solution_text(&sol)),
    }
    Ok(EXIT_OK)
}

fn run_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    check_tol(args.tol)?;
    if args.samples == 0 {
        return Err(CliError("--samples must be at least 1".into()));
    }
    let m = load_form(&args.input, args.field)?;
    let candidate: Candidate = read_json(&args.candidate, "candidate")?;
    if let Some(d) = candidate.dim() {
        if d != m.dim() {
            return Err(CliError(format!(
                "candidate dimension {d} does not match form dimension {}",
                m.dim()
            )));
        }
    }
    if m.field().is_real() && !candidate.is_real_valued() {
        return Err(CliError(
            "real-field form cannot be checked against a complex-valued candidate".into(),
        ));
    }
    let report = verify(&candidate, &m, args.samples, args.seed, args.tol);
    match args.output {
        OutputMode::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
        OutputMode::Text => {
            if report.passed {
                println!(
                    "verification passed: max relative residual {} over {} pairs",
                    report.max_residual, report.samples
                );
            } else {
                let pair = report.failing_pair.as_ref().expect("present on failure");
                println!(
                    "verification FAILED: residual {} at x = {}, y = {} (max relative residual {} over {} pairs)",
                    pair.residual, pair.x, pair.y, report.max_residual, report.samples
                );
            }
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
}

/// Oracle outcome: the solution set plus an `"oracle": true` marker and the
/// agreement verdict.
#[derive(Serialize, Deserialize)]
struct OracleReport {
    oracle: bool,
    agrees: bool,
    #[serde(flatten)]
    outcome: SolutionSet,
}

fn run_oracle(args: &OracleArgs) -> Result<i32, CliError> {
    check_tol(args.tol)?;
    let m = load_form(&args.input, args.field)?;
    let agrees = oracle_agrees(&m)?;
    let report = OracleReport {
        oracle: true,
        agrees,
        outcome: solve_matrix(&m, args.tol),
    };
    match args.output {
        OutputMode::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
        OutputMode::Text => {
            if agrees {
                println!("oracle agrees: {}", solution_text(&report.outcome));
            } else {
                println!(
                    "oracle DISAGREES: solver says {}",
                    solution_text(&report.outcome)
                );
            }
        }
    }
    Ok(if agrees { EXIT_OK } else { EXIT_FAILED })
}

/// All symmetric `dim x dim` integer matrices with entries in
/// `[-bound, bound]`.
pub fn sweep_corpus(dim: usize, bound: i64) -> Vec<BilinearForm> {
    assert!(dim == 1 || dim == 2);
    let range = -bound..=bound;
    match dim {
        1 => range
            .map(|a| BilinearForm::from_int_rows(FieldTag::Real, &[&[a]]))
            .collect(),
        _ => {
            let mut out = Vec::new();
            for a in range.clone() {
                for b in range.clone() {
                    for d in range.clone() {
                        out.push(BilinearForm::from_int_rows(
                            FieldTag::Real,
                            &[&[a, b], &[b, d]],
                        ));
                    }
                }
            }
            out
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SweepReport {
    dim: usize,
    bound: i64,
    total: usize,
    agreed: usize,
    disagreements: Vec<BilinearForm>,
}

fn run_sweep(args: &SweepArgs) -> Result<i32, CliError> {
    if args.dim != 1 && args.dim != 2 {
        return Err(CliError("--dim must be 1 or 2".into()));
    }
    if args.bound < 0 {
        return Err(CliError("--bound must be nonnegative".into()));
    }
    let corpus = sweep_corpus(args.dim, args.bound);
    let mut disagreements = Vec::new();
    for m in &corpus {
        if !oracle_agrees(m)? {
            disagreements.push(m.clone());
        }
    }
    if args.inject_bug {
        disagreements.push(corpus[0].clone());
    }
    let report = SweepReport {
        dim: args.dim,
        bound: args.bound,
        total: corpus.len(),
        agreed: corpus.len() - disagreements.len() + usize::from(args.inject_bug),
        disagreements,
    };
    match args.output {
        OutputMode::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
        OutputMode::Text => {
            println!(
                "{}/{} matrices agree (dim {}, entries in [{}, {}])",
                report.total - report.disagreements.len(),
                report.total,
                report.dim,
                -report.bound,
                report.bound
            );
            for m in &report.disagreements {
                println!("disagreement: {m}");
            }
        }
    }
    Ok(if report.disagreements.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

/// Parses `std::env::args` and runs; clap itself exits with code 2 on
/// malformed flags, matching the input-error contract.
pub fn main_entry() -> i32 {
    run(Cli::parse())
}
