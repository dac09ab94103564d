//! Command-line front end for `cfr-core`.
//!
//! ```text
//! cfr gaussian --lambda <f> --dim <i>
//! cfr hydrogenic -n <i> -l <i> -m <i> [--Z <f>] --lambda <f> [--method closed|quadrature|both]
//! cfr sweep --config <path>
//! cfr verify [all|bounds|scaling|replication|rearrangement|near-continuity|hydrogenic]
//! ```
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 divergence or
//! convergence failure, 3 verification failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use cfr_core::densities::Gaussian;
use cfr_core::hydrogenic::cfr_numeric;
use cfr_core::verify::{self, Check, Suite};
use cfr_core::{
    cfr_complexity, ComplexityReport, Density, GeneralizedGaussian, HydrogenicDensity, LambdaParam,
    MethodChoice, QuadratureSpec, QuantumNumbers,
};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

pub use config::{Format, MethodArg, RunConfig};
use config::{default_spec, parse_suites, Plan};
use output::{report_cells, Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cfr_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("verification failed: {failed} of {total} criteria did not pass")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Core(_) => 1,
            CliError::Verification { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cfr", version, about = "One-parameter Fisher-Renyi complexity of probability densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complexity of the generalized Gaussian B_lambda, the minimizer.
    Gaussian {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Complexity of a hydrogenic state (n, l, m) with nuclear charge Z.
    Hydrogenic {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'l')]
        l: u32,
        #[arg(short = 'm', allow_negative_numbers = true)]
        m: i32,
        #[arg(long = "Z", alias = "z", default_value_t = 1.0)]
        z: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a table of states and lambdas described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the property checks and report pass/fail with measured values.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

/// A report together with anything the user should be told about it.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub report: ComplexityReport,
    pub notices: Vec<String>,
}

impl Evaluation {
    fn new(report: ComplexityReport, mut notices: Vec<String>, context: &str) -> Self {
        if let (true, Some(d)) = (report.is_suspect(), report.discrepancy) {
            notices.push(format!(
                "suspect: closed form and quadrature differ by {} (relative) for {context}",
                output::format_number(d)
            ));
        }
        Self { report, notices }
    }
}

/// `B_λ` for λ ≠ 1 and the standard Gaussian at λ = 1.
pub fn evaluate_gaussian(lambda: &LambdaParam, spec: &QuadratureSpec) -> Result<Evaluation, CliError> {
    let rho: Box<dyn Density> = if lambda.is_shannon_limit() {
        Box::new(Gaussian::new(lambda.dim(), 1.0)?)
    } else {
        Box::new(GeneralizedGaussian::new(*lambda)?)
    };
    let report = cfr_complexity(&rho, lambda, MethodChoice::Both, spec)?;
    let context = format!("lambda = {}", output::format_number(lambda.value()));
    Ok(Evaluation::new(report, Vec::new(), &context))
}

/// One hydrogenic state; `closed` and `both` fall back to quadrature when no closed form applies.
pub fn evaluate_hydrogenic(
    qn: &QuantumNumbers,
    lambda: &LambdaParam,
    method: MethodArg,
    spec: &QuadratureSpec,
) -> Result<Evaluation, CliError> {
    if lambda.dim() != 3 {
        return Err(CliError::Usage("hydrogenic states are three-dimensional".into()));
    }
    let h = HydrogenicDensity::new(*qn);
    h.check_integrable(lambda.value())?;
    let context = format!(
        "(n, l, m) = ({}, {}, {}) at lambda = {}",
        qn.n(),
        qn.l(),
        qn.m(),
        output::format_number(lambda.value())
    );
    if method == MethodArg::Quadrature {
        return Ok(Evaluation::new(cfr_numeric(qn, lambda, spec)?, Vec::new(), &context));
    }
    match h.analytic(lambda.value()) {
        Some(parts) => {
            parts?;
            let choice = match method {
                MethodArg::Both => MethodChoice::Both,
                _ => MethodChoice::AnalyticIfAvailable,
            };
            Ok(Evaluation::new(cfr_complexity(&h, lambda, choice, spec)?, Vec::new(), &context))
        }
        None => {
            let notice = format!("no closed form for {context}; using quadrature");
            Ok(Evaluation::new(cfr_numeric(qn, lambda, spec)?, vec![notice], &context))
        }
    }
}

const SWEEP_COLUMNS: [&str; 11] = [
    "lambda",
    "n",
    "l",
    "m",
    "fisher_lambda",
    "renyi_power",
    "d_norm",
    "cfr",
    "method",
    "discrepancy",
    "error",
];

fn sweep_row(lambda: f64, state: Option<&QuantumNumbers>, result: &Result<Evaluation, CliError>) -> Vec<Cell> {
    let mut row = vec![Cell::Num(lambda)];
    match state {
        Some(q) => row.extend([Cell::Int(q.n() as i64), Cell::Int(q.l() as i64), Cell::Int(q.m() as i64)]),
        None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty]),
    }
    match result {
        Ok(e) => {
            row.extend(report_cells(&e.report));
            row.push(Cell::Empty);
        }
        Err(err) => {
            row.extend(std::iter::repeat_n(Cell::Empty, 6));
            row.push(Cell::Text(err.to_string()));
        }
    }
    row
}

fn report_notices(notices: &[String]) {
    for n in notices {
        eprintln!("notice: {n}");
    }
}

/// Evaluate a validated plan into a table.
///
/// Rows are computed concurrently and assembled state-major, λ-minor; row
/// failures land in the `error` column.
pub fn sweep_table(plan: &Plan, spec: &QuadratureSpec) -> Result<Table, CliError> {
    let mut table = Table::new(SWEEP_COLUMNS.to_vec());
    match plan {
        Plan::Gaussian { lambdas } => {
            let results: Vec<_> = lambdas.par_iter().map(|l| evaluate_gaussian(l, spec)).collect();
            for (l, r) in lambdas.iter().zip(&results) {
                if let Ok(e) = r {
                    report_notices(&e.notices);
                }
                table.push(sweep_row(l.value(), None, r));
            }
        }
        Plan::Hydrogenic { states, lambdas, method } => {
            let jobs: Vec<(&QuantumNumbers, &LambdaParam)> =
                states.iter().flat_map(|q| lambdas.iter().map(move |l| (q, l))).collect();
            let results: Vec<_> = jobs
                .par_iter()
                .map(|(q, l)| evaluate_hydrogenic(q, l, *method, spec))
                .collect();
            for ((q, l), r) in jobs.iter().zip(&results) {
                if let Ok(e) = r {
                    report_notices(&e.notices);
                }
                table.push(sweep_row(l.value(), Some(q), r));
            }
        }
        Plan::Verify { .. } => return Err(CliError::Usage("a verify config produces no table".into())),
    }
    Ok(table)
}

fn single_table(eval: &Evaluation, state: Option<&QuantumNumbers>) -> Table {
    let r = &eval.report;
    let mut columns = vec!["lambda", "dim"];
    let mut row = vec![Cell::Num(r.lambda.value()), Cell::Int(r.dim() as i64)];
    if let Some(q) = state {
        columns.extend(["n", "l", "m", "Z"]);
        row.extend([
            Cell::Int(q.n() as i64),
            Cell::Int(q.l() as i64),
            Cell::Int(q.m() as i64),
            Cell::Num(q.z()),
        ]);
    }
    columns.extend(["fisher_lambda", "renyi_power", "d_norm", "cfr", "method", "discrepancy"]);
    row.extend(report_cells(r));
    let mut t = Table::new(columns);
    t.push(row);
    t
}

fn emit(table: &Table, format: Format, output: Option<&PathBuf>, single: bool) -> Result<(), CliError> {
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(&mut w, format, single)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(&mut w, format, single)?;
        }
    }
    Ok(())
}

/// Run the suites, print every check and one line per criterion.
pub fn run_verify<W: Write>(suites: &[Suite], spec: &QuadratureSpec, mut out: W) -> Result<(), CliError> {
    let checks: Vec<Check> = suites.par_iter().flat_map(|s| s.run(spec)).collect();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let outcomes = verify::summarize(&checks);
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(out, "{}/{} criteria passed", outcomes.len() - failed, outcomes.len())?;
    if failed > 0 || outcomes.is_empty() {
        return Err(CliError::Verification {
            failed,
            total: outcomes.len(),
        });
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gaussian { lambda, dim, out } => {
            let spec = default_spec()?;
            let lambda = LambdaParam::new(*lambda, *dim)?;
            let eval = evaluate_gaussian(&lambda, &spec)?;
            report_notices(&eval.notices);
            emit(&single_table(&eval, None), out.format, out.output.as_ref(), true)
        }
        Command::Hydrogenic {
            n,
            l,
            m,
            z,
            lambda,
            method,
            out,
        } => {
            let spec = default_spec()?;
            let qn = QuantumNumbers::new(*n, *l, *m, *z)?;
            let lambda = LambdaParam::new(*lambda, 3)?;
            let eval = evaluate_hydrogenic(&qn, &lambda, *method, &spec)?;
            report_notices(&eval.notices);
            emit(&single_table(&eval, Some(&qn)), out.format, out.output.as_ref(), true)
        }
        Command::Sweep { config } => {
            let cfg = RunConfig::from_path(config)?;
            let spec = cfg.quadrature_spec()?;
            match cfg.plan()? {
                Plan::Verify { suites } => run_verify(&suites, &spec, io::stdout().lock()),
                plan => {
                    let table = sweep_table(&plan, &spec)?;
                    emit(&table, cfg.format, cfg.output.as_ref(), false)
                }
            }
        }
        Command::Verify { suite } => {
            let suites = parse_suites(suite)?;
            run_verify(&suites, &default_spec()?, io::stdout().lock())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let domain = LambdaParam::new(0.5, 3).unwrap_err();
        assert_eq!(CliError::from(domain).exit_code(), 1);
        let diverge = cfr_numeric(
            &QuantumNumbers::new(2, 0, 0, 1.0).unwrap(),
            &LambdaParam::new(0.7, 3).unwrap(),
            &spec(),
        )
        .unwrap_err();
        assert_eq!(CliError::from(diverge).exit_code(), 2);
        assert_eq!(CliError::Verification { failed: 1, total: 2 }.exit_code(), 3);
    }

    #[test]
    fn closed_falls_back_with_a_notice() {
        let q = QuantumNumbers::new(3, 1, 0, 1.0).unwrap();
        let e = evaluate_hydrogenic(&q, &LambdaParam::new(1.5, 3).unwrap(), MethodArg::Closed, &spec()).unwrap();
        assert_eq!(e.notices.len(), 1);
        assert_eq!(output::method_name(e.report.method), "quadrature");
    }

    #[test]
    fn both_paths_agree_for_the_ground_state() {
        let q = QuantumNumbers::new(1, 0, 0, 1.0).unwrap();
        let e = evaluate_hydrogenic(&q, &LambdaParam::new(2.0, 3).unwrap(), MethodArg::Both, &spec()).unwrap();
        assert!(e.report.discrepancy.unwrap() < 1e-8);
        assert!(e.notices.is_empty());
    }

    #[test]
    fn gaussian_minimizers() {
        for (l, d) in [(1.5, 1), (2.0, 3), (1.0, 2), (0.8, 3)] {
            let e = evaluate_gaussian(&LambdaParam::new(l, d).unwrap(), &spec()).unwrap();
            assert!((e.report.cfr - 1.0).abs() < 1e-6, "lambda={l} d={d}: {}", e.report.cfr);
        }
    }

    #[test]
    fn sweep_rows_are_state_major() {
        let states = vec![
            QuantumNumbers::new(1, 0, 0, 1.0).unwrap(),
            QuantumNumbers::new(2, 1, 1, 1.0).unwrap(),
        ];
        let lambdas = vec![LambdaParam::new(1.5, 3).unwrap(), LambdaParam::new(2.0, 3).unwrap()];
        let plan = Plan::Hydrogenic { states, lambdas, method: MethodArg::Closed };
        let t = sweep_table(&plan, &spec()).unwrap();
        let keys: Vec<(Cell, Cell)> = t.rows.iter().map(|r| (r[1].clone(), r[0].clone())).collect();
        assert_eq!(
            keys,
            vec![
                (Cell::Int(1), Cell::Num(1.5)),
                (Cell::Int(1), Cell::Num(2.0)),
                (Cell::Int(2), Cell::Num(1.5)),
                (Cell::Int(2), Cell::Num(2.0)),
            ]
        );
    }

    #[test]
    fn row_failures_are_recorded_in_place() {
        let plan = Plan::Hydrogenic {
            states: vec![QuantumNumbers::new(2, 0, 0, 1.0).unwrap()],
            lambdas: vec![LambdaParam::new(0.7, 3).unwrap(), LambdaParam::new(2.0, 3).unwrap()],
            method: MethodArg::Quadrature,
        };
        let t = sweep_table(&plan, &spec()).unwrap();
        assert!(matches!(&t.rows[0][10], Cell::Text(s) if s.contains("divergent")));
        assert_eq!(t.rows[1][10], Cell::Empty);
    }
}
