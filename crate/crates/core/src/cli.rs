//! Command-line front end: `lattice`, `graph`, `verify`, `bench`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 method budget exceeded. All structured output goes to stdout with
//! alphabetically sorted JSON keys, so reports diff cleanly.

use crate::braid::{lattice_z_opts, BraidError, TraceOptions};
use crate::graph::BoundaryGraph;
use crate::model::{make_model, physical_to_model, ModelParams, PhysicalParams};
use crate::partition::{
    brute_force_z_opts, deletion_contraction_z, EnumerationOptions, PartitionError,
};
use crate::qf::{parse_rational, QfScalar};
use crate::verify::{run_suite, Mutation, VerifyConfig};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<BraidError> for CliError {
    fn from(e: BraidError) -> Self {
        match e {
            BraidError::StrandBudget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pottsb",
    version,
    about = "Exact Potts partition functions with a reflecting boundary, three independent ways"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a rectangular lattice against the wall.
    Lattice(LatticeArgs),
    /// Evaluate an arbitrary boundary graph from JSON.
    Graph(GraphArgs),
    /// Run the cross-method invariant suite.
    Verify(VerifyArgs),
    /// Time the methods against each other over a size sweep.
    Bench(BenchArgs),
}

fn rational_value(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("expected a rational like 2, -1/2 (got {s:?})"))
}

fn f_list_value(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| e.to_string()))
        .collect()
}

/// Shared model parameters. Either exact --B/--C, or --kT/--kappa which are
/// converted through floats and then used as the exact dyadic rationals
/// those floats are.
#[derive(Args)]
struct ParamArgs {
    /// States per spin.
    #[arg(long)]
    f: u64,
    /// Inner-bond weight B as an exact rational.
    #[arg(long = "B", value_parser = rational_value)]
    b: Option<BigRational>,
    /// Boundary-bond weight C as an exact rational (nonzero).
    #[arg(long = "C", value_parser = rational_value)]
    c: Option<BigRational>,
    /// Gauge for the loop parameter c (nonzero; results never depend on it).
    #[arg(long = "c-gauge", value_parser = rational_value, default_value = "1")]
    c_gauge: BigRational,
    /// Temperature (times Boltzmann constant); converts to B = e^{-1/kT}-1.
    #[arg(long = "kT")]
    kt: Option<f64>,
    /// Boundary coupling; converts to C = e^{-kappa/kT}.
    #[arg(long)]
    kappa: Option<f64>,
}

#[derive(Serialize)]
struct PhysicalReport {
    kt: f64,
    kappa: f64,
    b_float: f64,
    c_float: f64,
    d_float: f64,
}

impl ParamArgs {
    fn resolve(&self) -> Result<(ModelParams, Option<PhysicalReport>), CliError> {
        let physical = match (self.kt, self.kappa) {
            (None, None) => None,
            (Some(kt), Some(kappa)) => Some(PhysicalParams { kt, kappa }),
            _ => {
                return Err(CliError::Usage(
                    "--kT and --kappa must be given together".into(),
                ))
            }
        };
        let (b, c, report) = match physical {
            None => {
                let (Some(b), Some(c)) = (self.b.clone(), self.c.clone()) else {
                    return Err(CliError::Usage(
                        "provide --B and --C, or --kT and --kappa".into(),
                    ));
                };
                (b, c, None)
            }
            Some(p) => {
                if self.b.is_some() || self.c.is_some() {
                    return Err(CliError::Usage(
                        "--B/--C and --kT/--kappa are mutually exclusive".into(),
                    ));
                }
                let w = physical_to_model(&p).map_err(|e| CliError::Usage(e.to_string()))?;
                let b = BigRational::from_float(w.b)
                    .ok_or_else(|| CliError::Usage("non-finite B".into()))?;
                let c = BigRational::from_float(w.c)
                    .ok_or_else(|| CliError::Usage("non-finite C".into()))?;
                let report = PhysicalReport {
                    kt: p.kt,
                    kappa: p.kappa,
                    b_float: w.b,
                    c_float: w.c,
                    d_float: w.d,
                };
                (b, c, Some(report))
            }
        };
        let model = make_model(self.f, b, c, self.c_gauge.clone())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((model, report))
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Enumeration budget for the brute-force method, in states.
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
    /// Worker threads for the brute-force enumeration.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Strand budget for the trace method (2 * cols must fit).
    #[arg(long, default_value_t = 8)]
    max_strands: usize,
}

impl BudgetArgs {
    fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions {
            budget: self.budget,
            workers: self.workers,
        }
    }

    fn trace(&self) -> TraceOptions {
        TraceOptions {
            max_strands: self.max_strands,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LatticeMethod {
    Brute,
    Dc,
    Trace,
    All,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, value_enum, default_value_t = LatticeMethod::All)]
    method: LatticeMethod,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GraphMethod {
    Brute,
    Dc,
    Both,
}

#[derive(Args)]
struct GraphArgs {
    /// Path to the graph JSON file.
    #[arg(long)]
    input: String,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, value_enum, default_value_t = GraphMethod::Both)]
    method: GraphMethod,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    max_rows: usize,
    #[arg(long, default_value_t = 3)]
    max_cols: usize,
    /// Comma-separated list of f values, e.g. "2,3".
    #[arg(long = "f-list", value_parser = f_list_value, default_value = "2,3")]
    f_list: Vec<u64>,
    #[arg(long, default_value_t = 0x706f_7474)]
    seed: u64,
    /// Negative control: deliberately corrupt one parameter of the trace
    /// route so the suite must fail.
    #[arg(long, hide = true, value_enum)]
    mutate: Option<MutationArg>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MutationArg {
    Beta,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    max_rows: usize,
    #[arg(long, default_value_t = 3)]
    max_cols: usize,
    #[arg(long, default_value_t = 2)]
    f: u64,
    #[arg(long = "B", value_parser = rational_value, default_value = "-1/2")]
    b: BigRational,
    #[arg(long = "C", value_parser = rational_value, default_value = "1/3")]
    c: BigRational,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
    format: BenchFormat,
}

#[derive(Serialize)]
struct MethodReport {
    method: String,
    exact: String,
    float: f64,
    seconds: f64,
}

#[derive(Serialize)]
struct ValueReport {
    command: String,
    rows: Option<usize>,
    cols: Option<usize>,
    input: Option<String>,
    f: u64,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    c_gauge: String,
    physical: Option<PhysicalReport>,
    results: Vec<MethodReport>,
    agree: Option<bool>,
}

fn print_sorted_json<T: Serialize>(value: &T) {
    // serde_json maps are BTree-backed, so round-tripping through Value
    // sorts the object keys
    let v = serde_json::to_value(value).expect("report serializes");
    println!("{}", serde_json::to_string_pretty(&v).expect("valid JSON"));
}

fn timed<T>(run: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = run();
    (out, start.elapsed().as_secs_f64())
}

fn method_report(name: &str, value: &QfScalar, seconds: f64) -> MethodReport {
    MethodReport {
        method: name.to_string(),
        exact: value.to_string(),
        float: value.to_f64(),
        seconds,
    }
}

fn check_agreement(results: &[MethodReport]) -> Option<bool> {
    if results.len() < 2 {
        return None;
    }
    Some(results.iter().all(|r| r.exact == results[0].exact))
}

fn cmd_lattice(args: &LatticeArgs) -> Result<(), CliError> {
    let (model, physical) = args.params.resolve()?;
    if args.rows < 1 || args.cols < 1 {
        return Err(CliError::Usage("rows and cols must be at least 1".into()));
    }
    let graph = crate::braid::lattice_graph(args.rows, args.cols)?;
    let mut results = Vec::new();
    let want = |m: LatticeMethod| args.method == m || args.method == LatticeMethod::All;
    if want(LatticeMethod::Brute) {
        let (z, secs) = timed(|| brute_force_z_opts(&graph, &model, &args.budgets.enumeration()));
        results.push(method_report("brute", &z?, secs));
    }
    if want(LatticeMethod::Dc) {
        let (z, secs) = timed(|| deletion_contraction_z(&graph, &model));
        results.push(method_report("dc", &z, secs));
    }
    if want(LatticeMethod::Trace) {
        let (z, secs) = timed(|| lattice_z_opts(args.rows, args.cols, &model, &args.budgets.trace()));
        results.push(method_report("trace", &z?, secs));
    }
    let agree = check_agreement(&results);
    let report = ValueReport {
        command: "lattice".into(),
        rows: Some(args.rows),
        cols: Some(args.cols),
        input: None,
        f: model.f(),
        b: model.b().to_string(),
        c: model.c().to_string(),
        c_gauge: model.c_prime().to_string(),
        physical,
        results,
        agree,
    };
    print_sorted_json(&report);
    if agree == Some(false) {
        return Err(CliError::Verification("methods disagree".into()));
    }
    Ok(())
}

fn cmd_graph(args: &GraphArgs) -> Result<(), CliError> {
    let (model, physical) = args.params.resolve()?;
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.input)))?;
    let graph =
        BoundaryGraph::from_json_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut results = Vec::new();
    let want = |m: GraphMethod| args.method == m || args.method == GraphMethod::Both;
    if want(GraphMethod::Brute) {
        let (z, secs) = timed(|| brute_force_z_opts(&graph, &model, &args.budgets.enumeration()));
        results.push(method_report("brute", &z?, secs));
    }
    if want(GraphMethod::Dc) {
        let (z, secs) = timed(|| deletion_contraction_z(&graph, &model));
        results.push(method_report("dc", &z, secs));
    }
    let agree = check_agreement(&results);
    let report = ValueReport {
        command: "graph".into(),
        rows: None,
        cols: None,
        input: Some(args.input.clone()),
        f: model.f(),
        b: model.b().to_string(),
        c: model.c().to_string(),
        c_gauge: model.c_prime().to_string(),
        physical,
        results,
        agree,
    };
    print_sorted_json(&report);
    if agree == Some(false) {
        return Err(CliError::Verification(
            "brute force and deletion-contraction disagree".into(),
        ));
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.f_list.is_empty() || args.f_list.contains(&0) {
        return Err(CliError::Usage("--f-list needs positive integers".into()));
    }
    let cfg = VerifyConfig {
        max_rows: args.max_rows.max(1),
        max_cols: args.max_cols.max(1),
        f_list: args.f_list.clone(),
        seed: args.seed,
        mutate: args.mutate.map(|MutationArg::Beta| Mutation::Beta),
    };
    let results = run_suite(&cfg);
    let mut failed = 0;
    for check in &results {
        if check.passed() {
            println!("PASS  {:<38} {} cases", check.name, check.cases);
        } else {
            failed += 1;
            println!(
                "FAIL  {:<38} {} cases, {} failures",
                check.name,
                check.cases,
                check.failures.len()
            );
            if let Some(first) = check.failures.first() {
                println!("      first counterexample: {first}");
            }
        }
    }
    println!(
        "summary: {} passed, {} failed (seed {})",
        results.len() - failed,
        failed,
        cfg.seed
    );
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} checks failed")));
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    rows: usize,
    cols: usize,
    f: u64,
    method: String,
    seconds: Option<f64>,
    value: String,
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let model = make_model(args.f, args.b.clone(), args.c.clone(), BigRational::one())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rows_out: Vec<BenchRow> = Vec::new();
    let mut disagreement = None;
    for rows in 1..=args.max_rows.max(1) {
        for cols in 1..=args.max_cols.max(1) {
            let graph = crate::braid::lattice_graph(rows, cols)?;
            let mut seen: Vec<String> = Vec::new();
            let mut push = |method: &str, outcome: Option<(QfScalar, f64)>| {
                let row = match outcome {
                    Some((z, secs)) => {
                        seen.push(z.to_string());
                        BenchRow {
                            rows,
                            cols,
                            f: args.f,
                            method: method.into(),
                            seconds: Some(secs),
                            value: z.to_string(),
                        }
                    }
                    None => BenchRow {
                        rows,
                        cols,
                        f: args.f,
                        method: method.into(),
                        seconds: None,
                        value: "skipped".into(),
                    },
                };
                rows_out.push(row);
            };
            let (z, secs) = timed(|| brute_force_z_opts(&graph, &model, &args.budgets.enumeration()));
            push("brute", z.ok().map(|z| (z, secs)));
            let (z, secs) = timed(|| deletion_contraction_z(&graph, &model));
            push("dc", Some((z, secs)));
            let (z, secs) = timed(|| lattice_z_opts(rows, cols, &model, &args.budgets.trace()));
            push("trace", z.ok().map(|z| (z, secs)));
            if seen.iter().any(|v| *v != seen[0]) {
                disagreement = Some(format!("methods disagree at {rows}x{cols}"));
            }
        }
    }
    match args.format {
        BenchFormat::Csv => {
            println!("rows,cols,f,method,seconds,value");
            for r in &rows_out {
                let secs = r
                    .seconds
                    .map(|s| format!("{s:.6}"))
                    .unwrap_or_default();
                println!("{},{},{},{},{},{}", r.rows, r.cols, r.f, r.method, secs, r.value);
            }
        }
        BenchFormat::Json => print_sorted_json(&rows_out),
    }
    if let Some(msg) = disagreement {
        return Err(CliError::Verification(msg));
    }
    Ok(())
}

/// Parses the command line, runs the command, and returns the process exit
/// code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Lattice(args) => cmd_lattice(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
