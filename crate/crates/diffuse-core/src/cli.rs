//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on input or validation errors, 2 when a run
//! ends without reaching its goal (step budget exhausted, demo inconclusive,
//! emulation deviation above threshold). `DIFFUSE_LOG=quiet|info|debug`
//! controls diagnostics on stderr; results go to stdout and to the requested
//! output files.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, BenchMethod};
use crate::error::{Error, Result};
use crate::io::{
    make_fixture, normalize_matrix, read_edge_list, read_matrix_market, read_vector,
    to_matrix_with_options, write_edge_list, write_matrix_market, write_trace_csv, write_vector,
    Fixture, NormalizationMode,
};
use crate::matrix::SparseMatrix;
use crate::oracle::{dense_matvec, DENSE_CAP};
use crate::schedule::SchedulerKind;
use crate::solver::{
    emulate_power_iteration, snake_oscillation_demo, solve_eigen, solve_linear, SolveConfig,
    SolveReport,
};
use crate::vector::DenseVector;

const EXIT_OK: i32 = 0;
const EXIT_INPUT: i32 = 1;
const EXIT_BUDGET: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "diffuse",
    version,
    about = "Sparse fixed-point and eigenvector solver driven by per-node diffusion",
    propagate_version = true
)]
pub struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve X = P*X + B and write the solution vector
    Solve(SolveArgs),
    /// Dominant eigenvector of a column-stochastic matrix
    Eigen(EigenArgs),
    /// Reproduce power iteration with fractional diffusions and check it
    /// against the dense oracle
    Emulate(EmulateArgs),
    /// Compare diffusion schedules against sweep baselines
    Bench(BenchArgs),
    /// Run the bundled oscillation demonstration on the snake graph
    SnakeDemo(SnakeDemoArgs),
    /// Convert between edge-list and Matrix Market formats
    Convert(ConvertArgs),
    /// List or materialize the bundled fixtures
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    /// Decide by file extension
    Auto,
    Mtx,
    Edges,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveSchedulerArg {
    Cyclic,
    Greedy,
    Threshold,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EigenSchedulerArg {
    /// Diffuse only negative fluid (convergence guaranteed)
    Negative,
    /// Diffuse only positive fluid; experimental, convergence is conjectural
    PositiveExperimental,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PatchArg {
    /// Replace dangling columns with uniform columns before normalizing
    Uniform,
}

#[derive(Args, Debug)]
struct MatrixOpts {
    /// Matrix source: a file path or fixture:<name>
    #[arg(long)]
    matrix: String,
    /// Input format for file paths
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
    /// Damping factor d in (0, 1): the matrix becomes d times the
    /// column-stochastic normalization of the input
    #[arg(long)]
    damping: Option<f64>,
    /// Dangling-column treatment applied before normalization
    #[arg(long, value_enum)]
    patch_dangling: Option<PatchArg>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    matrix: MatrixOpts,
    /// Right-hand side: 'uniform' or file:<path> (one value per line).
    /// Uniform means (1-d)/n per entry under damping, else 1/n.
    #[arg(long, default_value = "uniform")]
    b: String,
    #[arg(long, value_enum, default_value = "greedy")]
    scheduler: SolveSchedulerArg,
    /// Stopping tolerance on the L1 fluid norm
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: u64,
    /// Seed for the random scheduler
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Assert the conservation identity every k steps (0 disables)
    #[arg(long, default_value_t = 0, value_name = "K")]
    check_invariant_every: u64,
    /// Write the convergence trace CSV here
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the solution vector here (one value per line)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EigenArgs {
    #[command(flatten)]
    matrix: MatrixOpts,
    #[arg(long, value_enum, default_value = "negative")]
    scheduler: EigenSchedulerArg,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: u64,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmulateArgs {
    #[command(flatten)]
    matrix: MatrixOpts,
    /// Start vector: 'uniform' or file:<path>
    #[arg(long, default_value = "uniform")]
    x0: String,
    #[arg(long)]
    cycles: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    matrix: MatrixOpts,
    /// Comma-separated list from: diffusion-greedy, diffusion-cyclic,
    /// power, jacobi
    #[arg(long, default_value = "diffusion-greedy,diffusion-cyclic,power,jacobi")]
    methods: String,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: u64,
    /// Repeats per method; the reported wall time is the median
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    /// Run repeats on separate threads
    #[arg(long)]
    parallel: bool,
    /// Write the table as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SnakeDemoArgs {
    #[arg(long, default_value_t = 10_000)]
    max_steps: u64,
    /// Directory receiving snake-mixed.csv and snake-negative.csv
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormalizeArg {
    None,
    Stochastic,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(long, value_name = "PATH")]
    r#in: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "none")]
    normalize: NormalizeArg,
    /// Applies the damped construction (stochastic columns scaled by d)
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long, value_enum)]
    patch_dangling: Option<PatchArg>,
}

#[derive(Args, Debug)]
struct FixturesArgs {
    /// Fixture name, e.g. snake or random_ergodic(50,7)
    #[arg(long)]
    name: Option<String>,
    /// Write the fixture matrix here (.mtx or edge list by extension)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Verbosity {
    Quiet,
    Info,
    Debug,
}

#[derive(Clone, Copy)]
struct Log {
    level: Verbosity,
}

impl Log {
    fn from_env() -> Self {
        let level = match std::env::var("DIFFUSE_LOG").as_deref() {
            Ok("quiet") => Verbosity::Quiet,
            Ok("debug") => Verbosity::Debug,
            Ok("info") | Err(_) => Verbosity::Info,
            Ok(other) => {
                eprintln!("warning: DIFFUSE_LOG={other} not recognized; using info");
                Verbosity::Info
            }
        };
        Self { level }
    }

    fn info(&self, msg: impl AsRef<str>) {
        if self.level >= Verbosity::Info {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn debug(&self, msg: impl AsRef<str>) {
        if self.level >= Verbosity::Debug {
            eprintln!("{}", msg.as_ref());
        }
    }
}

/// Parses `argv` and runs the selected command, returning the process exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.exit_code() == 0 {
                EXIT_OK
            } else {
                EXIT_INPUT
            };
            let _ = e.print();
            return code;
        }
    };
    let log = Log::from_env();
    let outcome = match args.command {
        Command::Solve(a) => cmd_solve(a, log),
        Command::Eigen(a) => cmd_eigen(a, log),
        Command::Emulate(a) => cmd_emulate(a, log),
        Command::Bench(a) => cmd_bench(a, log),
        Command::SnakeDemo(a) => cmd_snake_demo(a, log),
        Command::Convert(a) => cmd_convert(a, log),
        Command::Fixtures(a) => cmd_fixtures(a, log),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    run(std::env::args_os())
}

fn detect_format(path: &Path, format: FormatArg) -> Result<FormatArg> {
    match format {
        FormatArg::Auto => match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => Ok(FormatArg::Mtx),
            Some("edges") | Some("edgelist") | Some("el") | Some("txt") => Ok(FormatArg::Edges),
            other => Err(Error::InvalidConfig(format!(
                "cannot infer format of '{}' (extension {:?}); pass --format",
                path.display(),
                other.unwrap_or("none")
            ))),
        },
        other => Ok(other),
    }
}

/// Loads a matrix from a path or `fixture:` specifier and applies the
/// requested damping. Returns the matrix and the dangling column report.
fn load_matrix(opts: &MatrixOpts, log: Log) -> Result<(SparseMatrix, Vec<usize>)> {
    if let Some(d) = opts.damping {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "--damping must lie strictly between 0 and 1, got {d}"
            )));
        }
    }
    let mode = match opts.damping {
        Some(d) => NormalizationMode::Damped(d),
        None => NormalizationMode::None,
    };
    let patch = opts.patch_dangling.is_some();
    let (matrix, dangling) = if let Some(name) = opts.matrix.strip_prefix("fixture:") {
        let fixture: Fixture = name.parse()?;
        let (m, _) = make_fixture(&fixture)?;
        normalize_matrix(&m, mode, patch)?
    } else {
        let path = PathBuf::from(&opts.matrix);
        match detect_format(&path, opts.format)? {
            FormatArg::Mtx => {
                let m = read_matrix_market(&path)?;
                normalize_matrix(&m, mode, patch)?
            }
            FormatArg::Edges => {
                let el = read_edge_list(&path)?;
                to_matrix_with_options(&el, mode, patch)?
            }
            FormatArg::Auto => unreachable!("detect_format never returns Auto"),
        }
    };
    log.debug(format!(
        "loaded matrix: n = {}, nnz = {}",
        matrix.dim(),
        matrix.nnz()
    ));
    if !dangling.is_empty() {
        log.info(format!(
            "{} dangling column(s): fluid diffused there is absorbed",
            dangling.len()
        ));
    }
    Ok((matrix, dangling))
}

fn load_b(spec: &str, n: usize, damping: Option<f64>) -> Result<DenseVector> {
    if spec == "uniform" {
        if n == 0 {
            return Ok(DenseVector::zeros(0));
        }
        let value = match damping {
            Some(d) => (1.0 - d) / n as f64,
            None => 1.0 / n as f64,
        };
        return Ok(DenseVector::uniform(n, value));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let v = read_vector(Path::new(path))?;
        v.check_len(n)?;
        return Ok(v);
    }
    Err(Error::InvalidConfig(format!(
        "expected 'uniform' or 'file:<path>', got '{spec}'"
    )))
}

fn print_report_summary(report: &SolveReport) {
    println!("steps: {}", report.steps_used);
    println!("converged: {}", report.converged);
    println!("oscillation_detected: {}", report.oscillation_detected);
    println!("fluid_l1: {:e}", report.final_norms.l1);
    println!("fluid_linf: {:e}", report.final_norms.linf);
    println!("fluid_sigma_v: {:e}", report.final_norms.sigma_v);
}

fn write_outputs(
    report: &SolveReport,
    out: Option<&PathBuf>,
    trace: Option<&PathBuf>,
    log: Log,
) -> Result<()> {
    if let Some(path) = out {
        write_vector(&report.solution, path)?;
        log.info(format!("solution written to {}", path.display()));
    }
    if let Some(path) = trace {
        write_trace_csv(&report.trace, path)?;
        log.info(format!("trace written to {}", path.display()));
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs, log: Log) -> Result<i32> {
    let (m, _) = load_matrix(&args.matrix, log)?;
    let b = load_b(&args.b, m.dim(), args.matrix.damping)?;
    let scheduler = match args.scheduler {
        SolveSchedulerArg::Cyclic => SchedulerKind::Cyclic,
        SolveSchedulerArg::Greedy => SchedulerKind::GreedyAbs,
        SolveSchedulerArg::Threshold => SchedulerKind::Threshold,
        SolveSchedulerArg::Random => SchedulerKind::Random { seed: args.seed },
    };
    let cfg = SolveConfig {
        epsilon: args.eps,
        max_steps: args.max_steps,
        scheduler,
        invariant_check_every: args.check_invariant_every,
        trace_every: if args.trace.is_some() { 1 } else { 0 },
        ..SolveConfig::default()
    };
    log.debug(format!("solving with scheduler {}", cfg.scheduler));
    let report = solve_linear(&m, &b, &cfg)?;
    print_report_summary(&report);
    // backward residual of the returned solution
    let px = m.matvec(&report.solution)?;
    let mut residual = 0.0f64;
    for i in 0..m.dim() {
        residual = residual.max((report.solution[i] - px[i] - b[i]).abs());
    }
    println!("backward_residual_linf: {residual:e}");
    write_outputs(&report, args.out.as_ref(), args.trace.as_ref(), log)?;
    if report.converged {
        Ok(EXIT_OK)
    } else {
        log.info("step budget exhausted before convergence");
        Ok(EXIT_BUDGET)
    }
}

fn cmd_eigen(args: EigenArgs, log: Log) -> Result<i32> {
    let (m, _) = load_matrix(&args.matrix, log)?;
    // validate all columns up front so the report can list every offender
    let offenders: Vec<(usize, f64)> = m
        .col_sums()
        .iter()
        .enumerate()
        .filter(|(_, &s)| (s - 1.0).abs() > 1e-9)
        .map(|(i, &s)| (i, s))
        .collect();
    if !offenders.is_empty() {
        eprintln!(
            "error: {} column(s) do not sum to 1 within 1e-9:",
            offenders.len()
        );
        for (i, s) in offenders.iter().take(20) {
            eprintln!("  column {i}: sum = {s:.12}");
        }
        if offenders.len() > 20 {
            eprintln!("  ... and {} more", offenders.len() - 20);
        }
        return Ok(EXIT_INPUT);
    }
    let scheduler = match args.scheduler {
        EigenSchedulerArg::Negative => SchedulerKind::NegativeOnly,
        EigenSchedulerArg::PositiveExperimental => {
            log.info(
                "warning: positive-only scheduling is experimental; \
                 convergence is conjectural, not guaranteed",
            );
            SchedulerKind::PositiveOnly
        }
    };
    let cfg = SolveConfig {
        epsilon: args.eps,
        max_steps: args.max_steps,
        scheduler,
        trace_every: if args.trace.is_some() { 1 } else { 0 },
        ..SolveConfig::default()
    };
    let report = solve_eigen(&m, &cfg)?;
    print_report_summary(&report);
    println!("solution_sum: {:e}", report.solution.sum());
    let (mut min_i, mut max_i) = (0usize, 0usize);
    for i in 0..report.solution.len() {
        if report.solution[i] < report.solution[min_i] {
            min_i = i;
        }
        if report.solution[i] > report.solution[max_i] {
            max_i = i;
        }
    }
    if !report.solution.is_empty() {
        println!("min_entry: node {} = {:e}", min_i, report.solution[min_i]);
        println!("max_entry: node {} = {:e}", max_i, report.solution[max_i]);
    }
    write_outputs(&report, args.out.as_ref(), args.trace.as_ref(), log)?;
    if report.converged {
        Ok(EXIT_OK)
    } else {
        log.info("no eligible fluid left or budget exhausted before convergence");
        Ok(EXIT_BUDGET)
    }
}

fn cmd_emulate(args: EmulateArgs, log: Log) -> Result<i32> {
    let (m, _) = load_matrix(&args.matrix, log)?;
    let n = m.dim();
    if n > DENSE_CAP {
        return Err(Error::DenseCapExceeded { n, cap: DENSE_CAP });
    }
    let x0 = match args.x0.as_str() {
        "uniform" => DenseVector::uniform(n, 1.0 / n.max(1) as f64),
        spec => {
            let path = spec.strip_prefix("file:").ok_or_else(|| {
                Error::InvalidConfig(format!("expected 'uniform' or 'file:<path>', got '{spec}'"))
            })?;
            let v = read_vector(Path::new(path))?;
            v.check_len(n)?;
            v
        }
    };
    let boundaries = emulate_power_iteration(&m, &x0, args.cycles)?;
    let dense = m.to_dense();
    let mut reference = x0.clone();
    let mut all_ok = true;
    for (k, boundary) in boundaries.iter().enumerate() {
        if k > 0 {
            reference = dense_matvec(&dense, &reference);
        }
        let scale = reference.linf_norm();
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max((boundary[i] - reference[i]).abs());
        }
        let deviation = if scale > 0.0 { worst / scale } else { worst };
        println!("cycle {k}: max_relative_deviation {deviation:e}");
        if deviation > 1e-10 {
            all_ok = false;
        }
    }
    if all_ok {
        println!("emulation: all cycle boundaries within 1e-10 of dense powers");
        Ok(EXIT_OK)
    } else {
        println!("emulation: deviation above 1e-10 detected");
        Ok(EXIT_BUDGET)
    }
}

fn cmd_bench(args: BenchArgs, log: Log) -> Result<i32> {
    let (m, _) = load_matrix(&args.matrix, log)?;
    let b = load_b("uniform", m.dim(), args.matrix.damping)?;
    let methods = args
        .methods
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<BenchMethod>>>()?;
    if methods.is_empty() {
        return Err(Error::InvalidConfig("no methods requested".into()));
    }
    let rows = run_bench(
        &m,
        &b,
        args.eps,
        args.max_steps,
        &methods,
        args.repeat,
        args.parallel,
    )?;
    println!(
        "{:<18} {:>12} {:>16} {:>10} {:>14}",
        "method", "steps/iters", "column_touches", "converged", "wall_median_s"
    );
    for row in &rows {
        println!(
            "{:<18} {:>12} {:>16} {:>10} {:>14.6}",
            row.method,
            row.steps,
            row.column_touches,
            row.converged,
            row.wall_median.as_secs_f64()
        );
    }
    println!(
        "note: wall times are machine-dependent; column touches are the portable cost measure"
    );
    if let Some(path) = &args.csv {
        let mut text = String::from("method,steps,column_touches,converged,wall_median_s\n");
        for row in &rows {
            text.push_str(&format!(
                "{},{},{},{},{:.9}\n",
                row.method,
                row.steps,
                row.column_touches,
                row.converged,
                row.wall_median.as_secs_f64()
            ));
        }
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
        log.info(format!("bench table written to {}", path.display()));
    }
    Ok(EXIT_OK)
}

fn cmd_snake_demo(args: SnakeDemoArgs, log: Log) -> Result<i32> {
    let report = snake_oscillation_demo(args.max_steps)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    let mixed_path = args.out_dir.join("snake-mixed.csv");
    let negative_path = args.out_dir.join("snake-negative.csv");
    write_trace_csv(&report.mixed.trace, &mixed_path)?;
    write_trace_csv(&report.negative_only.trace, &negative_path)?;
    log.info(format!(
        "traces written to {} and {}",
        mixed_path.display(),
        negative_path.display()
    ));

    println!("mixed run (circulating sweep over both signs):");
    println!("  steps: {}", report.mixed.steps_used);
    println!(
        "  oscillation_detected: {}",
        report.mixed.oscillation_detected
    );
    println!("  converged: {}", report.mixed.converged);
    println!("  final_fluid_l1: {:e}", report.mixed.final_norms.l1);
    println!("negative-only run:");
    println!("  steps: {}", report.negative_only.steps_used);
    println!("  converged: {}", report.negative_only.converged);
    println!(
        "  final_fluid_l1: {:e}",
        report.negative_only.final_norms.l1
    );
    if report.conclusive() {
        println!("demo: mixed-sign diffusion oscillates; negative-only converges");
        Ok(EXIT_OK)
    } else {
        println!(
            "demo: inconclusive within {} steps (try a larger --max-steps)",
            args.max_steps
        );
        Ok(EXIT_BUDGET)
    }
}

fn cmd_convert(args: ConvertArgs, log: Log) -> Result<i32> {
    let input = detect_format(&args.r#in, FormatArg::Auto)?;
    let raw = match input {
        FormatArg::Mtx => read_matrix_market(&args.r#in)?,
        FormatArg::Edges => {
            let el = read_edge_list(&args.r#in)?;
            to_matrix_with_options(&el, NormalizationMode::None, false)?.0
        }
        FormatArg::Auto => unreachable!(),
    };
    if let Some(d) = args.damping {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "--damping must lie strictly between 0 and 1, got {d}"
            )));
        }
    }
    let mode = match (args.damping, args.normalize) {
        (Some(d), _) => NormalizationMode::Damped(d),
        (None, NormalizeArg::Stochastic) => NormalizationMode::ColumnStochastic,
        (None, NormalizeArg::None) => NormalizationMode::None,
    };
    let (m, dangling) = normalize_matrix(&raw, mode, args.patch_dangling.is_some())?;
    if !dangling.is_empty() {
        log.info(format!("{} dangling column(s)", dangling.len()));
    }
    match detect_format(&args.out, FormatArg::Auto)? {
        FormatArg::Mtx => write_matrix_market(&m, &args.out)?,
        FormatArg::Edges => write_edge_list(&m, &args.out)?,
        FormatArg::Auto => unreachable!(),
    }
    println!(
        "converted {} -> {} (n = {}, nnz = {})",
        args.r#in.display(),
        args.out.display(),
        m.dim(),
        m.nnz()
    );
    Ok(EXIT_OK)
}

fn cmd_fixtures(args: FixturesArgs, log: Log) -> Result<i32> {
    let Some(name) = &args.name else {
        println!("available fixtures:");
        println!(
            "  snake                        5-node graph whose mixed-sign diffusion can oscillate"
        );
        println!("  twonode                      2-node linear example with b = (1, 0)");
        println!("  rank1                        2x2 rank-one column-stochastic matrix");
        println!("  random_substochastic(n,seed) sparse, heterogeneous column sums in [0.05, 0.9)");
        println!("  random_ergodic(n,seed)       dense strictly positive column-stochastic");
        return Ok(EXIT_OK);
    };
    let fixture: Fixture = name.parse()?;
    let (m, b) = make_fixture(&fixture)?;
    println!("fixture: {name}");
    println!("n: {}", m.dim());
    println!("nnz: {}", m.nnz());
    println!("max_col_sum: {:e}", m.max_col_sum());
    if let Some(b) = &b {
        println!("b: {:?}", b.as_slice());
    }
    if let Some(out) = &args.out {
        match detect_format(out, FormatArg::Auto)? {
            FormatArg::Mtx => write_matrix_market(&m, out)?,
            FormatArg::Edges => write_edge_list(&m, out)?,
            FormatArg::Auto => unreachable!(),
        }
        log.info(format!("fixture written to {}", out.display()));
    }
    Ok(EXIT_OK)
}
