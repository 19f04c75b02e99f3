//! `rootkit`: scalar root finding from the command line.
//!
//! Four subcommands: `solve` runs one iteration and prints the report (JSON
//! by default, `--format csv` for the raw trace table), `sweep` solves from
//! every point of a grid and emits CSV rows, `boundary` bisects a basin
//! boundary, and `reproduce` re-runs a named experiment and checks its
//! assertions, printing PASS/FAIL lines with measured values.
//!
//! Exit codes: 0 converged/success, 1 non-convergence (cycle, divergence,
//! budget, stationary point, failed assertion, no boundary), 2 usage or
//! parse errors, 3 numerical failure (undefined step, overflow, domain exit,
//! non-finite evaluation).
//!
//! Identical invocations produce byte-identical standard output. Reals are
//! serialized with 17 significant digits, so every f64 round-trips exactly.
//! `ROOTKIT_THREADS` caps the worker pool used by sweeps; it never changes
//! the output, only how it is computed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootkit::analysis::{
    self, default_basin_config, find_boundary, linspace, outcome, sweep, BoundaryError, Outcome,
    SweepRow,
};
use rootkit::kernels::Method;
use rootkit::problems::{self, ProblemSpec};
use rootkit::solver::{solve, SolveReport, SolveStatus, SolverConfig};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "rootkit", version, about = "Scalar root finding with curvature-corrected Newton steps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve from one starting point and print the full report
    Solve(SolveArgs),
    /// Solve from every point of an evenly spaced grid and print CSV rows
    Sweep(SweepArgs),
    /// Bisect the basin boundary between two starting points
    Boundary(BoundaryArgs),
    /// Re-run a named experiment and check its published assertions
    Reproduce(ReproduceArgs),
}

/// What to solve: a catalog problem or an expression in `x`.
#[derive(Args)]
struct Target {
    /// Catalog problem: sqrt612, tanh, cubic_cycle, fractal_cubic,
    /// affine(a,b), log_family(a,b,c), or mobius(a,b,g,d)
    #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
    problem: Option<String>,
    /// Expression in x, e.g. "x^2 - 612"
    #[arg(long)]
    expr: Option<String>,
}

impl Target {
    fn resolve(&self) -> Result<ProblemSpec, String> {
        match (&self.problem, &self.expr) {
            (Some(name), None) => problems::by_name(name).map_err(|e| e.to_string()),
            (None, Some(text)) => problems::from_expr(text).map_err(|e| e.to_string()),
            _ => unreachable!("clap enforces exactly one target"),
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// Step kernel: newton, halley, hnr1, or hnr2
    #[arg(long, default_value = "hnr2")]
    method: Method,
    /// Absolute residual tolerance (default scales with |f(x0)|)
    #[arg(long)]
    f_tol: Option<f64>,
    /// Iteration budget
    #[arg(long)]
    max_iter: Option<usize>,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::new(self.method);
        cfg.f_tol = self.f_tol;
        if let Some(n) = self.max_iter {
            cfg.max_iter = n;
        }
        cfg
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    target: Target,
    /// Starting point
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    #[command(flatten)]
    flags: SolverFlags,
    /// json: full report; csv: the trace table
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    target: Target,
    /// Low end of the starting-point grid
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    /// High end of the starting-point grid
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    /// Number of grid points (endpoints included)
    #[arg(long, conflicts_with = "step", required_unless_present = "step")]
    points: Option<usize>,
    /// Grid spacing, starting at --from
    #[arg(long)]
    step: Option<f64>,
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Args)]
struct BoundaryArgs {
    #[command(flatten)]
    target: Target,
    /// Starting point on one side of the boundary
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    /// Starting point on the other side
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    /// Final bracket width
    #[arg(long)]
    resolution: f64,
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Experiment name: sqrt612, tanh-basin, cubic-turning, or fractal-scan
    experiment: String,
}

fn main() {
    let cli = Cli::parse();
    let code = with_thread_cap(|| match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Boundary(args) => cmd_boundary(&args),
        Command::Reproduce(args) => cmd_reproduce(&args.experiment),
    });
    std::process::exit(code);
}

/// Honors `ROOTKIT_THREADS` by running the command inside a sized worker
/// pool. Output is identical regardless of the cap.
fn with_thread_cap(run: impl FnOnce() -> i32 + Send) -> i32 {
    match std::env::var("ROOTKIT_THREADS") {
        Err(_) => run(),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(run),
                Err(e) => {
                    eprintln!("rootkit: failed to build a {n}-thread pool: {e}");
                    2
                }
            },
            _ => {
                eprintln!("rootkit: ROOTKIT_THREADS must be a positive integer, got {raw:?}");
                2
            }
        },
    }
}

/// 17-significant-digit JSON representation; non-finite reals become the
/// strings "inf", "-inf", and "nan", which JSON numbers cannot hold.
fn real(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(format!("{x:.16e}").parse().expect("float literal"))
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// Same 17-digit rendering for CSV cells.
fn csv_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn status_wire(status: SolveStatus) -> (&'static str, Option<usize>) {
    match status {
        SolveStatus::Converged => ("converged", None),
        SolveStatus::Cycle { period } => ("cycle", Some(period)),
        SolveStatus::Diverged => ("diverged", None),
        SolveStatus::MaxIterations => ("max_iterations", None),
        SolveStatus::Stationary => ("stationary", None),
        SolveStatus::UndefinedStep => ("undefined_step", None),
    }
}

fn exit_code_for(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged => 0,
        SolveStatus::Cycle { .. }
        | SolveStatus::Diverged
        | SolveStatus::MaxIterations
        | SolveStatus::Stationary => 1,
        SolveStatus::UndefinedStep => 3,
    }
}

fn report_json(problem: &ProblemSpec, method: Method, x0: f64, report: &SolveReport) -> Value {
    let (status, period) = status_wire(report.status);
    let trace: Vec<Value> = report
        .trace
        .iter()
        .enumerate()
        .map(|(i, point)| {
            let (q, multiplier, step) = match point.diag {
                Some(d) => (real(d.q), real(d.multiplier), real(d.applied_step)),
                None => (Value::Null, Value::Null, Value::Null),
            };
            json!({
                "iter": i,
                "x": real(point.x),
                "f": real(point.jet.value),
                "fprime": real(point.jet.d1),
                "fsecond": real(point.jet.d2),
                "q": q,
                "multiplier": multiplier,
                "step": step,
            })
        })
        .collect();
    let mut map = Map::new();
    map.insert("problem".into(), Value::String(problem.name.clone()));
    map.insert("method".into(), Value::String(method.to_string()));
    map.insert("x0".into(), real(x0));
    map.insert("status".into(), Value::String(status.into()));
    if let Some(p) = period {
        map.insert("period".into(), Value::Number(p.into()));
    }
    map.insert("root".into(), report.root.map_or(Value::Null, real));
    map.insert("iterations".into(), Value::Number(report.iterations.into()));
    map.insert("max_excursion".into(), real(report.max_excursion));
    map.insert("trace".into(), Value::Array(trace));
    Value::Object(map)
}

fn trace_csv(report: &SolveReport) -> String {
    let mut out = String::from("iter,x,f,fprime,fsecond,q,multiplier,step\n");
    for (i, point) in report.trace.iter().enumerate() {
        let (q, m, s) = match point.diag {
            Some(d) => (csv_real(d.q), csv_real(d.multiplier), csv_real(d.applied_step)),
            None => (String::new(), String::new(), String::new()),
        };
        out.push_str(&format!(
            "{i},{},{},{},{},{q},{m},{s}\n",
            csv_real(point.x),
            csv_real(point.jet.value),
            csv_real(point.jet.d1),
            csv_real(point.jet.d2),
        ));
    }
    out
}

fn cmd_solve(args: &SolveArgs) -> i32 {
    let problem = match args.target.resolve() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("rootkit: {msg}");
            return 2;
        }
    };
    let cfg = args.flags.config();
    match solve(&problem, args.x0, &cfg) {
        Ok(report) => {
            match args.format {
                Format::Json => {
                    let v = report_json(&problem, cfg.method, args.x0, &report);
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
                Format::Csv => {
                    print!("{}", trace_csv(&report));
                    eprintln!("rootkit: status {}", report.status);
                }
            }
            exit_code_for(report.status)
        }
        Err(e) => {
            eprintln!("rootkit: {e}");
            3
        }
    }
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>, String> {
    if !(args.from < args.to) {
        return Err(format!("need --from < --to, got {} and {}", args.from, args.to));
    }
    let grid = match (args.points, args.step) {
        (Some(n), None) => {
            if n < 2 {
                return Err("need at least 2 grid points".into());
            }
            linspace(args.from, args.to, n)
        }
        (None, Some(h)) => {
            if !(h > 0.0) {
                return Err(format!("--step must be positive, got {h}"));
            }
            let count = ((args.to - args.from) / h).floor() as usize + 1;
            (0..count).map(|i| args.from + i as f64 * h).collect()
        }
        _ => unreachable!("clap enforces exactly one of --points/--step"),
    };
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err("grid spacing is below float resolution on this range".into());
    }
    Ok(grid)
}

fn sweep_csv(problem: &ProblemSpec, rows: &[SweepRow]) -> String {
    let mut out = String::from("x0,status,root,iterations,max_excursion\n");
    for row in rows {
        // the root cell holds the catalog's canonical value when the run
        // landed on a known root, the raw estimate for unknown roots
        let root = match (row.root_index, row.root) {
            (Some(i), _) => csv_real(problem.known_roots[i]),
            (None, Some(est)) => csv_real(est),
            (None, None) => String::new(),
        };
        let exc =
            if row.max_excursion.is_nan() { String::new() } else { csv_real(row.max_excursion) };
        out.push_str(&format!(
            "{},{},{root},{},{exc}\n",
            csv_real(row.x0),
            row.status,
            row.iterations,
        ));
    }
    out
}

fn cmd_sweep(args: &SweepArgs) -> i32 {
    let problem = match args.target.resolve() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("rootkit: {msg}");
            return 2;
        }
    };
    let grid = match sweep_grid(args) {
        Ok(g) => g,
        Err(msg) => {
            eprintln!("rootkit: {msg}");
            return 2;
        }
    };
    let rows = sweep(&problem, &grid, &args.flags.config());
    print!("{}", sweep_csv(&problem, &rows));
    0
}

fn cmd_boundary(args: &BoundaryArgs) -> i32 {
    let problem = match args.target.resolve() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("rootkit: {msg}");
            return 2;
        }
    };
    let mut cfg = default_basin_config(args.flags.method);
    cfg.f_tol = args.flags.f_tol;
    if let Some(n) = args.flags.max_iter {
        cfg.max_iter = n;
    }
    match find_boundary(&problem, args.lo, args.hi, args.resolution, &cfg) {
        Ok(b) => {
            let mut map = Map::new();
            map.insert("problem".into(), Value::String(problem.name.clone()));
            map.insert("method".into(), Value::String(cfg.method.to_string()));
            map.insert("lo".into(), real(b.lo));
            map.insert("hi".into(), real(b.hi));
            map.insert("location".into(), real(b.location()));
            map.insert("predicate".into(), Value::String(b.predicate.clone()));
            map.insert("resolution".into(), real(args.resolution));
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(map)).expect("serializable")
            );
            0
        }
        Err(e @ BoundaryError::SameOutcome { .. }) => {
            eprintln!("rootkit: {e}");
            1
        }
        Err(e @ BoundaryError::BadBracket { .. }) => {
            eprintln!("rootkit: {e}");
            2
        }
    }
}

// ---------------------------------------------------------------------------
// reproduce: the four named experiments, each a list of checked assertions
// ---------------------------------------------------------------------------

struct Checks {
    lines: Vec<(bool, String)>,
}

impl Checks {
    fn new() -> Self {
        Checks { lines: Vec::new() }
    }

    fn push(&mut self, pass: bool, line: String) {
        self.lines.push((pass, line));
    }

    fn finish(self) -> i32 {
        let mut failed = false;
        for (pass, line) in &self.lines {
            println!("{} {line}", if *pass { "PASS" } else { "FAIL" });
            failed |= !pass;
        }
        i32::from(failed)
    }
}

/// Three-significant-figure rendering used to compare against published
/// error tables.
fn sig3(x: f64) -> String {
    format!("{x:.2e}")
}

fn cmd_reproduce(experiment: &str) -> i32 {
    match experiment {
        "sqrt612" => reproduce_sqrt612(),
        "tanh-basin" => reproduce_tanh_basin(),
        "cubic-turning" => reproduce_cubic_turning(),
        "fractal-scan" => reproduce_fractal_scan(),
        other => {
            eprintln!(
                "rootkit: unknown experiment {other:?}; expected sqrt612, tanh-basin, \
                 cubic-turning, or fractal-scan"
            );
            2
        }
    }
}

/// x² − 612 from x₀ = 10: the published error sequences for Newton and hnr2,
/// and the convergence orders estimated from them.
fn reproduce_sqrt612() -> i32 {
    let mut checks = Checks::new();
    let problem = problems::sqrt612();
    let root = 612.0_f64.sqrt();

    let expect_errors = |checks: &mut Checks,
                         label: &str,
                         report: Result<SolveReport, rootkit::solver::SolveError>,
                         expected: &[&str],
                         expected_len: Option<usize>| {
        match report {
            Ok(r) => {
                let errors: Vec<f64> = r.trace.iter().map(|p| p.x - root).collect();
                let got: Vec<String> =
                    errors.iter().take(expected.len()).map(|&e| sig3(e)).collect();
                let seq_ok = r.status == SolveStatus::Converged
                    && got == expected
                    && expected_len.is_none_or(|n| errors.len() == n);
                checks.push(
                    seq_ok,
                    format!("{label}: error sequence to 3 s.f. is [{}]", got.join(", ")),
                );
                let last = errors.last().copied().unwrap_or(f64::NAN);
                checks.push(
                    last.abs() < 1e-15,
                    format!("{label}: final error {last:e} is below 1e-15"),
                );
            }
            Err(e) => {
                checks.push(false, format!("{label}: error sequence (solve failed: {e})"));
                checks.push(false, format!("{label}: final error below 1e-15"));
            }
        }
    };

    expect_errors(
        &mut checks,
        "newton",
        solve(&problem, 10.0, &SolverConfig::new(Method::Newton)),
        &["-1.47e1", "1.09e1", "1.66e0", "5.20e-2", "5.45e-5", "6.01e-11"],
        Some(7),
    );
    // under f_tol = 1e-13 the run takes one extra step past the four listed
    // errors: the penultimate iterate sits one ulp (3.6e-16 relative) above
    // the float root before the last step lands on it exactly
    let tight = SolverConfig { f_tol: Some(1e-13), ..SolverConfig::default() };
    expect_errors(
        &mut checks,
        "hnr2",
        solve(&problem, 10.0, &tight),
        &["-1.47e1", "-3.51e0", "-2.20e-2", "-4.37e-9"],
        None,
    );

    let hnr2_order = analysis::estimate_order(&[3.51, 2.20e-2, 4.37e-9]);
    let ok = hnr2_order.as_ref().is_ok_and(|&p| (2.5..=3.5).contains(&p));
    checks.push(ok, format!("hnr2 error triple estimates order {hnr2_order:?} in [2.5, 3.5]"));
    let newton_order = analysis::estimate_order(&[1.66, 5.20e-2, 5.45e-5]);
    let ok = newton_order.as_ref().is_ok_and(|&p| (1.7..=2.3).contains(&p));
    checks.push(ok, format!("newton error triple estimates order {newton_order:?} in [1.7, 2.3]"));

    checks.finish()
}

/// tanh basins: Newton's boundary near 1.088659 with its defining equation,
/// basin symmetry, and the claimed hnr2 boundary near 2.410975.
fn reproduce_tanh_basin() -> i32 {
    let mut checks = Checks::new();
    let problem = problems::tanh();
    let newton_cfg = default_basin_config(Method::Newton);

    let newton_boundary = match find_boundary(&problem, 0.5, 2.0, 1e-6, &newton_cfg) {
        Ok(b) => {
            let a = b.location();
            checks.push(
                (a - 1.088659).abs() <= 1e-5,
                format!("newton boundary at {a:.7} (expected 1.088659 +- 1e-5)"),
            );
            let t = f64::tanh(a);
            let residual = t - 2.0 * a * (1.0 - t * t);
            checks.push(
                residual.abs() <= 1e-5,
                format!("boundary satisfies tanh a = 2a*sech^2 a: residual {residual:e}"),
            );
            Some(a)
        }
        Err(e) => {
            checks.push(false, format!("newton boundary in [0.5, 2]: {e}"));
            checks.push(false, "boundary satisfies tanh a = 2a*sech^2 a".into());
            None
        }
    };

    let sym = [0.9, 1.2].iter().all(|&x| {
        outcome(&problem, x, &newton_cfg) == outcome(&problem, -x, &newton_cfg)
    });
    checks.push(sym, "newton basin is symmetric at +-0.9 and +-1.2".into());

    let hnr2_cfg = default_basin_config(Method::Hnr2);
    match find_boundary(&problem, 1.0, 4.0, 1e-6, &hnr2_cfg) {
        Ok(b) => {
            let a = b.location();
            checks.push(
                (a - 2.410975).abs() <= 1e-5,
                format!("hnr2 boundary at {a:.7} (expected 2.410975 +- 1e-5)"),
            );
            let ratio = newton_boundary.map(|n| a / n);
            checks.push(
                ratio.is_some_and(|r| r > 2.0),
                format!("basin ratio {ratio:?} exceeds 2"),
            );
        }
        Err(e) => {
            checks.push(false, format!("hnr2 boundary at 2.410975 +- 1e-5: {e}"));
            checks.push(false, "basin ratio exceeds 2: no hnr2 boundary found".into());
        }
    }

    checks.finish()
}

/// x³ − 2x + 2 near its turning points under hnr2 with f_tol = 1e-7.
fn reproduce_cubic_turning() -> i32 {
    let mut checks = Checks::new();
    let problem = problems::cubic_cycle();
    let cfg = SolverConfig { f_tol: Some(1e-7), ..SolverConfig::default() };

    match solve(&problem, 0.0625, &cfg) {
        Ok(r) => {
            let root = r.root.unwrap_or(f64::NAN);
            let ok = r.status == SolveStatus::Converged
                && r.iterations == 4
                && (root - -1.769292).abs() <= 1e-5;
            checks.push(
                ok,
                format!(
                    "from 0.0625: {} to {root:.7} in {} iterations \
                     (expected -1.769292 +- 1e-5 in exactly 4)",
                    r.status, r.iterations
                ),
            );
        }
        Err(e) => checks.push(false, format!("from 0.0625: solve failed: {e}")),
    }

    match solve(&problem, 0.125, &cfg) {
        Ok(r) => {
            let ok = r.status == SolveStatus::Converged
                && r.max_excursion >= 1e9
                && (55..=85).contains(&r.iterations);
            checks.push(
                ok,
                format!(
                    "from 0.125: {} in {} iterations with excursion {:.4e} \
                     (expected 55..=85 iterations, excursion >= 1e9)",
                    r.status, r.iterations, r.max_excursion
                ),
            );
        }
        Err(e) => checks.push(false, format!("from 0.125: solve failed: {e}")),
    }

    let turning = (2.0_f64 / 3.0).sqrt();
    for (x0, expected) in [(-turning, SolveStatus::Stationary), (turning, SolveStatus::UndefinedStep)]
    {
        match solve(&problem, x0, &cfg) {
            Ok(r) => checks.push(
                r.status == expected,
                format!("from {x0:.15}: status {} (expected {expected})", r.status),
            ),
            Err(e) => checks.push(false, format!("from {x0:.15}: solve failed: {e}")),
        }
    }

    checks.finish()
}

/// The Newton root-identity scan over [2.3528363, 2.35287527] and hnr2's
/// three clean basins on x³ − 2x² − 11x + 12.
fn reproduce_fractal_scan() -> i32 {
    let mut checks = Checks::new();
    let problem = problems::fractal_cubic();

    let grid = linspace(2.3528363, 2.35287527, 4700);
    let rows = sweep(&problem, &grid, &default_basin_config(Method::Newton));
    let idents: Vec<Option<f64>> =
        rows.iter().map(|r| r.root_index.map(|i| problem.known_roots[i])).collect();
    let mut distinct: Vec<Option<f64>> = Vec::new();
    for v in idents {
        if distinct.last() != Some(&v) {
            distinct.push(v);
        }
    }
    let all_known = distinct.iter().all(|v| v.is_some());
    let seq: Vec<f64> = distinct.iter().flatten().copied().collect();
    let pattern = [1.0, -3.0, 4.0, -3.0, 4.0];
    let contains = seq.windows(pattern.len()).any(|w| w == pattern);
    checks.push(
        all_known && contains,
        format!(
            "newton scan at spacing 8.29e-9: distinct consecutive roots {seq:?} \
             contain the pattern [1, -3, 4, -3, 4]"
        ),
    );

    let cfg = default_basin_config(Method::Hnr2);
    let left = find_boundary(&problem, -2.0, 0.0, 1e-4, &cfg);
    let right = find_boundary(&problem, 2.0, 3.0, 1e-4, &cfg);
    for (b, expected, label) in [(&left, -1.360920, "left"), (&right, 2.694254, "right")] {
        match b {
            Ok(b) => checks.push(
                (b.location() - expected).abs() <= 1e-4,
                format!("hnr2 {label} boundary at {:.6} (expected {expected} +- 1e-4)", b.location()),
            ),
            Err(e) => checks.push(false, format!("hnr2 {label} boundary at {expected}: {e}")),
        }
    }

    if let (Ok(left), Ok(right)) = (&left, &right) {
        let intervals =
            [(-4.0, left.lo, "left"), (left.hi, right.lo, "middle"), (right.hi, 5.0, "right")];
        for (lo, hi, label) in intervals {
            let outcomes: Vec<Outcome> = linspace(lo, hi, 1000)
                .iter()
                .map(|&x0| outcome(&problem, x0, &cfg))
                .collect();
            let first = outcomes[0];
            let single_root =
                matches!(first, Outcome::Root(_)) && outcomes.iter().all(|&o| o == first);
            checks.push(
                single_root,
                format!("hnr2 {label} interval [{lo:.6}, {hi:.6}]: all 1000 samples reach {first}"),
            );
        }
    }

    checks.finish()
}
