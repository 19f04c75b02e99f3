//! Experiment layer: basin-of-attraction sweeps over starting points,
//! bisection for basin boundaries, and convergence-order estimation from
//! error sequences.
//!
//! Sweeps fan out across worker threads when the `parallel` feature (on by
//! default) is enabled; rows always come back in grid order, and every row
//! equals an independent [`solve`] call, so parallel and sequential runs are
//! indistinguishable byte for byte.

use crate::solver::{solve, SolveError, SolveStatus, SolverConfig};
use crate::kernels::Method;
use crate::problems::ProblemSpec;
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Per-row termination classification: every [`SolveStatus`], plus the
/// evaluation failures, which a sweep reports as row statuses rather than
/// aborting the whole scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Converged,
    Cycle { period: usize },
    Diverged,
    MaxIterations,
    Stationary,
    UndefinedStep,
    DomainExit,
    EvalFailed,
    Overflow,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Converged => write!(f, "converged"),
            RowStatus::Cycle { period } => write!(f, "cycle({period})"),
            RowStatus::Diverged => write!(f, "diverged"),
            RowStatus::MaxIterations => write!(f, "max_iterations"),
            RowStatus::Stationary => write!(f, "stationary"),
            RowStatus::UndefinedStep => write!(f, "undefined_step"),
            RowStatus::DomainExit => write!(f, "domain_exit"),
            RowStatus::EvalFailed => write!(f, "eval_failed"),
            RowStatus::Overflow => write!(f, "overflow"),
        }
    }
}

/// Result of one solve within a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x0: f64,
    pub status: RowStatus,
    /// Index into the problem's `known_roots`, present iff the run converged
    /// and landed within `1e-6·(1+|ξ|)` of that root.
    pub root_index: Option<usize>,
    /// The converged estimate itself (also for roots the catalog does not
    /// know about); `None` for non-converged rows.
    pub root: Option<f64>,
    pub iterations: usize,
    /// Largest `|x|` along the trace; NaN when the run aborted in the
    /// evaluator and left no usable trace.
    pub max_excursion: f64,
}

/// Matches `estimate` against `known_roots`, returning the index of the
/// closest one within `1e-6·(1 + |root|)`.
pub fn match_root(known_roots: &[f64], estimate: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &root) in known_roots.iter().enumerate() {
        let d = (estimate - root).abs();
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.and_then(|(i, d)| (d <= 1e-6 * (1.0 + known_roots[i].abs())).then_some(i))
}

fn run_row(problem: &ProblemSpec, x0: f64, config: &SolverConfig) -> SweepRow {
    match solve(problem, x0, config) {
        Ok(report) => {
            let status = match report.status {
                SolveStatus::Converged => RowStatus::Converged,
                SolveStatus::Cycle { period } => RowStatus::Cycle { period },
                SolveStatus::Diverged => RowStatus::Diverged,
                SolveStatus::MaxIterations => RowStatus::MaxIterations,
                SolveStatus::Stationary => RowStatus::Stationary,
                SolveStatus::UndefinedStep => RowStatus::UndefinedStep,
            };
            let root_index = report.root.and_then(|r| match_root(&problem.known_roots, r));
            SweepRow {
                x0,
                status,
                root_index,
                root: report.root,
                iterations: report.iterations,
                max_excursion: report.max_excursion,
            }
        }
        Err(err) => {
            let (status, iterations) = match err {
                SolveError::DomainExit { iterations, .. } => (RowStatus::DomainExit, iterations),
                SolveError::NonFiniteEval { iterations, .. } => (RowStatus::EvalFailed, iterations),
                SolveError::Overflow { iterations, .. } => (RowStatus::Overflow, iterations),
            };
            SweepRow {
                x0,
                status,
                root_index: None,
                root: None,
                iterations,
                max_excursion: f64::NAN,
            }
        }
    }
}

fn check_grid(grid: &[f64]) {
    assert!(!grid.is_empty(), "sweep grid must be nonempty");
    assert!(
        grid.windows(2).all(|w| w[0] < w[1]),
        "sweep grid must be strictly increasing"
    );
}

/// Solves `problem` independently from every grid point, in grid order.
///
/// Panics if the grid is empty or not strictly increasing. Individual solve
/// failures never abort the sweep; they appear as row statuses.
pub fn sweep(problem: &ProblemSpec, grid: &[f64], config: &SolverConfig) -> Vec<SweepRow> {
    check_grid(grid);
    #[cfg(feature = "parallel")]
    {
        grid.par_iter().map(|&x0| run_row(problem, x0, config)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid.iter().map(|&x0| run_row(problem, x0, config)).collect()
    }
}

/// Single-threaded [`sweep`], always available as a baseline for equivalence
/// checks and benchmarks.
pub fn sweep_sequential(
    problem: &ProblemSpec,
    grid: &[f64],
    config: &SolverConfig,
) -> Vec<SweepRow> {
    check_grid(grid);
    grid.iter().map(|&x0| run_row(problem, x0, config)).collect()
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => {
            let h = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * h }).collect()
        }
    }
}

/// The solver settings used for basin classification: a 100-step budget
/// separates convergence cleanly from cycles and escapes without letting
/// slow crawls masquerade as basin membership.
pub fn default_basin_config(method: Method) -> SolverConfig {
    SolverConfig { max_iter: 100, ..SolverConfig::new(method) }
}

/// What a starting point's run means for basin membership: which known root
/// it reached, an unknown root, or no root at all (any non-converged status
/// or evaluation failure).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Root(usize),
    ConvergedUnknown,
    Failed,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Root(i) => write!(f, "root({i})"),
            Outcome::ConvergedUnknown => write!(f, "converged_unknown"),
            Outcome::Failed => write!(f, "failed"),
        }
    }
}

/// Classifies one starting point for basin purposes.
pub fn outcome(problem: &ProblemSpec, x0: f64, config: &SolverConfig) -> Outcome {
    let row = run_row(problem, x0, config);
    match (row.status, row.root_index) {
        (RowStatus::Converged, Some(i)) => Outcome::Root(i),
        (RowStatus::Converged, None) => Outcome::ConvergedUnknown,
        _ => Outcome::Failed,
    }
}

/// A bracket around a basin boundary, with the outcome flip that defines it.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinBoundary {
    pub lo: f64,
    pub hi: f64,
    /// Which outcomes disagree across the bracket, e.g. `root(0) vs failed`.
    pub predicate: String,
}

impl BasinBoundary {
    /// Midpoint of the bracket, the conventional single-number boundary.
    pub fn location(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl fmt::Display for BasinBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "boundary in [{:e}, {:e}]: {}", self.lo, self.hi, self.predicate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryError {
    /// Both endpoints classify identically, so there is nothing to bisect.
    SameOutcome { outcome: Outcome, lo: f64, hi: f64 },
    /// `lo < hi` and a positive resolution are required.
    BadBracket { lo: f64, hi: f64, resolution: f64 },
}

impl fmt::Display for BoundaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryError::SameOutcome { outcome, lo, hi } => write!(
                f,
                "no boundary: both {lo:e} and {hi:e} classify as {outcome}"
            ),
            BoundaryError::BadBracket { lo, hi, resolution } => write!(
                f,
                "bad bracket: need lo < hi and resolution > 0, \
                 got [{lo:e}, {hi:e}] at {resolution:e}"
            ),
        }
    }
}

impl std::error::Error for BoundaryError {}

/// Bisects `[lo, hi]` on the basin [`outcome`] until the bracket is no wider
/// than `resolution`. The endpoints must classify differently.
pub fn find_boundary(
    problem: &ProblemSpec,
    mut lo: f64,
    mut hi: f64,
    resolution: f64,
    config: &SolverConfig,
) -> Result<BasinBoundary, BoundaryError> {
    if !(lo < hi) || !(resolution > 0.0) {
        return Err(BoundaryError::BadBracket { lo, hi, resolution });
    }
    let lo_outcome = outcome(problem, lo, config);
    let hi_outcome = outcome(problem, hi, config);
    if lo_outcome == hi_outcome {
        return Err(BoundaryError::SameOutcome { outcome: lo_outcome, lo, hi });
    }
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket collapsed to adjacent floats
        }
        if outcome(problem, mid, config) == lo_outcome {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BasinBoundary { lo, hi, predicate: format!("{lo_outcome} vs {hi_outcome}") })
}

/// Threshold below which errors are float noise rather than convergence
/// signal; sequences must stay above it to qualify for order estimation.
pub const ORDER_FLOOR: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsufficientData {
    pub len: usize,
}

impl fmt::Display for InsufficientData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order estimation needs three consecutive strictly decreasing errors \
             above {ORDER_FLOOR:e}; no such triple in {} value(s)",
            self.len
        )
    }
}

impl std::error::Error for InsufficientData {}

/// Estimates the convergence order `p` from an error sequence, assuming
/// `e_{n+1} ≈ C·e_n^p`: returns `log(e_{n+1}/e_n) / log(e_n/e_{n−1})` for
/// the last triple that is strictly decreasing and above [`ORDER_FLOOR`]
/// (later errors are closest to the asymptotic regime, but entries at
/// roundoff level carry no order information).
pub fn estimate_order(errors: &[f64]) -> Result<f64, InsufficientData> {
    for i in (0..errors.len().saturating_sub(2)).rev() {
        let (e0, e1, e2) = (errors[i], errors[i + 1], errors[i + 2]);
        if e0 > e1 && e1 > e2 && e2 > ORDER_FLOOR {
            return Ok((e2 / e1).ln() / ((e1 / e0).ln()));
        }
    }
    Err(InsufficientData { len: errors.len() })
}
