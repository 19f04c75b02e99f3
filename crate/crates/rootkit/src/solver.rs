//! The iteration driver: runs a step kernel to convergence or a classified
//! failure, recording a full diagnostic trace.
//!
//! Termination is checked in a fixed order on the current iterate before a
//! new step is attempted: residual convergence, step-size convergence, cycle
//! detection, iteration budget. A successfully computed step can still end
//! the run (stationary point, divergence) before the next point is accepted.
//!
//! ```
//! use rootkit::problems::sqrt612;
//! use rootkit::solver::{solve, SolverConfig, SolveStatus};
//! use rootkit::kernels::Method;
//!
//! let report = solve(&sqrt612(), 10.0, &SolverConfig::new(Method::Newton)).unwrap();
//! assert_eq!(report.status, SolveStatus::Converged);
//! assert_eq!(report.iterations, 6);
//! assert_eq!(report.root, Some(612.0_f64.sqrt()));
//! ```

use crate::kernels::{self, Jet2, Method, StepDiagnostics, StepError};
use crate::problems::{EvalFailure, ProblemSpec};
use std::fmt;

/// Relative tolerance for matching trace points in cycle detection.
pub const CYCLE_TOL: f64 = 1e-9;

/// Tunable knobs for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Absolute residual tolerance. `None` scales with the starting point:
    /// `1e-13 · max(1, |f(x0)|)`.
    pub f_tol: Option<f64>,
    /// Relative step tolerance: converged when the last step and the
    /// residual are both small, stationary when only the step is.
    pub x_tol: f64,
    /// Step budget. The run stops with `MaxIterations` when it is spent.
    pub max_iter: usize,
    /// Longest cycle period the trace is probed for.
    pub cycle_window: usize,
    /// Iterates beyond this magnitude (or non-finite ones) mean divergence.
    pub divergence_bound: f64,
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        SolverConfig {
            method,
            f_tol: None,
            x_tol: 4.0 * f64::EPSILON,
            max_iter: 200,
            cycle_window: 4,
            divergence_bound: 1e308 / 4.0,
        }
    }
}

impl Default for SolverConfig {
    /// The default method is hnr2: Newton-cost steps, third-order local
    /// convergence, and no pole in its correction factor.
    fn default() -> Self {
        SolverConfig::new(Method::Hnr2)
    }
}

/// How a completed (non-error) run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Residual within tolerance, or a tiny step with a near-tolerance
    /// residual.
    Converged,
    /// The trace revisits the same points with this period.
    Cycle { period: usize },
    /// An iterate left `[-divergence_bound, divergence_bound]`.
    Diverged,
    MaxIterations,
    /// The step collapsed to zero length away from any root (turning-point
    /// limit `q → −∞`, or an underflowed multiplier).
    Stationary,
    /// No finite step exists: `f′ = 0` for Newton, `q = +∞` or indeterminate,
    /// or Halley's pole `q = 2`.
    UndefinedStep,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Converged => write!(f, "converged"),
            SolveStatus::Cycle { period } => write!(f, "cycle({period})"),
            SolveStatus::Diverged => write!(f, "diverged"),
            SolveStatus::MaxIterations => write!(f, "max_iterations"),
            SolveStatus::Stationary => write!(f, "stationary"),
            SolveStatus::UndefinedStep => write!(f, "undefined_step"),
        }
    }
}

/// One row of the iteration trace.
///
/// `diag` is present exactly when a step was successfully computed *from*
/// this point, even if that step was then rejected (stationary, divergent);
/// it is `None` on the final point of a converged or budget-capped run.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub x: f64,
    pub jet: Jet2,
    pub diag: Option<StepDiagnostics>,
}

/// Everything [`solve`] learned about one run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// The accepted root for `Converged`, `None` otherwise.
    pub root: Option<f64>,
    /// Steps taken; the trace holds `iterations + 1` points.
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
    /// Largest `|x|` seen along the trace.
    pub max_excursion: f64,
}

/// Evaluation-level failures that abort a run without a classification.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// An iterate left the problem's domain before it could be evaluated.
    DomainExit { x: f64, iterations: usize },
    /// The evaluator failed (non-finite value or domain violation).
    NonFiniteEval { failure: EvalFailure, iterations: usize },
    /// The hnr1 exponential overflows: `e^q` with `q > 709`.
    Overflow { t: f64, x: f64, iterations: usize },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::DomainExit { x, iterations } => {
                write!(f, "iterate left the domain at x = {x:e} after {iterations} steps")
            }
            SolveError::NonFiniteEval { failure, iterations } => {
                write!(f, "evaluation failed after {iterations} steps: {failure}")
            }
            SolveError::Overflow { t, x, iterations } => {
                write!(
                    f,
                    "exponential correction overflows (t = {t:e}) at x = {x:e} \
                     after {iterations} steps"
                )
            }
        }
    }
}

impl std::error::Error for SolveError {}

/// Runs `config.method` on `problem` from `x0`.
///
/// Per-iteration order, on the current point `x` with residual `f`:
///
/// 1. `|f| ≤ f_tol` → `Converged`.
/// 2. After at least one step: last step within `x_tol·(1+|x|)` *and*
///    `|f| ≤ √f_tol` → `Converged` (tight step, near-tolerance residual).
/// 3. The last points repeat with period `p ∈ 2..=cycle_window` (relative
///    tolerance [`CYCLE_TOL`]) → `Cycle`. Period 1 is excluded here: a
///    near-zero step at a non-root is `Stationary`, not a cycle, and during
///    convergence endgames it would misfire.
/// 4. Budget spent → `MaxIterations`.
/// 5. Compute the step. Undefined steps and Halley's pole end the run with
///    status `UndefinedStep`; hnr1 overflow is a [`SolveError`].
/// 6. A zero-length step (within `x_tol·(1+|x|)`) with `|f| > √f_tol` →
///    `Stationary`.
/// 7. A non-finite or out-of-bound next iterate → `Diverged` (the trace ends
///    at the last accepted point).
/// 8. The next iterate must stay in the domain and evaluate finitely;
///    otherwise the run aborts with a [`SolveError`].
pub fn solve(
    problem: &ProblemSpec,
    x0: f64,
    config: &SolverConfig,
) -> Result<SolveReport, SolveError> {
    if !problem.domain.contains(x0) {
        return Err(SolveError::DomainExit { x: x0, iterations: 0 });
    }
    let jet0 = problem
        .eval(x0)
        .map_err(|failure| SolveError::NonFiniteEval { failure, iterations: 0 })?;
    let f_tol = config.f_tol.unwrap_or_else(|| 1e-13 * jet0.value.abs().max(1.0));
    let sqrt_f_tol = f_tol.sqrt();

    let mut trace = vec![TracePoint { x: x0, jet: jet0, diag: None }];
    let mut xs = vec![x0];
    let mut max_excursion = x0.abs();
    let mut it = 0usize;

    macro_rules! finish {
        ($status:expr, $root:expr) => {
            return Ok(SolveReport {
                status: $status,
                root: $root,
                iterations: it,
                trace,
                max_excursion,
            })
        };
    }

    loop {
        let last = trace.len() - 1;
        let x = trace[last].x;
        let jet = trace[last].jet;

        if jet.value.abs() <= f_tol {
            finish!(SolveStatus::Converged, Some(x));
        }
        if it > 0 {
            let dx = xs[last] - xs[last - 1];
            if dx.abs() <= config.x_tol * (1.0 + x.abs()) && jet.value.abs() <= sqrt_f_tol {
                finish!(SolveStatus::Converged, Some(x));
            }
            if let Some(period) = cycle_from(&xs, 2, config.cycle_window, CYCLE_TOL) {
                finish!(SolveStatus::Cycle { period }, None);
            }
        }
        if it >= config.max_iter {
            finish!(SolveStatus::MaxIterations, None);
        }

        let (x_next, diag) = match kernels::step(config.method, x, jet) {
            Ok(pair) => pair,
            Err(StepError::UndefinedStep) | Err(StepError::HalleyPole) => {
                finish!(SolveStatus::UndefinedStep, None);
            }
            Err(StepError::Overflow { t }) => {
                return Err(SolveError::Overflow { t, x, iterations: it });
            }
        };
        trace[last].diag = Some(diag);

        if diag.applied_step.abs() <= config.x_tol * (1.0 + x.abs())
            && jet.value.abs() > sqrt_f_tol
        {
            finish!(SolveStatus::Stationary, None);
        }
        if !x_next.is_finite() || x_next.abs() > config.divergence_bound {
            finish!(SolveStatus::Diverged, None);
        }
        it += 1;
        if !problem.domain.contains(x_next) {
            return Err(SolveError::DomainExit { x: x_next, iterations: it });
        }
        let jet_next = problem
            .eval(x_next)
            .map_err(|failure| SolveError::NonFiniteEval { failure, iterations: it })?;
        trace.push(TracePoint { x: x_next, jet: jet_next, diag: None });
        xs.push(x_next);
        max_excursion = max_excursion.max(x_next.abs());
    }
}

/// Finds the smallest period `p ∈ 1..=window` such that the last `2p` points
/// of `xs` pairwise match with relative tolerance `tol`, i.e.
/// `|xs[n−1−i] − xs[n−1−i−p]| ≤ tol·(1 + |xs[n−1−i−p]|)` for `i < p`.
///
/// Returns `None` when no period fits within the available points.
///
/// ```
/// use rootkit::solver::classify_cycle;
/// assert_eq!(classify_cycle(&[0.0, 1.0, 0.0, 1.0], 4, 1e-9), Some(2));
/// assert_eq!(classify_cycle(&[0.0, 1.0, 2.0, 3.0], 4, 1e-9), None);
/// ```
pub fn classify_cycle(xs: &[f64], window: usize, tol: f64) -> Option<usize> {
    cycle_from(xs, 1, window, tol)
}

fn cycle_from(xs: &[f64], min_period: usize, window: usize, tol: f64) -> Option<usize> {
    let n = xs.len();
    for p in min_period..=window {
        if 2 * p > n {
            break;
        }
        let matches = (0..p).all(|i| {
            let a = xs[n - 1 - i - p];
            let b = xs[n - 1 - i];
            (b - a).abs() <= tol * (1.0 + a.abs())
        });
        if matches {
            return Some(p);
        }
    }
    None
}
