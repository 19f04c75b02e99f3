//! Scalar root finding with curvature-corrected Newton steps.
//!
//! Four step kernels share one driver: classical Newton, Halley, and two
//! corrections built on the curvature ratio `q = f·f″/f′²`: `hnr1`, which
//! scales the Newton step by `(e^q − 1)/q`, and `hnr2` (the default), which
//! replaces the exponential with a branched Padé form that keeps third-order
//! local convergence at Newton's per-step cost while widening the basin of
//! attraction.
//!
//! The crate is organized in layers:
//!
//! - [`kernels`]: jets, the curvature ratio, step multipliers, one-step
//!   semantics including the IEEE edge cases at turning points.
//! - [`expr`]: a small expression language with second-order forward-mode
//!   differentiation, so arbitrary `f` come in as text.
//! - [`problems`]: the built-in function catalog with exact derivative
//!   triples, domains, and known roots.
//! - [`solver`]: the iteration driver with trace recording and termination
//!   classification (convergence, cycles, divergence, stationary points,
//!   undefined steps).
//! - [`analysis`]: basin sweeps (parallel by default, behind the `parallel`
//!   feature), basin-boundary bisection, and convergence-order estimation.
//!
//! ```
//! use rootkit::problems::sqrt612;
//! use rootkit::solver::{solve, SolverConfig};
//!
//! // hnr2 reaches the double-precision root of x² − 612 in 4 steps
//! let report = solve(&sqrt612(), 10.0, &SolverConfig::default()).unwrap();
//! assert_eq!(report.iterations, 4);
//! let root = report.root.unwrap();
//! assert!((root - 612.0_f64.sqrt()).abs() < 1e-8);
//! ```

pub mod analysis;
pub mod expr;
pub mod kernels;
pub mod problems;
pub mod solver;
