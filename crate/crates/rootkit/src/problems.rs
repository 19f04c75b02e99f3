//! Built-in test problems with exact derivative triples, known roots, and
//! valid domains.
//!
//! Each entry carries a hand-coded closed-form jet evaluator (not autodiff),
//! so the catalog doubles as ground truth for the [`crate::expr`] module. The
//! fixed entries are `sqrt612`, `tanh`, `cubic_cycle`, and `fractal_cubic`;
//! `affine`, `log_family`, and `mobius` build parameterized instances.

use crate::expr::{self, ExprAst};
use crate::kernels::Jet2;
use std::fmt;
use std::sync::Arc;

/// Open interval, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const ALL: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Why an evaluator could not produce a jet at `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalFailure {
    /// Evaluation produced NaN or an infinity.
    NonFinite { x: f64, detail: String },
    /// `x` violates a function's domain (log/sqrt argument, division).
    Domain { x: f64, detail: String },
}

impl fmt::Display for EvalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalFailure::NonFinite { x, detail } => {
                write!(f, "non-finite evaluation at x = {x:e}: {detail}")
            }
            EvalFailure::Domain { x, detail } => {
                write!(f, "domain violation at x = {x:e}: {detail}")
            }
        }
    }
}

impl std::error::Error for EvalFailure {}

/// Shareable jet evaluator.
pub type Evaluator = Arc<dyn Fn(f64) -> Result<Jet2, EvalFailure> + Send + Sync>;

/// A named function with jet evaluator, domain, and known roots.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub evaluator: Evaluator,
    pub domain: Interval,
    /// Roots in ascending order. May be empty (expression problems).
    pub known_roots: Vec<f64>,
    pub notes: String,
}

impl ProblemSpec {
    pub fn eval(&self, x: f64) -> Result<Jet2, EvalFailure> {
        (self.evaluator)(x)
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("known_roots", &self.known_roots)
            .field("notes", &self.notes)
            .finish_non_exhaustive()
    }
}

fn finite_jet(x: f64, value: f64, d1: f64, d2: f64) -> Result<Jet2, EvalFailure> {
    Jet2::new(value, d1, d2)
        .map_err(|e| EvalFailure::NonFinite { x, detail: e.to_string() })
}

/// `f(x) = x² − 612`, root `√612 ≈ 24.738633753705963`.
pub fn sqrt612() -> ProblemSpec {
    ProblemSpec {
        name: "sqrt612".into(),
        evaluator: Arc::new(|x| finite_jet(x, x * x - 612.0, 2.0 * x, 2.0)),
        domain: Interval::ALL,
        known_roots: vec![612.0_f64.sqrt()],
        notes: "Square-root benchmark; fast Newton and faster hnr2 convergence from x0 = 10.".into(),
    }
}

/// `f(x) = tanh x`, root 0. Derivatives use `sech² = 1 − tanh²`, which stays
/// finite where `cosh` would overflow.
pub fn tanh() -> ProblemSpec {
    ProblemSpec {
        name: "tanh".into(),
        evaluator: Arc::new(|x| {
            let t = f64::tanh(x);
            let s = 1.0 - t * t;
            finite_jet(x, t, s, -2.0 * t * s)
        }),
        domain: Interval::ALL,
        known_roots: vec![0.0],
        notes: "Newton converges only for |x0| below about 1.0886, then flips sign and \
                diverges; the corrected methods have a much wider basin."
            .into(),
    }
}

/// `f(x) = x³ − 2x + 2`, real root ≈ −1.7692923542386314. Newton has a 2-cycle
/// through 0 and 1; the turning points sit at `±√(2/3)`.
pub fn cubic_cycle() -> ProblemSpec {
    ProblemSpec {
        name: "cubic_cycle".into(),
        evaluator: Arc::new(|x| {
            finite_jet(x, x * (x * x - 2.0) + 2.0, 3.0 * x * x - 2.0, 6.0 * x)
        }),
        domain: Interval::ALL,
        known_roots: vec![-1.7692923542386314],
        notes: "Newton 2-cycle 0 <-> 1; turning points at +-sqrt(2/3) probe the q = -inf \
                and q = +inf step semantics."
            .into(),
    }
}

/// `f(x) = x³ − 2x² − 11x + 12`, roots −3, 1, 4. Basins of the three roots
/// interleave on fine scales near the basin boundaries.
pub fn fractal_cubic() -> ProblemSpec {
    ProblemSpec {
        name: "fractal_cubic".into(),
        evaluator: Arc::new(|x| {
            finite_jet(
                x,
                ((x - 2.0) * x - 11.0) * x + 12.0,
                (3.0 * x - 4.0) * x - 11.0,
                6.0 * x - 4.0,
            )
        }),
        domain: Interval::ALL,
        known_roots: vec![-3.0, 1.0, 4.0],
        notes: "Root-identity sweeps near x0 = 2.3528 show the interleaved basin structure \
                under Newton; hnr2 splits the line into three clean intervals."
            .into(),
    }
}

/// `f(x) = α·x + β` with `α ≠ 0`; root `−β/α`. Newton is exact here.
pub fn affine(alpha: f64, beta: f64) -> ProblemSpec {
    assert!(alpha != 0.0 && alpha.is_finite() && beta.is_finite(), "affine needs finite a != 0");
    ProblemSpec {
        name: format!("affine({alpha},{beta})"),
        evaluator: Arc::new(move |x| finite_jet(x, alpha * x + beta, alpha, 0.0)),
        domain: Interval::ALL,
        known_roots: vec![-beta / alpha],
        notes: "One Newton step lands on the root from any start.".into(),
    }
}

/// `f(x) = a·log(b·x + c)` with `a, b ≠ 0`; root `(1 − c)/b`. The hnr1 step is
/// exact on this family. Domain is the half-line where `b·x + c > 0`.
pub fn log_family(a: f64, b: f64, c: f64) -> ProblemSpec {
    assert!(
        a != 0.0 && b != 0.0 && a.is_finite() && b.is_finite() && c.is_finite(),
        "log_family needs finite a, b != 0"
    );
    let domain = if b > 0.0 {
        Interval { lo: -c / b, hi: f64::INFINITY }
    } else {
        Interval { lo: f64::NEG_INFINITY, hi: -c / b }
    };
    ProblemSpec {
        name: format!("log_family({a},{b},{c})"),
        evaluator: Arc::new(move |x| {
            let u = b * x + c;
            if u <= 0.0 {
                return Err(EvalFailure::Domain {
                    x,
                    detail: format!("log argument {b}*x + {c} = {u:e} is not positive"),
                });
            }
            finite_jet(x, a * u.ln(), a * b / u, -a * b * b / (u * u))
        }),
        domain,
        known_roots: vec![(1.0 - c) / b],
        notes: "hnr1's exponential correction is exact on this family.".into(),
    }
}

/// Möbius function `f(x) = (αx + β)/(γx + δ)` with `αδ − βγ ≠ 0` and `α ≠ 0`
/// so a root exists; root `−β/α`. Halley's step is exact on this family.
/// The domain is the component of the real line (split by the pole at
/// `−δ/γ`, if any) that contains the root.
pub fn mobius(alpha: f64, beta: f64, gamma: f64, delta: f64) -> ProblemSpec {
    let det = alpha * delta - beta * gamma;
    assert!(
        det != 0.0 && alpha != 0.0 && det.is_finite(),
        "mobius needs finite parameters with a*d - b*g != 0 and a != 0"
    );
    let root = -beta / alpha;
    let domain = if gamma == 0.0 {
        Interval::ALL
    } else {
        let pole = -delta / gamma;
        if root < pole {
            Interval { lo: f64::NEG_INFINITY, hi: pole }
        } else {
            Interval { lo: pole, hi: f64::INFINITY }
        }
    };
    ProblemSpec {
        name: format!("mobius({alpha},{beta},{gamma},{delta})"),
        evaluator: Arc::new(move |x| {
            let den = gamma * x + delta;
            if den == 0.0 {
                return Err(EvalFailure::Domain {
                    x,
                    detail: format!("denominator {gamma}*x + {delta} vanishes"),
                });
            }
            finite_jet(
                x,
                (alpha * x + beta) / den,
                det / (den * den),
                -2.0 * gamma * det / (den * den * den),
            )
        }),
        domain,
        known_roots: vec![root],
        notes: "Halley's step is exact on this family; q >= 2 reverses it.".into(),
    }
}

/// Builds a problem from an expression text, e.g. `x^2 - 612`.
///
/// The resulting spec has no known roots and an unbounded domain; domain
/// violations surface as evaluation failures at the offending point.
pub fn from_expr(text: &str) -> Result<ProblemSpec, expr::ParseError> {
    let ast: Arc<ExprAst> = Arc::new(expr::parse(text)?);
    let name = format!("expr({text})");
    let notes = format!("User expression {text:?}.");
    Ok(ProblemSpec {
        name,
        evaluator: Arc::new(move |x| {
            expr::eval_jet(&ast, x).map_err(|e| match e.kind {
                expr::EvalErrorKind::NonFinite => {
                    EvalFailure::NonFinite { x, detail: e.to_string() }
                }
                _ => EvalFailure::Domain { x, detail: e.to_string() },
            })
        }),
        domain: Interval::ALL,
        known_roots: Vec::new(),
        notes,
    })
}

/// The fixed catalog entries.
pub fn catalog() -> Vec<ProblemSpec> {
    vec![sqrt612(), tanh(), cubic_cycle(), fractal_cubic()]
}

/// Error for a problem name [`by_name`] does not recognize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownProblem {
    pub input: String,
    pub reason: String,
}

impl fmt::Display for UnknownProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown problem {:?}: {}; expected sqrt612, tanh, cubic_cycle, fractal_cubic, \
             affine(a,b), log_family(a,b,c), or mobius(a,b,g,d)",
            self.input, self.reason
        )
    }
}

impl std::error::Error for UnknownProblem {}

/// Looks up a problem by its stable identifier, e.g. `sqrt612` or a
/// parameterized form like `log_family(2, 0.5, 3)`.
pub fn by_name(input: &str) -> Result<ProblemSpec, UnknownProblem> {
    let fail = |reason: &str| UnknownProblem { input: input.to_string(), reason: reason.into() };
    let trimmed = input.trim();
    let (name, params) = match trimmed.find('(') {
        None => (trimmed, None),
        Some(open) => {
            let rest = &trimmed[open + 1..];
            let close = rest.rfind(')').ok_or_else(|| fail("missing closing parenthesis"))?;
            if !rest[close + 1..].trim().is_empty() {
                return Err(fail("trailing text after parameter list"));
            }
            let params: Vec<f64> = rest[..close]
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| fail("parameters must be numbers"))?;
            (trimmed[..open].trim(), Some(params))
        }
    };
    match (name, params) {
        ("sqrt612", None) => Ok(sqrt612()),
        ("tanh", None) => Ok(tanh()),
        ("cubic_cycle", None) => Ok(cubic_cycle()),
        ("fractal_cubic", None) => Ok(fractal_cubic()),
        ("affine", Some(p)) if p.len() == 2 => {
            if p[0] == 0.0 || !p[0].is_finite() || !p[1].is_finite() {
                return Err(fail("affine needs finite a != 0"));
            }
            Ok(affine(p[0], p[1]))
        }
        ("log_family", Some(p)) if p.len() == 3 => {
            if p[0] == 0.0 || p[1] == 0.0 || p.iter().any(|v| !v.is_finite()) {
                return Err(fail("log_family needs finite a, b != 0"));
            }
            Ok(log_family(p[0], p[1], p[2]))
        }
        ("mobius", Some(p)) if p.len() == 4 => {
            let det = p[0] * p[3] - p[1] * p[2];
            if det == 0.0 || p[0] == 0.0 || p.iter().any(|v| !v.is_finite()) || !det.is_finite() {
                return Err(fail("mobius needs finite parameters, a != 0, a*d - b*g != 0"));
            }
            Ok(mobius(p[0], p[1], p[2], p[3]))
        }
        ("affine" | "log_family" | "mobius", _) => Err(fail("wrong number of parameters")),
        _ => Err(fail("no such name")),
    }
}
