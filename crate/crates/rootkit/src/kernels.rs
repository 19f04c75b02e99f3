//! Step kernels and multiplier functions for the four iteration methods.
//!
//! Everything in this module is a pure function of its arguments. The central
//! quantity is the dimensionless curvature ratio `q = f·f″/f′²`, computed as an
//! IEEE extended real: at a turning point (f′ = 0) it becomes `+∞` or `−∞`
//! depending on the sign of `f·f″`, and the two signs get different treatment.
//! `q = −∞` has a well-defined limiting step of zero; `q = +∞` leaves the step
//! undefined.
//!
//! The four methods differ only in the factor applied to the Newton step
//! `−f/f′`:
//!
//! * `newton`: factor 1,
//! * `halley`: `1/(1−q/2)`, which flips the step direction for `q > 2`,
//! * `hnr1`: `E(q)` with `E(t) = (e^t−1)/t`, exact on `a·log(bx+c)`,
//! * `hnr2`: a branched Padé surrogate for `E`, `1+(q/2)(1+q/3)` for `q ≥ 0`
//!   and `1/(1−q/2)` for `q ≤ 0`, which keeps third-order convergence without
//!   the exponential's overflow risk.
//!
//! ```
//! use rootkit::kernels::{step, Jet2, Method};
//!
//! // One Newton step on f(x) = x^2 - 612 from x = 10.
//! let j = Jet2::new(-512.0, 20.0, 2.0).unwrap();
//! let (x_next, diag) = step(Method::Newton, 10.0, j).unwrap();
//! assert_eq!(x_next, 35.6);
//! assert_eq!(diag.newton_step, 25.6);
//! ```

use std::fmt;

/// Value, first, and second derivative of `f` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    /// Builds a jet, rejecting non-finite components so that NaN or infinite
    /// evaluations surface as errors instead of leaking into step arithmetic.
    pub fn new(value: f64, d1: f64, d2: f64) -> Result<Self, NonFiniteJet> {
        if value.is_finite() && d1.is_finite() && d2.is_finite() {
            Ok(Jet2 { value, d1, d2 })
        } else {
            Err(NonFiniteJet { value, d1, d2 })
        }
    }
}

/// Error for a jet with a NaN or infinite component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonFiniteJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl fmt::Display for NonFiniteJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "non-finite evaluation: f = {:e}, f' = {:e}, f'' = {:e}",
            self.value, self.d1, self.d2
        )
    }
}

impl std::error::Error for NonFiniteJet {}

/// Which iteration to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Newton,
    Halley,
    Hnr1,
    Hnr2,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Newton, Method::Halley, Method::Hnr1, Method::Hnr2];

    pub fn name(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Halley => "halley",
            Method::Hnr1 => "hnr1",
            Method::Hnr2 => "hnr2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, UnknownMethod> {
        match s {
            "newton" => Ok(Method::Newton),
            "halley" => Ok(Method::Halley),
            "hnr1" => Ok(Method::Hnr1),
            "hnr2" => Ok(Method::Hnr2),
            _ => Err(UnknownMethod(s.to_string())),
        }
    }
}

/// Error for a method name outside `newton|halley|hnr1|hnr2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod(pub String);

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown method {:?} (expected newton, halley, hnr1, or hnr2)", self.0)
    }
}

impl std::error::Error for UnknownMethod {}

/// Per-step record of the quantities that went into one iterate update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    /// Curvature ratio `f·f″/f′²` as an extended real.
    pub q: f64,
    /// Factor applied to the Newton step.
    pub multiplier: f64,
    /// `−f/f′`; infinite when `f′ = 0`.
    pub newton_step: f64,
    /// `x_{n+1} − x_n` as actually applied; exactly zero when the multiplier
    /// is zero, even where the Newton step is infinite.
    pub applied_step: f64,
    /// Set when the multiplier is strictly negative, which flips the step
    /// against the Newton direction. Only Halley can reach this.
    pub direction_reversed: bool,
}

/// Failures of a single step computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepError {
    /// `q = +∞`, `q` indeterminate (0/0), or a Newton step with `f′ = 0`.
    UndefinedStep,
    /// Halley's multiplier has a pole at exactly `q = 2`.
    HalleyPole,
    /// `e^t` is not representable; carries the offending argument.
    Overflow { t: f64 },
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::UndefinedStep => {
                write!(f, "step undefined (q = +inf, q indeterminate, or f' = 0 under Newton)")
            }
            StepError::HalleyPole => write!(f, "Halley multiplier pole: q = 2"),
            StepError::Overflow { t } => {
                write!(f, "exponential multiplier overflow: exp({t}) is not representable")
            }
        }
    }
}

impl std::error::Error for StepError {}

/// Curvature ratio `f·f″/f′²` as an IEEE extended real.
///
/// With `f′ = 0` this is `±∞` by the sign of `f·f″`, and NaN when `f·f″ = 0`
/// too (the indeterminate case). No error return: the extended real itself
/// carries the singular cases.
pub fn curvature_q(j: Jet2) -> f64 {
    (j.value * j.d2) / (j.d1 * j.d1)
}

/// Threshold above which `e^t` overflows an f64 (`exp(709.78) ≈ 1.8e308`).
const EXP_OVERFLOW_T: f64 = 709.0;

/// Below this magnitude `(e^t−1)/t` is taken as exactly 1 to avoid 0/0.
const EXP_TINY_T: f64 = 1e-300;

/// The exponential multiplier `E(t) = (e^t − 1)/t`.
///
/// Evaluated through `exp_m1` so the cancellation near `t = 0` costs nothing;
/// relative error stays at rounding level for `|t| ≤ 1`. `E(0) = 1`,
/// `E(−∞) = 0`, and `E(t) > 0` for every finite `t`.
pub fn exp_multiplier(t: f64) -> Result<f64, StepError> {
    if t.is_nan() {
        return Err(StepError::UndefinedStep);
    }
    if t > EXP_OVERFLOW_T {
        return Err(StepError::Overflow { t });
    }
    if t.abs() < EXP_TINY_T {
        return Ok(1.0);
    }
    Ok(t.exp_m1() / t)
}

/// The branched Padé multiplier: `1+(q/2)(1+q/3)` for `q ≥ 0`, `1/(1−q/2)`
/// for `q ≤ 0`. Both branches equal 1 at `q = 0`. The limits fall out of the
/// arithmetic: `0` at `q = −∞` and the `+∞` marker at `q = +∞`.
pub fn pade_multiplier(q: f64) -> Result<f64, StepError> {
    if q.is_nan() {
        return Err(StepError::UndefinedStep);
    }
    if q >= 0.0 {
        Ok(1.0 + (q / 2.0) * (1.0 + q / 3.0))
    } else {
        Ok(1.0 / (1.0 - q / 2.0))
    }
}

/// Halley's multiplier `1/(1−q/2)` and whether it reverses the step direction.
///
/// The reversal flag is set for a strictly negative multiplier (`q > 2`). The
/// pole at exactly `q = 2` is an error, as is indeterminate `q`.
pub fn halley_multiplier(q: f64) -> Result<(f64, bool), StepError> {
    if q.is_nan() {
        return Err(StepError::UndefinedStep);
    }
    if q == 2.0 {
        return Err(StepError::HalleyPole);
    }
    let m = 1.0 / (1.0 - q / 2.0);
    Ok((m, m < 0.0))
}

/// One step of the chosen method from `x` with jet `j`.
///
/// Returns the next iterate and the diagnostics that produced it.
///
/// Singular cases: a zero multiplier (reachable only as the `q = −∞` limit)
/// yields an applied step of exactly zero, the turning-point limit
/// `2f′/f″ = 0`; the caller decides what a zero step at a non-root means.
/// `q = +∞` and
/// indeterminate `q` are undefined-step errors, Newton requires `f′ ≠ 0`, and
/// hnr1 propagates the exponential overflow error.
pub fn step(method: Method, x: f64, j: Jet2) -> Result<(f64, StepDiagnostics), StepError> {
    let newton_step = -(j.value / j.d1);
    let q = curvature_q(j);
    let (multiplier, direction_reversed) = match method {
        Method::Newton => {
            if j.d1 == 0.0 {
                return Err(StepError::UndefinedStep);
            }
            (1.0, false)
        }
        Method::Halley => {
            if q == f64::INFINITY {
                return Err(StepError::UndefinedStep);
            }
            halley_multiplier(q)?
        }
        Method::Hnr1 => {
            if q == f64::INFINITY {
                return Err(StepError::UndefinedStep);
            }
            (exp_multiplier(q)?, false)
        }
        Method::Hnr2 => {
            if q == f64::INFINITY {
                return Err(StepError::UndefinedStep);
            }
            (pade_multiplier(q)?, false)
        }
    };
    // multiplier 0 times an infinite Newton step would be NaN; the limit of
    // the product is an exact zero step.
    let applied_step = if multiplier == 0.0 { 0.0 } else { newton_step * multiplier };
    // An underflowed Newton step times an overflowed multiplier (or the
    // reverse) leaves no usable direction.
    if applied_step.is_nan() {
        return Err(StepError::UndefinedStep);
    }
    let x_next = x + applied_step;
    Ok((
        x_next,
        StepDiagnostics { q, multiplier, newton_step, applied_step, direction_reversed },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(value: f64, d1: f64, d2: f64) -> Jet2 {
        Jet2 { value, d1, d2 }
    }

    #[test]
    fn jet_construction_rejects_non_finite() {
        assert!(Jet2::new(1.0, 2.0, 3.0).is_ok());
        for bad in [
            (f64::NAN, 0.0, 0.0),
            (0.0, f64::INFINITY, 0.0),
            (0.0, 0.0, f64::NEG_INFINITY),
        ] {
            assert!(Jet2::new(bad.0, bad.1, bad.2).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn curvature_extended_real_semantics() {
        // finite, turning-point, and indeterminate inputs
        assert_eq!(curvature_q(jet(-512.0, 20.0, 2.0)), -2.56);
        assert_eq!(curvature_q(jet(7.0, 3.0, 0.0)), 0.0);
        assert_eq!(curvature_q(jet(3.0887, 0.0, -4.899)), f64::NEG_INFINITY);
        assert_eq!(curvature_q(jet(3.0887, 0.0, 4.899)), f64::INFINITY);
        assert_eq!(curvature_q(jet(-3.0887, 0.0, 4.899)), f64::NEG_INFINITY);
        assert!(curvature_q(jet(1.0, 0.0, 0.0)).is_nan());
        assert!(curvature_q(jet(0.0, 0.0, 5.0)).is_nan());
    }

    #[test]
    fn exp_multiplier_values() {
        assert_eq!(exp_multiplier(0.0).unwrap(), 1.0);
        assert_eq!(exp_multiplier(-1e-301).unwrap(), 1.0);
        assert_eq!(exp_multiplier(f64::NEG_INFINITY).unwrap(), 0.0);
        let e1 = exp_multiplier(1.0).unwrap();
        assert!((e1 - 1.718281828459045).abs() < 1e-15, "E(1) = {e1}");
        let em = exp_multiplier(-2.56).unwrap();
        assert!((em - 0.36042783576433607).abs() < 1e-12, "E(-2.56) = {em}");
        // large-but-representable argument is fine, past the cliff is an error
        assert!(exp_multiplier(709.0).unwrap().is_finite());
        assert_eq!(exp_multiplier(709.1), Err(StepError::Overflow { t: 709.1 }));
        assert_eq!(
            exp_multiplier(f64::INFINITY),
            Err(StepError::Overflow { t: f64::INFINITY })
        );
        assert_eq!(exp_multiplier(f64::NAN), Err(StepError::UndefinedStep));
    }

    #[test]
    fn exp_multiplier_stable_near_zero() {
        // the naive (e^t-1)/t loses everything here; exp_m1 does not
        for t in [1e-8, -1e-8, 1e-14, -1e-14, 1e-250, -1e-250] {
            let e = exp_multiplier(t).unwrap();
            let expect = 1.0 + t / 2.0;
            assert!((e - expect).abs() <= 1e-14 * expect.abs(), "E({t}) = {e}");
        }
    }

    #[test]
    fn pade_multiplier_values() {
        assert_eq!(pade_multiplier(0.0).unwrap(), 1.0);
        assert_eq!(pade_multiplier(-0.0).unwrap(), 1.0);
        assert_eq!(pade_multiplier(3.0).unwrap(), 4.0);
        assert_eq!(pade_multiplier(-2.56).unwrap(), 0.43859649122807015);
        assert_eq!(pade_multiplier(f64::NEG_INFINITY).unwrap(), 0.0);
        assert_eq!(pade_multiplier(f64::INFINITY).unwrap(), f64::INFINITY);
        assert_eq!(pade_multiplier(f64::NAN), Err(StepError::UndefinedStep));
    }

    #[test]
    fn halley_multiplier_values() {
        assert_eq!(halley_multiplier(1.0).unwrap(), (2.0, false));
        assert_eq!(halley_multiplier(3.0).unwrap(), (-2.0, true));
        assert_eq!(halley_multiplier(0.0).unwrap(), (1.0, false));
        assert_eq!(halley_multiplier(2.0), Err(StepError::HalleyPole));
        assert_eq!(halley_multiplier(f64::NAN), Err(StepError::UndefinedStep));
        // limits: -0.0 at q = +inf (not a reversal), +0.0 at q = -inf
        let (m, rev) = halley_multiplier(f64::INFINITY).unwrap();
        assert_eq!(m, 0.0);
        assert!(m.is_sign_negative() && !rev);
        let (m, rev) = halley_multiplier(f64::NEG_INFINITY).unwrap();
        assert_eq!(m, 0.0);
        assert!(m.is_sign_positive() && !rev);
    }

    #[test]
    fn step_frozen_values() {
        // f(x) = x^2 - 612 at x = 10: newton and hnr2 land where they should
        let j = jet(-512.0, 20.0, 2.0);
        let (x, d) = step(Method::Newton, 10.0, j).unwrap();
        assert_eq!(x, 35.6);
        assert_eq!(d.q, -2.56);
        assert_eq!(d.multiplier, 1.0);
        assert_eq!(d.applied_step, 25.6);
        assert!(!d.direction_reversed);

        let (x, d) = step(Method::Hnr2, 10.0, j).unwrap();
        assert_eq!(x, 21.228070175438596);
        assert_eq!(d.multiplier, 0.43859649122807015);
        assert_eq!(d.applied_step, d.newton_step * d.multiplier);

        // f(x) = x^3 - 2x + 2: Newton flips 0 and 1 into each other
        let (x, _) = step(Method::Newton, 0.0, jet(2.0, -2.0, 0.0)).unwrap();
        assert_eq!(x, 1.0);
        let (x, _) = step(Method::Newton, 1.0, jet(1.0, 1.0, 6.0)).unwrap();
        assert_eq!(x, 0.0);
    }

    #[test]
    fn step_turning_point_zero_limit() {
        // exact turning point with f·f'' < 0: q = -inf, zero applied step
        let j = jet(3.0886621079036347, 0.0, -4.898979485566356);
        let x0 = -0.816496580927726;
        for m in [Method::Hnr1, Method::Hnr2] {
            let (x, d) = step(m, x0, j).unwrap();
            assert_eq!(x, x0, "{m} moved off the turning point");
            assert_eq!(d.q, f64::NEG_INFINITY);
            assert_eq!(d.multiplier, 0.0);
            assert_eq!(d.applied_step, 0.0);
        }
        // with f·f'' > 0 the step is undefined instead
        let j = jet(0.9113378920963651, 0.0, 4.898979485566356);
        for m in [Method::Newton, Method::Halley, Method::Hnr1, Method::Hnr2] {
            assert_eq!(step(m, 0.816496580927726, j), Err(StepError::UndefinedStep));
        }
    }

    #[test]
    fn step_error_cases() {
        // newton needs a nonzero first derivative even where q is benign
        assert_eq!(
            step(Method::Newton, 1.0, jet(3.0, 0.0, -2.0)),
            Err(StepError::UndefinedStep)
        );
        // halley pole at q = 2 exactly
        assert_eq!(step(Method::Halley, 0.0, jet(2.0, 1.0, 1.0)), Err(StepError::HalleyPole));
        // indeterminate q (f = 0 and f' = 0)
        assert_eq!(step(Method::Hnr2, 0.0, jet(0.0, 0.0, 3.0)), Err(StepError::UndefinedStep));
        // hnr1 overflows when q > 709; x^3 - 2x + 2 near +sqrt(2/3) does it
        let x = 0.83;
        let j = jet(x * (x * x - 2.0) + 2.0, 3.0 * x * x - 2.0, 6.0 * x);
        match step(Method::Hnr1, x, j) {
            Err(StepError::Overflow { t }) => assert_eq!(t, 1020.6364418990046),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn step_at_root_is_harmless() {
        // f = 0 with f' != 0: zero newton step, iterate stays put
        let (x, d) = step(Method::Hnr2, 4.0, jet(0.0, 25.0, 22.0)).unwrap();
        assert_eq!(x, 4.0);
        assert_eq!(d.q, 0.0);
        assert_eq!(d.multiplier, 1.0);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("brent".parse::<Method>().is_err());
    }
}
