//! Double-exponential Mellin quadrature.
//!
//! `(0, 1]` uses tanh-sinh, `x = 1 / (1 + e^(-pi sinh t))`, with `ln x` and
//! `ln(1 - x)` taken from softplus so the endpoint `x -> 0` never underflows
//! before the weight does. `[1, inf)` uses exp-sinh, `x = 1 + e^((pi/2) sinh t)`.
//! Both pieces are refined together by halving the step.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{c64, Complex, Error, Result};

const T_MAX: f64 = 6.5;
const MIN_LEVEL: u32 = 4;
/// Nodes with `|ln x|` beyond this are dropped (`x` outside `[1e-300, 1e300]`).
const LN_LIMIT: f64 = 690.0;

/// Tuning of [`mellin_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureParams {
    /// Relative tolerance on successive refinement levels.
    pub target_tol: f64,
    /// Last refinement level; level `l` uses step `2^-l`.
    pub level_max: u32,
    /// Lower cutoff; `0` integrates from the origin.
    pub x_min: f64,
    /// Upper cutoff; infinite means "derive from `decay_rate`".
    #[serde(with = "inf_as_null")]
    pub x_max: f64,
    /// Exponential decay rate of the integrand for large `x`, `0` if unknown.
    pub decay_rate: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            target_tol: 1e-10,
            level_max: 12,
            x_min: 0.0,
            x_max: f64::INFINITY,
            decay_rate: 0.0,
        }
    }
}

impl QuadratureParams {
    pub fn with_decay(mut self, rate: f64) -> Self {
        self.decay_rate = rate;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_tol = tol;
        self
    }

    pub fn with_x_min(mut self, x_min: f64) -> Self {
        self.x_min = x_min;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_tol > 0.0) {
            return Err(Error::InvalidParameter("target_tol must be positive".into()));
        }
        if !(self.x_min >= 0.0 && self.x_min < 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "x_min = {} must lie in [0, 1)",
                self.x_min
            )));
        }
        if !(self.x_max > 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "x_max = {} must exceed 1",
                self.x_max
            )));
        }
        if !(self.decay_rate >= 0.0) {
            return Err(Error::InvalidParameter("decay_rate must be non-negative".into()));
        }
        Ok(())
    }

    /// Effective upper cutoff for `Re s = sigma`: the point past which
    /// `x^(sigma-1) e^(-beta x) / beta` stays below `1e-4 target_tol`.
    pub fn effective_x_max(&self, sigma: f64) -> f64 {
        if self.decay_rate <= 0.0 {
            return self.x_max;
        }
        let beta = self.decay_rate;
        let target = (1e-4 * self.target_tol).ln();
        let mut x: f64 = 2.0;
        for _ in 0..50 {
            let next = ((sigma - 1.0) * x.ln() - beta.ln() - target) / beta;
            let next = next.max(2.0);
            if (next - x).abs() < 1e-9 * x {
                x = next;
                break;
            }
            x = next;
        }
        x.min(self.x_max)
    }
}

mod inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_some(x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Accuracy caveat attached to a quadrature result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadWarning {
    /// Levels agree to rounding noise, which exceeds the requested tolerance.
    RoundoffFloor { floor: f64 },
    /// Levels contract but had not reached the tolerance at `level_max`.
    ToleranceNotReached { error: f64 },
}

/// Outcome of [`mellin_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex,
    /// Difference between the last two refinement levels, floored at rounding noise.
    pub error_estimate: f64,
    pub levels: u32,
    pub evaluations: usize,
    pub warning: Option<QuadWarning>,
}

type PointFn = Arc<dyn Fn(f64) -> Complex + Send + Sync>;
type MellinFn = Arc<dyn Fn(Complex) -> Result<Complex> + Send + Sync>;

/// Known small-`x` behaviour `g(x) = sum_j c_j x^(p_j)` removed from the
/// integrand on `(0, 1]` and restored analytically as `sum_j c_j / (s + p_j)`,
/// plus an optional extra closed-form term `G(s)`.
///
/// The result is `int_0^1 x^(s-1) (f - g) + int_1^inf x^(s-1) f + sum_j c_j/(s+p_j) + G(s)`,
/// the analytic continuation of the Mellin transform of `f` to every `s`
/// where both integrals converge.
#[derive(Clone)]
pub struct SubtractionTerm {
    pub label: String,
    pub powers: Vec<(Complex, f64)>,
    compensation: Option<MellinFn>,
    regularized: Option<PointFn>,
}

impl core::fmt::Debug for SubtractionTerm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SubtractionTerm")
            .field("label", &self.label)
            .field("powers", &self.powers)
            .field("compensation", &self.compensation.is_some())
            .field("regularized", &self.regularized.is_some())
            .finish()
    }
}

impl SubtractionTerm {
    /// `g = sum c_j x^(p_j)`.
    pub fn powers(label: &str, powers: Vec<(Complex, f64)>) -> Self {
        SubtractionTerm {
            label: label.into(),
            powers,
            compensation: None,
            regularized: None,
        }
    }

    /// `g = c / x`.
    pub fn inverse_x(c: Complex) -> Self {
        Self::powers("c/x", alloc::vec![(c, -1.0)])
    }

    /// `g = c x^(-1/2)`.
    pub fn inverse_sqrt(c: Complex) -> Self {
        Self::powers("c/sqrt(x)", alloc::vec![(c, -0.5)])
    }

    /// `g = c`.
    pub fn constant(c: Complex) -> Self {
        Self::powers("c", alloc::vec![(c, 0.0)])
    }

    /// Stable evaluator of `f(x) - g(x)` on `(0, 1]`, used in place of the
    /// direct difference, which cancels badly as `x -> 0`.
    pub fn with_regularized(mut self, h: impl Fn(f64) -> Complex + Send + Sync + 'static) -> Self {
        self.regularized = Some(Arc::new(h));
        self
    }

    /// Extra closed-form term `G(s)` added to the result.
    pub fn with_compensation(
        mut self,
        g: impl Fn(Complex) -> Result<Complex> + Send + Sync + 'static,
    ) -> Self {
        self.compensation = Some(Arc::new(g));
        self
    }

    pub fn g(&self, x: f64) -> Complex {
        self.powers
            .iter()
            .fold(c64(0.0, 0.0), |acc, &(c, p)| acc + c * x.powf(p))
    }

    /// `sum_j c_j / (s + p_j) + G(s)`.
    pub fn analytic_part(&self, s: Complex) -> Result<Complex> {
        let mut acc = c64(0.0, 0.0);
        for &(c, p) in &self.powers {
            let d = s + p;
            if d.norm() < crate::complexfn::POLE_GUARD {
                return Err(Error::Pole {
                    function: "subtraction term",
                    at: s,
                    distance: d.norm(),
                });
            }
            acc += c / d;
        }
        if let Some(g) = &self.compensation {
            acc += g(s)?;
        }
        Ok(acc)
    }

    fn subtracted(&self, f: &dyn Fn(f64) -> Complex, x: f64) -> Complex {
        match &self.regularized {
            Some(h) => h(x),
            None => f(x) - self.g(x),
        }
    }
}

/// `ln(1 + e^v)` without overflow.
fn softplus(v: f64) -> f64 {
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

struct Accumulator {
    sum: Complex,
    abs_sum: f64,
    evaluations: usize,
}

/// Estimate `int_{x_min}^{x_max} x^(s-1) f(x) dx`, with optional singular subtraction.
pub fn mellin_quadrature(
    f: &dyn Fn(f64) -> Complex,
    s: Complex,
    p: &QuadratureParams,
    sub: Option<&SubtractionTerm>,
) -> Result<QuadResult> {
    p.validate()?;
    let x_max = p.effective_x_max(s.re);
    let x_min = p.x_min;
    // mass beyond x_max for |f| <= e^(-beta x)
    let tail = if p.decay_rate > 0.0 && x_max.is_finite() {
        x_max.powf(s.re - 1.0) * (-p.decay_rate * x_max).exp() / p.decay_rate
    } else {
        0.0
    };
    let mut acc = Accumulator {
        sum: c64(0.0, 0.0),
        abs_sum: 0.0,
        evaluations: 0,
    };
    let left = |x: f64| match sub {
        Some(sub) => sub.subtracted(f, x),
        None => f(x),
    };
    let visit = |t: f64, acc: &mut Accumulator| -> Result<()> {
        // (0, 1] or [x_min, 1]
        let v = PI * t.sinh();
        let ln_u = -softplus(-v);
        let ln_1mu = -softplus(v);
        let jac = PI * t.cosh();
        if x_min == 0.0 {
            if ln_u > -LN_LIMIT {
                let x = ln_u.exp();
                let w = (s * ln_u + ln_1mu).exp() * jac;
                add(acc, w, left(x), x)?;
            }
        } else {
            let u = ln_u.exp();
            let x = x_min + (1.0 - x_min) * u;
            let w = ((s - 1.0) * x.ln() + ln_u + ln_1mu).exp() * (jac * (1.0 - x_min));
            add(acc, w, left(x), x)?;
        }
        // [1, x_max)
        let v = FRAC_PI_2 * t.sinh();
        let ln_x = softplus(v);
        if ln_x < LN_LIMIT {
            let x = 1.0 + v.exp();
            if x < x_max {
                let w = ((s - 1.0) * ln_x + v).exp() * (FRAC_PI_2 * t.cosh());
                add(acc, w, f(x), x)?;
            }
        }
        Ok(())
    };

    let mut prev: Option<Complex> = None;
    let mut diff = f64::INFINITY;
    let mut prev_diff = f64::INFINITY;
    let mut total = c64(0.0, 0.0);
    let mut level = 0;
    while level <= p.level_max {
        let h = (0.5f64).powi(level as i32);
        if level == 0 {
            let kmax = T_MAX.floor() as i64;
            for k in -kmax..=kmax {
                visit(k as f64, &mut acc)?;
            }
        } else {
            let kmax = (T_MAX / h).floor() as i64;
            let mut k = -kmax;
            if k % 2 == 0 {
                k += 1;
            }
            while k <= kmax {
                visit(k as f64 * h, &mut acc)?;
                k += 2;
            }
        }
        total = acc.sum * h;
        let l1 = acc.abs_sum * h;
        if let Some(pv) = prev {
            prev_diff = diff;
            diff = (total - pv).norm();
        }
        if level >= MIN_LEVEL {
            let floor = 64.0 * f64::EPSILON * l1;
            let scale = total.norm();
            if diff <= p.target_tol * scale {
                return finish(total, diff.max(floor) + tail, level, acc.evaluations, None, s, sub);
            }
            if diff <= floor {
                let warning = (floor > p.target_tol * scale).then_some(QuadWarning::RoundoffFloor { floor });
                return finish(total, floor + tail, level, acc.evaluations, warning, s, sub);
            }
        }
        prev = Some(total);
        level += 1;
    }
    let levels = p.level_max;
    if diff < prev_diff && diff.is_finite() {
        finish(
            total,
            diff + tail,
            levels,
            acc.evaluations,
            Some(QuadWarning::ToleranceNotReached { error: diff }),
            s,
            sub,
        )
    } else {
        Err(Error::NonConvergence {
            error: diff,
            levels,
        })
    }
}

fn add(acc: &mut Accumulator, w: Complex, fx: Complex, x: f64) -> Result<()> {
    acc.evaluations += 1;
    if w.norm() == 0.0 {
        return Ok(());
    }
    let term = w * fx;
    if !(term.re.is_finite() && term.im.is_finite()) {
        return Err(Error::domain(
            "mellin_quadrature",
            alloc::format!("non-finite integrand at x = {x:e}"),
        ));
    }
    acc.sum += term;
    acc.abs_sum += term.norm();
    Ok(())
}

fn finish(
    total: Complex,
    error: f64,
    levels: u32,
    evaluations: usize,
    warning: Option<QuadWarning>,
    s: Complex,
    sub: Option<&SubtractionTerm>,
) -> Result<QuadResult> {
    let extra = match sub {
        Some(sub) => sub.analytic_part(s)?,
        None => c64(0.0, 0.0),
    };
    Ok(QuadResult {
        value: total + extra,
        error_estimate: error,
        levels,
        evaluations,
        warning,
    })
}
