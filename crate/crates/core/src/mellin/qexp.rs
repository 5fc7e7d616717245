//! q-expansions on the imaginary axis and their Mellin transforms.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::quadrature::{mellin_quadrature, QuadWarning, QuadratureParams};
use crate::modular::CoeffSeries;
use crate::{c64, Complex, Error, Result};

/// Stop once the tail bound falls below this fraction of the largest term.
const TAIL_RATIO: f64 = 1e-18;
/// Safety factor on the cusp bound.
const CUSP_CONSTANT: f64 = 4.0;
/// Discarded mass below `x_min` relative to `target_tol`.
const CUTOFF_FRACTION: f64 = 1e-4;

/// `f(ix)` with the truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QExpValue {
    pub value: Complex,
    /// Bound on `|sum_{n > terms} a_n e^(-2 pi n x / lambda)|`.
    pub tail_bound: f64,
    /// Highest index summed.
    pub terms: usize,
}

/// Bound on `sum_{n > m} C n^c r^n`, or infinity while the ratio test fails.
fn tail(growth: (f64, f64), kappa: f64, m: usize) -> f64 {
    let (cc, c) = growth;
    let n = (m + 1) as f64;
    let ratio = (-kappa).exp() * ((n + 1.0) / n).powf(c);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    cc * n.powf(c) * (-kappa * n).exp() / (1.0 - ratio)
}

/// `f(ix) = sum_n a_n e^(-2 pi n x / lambda)`.
pub fn qexp_eval(c: &CoeffSeries, x: f64) -> Result<QExpValue> {
    if !(x > 0.0) {
        return Err(Error::domain("qexp_eval", alloc::format!("x = {x} must be positive")));
    }
    let kappa = 2.0 * PI * x / c.lambda;
    let r = (-kappa).exp();
    let mut e = 1.0;
    let mut sum = c.a0();
    let mut max = sum.norm();
    let n_max = c.n_max();
    for n in 1..=n_max {
        e *= r;
        let term = c.coefficients[n] * e;
        sum += term;
        max = max.max(term.norm());
        if c.finite && n == n_max {
            break;
        }
        let bound = tail(c.growth, kappa, n);
        if max > 0.0 && bound <= TAIL_RATIO * max || bound < f64::MIN_POSITIVE {
            return Ok(QExpValue {
                value: sum,
                tail_bound: bound,
                terms: n,
            });
        }
    }
    if c.finite {
        return Ok(QExpValue {
            value: sum,
            tail_bound: 0.0,
            terms: n_max,
        });
    }
    let mut required = n_max.max(1);
    while !(tail(c.growth, kappa, required) <= TAIL_RATIO * max.max(f64::MIN_POSITIVE)) {
        required = required.saturating_mul(2);
        if required > usize::MAX / 4 {
            break;
        }
    }
    Err(Error::InsufficientCoefficients {
        label: c.label.clone(),
        required,
        available: n_max,
    })
}

fn first_nonzero(c: &CoeffSeries) -> usize {
    (1..=c.n_max())
        .find(|&n| c.coefficients[n].norm() > 0.0)
        .unwrap_or(1)
}

/// Rough magnitude of `f(i) - a_0`, the scale of the transform.
fn scale(c: &CoeffSeries) -> f64 {
    let n1 = first_nonzero(c);
    c.coefficient(n1).norm() * (-2.0 * PI * n1 as f64 / c.lambda).exp()
}

/// Upper bound on `int_0^{x0} x^(sigma-1) |f(ix) - a_0| dx` from the cusp
/// estimate `|f(ix) - a_0| <= 4 N^(-k/2) x^(-k) e^(-2 pi / (N lambda x))`.
fn discarded_mass(c: &CoeffSeries, sigma: f64, x0: f64) -> f64 {
    let k = c.weight;
    let nk = (c.level as f64).powf(-0.5 * k);
    if !c.is_cuspidal() {
        // x^(-k) growth toward the cusp at 0
        let d = sigma - k;
        return CUSP_CONSTANT * c.a0().norm().max(1.0) * nk * x0.powf(d) / d;
    }
    let a = 2.0 * PI / (c.level as f64 * c.lambda);
    let m = k - sigma - 1.0;
    let u = 1.0 / x0;
    let core = u.powf(m) * (-a * u).exp();
    let denom = if m <= 0.0 { a } else { a - m / u };
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    CUSP_CONSTANT * nk * core / denom
}

/// Lower integration cutoff for `Re s = sigma` leaving a discarded mass
/// below `1e-4 target_tol` times the scale of the series.
pub fn cusp_cutoff(c: &CoeffSeries, sigma: f64, target_tol: f64) -> f64 {
    let target = CUTOFF_FRACTION * target_tol * scale(c);
    let (mut lo, mut hi) = (1e-6f64.ln(), 0.5f64.ln());
    if discarded_mass(c, sigma, hi.exp()) <= target {
        return hi.exp();
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if discarded_mass(c, sigma, mid.exp()) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.exp()
}

/// Outcome of [`completed_lambda`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaResult {
    pub value: Complex,
    pub error_estimate: f64,
    pub levels: u32,
    pub x_min: f64,
    /// Bound on the mass discarded below `x_min`.
    pub cutoff_bound: f64,
    /// q-expansion tail bound at `x_min`, the worst node.
    pub tail_bound: f64,
    pub terms: usize,
    pub warning: Option<QuadWarning>,
}

/// `int_0^inf x^(s-1) (f(ix) - a_0) dx = (lambda / 2 pi)^s Gamma(s) L_f(s)`.
///
/// Cusp forms are integrated from the cutoff of [`cusp_cutoff`] (unless
/// `p.x_min` is set); finite series from the origin. Series with a constant
/// term need `Re s > k`.
pub fn completed_lambda(c: &CoeffSeries, s: Complex, p: &QuadratureParams) -> Result<LambdaResult> {
    if !c.is_cuspidal() && !c.finite && s.re <= c.weight + 0.05 {
        return Err(Error::ConvergenceRegion {
            s,
            detail: alloc::format!(
                "{} has a constant term; the integral needs Re s > {}",
                c.label,
                c.weight
            ),
        });
    }
    let (x_min, cutoff_bound) = if c.finite {
        (0.0, 0.0)
    } else if p.x_min > 0.0 {
        (p.x_min, discarded_mass(c, s.re, p.x_min))
    } else {
        let x = cusp_cutoff(c, s.re, p.target_tol);
        (x, discarded_mass(c, s.re, x))
    };
    let worst = qexp_eval(c, if x_min > 0.0 { x_min } else { 1.0 })?;
    let a0 = c.a0();
    let f = |x: f64| match qexp_eval(c, x) {
        Ok(v) => v.value - a0,
        Err(_) => c64(f64::NAN, 0.0),
    };
    let params = QuadratureParams {
        x_min,
        decay_rate: 2.0 * PI * first_nonzero(c) as f64 / c.lambda,
        ..*p
    };
    let r = mellin_quadrature(&f, s, &params, None)?;
    Ok(LambdaResult {
        value: r.value,
        error_estimate: r.error_estimate + cutoff_bound,
        levels: r.levels,
        x_min,
        cutoff_bound,
        tail_bound: worst.tail_bound,
        terms: worst.terms,
        warning: r.warning,
    })
}
