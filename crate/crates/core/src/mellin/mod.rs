//! Mellin transforms: the quadrature engine, integrand builders for
//! exponential sums and q-expansions, and the Master Theorem and Gaussian
//! pair checks.

mod expsum;
mod qexp;
mod quadrature;

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

pub use expsum::{char_exp_sum, PeriodicExpSum, ScaledExpSum};
pub use qexp::{completed_lambda, cusp_cutoff, qexp_eval, LambdaResult, QExpValue};
pub use quadrature::{
    mellin_quadrature, QuadResult, QuadWarning, QuadratureParams, SubtractionTerm,
};

use crate::complexfn::cgamma;
use crate::{c64, Complex, Error, Result};

/// Largest series argument; the closed form takes over beyond it.
const SERIES_LIMIT: f64 = 2.0;
const MAX_SERIES_TERMS: usize = 400;

/// A coefficient function `phi` of `f(x) = sum_n (-1)^n phi(n) x^n / n!`
/// together with its continuation and a closed form of `f`.
#[derive(Debug, Clone, Copy)]
pub struct MasterPhi {
    pub label: &'static str,
    pub phi: fn(f64) -> f64,
    pub phi_ext: fn(Complex) -> Complex,
    pub closed_form: fn(f64) -> f64,
    /// Exponential decay rate of `f`, `0` for algebraic decay.
    pub decay_rate: f64,
}

fn phi_one(_: f64) -> f64 {
    1.0
}
fn phi_one_ext(_: Complex) -> Complex {
    c64(1.0, 0.0)
}
fn f_one(x: f64) -> f64 {
    (-x).exp()
}
fn phi_succ(n: f64) -> f64 {
    n + 1.0
}
fn phi_succ_ext(s: Complex) -> Complex {
    s + 1.0
}
fn f_succ(x: f64) -> f64 {
    (1.0 - x) * (-x).exp()
}
fn phi_recip(n: f64) -> f64 {
    1.0 / (n + 1.0)
}
fn phi_recip_ext(s: Complex) -> Complex {
    (s + 1.0).inv()
}
fn f_recip(x: f64) -> f64 {
    -(-x).exp_m1() / x
}

/// The three registered instances: `phi = 1`, `phi(n) = n + 1`, `phi(n) = 1/(n + 1)`.
pub fn master_theorem_instances() -> [MasterPhi; 3] {
    [
        MasterPhi {
            label: "phi(n) = 1",
            phi: phi_one,
            phi_ext: phi_one_ext,
            closed_form: f_one,
            decay_rate: 1.0,
        },
        MasterPhi {
            label: "phi(n) = n + 1",
            phi: phi_succ,
            phi_ext: phi_succ_ext,
            closed_form: f_succ,
            decay_rate: 1.0,
        },
        MasterPhi {
            label: "phi(n) = 1/(n + 1)",
            phi: phi_recip,
            phi_ext: phi_recip_ext,
            closed_form: f_recip,
            decay_rate: 0.0,
        },
    ]
}

/// `sum_n (-1)^n phi(n) x^n / n!`, summed until terms drop below `1e-16` of the largest.
pub fn master_series(phi: &MasterPhi, x: f64) -> Result<f64> {
    let mut pow = 1.0;
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for n in 0..MAX_SERIES_TERMS {
        if n > 0 {
            pow *= -x / n as f64;
        }
        let term = (phi.phi)(n as f64) * pow;
        sum += term;
        max = max.max(term.abs());
        if n > 0 && term.abs() <= 1e-16 * max && pow.abs() <= 1e-16 * max {
            return Ok(sum);
        }
    }
    Err(Error::SeriesTruncation {
        terms: MAX_SERIES_TERMS,
    })
}

/// Quadrature of the series-defined `f` against `x^(s-1)` (left) and `Gamma(s) phi(-s)` (right).
pub fn master_theorem_check(phi: &MasterPhi, s: Complex, p: &QuadratureParams) -> Result<(Complex, Complex)> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::StripViolation {
            term: phi.label.into(),
            s,
            strip: "0 < Re s < 1".into(),
        });
    }
    // validate the series once over its whole range before integrating
    master_series(phi, SERIES_LIMIT)?;
    let f = |x: f64| {
        let v = if x <= SERIES_LIMIT {
            master_series(phi, x).unwrap_or(f64::NAN)
        } else {
            (phi.closed_form)(x)
        };
        c64(v, 0.0)
    };
    let params = QuadratureParams {
        decay_rate: phi.decay_rate,
        ..*p
    };
    let lhs = mellin_quadrature(&f, s, &params, None)?.value;
    let rhs = cgamma(s)? * (phi.phi_ext)(-s);
    Ok((lhs, rhs))
}

/// Both integrals of the Gaussian pair and their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPair {
    /// `int_0^inf e^(-x^2) cos(2 n x) dx`.
    pub lhs_cos: f64,
    /// `(sqrt(pi)/2) e^(-n^2)`.
    pub rhs_cos: f64,
    /// `int_0^inf x e^(-x^2) sin(2 n x) dx`.
    pub lhs_sin: f64,
    /// `(n sqrt(pi)/2) e^(-n^2)`.
    pub rhs_sin: f64,
}

/// Evaluate both Gaussian integrals at `n` by quadrature.
pub fn gaussian_pair_check(n: f64, p: &QuadratureParams) -> Result<GaussianPair> {
    if !(n > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("n = {n} must be positive")));
    }
    let params = QuadratureParams {
        x_max: p.x_max.min(9.0),
        decay_rate: 0.0,
        ..*p
    };
    let one = c64(1.0, 0.0);
    let cos_part = |x: f64| c64((-x * x).exp() * (2.0 * n * x).cos(), 0.0);
    let sin_part = |x: f64| c64((-x * x).exp() * (2.0 * n * x).sin(), 0.0);
    let lhs_cos = mellin_quadrature(&cos_part, one, &params, None)?.value.re;
    // x e^(-x^2) sin(2nx) is the s = 2 moment of e^(-x^2) sin(2nx)
    let lhs_sin = mellin_quadrature(&sin_part, c64(2.0, 0.0), &params, None)?.value.re;
    let base = 0.5 * PI.sqrt() * (-n * n).exp();
    Ok(GaussianPair {
        lhs_cos,
        rhs_cos: base,
        lhs_sin,
        rhs_sin: n * base,
    })
}
