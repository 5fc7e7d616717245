//! Kernels with closed-form Mellin transforms.
//!
//! A [`KernelExpr`] is a finite linear combination of primitives:
//!
//! | primitive | `f(x)` | Mellin transform | strip |
//! |---|---|---|---|
//! | `Exp(b)` | `e^(-bx)` | `Gamma(s) b^-s` | `Re s > 0` |
//! | `ExpSin(b, g)` | `e^(-bx) sin(gx)` | `Gamma(s) r^-s sin(s t)` | `Re s > -1` (`b = 0`: `-1 < Re s < 1`) |
//! | `ExpCos(b, g)` | `e^(-bx) cos(gx)` | `Gamma(s) r^-s cos(s t)` | `Re s > 0` (`b = 0`: `0 < Re s < 1`) |
//! | `PowerRational(a)` | `x^a / (1 + x^2)` | `(pi/2) csc(pi (s+a)/2)` | `0 < Re(s+a) < 2` |
//! | `BesselHalf(nu)` | `sqrt(x) J_nu(x)` | `2^(s-1/2) Gamma((s+nu+1/2)/2) / Gamma((nu-s+3/2)/2)` | `-nu-1/2 < Re s < 1` |
//!
//! with `b + ig = r e^(it)`, `|t| < pi/2` for `b > 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::complexfn::{cgamma, cos_pi, real_pow, recip_gamma, sin_pi, sinc};
use crate::{c64, Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    Exp { beta: f64 },
    ExpSin { beta: f64, gamma: f64 },
    ExpCos { beta: f64, gamma: f64 },
    PowerRational { alpha: i32 },
    BesselHalf { nu: f64 },
}

impl Primitive {
    pub fn name(&self) -> String {
        match *self {
            Primitive::Exp { beta } => format!("exp(beta={beta})"),
            Primitive::ExpSin { beta, gamma } => format!("exp_sin(beta={beta}, gamma={gamma})"),
            Primitive::ExpCos { beta, gamma } => format!("exp_cos(beta={beta}, gamma={gamma})"),
            Primitive::PowerRational { alpha } => format!("power_rational(alpha={alpha})"),
            Primitive::BesselHalf { nu } => format!("bessel_half(nu={nu})"),
        }
    }

    /// Open interval `(lo, hi)` of `Re s` where the transform converges.
    pub fn strip(&self) -> (f64, f64) {
        match *self {
            Primitive::Exp { .. } => (0.0, f64::INFINITY),
            Primitive::ExpSin { beta, .. } if beta == 0.0 => (-1.0, 1.0),
            Primitive::ExpSin { .. } => (-1.0, f64::INFINITY),
            Primitive::ExpCos { beta, .. } if beta == 0.0 => (0.0, 1.0),
            Primitive::ExpCos { .. } => (0.0, f64::INFINITY),
            Primitive::PowerRational { alpha } => (-alpha as f64, 2.0 - alpha as f64),
            Primitive::BesselHalf { nu } => (-nu - 0.5, 1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Primitive::Exp { beta } => beta > 0.0 && beta.is_finite(),
            Primitive::ExpSin { beta, gamma } | Primitive::ExpCos { beta, gamma } => {
                beta >= 0.0 && beta.is_finite() && gamma > 0.0 && gamma.is_finite()
            }
            Primitive::PowerRational { .. } => true,
            Primitive::BesselHalf { nu } => nu > -1.0 && nu.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidKernel(format!("parameters out of range in {}", self.name())))
        }
    }

    fn eval(&self, x: f64) -> Result<f64> {
        Ok(match *self {
            Primitive::Exp { beta } => (-beta * x).exp(),
            Primitive::ExpSin { beta, gamma } => (-beta * x).exp() * (gamma * x).sin(),
            Primitive::ExpCos { beta, gamma } => (-beta * x).exp() * (gamma * x).cos(),
            Primitive::PowerRational { alpha } => x.powi(alpha) / (1.0 + x * x),
            Primitive::BesselHalf { .. } => return Err(Error::UnsupportedPrimitive("bessel_half")),
        })
    }

    /// Closed-form transform; the caller checks the strip.
    fn mellin(&self, s: Complex) -> Result<Complex> {
        Ok(match *self {
            Primitive::Exp { beta } => cgamma(s)? * real_pow(beta, -s),
            Primitive::ExpSin { beta, gamma } => {
                // Gamma(s) sin(s t) = Gamma(s+1) t sinc(s t), regular at s = 0.
                let (r, t) = polar(beta, gamma);
                let trig = if beta == 0.0 {
                    sinc(s * FRAC_PI_2) * FRAC_PI_2
                } else {
                    sinc(s * t) * t
                };
                cgamma(s + 1.0)? * trig * real_pow(r, -s)
            }
            Primitive::ExpCos { beta, gamma } => {
                let (r, t) = polar(beta, gamma);
                let trig = if beta == 0.0 {
                    cos_pi(s * 0.5)
                } else {
                    (s * t).cos()
                };
                cgamma(s)? * trig * real_pow(r, -s)
            }
            Primitive::PowerRational { alpha } => {
                c64(FRAC_PI_2, 0.0) / sin_pi((s + alpha as f64) * 0.5)
            }
            Primitive::BesselHalf { nu } => {
                real_pow(2.0, s - 0.5)
                    * cgamma((s + nu + 0.5) * 0.5)?
                    * recip_gamma((nu + 1.5 - s) * 0.5)
            }
        })
    }
}

fn polar(beta: f64, gamma: f64) -> (f64, f64) {
    (beta.hypot(gamma), gamma.atan2(beta))
}

/// One weighted primitive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelTerm {
    pub coef: Complex,
    #[serde(flatten)]
    pub primitive: Primitive,
}

/// Linear combination of primitives; serialises as a JSON array of tagged terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<KernelTerm>", into = "Vec<KernelTerm>")]
pub struct KernelExpr {
    terms: Vec<KernelTerm>,
}

impl TryFrom<Vec<KernelTerm>> for KernelExpr {
    type Error = Error;

    fn try_from(terms: Vec<KernelTerm>) -> Result<Self> {
        KernelExpr::new(terms)
    }
}

impl From<KernelExpr> for Vec<KernelTerm> {
    fn from(k: KernelExpr) -> Self {
        k.terms
    }
}

impl KernelExpr {
    pub fn new(terms: Vec<KernelTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidKernel("no terms".into()));
        }
        for t in &terms {
            t.primitive.validate()?;
        }
        let special = terms
            .iter()
            .filter(|t| {
                matches!(
                    t.primitive,
                    Primitive::PowerRational { .. } | Primitive::BesselHalf { .. }
                )
            })
            .count();
        if special > 1 {
            return Err(Error::InvalidKernel(
                "at most one power_rational or bessel_half term per expression".into(),
            ));
        }
        Ok(KernelExpr { terms })
    }

    fn from_real(terms: &[(f64, Primitive)]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|&(c, primitive)| KernelTerm {
                    coef: c64(c, 0.0),
                    primitive,
                })
                .collect(),
        )
        .expect("library kernel is valid")
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    /// `e^(-beta x)`.
    pub fn exp(beta: f64) -> Result<Self> {
        Self::new(alloc::vec![KernelTerm {
            coef: c64(1.0, 0.0),
            primitive: Primitive::Exp { beta },
        }])
    }

    /// `sin x`.
    pub fn sin() -> Self {
        Self::from_real(&[(1.0, Primitive::ExpSin { beta: 0.0, gamma: 1.0 })])
    }

    /// `cos x`.
    pub fn cos() -> Self {
        Self::from_real(&[(1.0, Primitive::ExpCos { beta: 0.0, gamma: 1.0 })])
    }

    /// `x^alpha / (1 + x^2)`.
    pub fn power_rational(alpha: i32) -> Self {
        Self::from_real(&[(1.0, Primitive::PowerRational { alpha })])
    }

    /// `sqrt(x) J_nu(x)`; transform only.
    pub fn bessel_half(nu: f64) -> Result<Self> {
        Self::new(alloc::vec![KernelTerm {
            coef: c64(1.0, 0.0),
            primitive: Primitive::BesselHalf { nu },
        }])
    }

    /// `e^-x - cos x + sin x`.
    pub fn exp_cos_sin() -> Self {
        Self::from_real(&[
            (1.0, Primitive::Exp { beta: 1.0 }),
            (-1.0, Primitive::ExpCos { beta: 0.0, gamma: 1.0 }),
            (1.0, Primitive::ExpSin { beta: 0.0, gamma: 1.0 }),
        ])
    }

    /// `sin(x)/4 + e^(-sqrt3 x/2) sin(x/2)/4 + sqrt3/4 e^(-sqrt3 x/2) cos(x/2)`.
    pub fn sixth_root_first() -> Self {
        let b = 3f64.sqrt() / 2.0;
        Self::from_real(&[
            (0.25, Primitive::ExpSin { beta: 0.0, gamma: 1.0 }),
            (0.25, Primitive::ExpSin { beta: b, gamma: 0.5 }),
            (3f64.sqrt() / 4.0, Primitive::ExpCos { beta: b, gamma: 0.5 }),
        ])
    }

    /// `sin(x)/4 - e^(-sqrt3 x/2) sin(x/2)/2`.
    pub fn sixth_root_second() -> Self {
        let b = 3f64.sqrt() / 2.0;
        Self::from_real(&[
            (0.25, Primitive::ExpSin { beta: 0.0, gamma: 1.0 }),
            (-0.5, Primitive::ExpSin { beta: b, gamma: 0.5 }),
        ])
    }

    /// Intersection of the term strips.
    pub fn strip(&self) -> (f64, f64) {
        self.terms.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(lo, hi), t| {
            let (a, b) = t.primitive.strip();
            (lo.max(a), hi.min(b))
        })
    }

    /// Whether every term is `Exp`, or `ExpSin`/`ExpCos` with `beta > 0`.
    pub fn is_exponentially_decaying(&self) -> bool {
        self.terms.iter().all(|t| match t.primitive {
            Primitive::Exp { .. } => true,
            Primitive::ExpSin { beta, .. } | Primitive::ExpCos { beta, .. } => beta > 0.0,
            _ => false,
        })
    }

    /// Smallest decay rate among the terms, for quadrature truncation.
    pub fn decay_rate(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| match t.primitive {
                Primitive::Exp { beta }
                | Primitive::ExpSin { beta, .. }
                | Primitive::ExpCos { beta, .. } => beta,
                _ => 0.0,
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Pointwise value at `x > 0`.
pub fn kernel_eval(k: &KernelExpr, x: f64) -> Result<Complex> {
    if !(x > 0.0) {
        return Err(Error::domain("kernel_eval", format!("x = {x} is not positive")));
    }
    let mut acc = c64(0.0, 0.0);
    for t in &k.terms {
        acc += t.coef * t.primitive.eval(x)?;
    }
    Ok(acc)
}

/// Closed-form Mellin transform at `s`, which must lie in every term's strip.
pub fn kernel_mellin(k: &KernelExpr, s: Complex) -> Result<Complex> {
    for t in &k.terms {
        let (lo, hi) = t.primitive.strip();
        if !(s.re > lo && s.re < hi) {
            return Err(Error::StripViolation {
                term: t.primitive.name(),
                s,
                strip: format!("{lo} < Re s < {hi}"),
            });
        }
    }
    let mut acc = c64(0.0, 0.0);
    for t in &k.terms {
        acc += t.coef * t.primitive.mellin(s)?;
    }
    Ok(acc)
}

/// `K1^(s) K2^(1-s)` at each point.
pub fn product_check(k1: &KernelExpr, k2: &KernelExpr, points: &[Complex]) -> Result<Vec<Complex>> {
    points
        .iter()
        .map(|&s| Ok(kernel_mellin(k1, s)? * kernel_mellin(k2, 1.0 - s)?))
        .collect()
}
