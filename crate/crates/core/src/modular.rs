//! Coefficient sequences of modular forms and their L-functions.
//!
//! Eta products are expanded in exact integer arithmetic by multiplying with
//! the sparse pentagonal series `prod (1 - q^n) = sum_k (-1)^k q^(k(3k-1)/2)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::characters::{lcm, DirichletCharacter};
use crate::complexfn::{cgamma, real_pow, riemann_zeta};
use crate::mellin::{completed_lambda, QuadratureParams};
use crate::{c64, Complex, Error, Result};

/// Size limit for cusp-form tables.
pub const MAX_CUSP_COEFFS: usize = 100_000;
/// Size limit for Eisenstein tables.
pub const MAX_EISENSTEIN_COEFFS: usize = 1_000_000;

/// Known closed form of the associated Dirichlet series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// `240 zeta(s) zeta(s - 3)`.
    Eisenstein4,
    /// `2 zeta(2 s)`.
    Theta,
}

/// `f(tau) = sum_n a_n e^(2 pi i n tau / lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    pub label: String,
    /// `a_0, a_1, ...`.
    pub coefficients: Vec<Complex>,
    pub lambda: f64,
    pub weight: f64,
    pub level: u32,
    /// `(C, c)` with `|a_n| <= C n^c` for `n >= 1`.
    pub growth: (f64, f64),
    /// The table lists every non-zero coefficient.
    pub finite: bool,
    pub closed_form: Option<ClosedForm>,
}

impl CoeffSeries {
    /// A finite series; coefficients beyond the table are zero.
    pub fn finite(label: &str, coefficients: Vec<Complex>, lambda: f64) -> Self {
        let c = coefficients.iter().skip(1).map(|a| a.norm()).fold(0.0, f64::max);
        CoeffSeries {
            label: label.into(),
            coefficients,
            lambda,
            weight: 0.0,
            level: 1,
            growth: (c, 0.0),
            finite: true,
            closed_form: None,
        }
    }

    pub fn a0(&self) -> Complex {
        self.coefficients.first().copied().unwrap_or(c64(0.0, 0.0))
    }

    pub fn is_cuspidal(&self) -> bool {
        self.a0().norm() == 0.0
    }

    /// Largest available index.
    pub fn n_max(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, n: usize) -> Complex {
        self.coefficients.get(n).copied().unwrap_or(c64(0.0, 0.0))
    }

    /// `(index, re, im)` rows for export.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.coefficients.iter().enumerate().map(|(n, a)| (n, a.re, a.im))
    }
}

fn check_size(n_max: usize, max: usize) -> Result<()> {
    if n_max == 0 || n_max > max {
        return Err(Error::Size {
            requested: n_max,
            max,
        });
    }
    Ok(())
}

/// `c * prod_{n>=1} (1 - q^(step n))` truncated after index `len - 1`.
fn mul_euler(c: &[i128], step: usize) -> Vec<i128> {
    let len = c.len();
    let mut exps: Vec<(usize, i128)> = alloc::vec![(0, 1)];
    for k in 1usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let lo = k * (3 * k - 1) / 2 * step;
        if lo >= len {
            break;
        }
        exps.push((lo, sign));
        let hi = k * (3 * k + 1) / 2 * step;
        if hi < len {
            exps.push((hi, sign));
        }
    }
    let mut out = alloc::vec![0i128; len];
    for &(e, sign) in &exps {
        for (i, &v) in c[..len - e].iter().enumerate() {
            if v != 0 {
                out[i + e] += sign * v;
            }
        }
    }
    out
}

/// Ramanujan `tau(0..=n_max)` with `tau(0) = 0`.
pub fn ramanujan_tau(n_max: usize) -> Result<Vec<i128>> {
    check_size(n_max, MAX_CUSP_COEFFS)?;
    // tau(n) = [q^(n-1)] prod (1 - q^m)^24
    let mut p = alloc::vec![0i128; n_max];
    p[0] = 1;
    for _ in 0..24 {
        p = mul_euler(&p, 1);
    }
    let mut tau = alloc::vec![0i128; n_max + 1];
    tau[1..].copy_from_slice(&p);
    Ok(tau)
}

fn to_complex(v: &[i128]) -> Vec<Complex> {
    v.iter().map(|&x| c64(x as f64, 0.0)).collect()
}

/// The discriminant `Delta = q prod (1 - q^n)^24`: weight 12, level 1.
pub fn delta_coefficients(n_max: usize) -> Result<CoeffSeries> {
    let tau = ramanujan_tau(n_max)?;
    Ok(CoeffSeries {
        label: "delta".into(),
        coefficients: to_complex(&tau),
        lambda: 1.0,
        weight: 12.0,
        level: 1,
        // |tau(n)| <= d(n) n^(11/2) <= 2 n^6
        growth: (2.0, 6.0),
        finite: false,
        closed_form: None,
    })
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`: weight 4, level 1.
pub fn eisenstein4_coefficients(n_max: usize) -> Result<CoeffSeries> {
    check_size(n_max, MAX_EISENSTEIN_COEFFS)?;
    let mut sigma = alloc::vec![0u128; n_max + 1];
    for d in 1..=n_max {
        let d3 = (d as u128).pow(3);
        for m in (d..=n_max).step_by(d) {
            sigma[m] += d3;
        }
    }
    let mut coefficients = Vec::with_capacity(n_max + 1);
    coefficients.push(c64(1.0, 0.0));
    coefficients.extend(sigma[1..].iter().map(|&v| c64(240.0 * v as f64, 0.0)));
    Ok(CoeffSeries {
        label: "e4".into(),
        coefficients,
        lambda: 1.0,
        weight: 4.0,
        level: 1,
        // 240 sigma_3(n) <= 240 zeta(3) n^3
        growth: (289.0, 3.0),
        finite: false,
        closed_form: Some(ClosedForm::Eisenstein4),
    })
}

/// `theta(t) = sum_{n in Z} e^(-pi n^2 t)` as `sum a_n e^(-pi n t)`, so `lambda = 2`.
pub fn theta_coefficients(n_max: usize) -> Result<CoeffSeries> {
    check_size(n_max, MAX_EISENSTEIN_COEFFS)?;
    let mut coefficients = alloc::vec![c64(0.0, 0.0); n_max + 1];
    coefficients[0] = c64(1.0, 0.0);
    let mut m = 1usize;
    while m * m <= n_max {
        coefficients[m * m] = c64(2.0, 0.0);
        m += 1;
    }
    Ok(CoeffSeries {
        label: "theta".into(),
        coefficients,
        lambda: 2.0,
        weight: 0.5,
        level: 4,
        growth: (2.0, 0.0),
        finite: false,
        closed_form: Some(ClosedForm::Theta),
    })
}

/// `theta(t)` by direct summation.
pub fn theta_eval(t: f64) -> f64 {
    assert!(t > 0.0, "theta_eval needs t > 0");
    let mut sum = 0.0;
    let mut n = 1.0f64;
    loop {
        let term = (-PI * n * n * t).exp();
        sum += term;
        if term < 1e-18 * (1.0 + 2.0 * sum) {
            break;
        }
        n += 1.0;
    }
    1.0 + 2.0 * sum
}

/// `|theta(1/t) - sqrt(t) theta(t)|`.
pub fn theta_modularity_residual(t: f64) -> f64 {
    (theta_eval(1.0 / t) - t.sqrt() * theta_eval(t)).abs()
}

/// `eta(z)^2 eta(11 z)^2 = q prod (1 - q^n)^2 (1 - q^(11 n))^2`: weight 2, level 11.
pub fn eta_product_11(n_max: usize) -> Result<CoeffSeries> {
    check_size(n_max, MAX_CUSP_COEFFS)?;
    let mut p = alloc::vec![0i128; n_max];
    p[0] = 1;
    p = mul_euler(&p, 1);
    p = mul_euler(&p, 1);
    p = mul_euler(&p, 11);
    p = mul_euler(&p, 11);
    let mut a = alloc::vec![0i128; n_max + 1];
    a[1..].copy_from_slice(&p);
    Ok(CoeffSeries {
        label: "eta11".into(),
        coefficients: to_complex(&a),
        lambda: 1.0,
        weight: 2.0,
        level: 11,
        // |a_p| <= 2 sqrt(p), so |a_n| <= d(n) sqrt(n) <= 2 n
        growth: (2.0, 1.0),
        finite: false,
        closed_form: None,
    })
}

/// `a_n psi(n)`; the level becomes `lcm(N, r, r^2)` for `psi` mod `r`
/// (every series here has trivial nebentypus).
pub fn twist_coefficients(c: &CoeffSeries, psi: &DirichletCharacter) -> CoeffSeries {
    let r = psi.modulus() as u64;
    let coefficients = c
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, &a)| a * psi.value(n as i64))
        .collect();
    let level = lcm(lcm(c.level as u64, r), r * r) as u32;
    CoeffSeries {
        label: if r == 1 {
            c.label.clone()
        } else {
            alloc::format!("{}_twist{}", c.label, r)
        },
        coefficients,
        level,
        closed_form: if r == 1 { c.closed_form } else { None },
        ..c.clone()
    }
}

/// `L_f(s) = sum a_n n^(-s)`, through `Phi(s) = (lambda/2 pi)^s Gamma(s) L_f(s)`
/// for cusp forms and through closed forms otherwise.
pub fn modular_l(c: &CoeffSeries, s: Complex, p: &QuadratureParams) -> Result<Complex> {
    match c.closed_form {
        Some(ClosedForm::Eisenstein4) => Ok(riemann_zeta(s)? * riemann_zeta(s - 3.0)? * 240.0),
        Some(ClosedForm::Theta) => Ok(riemann_zeta(s * 2.0)? * 2.0),
        None if c.is_cuspidal() => {
            let phi = completed_lambda(c, s, p)?;
            Ok(phi.value / (real_pow(c.lambda / (2.0 * PI), s) * cgamma(s)?))
        }
        None => Err(Error::UnsupportedSeries(c.label.clone())),
    }
}
