//! Exponential sums `S(y) = sum_{m>=1} c(m) e^(-m y)` with `q`-periodic `c`.
//!
//! The closed form `sum_{a=1}^{q} c(a) e^(-a y) / (1 - e^(-q y))` is exact.
//! Near `y = 0` it behaves like `d0 / y` with `d0 = sum_a c(a) / q`; the
//! regular part `S(y) - d0/y` is evaluated there from a power series in
//! `u = q y` so that no cancellation occurs.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::characters::DirichletCharacter;
use crate::complexfn::{cgamma, expm1, hurwitz_zeta, hurwitz_zeta_regular, real_pow};
use crate::{c64, Complex, Result};

const SERIES_TERMS: usize = 30;

/// `S(y)` for a periodic coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicExpSum {
    /// `c(1), ..., c(q)`.
    coeffs: Vec<Complex>,
    d0: Complex,
    /// `S(y) - d0/y = sum_{k>=1} r[k] u^(k-1)` for `u = q y < 1`.
    r: Vec<Complex>,
}

impl PeriodicExpSum {
    /// From one period `c(1), ..., c(q)`.
    pub fn new(coeffs: Vec<Complex>) -> Self {
        assert!(!coeffs.is_empty(), "period must be non-empty");
        let q = coeffs.len() as f64;
        let d0 = coeffs.iter().copied().fold(c64(0.0, 0.0), |a, b| a + b) / q;
        // N(u) = sum_a c(a) e^(-(a/q) u), E(u) = (1 - e^-u)/u; u S = N / E.
        let mut n = alloc::vec![c64(0.0, 0.0); SERIES_TERMS + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            let t = -((i + 1) as f64) / q;
            let mut term = c;
            for nk in n.iter_mut() {
                *nk += term;
                term *= t;
            }
        }
        let mut fact = 1.0;
        for (k, nk) in n.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *nk /= fact;
        }
        // E(u) = sum_k (-1)^k u^k / (k+1)!
        let mut e = alloc::vec![0.0; SERIES_TERMS + 1];
        let mut fact = 1.0;
        for (k, ek) in e.iter_mut().enumerate() {
            fact *= (k + 1) as f64;
            *ek = if k % 2 == 0 { 1.0 } else { -1.0 } / fact;
        }
        let mut r = alloc::vec![c64(0.0, 0.0); SERIES_TERMS + 1];
        for k in 0..=SERIES_TERMS {
            let mut acc = n[k];
            for j in 1..=k {
                acc -= r[k - j] * e[j];
            }
            r[k] = acc;
        }
        PeriodicExpSum { coeffs, d0, r }
    }

    /// `c(m) = chi(m)`.
    pub fn from_character(chi: &DirichletCharacter) -> Self {
        let q = chi.modulus() as i64;
        Self::new((1..=q).map(|a| chi.value(a)).collect())
    }

    /// `c(m) = 1`, so `S(y) = 1/(e^y - 1)`.
    pub fn ones() -> Self {
        Self::new(alloc::vec![c64(1.0, 0.0)])
    }

    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coeffs
    }

    /// `c(m)` for any `m >= 1`.
    pub fn coefficient(&self, m: u64) -> Complex {
        self.coeffs[((m - 1) % self.coeffs.len() as u64) as usize]
    }

    /// Residue `d0` of the `1/y` singularity.
    pub fn singular_coefficient(&self) -> Complex {
        self.d0
    }

    pub fn eval(&self, y: f64) -> Complex {
        let q = self.coeffs.len() as f64;
        if q * y < 1.0 {
            self.d0 / y + self.series(q * y)
        } else {
            self.direct(y)
        }
    }

    /// `S(y) - d0/y`.
    pub fn regular(&self, y: f64) -> Complex {
        let q = self.coeffs.len() as f64;
        if q * y < 1.0 {
            self.series(q * y)
        } else {
            self.direct(y) - self.d0 / y
        }
    }

    fn direct(&self, y: f64) -> Complex {
        let q = self.coeffs.len() as f64;
        let denom = -expm1(c64(-q * y, 0.0)).re;
        let mut acc = c64(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            acc += c * (-((i + 1) as f64) * y).exp();
        }
        acc / denom
    }

    fn series(&self, u: f64) -> Complex {
        let mut acc = c64(0.0, 0.0);
        for rk in self.r[1..].iter().rev() {
            acc = acc * u + rk;
        }
        acc
    }

    /// `Gamma(s) sum_m c(m) m^-s`, via Hurwitz zeta.
    pub fn mellin(&self, s: Complex) -> Result<Complex> {
        let q = self.coeffs.len() as f64;
        let mut acc = c64(0.0, 0.0);
        let mean_zero = self.d0.norm() == 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let a = (i + 1) as f64 / q;
            let z = if mean_zero {
                hurwitz_zeta_regular(s, a)?.value
            } else {
                hurwitz_zeta(s, a)?
            };
            acc += c * z;
        }
        Ok(cgamma(s)? * real_pow(q, -s) * acc)
    }
}

/// `sum_m chi(m) e^(-m x)` in closed form.
pub fn char_exp_sum(chi: &DirichletCharacter, x: f64) -> Complex {
    PeriodicExpSum::from_character(chi).eval(x)
}

/// `F(x) = sum_j w_j S(d_j x)`, whose transform is
/// `Gamma(s) L_c(s) sum_j w_j d_j^-s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledExpSum {
    pub sum: PeriodicExpSum,
    pub terms: Vec<(Complex, f64)>,
}

impl ScaledExpSum {
    pub fn new(sum: PeriodicExpSum, terms: Vec<(Complex, f64)>) -> Self {
        ScaledExpSum { sum, terms }
    }

    pub fn single(sum: PeriodicExpSum) -> Self {
        Self::new(sum, alloc::vec![(c64(1.0, 0.0), 1.0)])
    }

    pub fn eval(&self, x: f64) -> Complex {
        self.terms
            .iter()
            .fold(c64(0.0, 0.0), |acc, &(w, d)| acc + w * self.sum.eval(d * x))
    }

    /// `F(x) - c/x` with `c` = [`Self::singular_coefficient`].
    pub fn regular(&self, x: f64) -> Complex {
        self.terms
            .iter()
            .fold(c64(0.0, 0.0), |acc, &(w, d)| acc + w * self.sum.regular(d * x))
    }

    pub fn singular_coefficient(&self) -> Complex {
        self.terms
            .iter()
            .fold(c64(0.0, 0.0), |acc, &(w, d)| acc + w * self.sum.singular_coefficient() / d)
    }

    /// Smallest exponential decay rate, `min_j d_j` times the first non-zero index.
    pub fn decay_rate(&self) -> f64 {
        let first = (1..=self.sum.period() as u64)
            .find(|&m| self.sum.coefficient(m).norm() > 0.0)
            .unwrap_or(1) as f64;
        self.terms.iter().map(|t| t.1).fold(f64::INFINITY, f64::min) * first
    }

    /// Closed-form transform.
    pub fn mellin(&self, s: Complex) -> Result<Complex> {
        let w = self
            .terms
            .iter()
            .fold(c64(0.0, 0.0), |acc, &(w, d)| acc + w * real_pow(d, -s));
        Ok(self.sum.mellin(s)? * w)
    }
}
