//! Dirichlet L-functions and the other Dirichlet series used by the
//! verifier: the Davenport-Heilbronn combination, `(1 + 5^(1/2-s)) zeta(s)`
//! and finite Dirichlet polynomials `prod (1 +- sqrt(a) a^-s)`.
//!
//! Every analytic continuation goes through the Hurwitz zeta function.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::characters::{find_character, DirichletCharacter};
use crate::complexfn::{
    cgamma, hurwitz_zeta, hurwitz_zeta_regular, real_pow, riemann_zeta, sin_pi,
};
use crate::{c64, Complex, Error, Result};

/// `L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)`.
///
/// Non-principal characters use the regular part of the Hurwitz zeta
/// function, so the result is entire and has no cancellation at `s = 1`.
pub fn dirichlet_l(s: Complex, chi: &DirichletCharacter) -> Result<Complex> {
    let q = chi.modulus() as u64;
    if q == 1 {
        return riemann_zeta(s);
    }
    let qf = q as f64;
    let mut acc = c64(0.0, 0.0);
    if chi.is_principal() {
        for a in 1..q {
            if chi.value_index(a as i64).is_some() {
                acc += hurwitz_zeta(s, a as f64 / qf)?;
            }
        }
    } else {
        for a in 1..q {
            let v = chi.value(a as i64);
            if v.norm() > 0.0 {
                acc += v * hurwitz_zeta_regular(s, a as f64 / qf)?.value;
            }
        }
    }
    Ok(real_pow(qf, -s) * acc)
}

/// Right side of the L-function reflection formula for primitive `chi`:
/// `eps 2^s pi^(s-1) q^(1/2-s) Gamma(1-s) sin(pi (s+kappa)/2) L(1-s, conj chi)`
/// with `eps = tau(chi) i^-kappa / sqrt(q)`.
pub fn l_feq_rhs(s: Complex, chi: &DirichletCharacter) -> Result<Complex> {
    if !chi.is_primitive() {
        return Err(Error::InvalidParameter(alloc::format!(
            "reflection formula needs a primitive character (mod {}, conductor {})",
            chi.modulus(),
            chi.conductor()
        )));
    }
    let q = chi.modulus() as f64;
    let kappa = chi.parity() as f64;
    let eps = chi.root_number();
    let one_minus = 1.0 - s;
    Ok(eps
        * real_pow(2.0, s)
        * real_pow(PI, s - 1.0)
        * real_pow(q, 0.5 - s)
        * cgamma(one_minus)?
        * sin_pi((s + kappa) * 0.5)
        * dirichlet_l(one_minus, &chi.conjugate())?)
}

/// Relative difference `|L(s, chi) - rhs| / |L(s, chi)|` of the reflection formula.
pub fn l_feq_residual(s: Complex, chi: &DirichletCharacter) -> Result<f64> {
    let lhs = dirichlet_l(s, chi)?;
    let rhs = l_feq_rhs(s, chi)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Constant of the Davenport-Heilbronn combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhConstants {
    pub alpha: f64,
}

impl DhConstants {
    /// `alpha = (sqrt(10 - 2 sqrt 5) - 2) / (sqrt 5 - 1)`.
    pub fn new() -> Self {
        let r5 = 5f64.sqrt();
        DhConstants {
            alpha: ((10.0 - 2.0 * r5).sqrt() - 2.0) / (r5 - 1.0),
        }
    }
}

impl Default for DhConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// The order-4 character mod 5 with `sigma(2) = i`.
pub fn dh_character() -> DirichletCharacter {
    find_character(5, &[(2, c64(0.0, 1.0))]).expect("sigma(2) = i pins a unique character mod 5")
}

fn dh_weights() -> (Complex, Complex) {
    let a = DhConstants::new().alpha;
    (c64(0.5, -0.5 * a), c64(0.5, 0.5 * a))
}

/// Coefficient of `n^-s` in the Davenport-Heilbronn series.
pub fn dh_coefficient(n: i64) -> f64 {
    let sigma = dh_character();
    let (w1, w2) = dh_weights();
    (w1 * sigma.value(n) + w2 * sigma.conjugate().value(n)).re
}

/// `(1 - i alpha)/2 L(s, sigma) + (1 + i alpha)/2 L(s, conj sigma)`.
pub fn davenport_heilbronn(s: Complex) -> Result<Complex> {
    let sigma = dh_character();
    let (w1, w2) = dh_weights();
    Ok(w1 * dirichlet_l(s, &sigma)? + w2 * dirichlet_l(s, &sigma.conjugate())?)
}

/// `(1 + 5^(1/2-s)) zeta(s)`.
pub fn sigma_5(s: Complex) -> Result<Complex> {
    Ok((1.0 + real_pow(5.0, 0.5 - s)) * riemann_zeta(s)?)
}

/// One factor `1 + sign sqrt(a) a^-s` of a Dirichlet polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFactor {
    pub a: u32,
    /// `+1` or `-1`.
    pub sign: i8,
}

/// `P(s) = prod_j (1 + sign_j sqrt(a_j) a_j^-s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletPolySpec {
    pub factors: Vec<PolyFactor>,
}

impl DirichletPolySpec {
    pub fn new(factors: &[(u32, i8)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "Dirichlet polynomial needs at least one factor".into(),
            ));
        }
        let mut out = Vec::with_capacity(factors.len());
        for &(a, sign) in factors {
            if a < 2 || !(sign == 1 || sign == -1) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "factor (a = {a}, sign = {sign}) needs a >= 2 and sign = +-1"
                )));
            }
            out.push(PolyFactor { a, sign });
        }
        Ok(DirichletPolySpec { factors: out })
    }

    /// `A = prod a_j`.
    pub fn a_product(&self) -> u64 {
        self.factors.iter().map(|f| f.a as u64).product()
    }

    /// `eps = prod sign_j`.
    pub fn epsilon(&self) -> i8 {
        self.factors.iter().map(|f| f.sign).product()
    }

    /// Expansion `sum_T w_T d_T^-s` over subsets `T` of the factors, with
    /// `w_T = prod_{j in T} sign_j sqrt(a_j)` and `d_T = prod_{j in T} a_j`.
    /// Terms with equal `d_T` are merged; output is sorted by `d_T`.
    pub fn expansion(&self) -> Vec<(u64, f64)> {
        let mut terms: Vec<(u64, f64)> = alloc::vec![(1, 1.0)];
        for f in &self.factors {
            let w = f.sign as f64 * (f.a as f64).sqrt();
            let extra: Vec<(u64, f64)> = terms.iter().map(|&(d, c)| (d * f.a as u64, c * w)).collect();
            terms.extend(extra);
        }
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(u64, f64)> = Vec::with_capacity(terms.len());
        for (d, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == d => last.1 += c,
                _ => merged.push((d, c)),
            }
        }
        merged
    }
}

/// `P(s)` evaluated factor by factor.
pub fn dirichlet_poly(p: &DirichletPolySpec, s: Complex) -> Complex {
    p.factors.iter().fold(c64(1.0, 0.0), |acc, f| {
        let a = f.a as f64;
        acc * (1.0 + real_pow(a, 0.5 - s) * f.sign as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_group;

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    fn quad5() -> DirichletCharacter {
        find_character(5, &[(2, c64(-1.0, 0.0))]).unwrap()
    }

    fn odd3() -> DirichletCharacter {
        find_character(3, &[(2, c64(-1.0, 0.0))]).unwrap()
    }

    #[test]
    fn l_values() {
        let p1 = DirichletCharacter::principal(1).unwrap();
        let z2 = dirichlet_l(c64(2.0, 0.0), &p1).unwrap();
        assert!(close(z2, c64(PI * PI / 6.0, 0.0), 1e-14));

        let odd4 = find_character(4, &[(3, c64(-1.0, 0.0))]).unwrap();
        let catalan = dirichlet_l(c64(2.0, 0.0), &odd4).unwrap();
        assert!(close(catalan, c64(0.915_965_594_177_219, 0.0), 1e-13));

        let chi = quad5();
        let mut direct = 0.0;
        for n in (1..=100_000i64).rev() {
            direct += chi.value(n).re / (n as f64).powi(3);
        }
        let l3 = dirichlet_l(c64(3.0, 0.0), &chi).unwrap();
        assert!(close(l3, c64(direct, 0.0), 1e-12));
    }

    #[test]
    fn principal_non_primitive_l() {
        // L(s, chi_0 mod 6) = zeta(s) (1 - 2^-s)(1 - 3^-s)
        let chi = DirichletCharacter::principal(6).unwrap();
        let s = c64(2.5, 1.0);
        let expect = riemann_zeta(s).unwrap()
            * (1.0 - real_pow(2.0, -s))
            * (1.0 - real_pow(3.0, -s));
        assert!(close(dirichlet_l(s, &chi).unwrap(), expect, 1e-12));
        assert!(matches!(
            dirichlet_l(c64(1.0, 0.0), &chi),
            Err(Error::Pole { .. })
        ));
        // non-principal L is regular at s = 1: L(1, chi_4) = pi/4
        let odd4 = find_character(4, &[(3, c64(-1.0, 0.0))]).unwrap();
        assert!(close(dirichlet_l(c64(1.0, 0.0), &odd4).unwrap(), c64(PI / 4.0, 0.0), 1e-12));
    }

    #[test]
    fn reflection_residuals() {
        assert!(l_feq_residual(c64(0.5, 0.0), &quad5()).unwrap() <= 1e-10);
        assert!(l_feq_residual(c64(0.3, 0.0), &odd3()).unwrap() <= 1e-10);
        assert!(l_feq_residual(c64(0.5, 2.0), &quad5()).unwrap() <= 1e-9);
        assert!(l_feq_residual(c64(0.4, 1.0), &dh_character()).unwrap() <= 1e-10);
        let p6 = DirichletCharacter::principal(6).unwrap();
        assert!(l_feq_residual(c64(0.5, 0.0), &p6).is_err());
    }

    #[test]
    fn dh_alpha_and_coefficients() {
        let a = DhConstants::new().alpha;
        assert!((a - 0.284_079_043_840_412_3).abs() < 1e-15);
        let pattern = [0.0, 1.0, a, -a, -1.0];
        for n in 1..=25i64 {
            assert!((dh_coefficient(n) - pattern[(n % 5) as usize]).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn dh_against_direct_sum() {
        // 10^6 terms: the tail of a mean-zero periodic series is below 1e-12 at s = 2.
        let a = DhConstants::new().alpha;
        let pattern = [0.0, 1.0, a, -a, -1.0];
        let mut direct = 0.0;
        for n in (1..=1_000_000usize).rev() {
            direct += pattern[n % 5] / (n as f64 * n as f64);
        }
        let v = davenport_heilbronn(c64(2.0, 0.0)).unwrap();
        assert!(v.im.abs() < 1e-14);
        assert!((v.re - direct).abs() < 1e-10);
    }

    #[test]
    fn sigma_series() {
        let s2 = sigma_5(c64(2.0, 0.0)).unwrap();
        assert!(close(s2, c64((1.0 + 5f64.powf(-1.5)) * PI * PI / 6.0, 0.0), 1e-14));
        let sh = sigma_5(c64(0.5, 0.0)).unwrap();
        let zh = riemann_zeta(c64(0.5, 0.0)).unwrap();
        assert!(close(sh, zh * 2.0, 1e-14));
    }

    #[test]
    fn dirichlet_polynomials() {
        let p = DirichletPolySpec::new(&[(2, 1)]).unwrap();
        assert!(close(dirichlet_poly(&p, c64(0.5, 0.0)), c64(2.0, 0.0), 1e-15));
        let p = DirichletPolySpec::new(&[(2, 1), (3, 1)]).unwrap();
        assert!(close(dirichlet_poly(&p, c64(0.5, 0.0)), c64(4.0, 0.0), 1e-15));
        assert_eq!(p.a_product(), 6);
        let p = DirichletPolySpec::new(&[(4, -1)]).unwrap();
        assert!(close(dirichlet_poly(&p, c64(1.0, 0.0)), c64(0.5, 0.0), 1e-15));
        assert_eq!(p.epsilon(), -1);
        assert!(DirichletPolySpec::new(&[(1, 1)]).is_err());
        assert!(DirichletPolySpec::new(&[]).is_err());

        let p = DirichletPolySpec::new(&[(2, 1), (2, -1), (3, 1)]).unwrap();
        let s = c64(0.3, 0.7);
        let from_expansion = p
            .expansion()
            .iter()
            .fold(c64(0.0, 0.0), |acc, &(d, w)| acc + real_pow(d as f64, -s) * w);
        assert!(close(from_expansion, dirichlet_poly(&p, s), 1e-14));
    }

    #[test]
    fn all_primitive_mod_7() {
        for chi in character_group(7).unwrap().iter().skip(1) {
            assert!(l_feq_residual(c64(0.25, 0.5), chi).unwrap() < 1e-10);
        }
    }
}
