//! Dirichlet characters modulo `q <= 10^4`.
//!
//! The unit group `(Z/qZ)^*` is split by CRT into cyclic factors with
//! canonical generators (a primitive root for each odd prime power; `-1`
//! and `5` for `2^e`). A character is a vector of exponents, one per
//! generator, and every value is an exact root of unity `e(k/E)` where `E`
//! is the exponent of the group.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::complexfn::sincos_pi;
use crate::{c64, Complex, Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = 10_000;

const NON_UNIT: u32 = u32::MAX;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Prime factorisation as `(p, e)` pairs in increasing `p`.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = factorize(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&(l, _)| mod_pow(g, (p - 1) / l, p) != 1))
        .expect("every odd prime has a primitive root")
}

/// Inverse of `a` modulo `m` for coprime inputs.
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m as i64) as u64
}

/// CRT decomposition of `(Z/qZ)^*` with a discrete-log table.
struct UnitGroup {
    modulus: u32,
    generators: Vec<u32>,
    orders: Vec<u32>,
    /// Exponent of the group (lcm of the generator orders).
    exponent: u32,
    /// `dlog[n * g + j]` is the log of `n` in generator `j`, scaled by
    /// `exponent / orders[j]`; `NON_UNIT` marks residues sharing a factor with `q`.
    dlog: Vec<u32>,
}

impl UnitGroup {
    fn new(q: u64) -> Result<Self> {
        if q == 0 || q > MAX_MODULUS {
            return Err(Error::ModulusRange {
                modulus: q,
                max: MAX_MODULUS,
            });
        }
        // Local cyclic factors: (modulus of the prime power, generator, order,
        // local log table indexed by residue mod p^e).
        let mut locals: Vec<(u64, u64, u64, Vec<u32>)> = Vec::new();
        for (p, e) in factorize(q) {
            let pe = p.pow(e);
            if p == 2 {
                if e == 1 {
                    continue;
                }
                // -1 factor
                let mut t = vec![NON_UNIT; pe as usize];
                for n in (1..pe).step_by(2) {
                    t[n as usize] = if n % 4 == 1 { 0 } else { 1 };
                }
                locals.push((pe, pe - 1, 2, t));
                if e >= 3 {
                    let ord = pe / 4;
                    let mut t5 = vec![NON_UNIT; pe as usize];
                    let mut x = 1u64;
                    for k in 0..ord {
                        t5[x as usize] = k as u32;
                        t5[(pe - x) as usize] = k as u32;
                        x = x * 5 % pe;
                    }
                    locals.push((pe, 5, ord, t5));
                }
            } else {
                let mut g = primitive_root(p);
                if e >= 2 && mod_pow(g, p - 1, p * p) == 1 {
                    g += p;
                }
                let ord = pe / p * (p - 1);
                let mut t = vec![NON_UNIT; pe as usize];
                let mut x = 1u64;
                for k in 0..ord {
                    t[x as usize] = k as u32;
                    x = x * g % pe;
                }
                locals.push((pe, g, ord, t));
            }
        }
        let exponent = locals.iter().fold(1u64, |a, l| lcm(a, l.2));
        let ng = locals.len();
        let mut generators = Vec::with_capacity(ng);
        let mut orders = Vec::with_capacity(ng);
        for (pe, g, ord, _) in &locals {
            // lift g mod pe to q with residue 1 on the complementary factor
            let rest = q / pe;
            let lifted = if rest == 1 {
                *g
            } else {
                let inv = mod_inverse(rest % pe, *pe);
                // x = 1 + rest * k with x = g mod pe
                let k = ((*g + pe - 1) % pe) * inv % pe;
                (1 + rest * k) % q
            };
            generators.push(lifted as u32);
            orders.push(*ord as u32);
        }
        let mut dlog = vec![NON_UNIT; q as usize * ng];
        for n in 0..q {
            if gcd(n, q) != 1 {
                continue;
            }
            for (j, (pe, _, ord, t)) in locals.iter().enumerate() {
                let d = t[(n % pe) as usize] as u64;
                dlog[n as usize * ng + j] = (d * (exponent / ord)) as u32;
            }
        }
        Ok(UnitGroup {
            modulus: q as u32,
            generators,
            orders,
            exponent: exponent as u32,
            dlog,
        })
    }

    fn is_unit(&self, n: u32) -> bool {
        self.modulus == 1 || gcd(n as u64, self.modulus as u64) == 1
    }
}

/// A Dirichlet character, immutable once built.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u32>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.group.modulus)
            .field("generators", &self.group.generators)
            .field("exponents", &self.exponents)
            .finish()
    }
}

/// Every character mod `q`, principal first.
pub fn character_group(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(UnitGroup::new(q)?);
    let orders = group.orders.clone();
    let total: u64 = orders.iter().map(|&o| o as u64).product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u32; orders.len()];
    for _ in 0..total {
        out.push(DirichletCharacter {
            group: Arc::clone(&group),
            exponents: exps.clone(),
        });
        for (e, &o) in exps.iter_mut().zip(&orders).rev() {
            *e += 1;
            if *e < o {
                break;
            }
            *e = 0;
        }
    }
    Ok(out)
}

/// `chi(n)` for any integer `n`.
pub fn char_eval(chi: &DirichletCharacter, n: i64) -> Complex {
    chi.value(n)
}

/// The unique character mod `q` with `chi(n) = v` for every pin `(n, v)`.
pub fn find_character(q: u64, pins: &[(i64, Complex)]) -> Result<DirichletCharacter> {
    let matches: Vec<DirichletCharacter> = character_group(q)?
        .into_iter()
        .filter(|chi| pins.iter().all(|&(n, v)| (chi.value(n) - v).norm() < 1e-9))
        .collect();
    match matches.len() {
        0 => Err(Error::NoMatchingCharacter { modulus: q as u32 }),
        1 => Ok(matches.into_iter().next().unwrap()),
        _ => Err(Error::AmbiguousCharacter {
            modulus: q as u32,
            candidates: matches.iter().take(8).map(|c| c.exponents.clone()).collect(),
        }),
    }
}

/// `0` for even characters, `1` for odd ones.
pub fn parity(chi: &DirichletCharacter) -> u32 {
    chi.parity()
}

/// Whether the conductor equals the modulus.
pub fn is_primitive(chi: &DirichletCharacter) -> bool {
    chi.is_primitive()
}

/// Smallest modulus inducing `chi`.
pub fn conductor(chi: &DirichletCharacter) -> u32 {
    chi.conductor()
}

/// Complex conjugate character.
pub fn conjugate(chi: &DirichletCharacter) -> DirichletCharacter {
    chi.conjugate()
}

/// Gauss sum `sum_{a=1}^{q} chi(a) e(a/q)`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex {
    chi.gauss_sum()
}

/// `e(num / den) = exp(2 pi i num/den)`, exact at quarter turns.
pub(crate) fn root_of_unity(num: u64, den: u64) -> Complex {
    let num = num % den;
    let (s, c) = sincos_pi(2.0 * num as f64 / den as f64);
    c64(c, s)
}

impl DirichletCharacter {
    /// The principal character mod `q`.
    pub fn principal(q: u64) -> Result<Self> {
        let group = Arc::new(UnitGroup::new(q)?);
        let n = group.orders.len();
        Ok(DirichletCharacter {
            group,
            exponents: vec![0; n],
        })
    }

    /// Build from an exponent per canonical generator, reduced mod the orders.
    pub fn from_exponents(q: u64, exponents: &[u32]) -> Result<Self> {
        let group = Arc::new(UnitGroup::new(q)?);
        Self::with_group(group, exponents)
    }

    fn with_group(group: Arc<UnitGroup>, exponents: &[u32]) -> Result<Self> {
        if exponents.len() != group.orders.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "modulus {} has {} generators, got {} exponents",
                group.modulus,
                group.orders.len(),
                exponents.len()
            )));
        }
        let exponents = exponents
            .iter()
            .zip(&group.orders)
            .map(|(&e, &o)| e % o)
            .collect();
        Ok(DirichletCharacter { group, exponents })
    }

    pub fn modulus(&self) -> u32 {
        self.group.modulus
    }

    /// Canonical generators of the unit group, as residues mod `q`.
    pub fn generators(&self) -> &[u32] {
        &self.group.generators
    }

    /// Multiplicative orders of the generators.
    pub fn generator_orders(&self) -> &[u32] {
        &self.group.orders
    }

    /// `chi(g_j) = e(exponents[j] / orders[j])`.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Exponent `E` of the unit group; all values are `E`-th roots of unity.
    pub fn root_order(&self) -> u32 {
        self.group.exponent
    }

    /// `Some(k)` with `chi(n) = e(k/E)`, or `None` when `gcd(n, q) > 1`.
    pub fn value_index(&self, n: i64) -> Option<u32> {
        let g = &self.group;
        let r = n.rem_euclid(g.modulus as i64) as u32;
        if !g.is_unit(r) {
            return None;
        }
        let ng = g.orders.len();
        let e = g.exponent as u64;
        let k = self
            .exponents
            .iter()
            .enumerate()
            .map(|(j, &x)| x as u64 * g.dlog[r as usize * ng + j] as u64 % e)
            .sum::<u64>()
            % e;
        Some(k as u32)
    }

    pub fn value(&self, n: i64) -> Complex {
        match self.value_index(n) {
            Some(k) => root_of_unity(k as u64, self.group.exponent as u64),
            None => c64(0.0, 0.0),
        }
    }

    /// Values at `0, 1, ..., q-1`.
    pub fn values(&self) -> Vec<Complex> {
        (0..self.group.modulus as i64).map(|n| self.value(n)).collect()
    }

    /// Order of `chi` in the character group.
    pub fn order(&self) -> u32 {
        self.exponents
            .iter()
            .zip(&self.group.orders)
            .fold(1u64, |acc, (&e, &o)| {
                lcm(acc, o as u64 / gcd(e as u64, o as u64))
            }) as u32
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Whether all values are real (order at most 2).
    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    pub fn parity(&self) -> u32 {
        match self.value_index(-1) {
            Some(0) | None => 0,
            Some(_) => 1,
        }
    }

    pub fn conductor(&self) -> u32 {
        let q = self.group.modulus as u64;
        for d in 1..=q {
            if q % d != 0 {
                continue;
            }
            let induced = (1..q)
                .step_by(d as usize)
                .filter(|&n| gcd(n, q) == 1)
                .all(|n| self.value_index(n as i64) == Some(0));
            if induced {
                return d as u32;
            }
        }
        q as u32
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.group.modulus
    }

    pub fn conjugate(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
        }
    }

    /// Pointwise product of two characters with the same modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group.modulus != other.group.modulus {
            return Err(Error::InvalidParameter(alloc::format!(
                "cannot multiply characters mod {} and mod {}",
                self.group.modulus,
                other.group.modulus
            )));
        }
        let exponents: Vec<u32> = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(&self.group.orders)
            .map(|((&a, &b), &o)| (a + b) % o)
            .collect();
        Ok(DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
        })
    }

    pub fn gauss_sum(&self) -> Complex {
        let q = self.group.modulus as u64;
        let e = self.group.exponent as u64;
        let den = e * q;
        let mut acc = c64(0.0, 0.0);
        for a in 1..=q {
            if let Some(k) = self.value_index(a as i64) {
                // e(k/E) e(a/q) = e((k q + a E) / (E q))
                acc += root_of_unity(k as u64 * q + a * e, den);
            }
        }
        acc
    }

    /// Root number `tau(chi) i^(-kappa) / sqrt(q)` of a primitive character.
    pub fn root_number(&self) -> Complex {
        let kappa = self.parity();
        let tau = self.gauss_sum();
        let ik = if kappa == 0 { c64(1.0, 0.0) } else { c64(0.0, -1.0) };
        tau * ik / (self.group.modulus as f64).sqrt()
    }

    /// JSON-friendly description.
    pub fn to_repr(&self) -> CharacterRepr {
        CharacterRepr {
            modulus: self.group.modulus,
            generator_exponents: self
                .group
                .generators
                .iter()
                .copied()
                .zip(self.exponents.iter().copied())
                .collect(),
        }
    }
}

/// Serialised form `{modulus, generator_exponents}`; `generator_exponents`
/// maps each canonical generator `g` to `k` with `chi(g) = e(k / ord(g))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRepr {
    pub modulus: u32,
    pub generator_exponents: BTreeMap<u32, u32>,
}

impl TryFrom<CharacterRepr> for DirichletCharacter {
    type Error = Error;

    fn try_from(r: CharacterRepr) -> Result<Self> {
        let group = Arc::new(UnitGroup::new(r.modulus as u64)?);
        let mut exps = Vec::with_capacity(group.generators.len());
        for g in &group.generators {
            exps.push(r.generator_exponents.get(g).copied().unwrap_or(0));
        }
        if let Some(bad) = r
            .generator_exponents
            .keys()
            .find(|k| !group.generators.contains(k))
        {
            return Err(Error::InvalidParameter(alloc::format!(
                "{bad} is not a canonical generator mod {} (generators {:?})",
                r.modulus,
                group.generators
            )));
        }
        Self::with_group(group, &exps)
    }
}

impl From<DirichletCharacter> for CharacterRepr {
    fn from(c: DirichletCharacter) -> Self {
        c.to_repr()
    }
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let r = CharacterRepr::deserialize(d)?;
        DirichletCharacter::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad5() -> DirichletCharacter {
        find_character(5, &[(2, c64(-1.0, 0.0))]).unwrap()
    }

    #[test]
    fn group_sizes() {
        assert_eq!(character_group(1).unwrap().len(), 1);
        assert_eq!(character_group(5).unwrap().len(), 4);
        let g12 = character_group(12).unwrap();
        assert_eq!(g12.len(), 4);
        assert_eq!(g12.iter().filter(|c| c.conductor() == 12).count(), 1);
        assert!(g12[0].is_principal());
        assert!(matches!(
            character_group(10_001),
            Err(Error::ModulusRange { .. })
        ));
        assert!(matches!(character_group(0), Err(Error::ModulusRange { .. })));
    }

    #[test]
    fn evaluation() {
        let chi = quad5();
        assert_eq!(chi.value(2), c64(-1.0, 0.0));
        assert_eq!(chi.value(7), c64(-1.0, 0.0));
        assert_eq!(chi.value(10), c64(0.0, 0.0));
        assert_eq!(chi.value(-1), c64(1.0, 0.0));
        assert_eq!(char_eval(&DirichletCharacter::principal(1).unwrap(), 17), c64(1.0, 0.0));
    }

    #[test]
    fn finding_characters() {
        let sigma = find_character(5, &[(2, c64(0.0, 1.0))]).unwrap();
        assert_eq!(sigma.value(3), c64(0.0, -1.0));
        assert_eq!(sigma.value(4), c64(-1.0, 0.0));
        assert_eq!(sigma.order(), 4);
        let odd3 = find_character(3, &[(2, c64(-1.0, 0.0))]).unwrap();
        assert_eq!(odd3.parity(), 1);
        assert!(matches!(
            find_character(5, &[(2, c64(0.5, 0.0))]),
            Err(Error::NoMatchingCharacter { .. })
        ));
        match find_character(5, &[(4, c64(1.0, 0.0))]) {
            Err(Error::AmbiguousCharacter { candidates, .. }) => assert_eq!(candidates.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classification() {
        assert_eq!(quad5().parity(), 0);
        let p6 = DirichletCharacter::principal(6).unwrap();
        assert_eq!(p6.conductor(), 1);
        assert!(!p6.is_primitive());
        assert!(quad5().is_primitive());
        let c = find_character(5, &[(2, c64(0.0, 1.0))]).unwrap();
        assert_eq!(c.conjugate().value(2), c64(0.0, -1.0));
        assert_eq!(c.conjugate().conjugate(), c);
    }

    #[test]
    fn gauss_sums() {
        let t = quad5().gauss_sum();
        assert!((t - c64(5f64.sqrt(), 0.0)).norm() < 1e-14);
        let odd3 = find_character(3, &[(2, c64(-1.0, 0.0))]).unwrap();
        assert!((odd3.gauss_sum() - c64(0.0, 3f64.sqrt())).norm() < 1e-14);
        assert_eq!(DirichletCharacter::principal(1).unwrap().gauss_sum(), c64(1.0, 0.0));
    }

    #[test]
    fn mod_two_powers() {
        // units mod 16: generated by -1 (order 2) and 5 (order 4)
        let chars = character_group(16).unwrap();
        assert_eq!(chars.len(), 8);
        assert_eq!(chars[0].generators(), &[15, 5]);
        let primitive = chars.iter().filter(|c| c.is_primitive()).count();
        assert_eq!(primitive, 4);
        let odd4 = find_character(4, &[(3, c64(-1.0, 0.0))]).unwrap();
        assert_eq!(odd4.parity(), 1);
    }

    #[test]
    fn json_round_trip() {
        let c = find_character(15, &[(2, c64(0.0, 1.0)), (7, c64(0.0, -1.0))]);
        let c = match c {
            Ok(c) => c,
            Err(Error::AmbiguousCharacter { .. }) | Err(Error::NoMatchingCharacter { .. }) => {
                character_group(15).unwrap().pop().unwrap()
            }
            Err(e) => panic!("{e}"),
        };
        let r = c.to_repr();
        let back = DirichletCharacter::try_from(r.clone()).unwrap();
        assert_eq!(back, c);
        let mut bad = r;
        bad.generator_exponents.insert(4, 1);
        assert!(DirichletCharacter::try_from(bad).is_err());
    }

    #[test]
    fn exact_root_values() {
        assert_eq!(root_of_unity(1, 4), c64(0.0, 1.0));
        assert_eq!(root_of_unity(6, 4), c64(-1.0, 0.0));
        let w = root_of_unity(1, 3);
        assert!((w - c64(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }
}
