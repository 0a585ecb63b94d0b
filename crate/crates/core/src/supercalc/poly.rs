use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GrcError, Result};
use crate::rat::{fmt_rat, int, parse_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u32) -> Parity {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        Parity::from_bit(self.bit() + 1)
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

/// `(-1)^(a*b)` for two parities.
pub fn koszul(a: Parity, b: Parity) -> Rat {
    if a == Parity::Odd && b == Parity::Odd {
        -Rat::one()
    } else {
        Rat::one()
    }
}

/// Coordinate names for the two geometric settings sharing one function algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coords {
    /// `(t, θ)` of the contact superstring.
    Contact,
    /// `(x, ξ)` of the plain superstring.
    Vect,
}

impl Coords {
    pub fn names(self) -> (&'static str, &'static str) {
        match self {
            Coords::Contact => ("t", "th"),
            Coords::Vect => ("x", "xi"),
        }
    }
}

/// `t^even * θ^odd`; the odd exponent is 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub even: u32,
    pub odd: bool,
}

impl Mono {
    pub const ONE: Mono = Mono {
        even: 0,
        odd: false,
    };

    pub fn new(even: u32, odd: bool) -> Self {
        Mono { even, odd }
    }

    pub fn parity(self) -> Parity {
        if self.odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// A polynomial in one even and one odd variable with rational coefficients.
///
/// Zero coefficients are never stored. Since there is a single odd
/// generator, every odd element is `θ·g(t)` and the product of two odd
/// elements vanishes, so multiplication needs no reordering signs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SuperPoly {
    terms: BTreeMap<Mono, Rat>,
}

impl SuperPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, 0, false)
    }

    pub fn term(c: Rat, even: u32, odd: bool) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::new(even, odd), c);
        p
    }

    pub fn mono(even: u32, odd: bool) -> Self {
        Self::term(Rat::one(), even, odd)
    }

    /// The even coordinate `t` (or `x`).
    pub fn t() -> Self {
        Self::mono(1, false)
    }

    /// The odd coordinate `θ` (or `ξ`).
    pub fn th() -> Self {
        Self::mono(0, true)
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Rat {
        self.terms.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for a mixed-parity sum; the zero polynomial counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = match it.next() {
            Some(p) => p,
            None => return Some(Parity::Even),
        };
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn require_parity(&self, what: &str) -> Result<Parity> {
        self.parity()
            .ok_or_else(|| GrcError::MixedParity(format!("{what} = {self}")))
    }

    /// Splits into (even part, odd part).
    pub fn split_parity(&self) -> (SuperPoly, SuperPoly) {
        let mut even = SuperPoly::zero();
        let mut odd = SuperPoly::zero();
        for (m, c) in &self.terms {
            if m.odd {
                odd.add_term(*m, c.clone());
            } else {
                even.add_term(*m, c.clone());
            }
        }
        (even, odd)
    }

    /// Largest even exponent among the terms.
    pub fn max_even_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.even).max()
    }

    /// Weighted degree with `deg t = even_weight`, `deg θ = odd_weight`;
    /// `None` unless all terms share one degree.
    pub fn homogeneous_degree(&self, even_weight: u32, odd_weight: u32) -> Option<u32> {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.even * even_weight + u32::from(m.odd) * odd_weight);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Rat) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero();
        }
        SuperPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// `∂/∂t`.
    pub fn d_even(&self) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            if m.even > 0 {
                out.add_term(Mono::new(m.even - 1, m.odd), c * int(m.even as i64));
            }
        }
        out
    }

    /// Left derivative `∂/∂θ`.
    pub fn d_odd(&self) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            if m.odd {
                out.add_term(Mono::new(m.even, false), c.clone());
            }
        }
        out
    }

    /// Multiplies by `θ` from the left.
    pub fn times_th(&self) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            if !m.odd {
                out.add_term(Mono::new(m.even, true), c.clone());
            }
        }
        out
    }

    /// The Euler operator `E = θ∂_θ`.
    pub fn euler_odd(&self) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            if m.odd {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// Constant term (value at the origin).
    pub fn at_origin(&self) -> Rat {
        self.coeff(Mono::ONE)
    }

    pub fn display_with(&self, coords: Coords) -> String {
        let (tn, thn) = coords.names();
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if m.even == 1 {
                factors.push(tn.to_string());
            } else if m.even > 1 {
                factors.push(format!("{tn}^{}", m.even));
            }
            if m.odd {
                factors.push(thn.to_string());
            }
            if factors.is_empty() || !mag.is_one() {
                factors.insert(0, fmt_rat(&mag));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the canonical text form produced by [`SuperPoly::display_with`].
    pub fn parse(s: &str, coords: Coords) -> Result<SuperPoly> {
        let (tn, thn) = coords.names();
        let bad = |msg: &str| GrcError::Parse(format!("{msg} in polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(SuperPoly::zero());
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('/') {
                pieces.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if ch == '-' && i == 0 {
                neg = true;
            } else {
                cur.push(ch);
            }
        }
        pieces.push((neg, cur));
        let mut out = SuperPoly::zero();
        for (neg, body) in pieces {
            if body.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coeff = Rat::one();
            let mut even = 0u32;
            let mut odd = false;
            for f in body.split('*') {
                if f == thn {
                    if odd {
                        return Err(bad("repeated odd factor"));
                    }
                    odd = true;
                } else if f == tn {
                    even += 1;
                } else if let Some(e) = f.strip_prefix(&format!("{tn}^")) {
                    even += e.parse::<u32>().map_err(|_| bad("bad exponent"))?;
                } else {
                    coeff *= parse_rat(f)?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Mono::new(even, odd), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(Coords::Contact))
    }
}

impl fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPoly({self})")
    }
}

impl Serialize for SuperPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SuperPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SuperPoly::parse(&s, Coords::Contact).map_err(serde::de::Error::custom)
    }
}

impl Add for &SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: &SuperPoly) -> SuperPoly {
        spoly_mul(self, rhs)
    }
}

impl Add for SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: SuperPoly) -> SuperPoly {
        &self + &rhs
    }
}

impl Sub for SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: SuperPoly) -> SuperPoly {
        &self - &rhs
    }
}

impl Neg for SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        -&self
    }
}

impl Mul for SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: SuperPoly) -> SuperPoly {
        spoly_mul(&self, &rhs)
    }
}

/// Supercommutative product; `θ² = 0`.
pub fn spoly_mul(p: &SuperPoly, q: &SuperPoly) -> SuperPoly {
    let mut out = SuperPoly::zero();
    for (a, ca) in &p.terms {
        for (b, cb) in &q.terms {
            if a.odd && b.odd {
                continue;
            }
            out.add_term(Mono::new(a.even + b.even, a.odd || b.odd), ca * cb);
        }
    }
    out
}

/// All monomials `t^k θ^e` with `k <= max_even`.
pub fn monomials_up_to(max_even: u32) -> Vec<SuperPoly> {
    let mut out = Vec::new();
    for k in 0..=max_even {
        out.push(SuperPoly::mono(k, false));
        out.push(SuperPoly::mono(k, true));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn odd_square_vanishes() {
        let th = SuperPoly::th();
        assert!(spoly_mul(&th, &th).is_zero());
    }

    #[test]
    fn absorbs_theta_squared() {
        let p = &SuperPoly::t() + &SuperPoly::th();
        assert_eq!(spoly_mul(&p, &SuperPoly::th()), SuperPoly::mono(1, true));
    }

    #[test]
    fn rational_product() {
        let p = SuperPoly::term(rat(2, 3), 1, false);
        let q = SuperPoly::term(rat(3, 2), 1, true);
        assert_eq!(spoly_mul(&p, &q), SuperPoly::mono(2, true));
    }

    #[test]
    fn canonical_text() {
        let p = &SuperPoly::term(rat(3, 2), 2, true) + &SuperPoly::one();
        assert_eq!(p.to_string(), "3/2*t^2*th + 1");
        assert_eq!(p.display_with(Coords::Vect), "3/2*x^2*xi + 1");
        let q = &SuperPoly::term(rat(-1, 3), 1, false) - &SuperPoly::th();
        assert_eq!(q.to_string(), "-1/3*t - th");
        for s in ["3/2*t^2*th + 1", "-1/3*t - th", "0", "-t^3 + 2*th - 5/7"] {
            let parsed = SuperPoly::parse(s, Coords::Contact).unwrap();
            assert_eq!(parsed.to_string(), s);
        }
    }

    #[test]
    fn parity_classification() {
        assert_eq!(SuperPoly::t().parity(), Some(Parity::Even));
        assert_eq!(SuperPoly::th().parity(), Some(Parity::Odd));
        assert_eq!((&SuperPoly::t() + &SuperPoly::th()).parity(), None);
        assert_eq!(SuperPoly::zero().parity(), Some(Parity::Even));
    }
}
