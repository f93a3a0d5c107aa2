//! Exact Laurent polynomials in `v` with integer coefficients.
//!
//! Every value is kept canonical: terms are sorted by exponent and no stored
//! coefficient is zero, so structural equality is ring equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An element of `Z[v, v^-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    // Sorted by exponent, coefficients nonzero.
    terms: Vec<(i32, BigInt)>,
}

/// Subrings of `Z[v, v^-1]` that show up as membership conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subring {
    /// `Z[v^-1]`: no positive exponents.
    AMinus,
    /// `Z[v]`: no negative exponents.
    APlus,
    /// `Z[q]` with `q = v^2`: even, non-negative exponents.
    ZOfQ,
    /// `N[v, v^-1]`: non-negative coefficients.
    NOfVVinv,
    /// `v^-1 Z[v^-1]`: only negative exponents.
    VInvAMinus,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * v^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// The indeterminate `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `v^e`.
    pub fn v_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    /// `q = v^2`.
    pub fn q() -> Self {
        Self::monomial(1, 2)
    }

    /// `q_c = v + v^-1`.
    pub fn q_c() -> Self {
        Self::from_terms([(-1, 1), (1, 1)])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut raw: Vec<(i32, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        raw.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i32, BigInt)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The part with exponents strictly below zero.
    pub fn negative_part(&self) -> Self {
        Self {
            terms: self.terms.iter().filter(|(e, _)| *e < 0).cloned().collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    pub fn in_subring(&self, ring: Subring) -> bool {
        self.terms.iter().all(|(e, c)| match ring {
            Subring::AMinus => *e <= 0,
            Subring::APlus => *e >= 0,
            Subring::ZOfQ => *e >= 0 && e % 2 == 0,
            Subring::NOfVVinv => c.is_positive(),
            Subring::VInvAMinus => *e <= -1,
        })
    }

    /// `self + c * other * v^k`, the inner loop of every linear combination.
    pub fn add_scaled_shifted(&mut self, other: &LaurentPoly, c: &LaurentPoly, k: i32) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let prod = other * c;
        let shifted = if k == 0 { prod } else { prod.shift(k) };
        *self += &shifted;
    }

    fn merge(a: &[(i32, BigInt)], b: &[(i32, BigInt)], negate_b: bool) -> Vec<(i32, BigInt)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Renders with `^` exponents, ascending, e.g. `v^-1 + v`.
    pub fn to_plain_string(&self) -> String {
        self.render(|e| match e {
            1 => "v".to_string(),
            _ => format!("v^{e}"),
        })
    }

    /// LaTeX rendering, exponents ascending.
    pub fn to_latex(&self) -> String {
        self.render(|e| match e {
            1 => "v".to_string(),
            _ => format!("v^{{{e}}}"),
        })
    }

    fn render(&self, power: impl Fn(i32) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if *e == 0 {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                }
                s.push_str(&power(*e));
            }
        }
        s
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: LaurentPoly::merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: LaurentPoly::merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            self.terms = rhs.terms.clone();
            return;
        }
        self.terms = LaurentPoly::merge(&self.terms, &rhs.terms, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        self.terms = LaurentPoly::merge(&self.terms, &rhs.terms, true);
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (k, c) = &rhs.terms[0];
            return LaurentPoly {
                terms: self.terms.iter().map(|(e, x)| (e + k, x * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        // Dense accumulation over the exponent range; degrees stay small here.
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut acc = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                acc[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        LaurentPoly {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i32, c))
                .collect(),
        }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let number: serde_json::Number = match c.to_i64() {
                Some(small) => small.into(),
                None => c.to_string().parse().map_err(serde::ser::Error::custom)?,
            };
            map.serialize_entry(&e.to_string(), &number)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from exponent strings to integer coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, serde_json::Number>()? {
                    let e: i32 = key.parse().map_err(de::Error::custom)?;
                    let c: BigInt = value.to_string().parse().map_err(de::Error::custom)?;
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficient in polynomial"));
                    }
                    terms.push((e, c));
                }
                let len = terms.len();
                let poly = LaurentPoly::from_terms(terms);
                if poly.num_terms() != len {
                    return Err(de::Error::custom("repeated exponent in polynomial"));
                }
                Ok(poly)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}
