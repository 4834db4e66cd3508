//! Arbitrary-precision rationals and the handful of numeric utilities the
//! rest of the crate leans on.
//!
//! `Rational` is `num_rational::BigRational`: reduced, positive denominator,
//! exact arithmetic. Values are rendered as `p/q` (or a bare integer when the
//! denominator is one) in every text format and in JSON.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

/// Parse `p/q` or a plain integer. Whitespace is not tolerated inside the
/// token; the line-oriented readers split on whitespace first.
pub fn rat_from_str(s: &str) -> Result<Rational, String> {
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(Rational::from_integer(n))
    }
}

pub fn rat_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer square root (floor) of a non-negative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}

/// Exact square root of a rational, if one exists over the rationals.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = isqrt(num);
    if &sn * &sn != *num {
        return None;
    }
    let sd = isqrt(den);
    if &sd * &sd != *den {
        return None;
    }
    Some(Rational::new(sn, sd))
}

/// Canonical primitive form of a homogeneous coordinate triple: clears
/// denominators, divides by the content, and fixes the sign of the first
/// nonzero entry to be positive. Two triples are proportional iff their
/// canonical forms are equal.
pub fn canonical_homogeneous(p: &[Rational; 3]) -> [BigInt; 3] {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = p.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if !g.is_zero() {
        for v in ints.iter_mut() {
            *v /= &g;
        }
    }
    let flip = ints
        .iter()
        .find(|v| !v.is_zero())
        .map(|v| v.sign() == Sign::Minus)
        .unwrap_or(false);
    if flip {
        for v in ints.iter_mut() {
            *v = -std::mem::take(v);
        }
    }
    [ints[0].clone(), ints[1].clone(), ints[2].clone()]
}

/// Serde adapter rendering rationals as `p/q` strings.
pub mod serde_rat {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        rat_from_str(&s).map_err(D::Error::custom)
    }
}
