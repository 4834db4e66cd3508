//! Field scalars the constraint checker can evaluate over.
//!
//! The default is the exact rational type. `QuadRat` adjoins a single square
//! root, `a + b*sqrt(d)` with rational `a`, `b` and a fixed positive
//! non-square integer `d`, which is enough to carry quadratic-irrational
//! solutions through the normalization pipeline without any rounding.

use crate::rational::{rat_to_string, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(r: &Rational) -> Self;
    fn is_positive(&self) -> bool;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// An element of Q(sqrt(d)): `a + b*sqrt(d)`. Values with `b = 0` are plain
/// rationals and combine with any radicand; mixing two different nonzero
/// radicands panics, which is fine for the single-field systems this type is
/// for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRat {
    pub a: Rational,
    pub b: Rational,
    pub d: u64,
}

impl QuadRat {
    pub fn rational(a: Rational) -> Self {
        QuadRat {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    /// `a + b*sqrt(d)`; `d` must not be a perfect square.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        let mut v = QuadRat { a, b, d };
        v.normalize();
        v
    }

    pub fn sqrt_of(d: u64) -> Self {
        QuadRat::new(Rational::zero(), Rational::one(), d)
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.d = 0;
        }
    }

    fn unify(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed radicands sqrt({d1}) and sqrt({d2})"),
        }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", rat_to_string(&self.a))
        } else {
            write!(
                f,
                "{} + ({})*sqrt({})",
                rat_to_string(&self.a),
                rat_to_string(&self.b),
                self.d
            )
        }
    }
}

impl Add for QuadRat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        QuadRat::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadRat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadRat {
    type Output = Self;
    fn neg(self) -> Self {
        QuadRat::new(-self.a, -self.b, self.d)
    }
}

impl Mul for QuadRat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        let rad = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * rad;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadRat::new(a, b, d)
    }
}

impl Zero for QuadRat {
    fn zero() -> Self {
        QuadRat::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadRat {
    fn one() -> Self {
        QuadRat::rational(Rational::one())
    }
}

impl Scalar for QuadRat {
    fn from_rational(r: &Rational) -> Self {
        QuadRat::rational(r.clone())
    }
    fn is_positive(&self) -> bool {
        // sign of a + b*sqrt(d)
        if self.b.is_zero() {
            return Signed::is_positive(&self.a);
        }
        if self.a.is_zero() {
            return Signed::is_positive(&self.b);
        }
        let rad = Rational::from_integer(BigInt::from(self.d));
        match (Signed::is_positive(&self.a), Signed::is_positive(&self.b)) {
            (true, true) => true,
            (false, false) => false,
            // opposite signs: compare a^2 against b^2 d
            (true, false) => &self.a * &self.a > &self.b * &self.b * rad,
            (false, true) => &self.b * &self.b * rad > &self.a * &self.a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QuadRat::sqrt_of(2);
        let two = s.clone() * s.clone();
        assert_eq!(two, QuadRat::rational(rat_int(2)));
    }

    #[test]
    fn golden_ratio_satisfies_its_equation() {
        // x = (1 + sqrt 5)/2 solves x^2 = x + 1
        let x = QuadRat::new(rat(1, 2), rat(1, 2), 5);
        let lhs = x.clone() * x.clone();
        let rhs = x.clone() + QuadRat::one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 3 - 2*sqrt(2) > 0 since 9 > 8
        assert!(QuadRat::new(rat_int(3), rat_int(-2), 2).is_positive());
        // 1 - sqrt(2) < 0
        assert!(!QuadRat::new(rat_int(1), rat_int(-1), 2).is_positive());
        // sqrt(2) - 1 > 0
        assert!(QuadRat::new(rat_int(-1), rat_int(1), 2).is_positive());
        assert!(!QuadRat::zero().is_positive());
    }
}
