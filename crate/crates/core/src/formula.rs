//! Quantifier-free polynomial formulas and the rewrite rules that reduce
//! them to a single polynomial equation.
//!
//! Atoms are `p = 0`, `p > 0`, `p >= 0` with the polynomial on one side;
//! connectives are AND, OR, NOT. The elimination order is: push negations
//! to the atoms, replace inequalities by equations with fresh square
//! variables, then fold the equation tree with sum-of-squares for AND and
//! products for OR.

use crate::poly::SparsePolynomial;
use num_traits::One;

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    /// p = 0
    Eq(SparsePolynomial),
    /// p > 0
    Gt(SparsePolynomial),
    /// p >= 0
    Ge(SparsePolynomial),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
}

/// Negation-free form: NOT is pushed through the connectives and flipped at
/// the atoms (`not p>0` becomes `-p >= 0`, `not p>=0` becomes `-p > 0`,
/// `not p=0` becomes `p>0 or -p>0`).
pub fn push_negations(f: Formula) -> Formula {
    fn go(f: Formula, neg: bool) -> Formula {
        match f {
            Formula::Not(inner) => go(*inner, !neg),
            Formula::And(a, b) => {
                let (ga, gb) = (go(*a, neg), go(*b, neg));
                if neg {
                    Formula::or(ga, gb)
                } else {
                    Formula::and(ga, gb)
                }
            }
            Formula::Or(a, b) => {
                let (ga, gb) = (go(*a, neg), go(*b, neg));
                if neg {
                    Formula::and(ga, gb)
                } else {
                    Formula::or(ga, gb)
                }
            }
            Formula::Eq(p) => {
                if neg {
                    Formula::or(Formula::Gt(p.clone()), Formula::Gt(p.neg()))
                } else {
                    Formula::Eq(p)
                }
            }
            Formula::Gt(p) => {
                if neg {
                    Formula::Ge(p.neg())
                } else {
                    Formula::Gt(p)
                }
            }
            Formula::Ge(p) => {
                if neg {
                    Formula::Gt(p.neg())
                } else {
                    Formula::Ge(p)
                }
            }
        }
    }
    go(f, false)
}

fn count_inequalities(f: &Formula) -> usize {
    match f {
        Formula::Eq(_) => 0,
        Formula::Gt(_) | Formula::Ge(_) => 1,
        Formula::And(a, b) | Formula::Or(a, b) => count_inequalities(a) + count_inequalities(b),
        Formula::Not(a) => count_inequalities(a),
    }
}

/// Reduce a formula over `arity` variables to one polynomial equation
/// `p = 0` over a possibly larger variable set (one fresh variable per
/// inequality). The original variables keep their indices.
pub fn to_single_equation(f: Formula, arity: usize) -> (SparsePolynomial, usize) {
    let nf = push_negations(f);
    let extra = count_inequalities(&nf);
    let total = arity + extra;
    let mut next = arity;
    let p = fold(nf, total, &mut next);
    (p, total)
}

fn fold(f: Formula, total: usize, next: &mut usize) -> SparsePolynomial {
    match f {
        Formula::Eq(p) => p.widen(total),
        Formula::Ge(p) => {
            // p >= 0  iff  exists u: p = u^2
            let u = SparsePolynomial::var(total, *next);
            *next += 1;
            p.widen(total).sub(&u.square())
        }
        Formula::Gt(p) => {
            // p > 0  iff  exists u: p u^2 = 1
            let u = SparsePolynomial::var(total, *next);
            *next += 1;
            p.widen(total)
                .mul(&u.square())
                .sub(&SparsePolynomial::constant(total, crate::Rational::one()))
        }
        Formula::And(a, b) => {
            let pa = fold(*a, total, next);
            let pb = fold(*b, total, next);
            pa.square().add(&pb.square())
        }
        Formula::Or(a, b) => {
            let pa = fold(*a, total, next);
            let pb = fold(*b, total, next);
            pa.mul(&pb)
        }
        Formula::Not(_) => unreachable!("negations were pushed"),
    }
}
