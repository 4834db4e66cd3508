//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are keyed by exponent vectors under graded-lex order, so iteration,
//! serialization and the normalization passes are all deterministic. The
//! text format carries integer coefficients only; rational coefficients show
//! up internally when polynomials are used as defining expressions for
//! constructed variables.

use crate::rational::{rat_to_string, Rational};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("malformed polynomial: {0}")]
    Malformed(String),
    #[error("arity mismatch: {0} vs {1}")]
    Arity(usize, usize),
}

/// Exponent vector; ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    pub arity: usize,
    pub terms: BTreeMap<Monomial, Rational>,
}

impl SparsePolynomial {
    pub fn zero(arity: usize) -> Self {
        SparsePolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::constant(arity), c);
        p
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::var(arity, i), Rational::one());
        p
    }

    pub fn monomial(arity: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.0.len(), self.arity);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        SparsePolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Reinterpret over a larger variable set (new variables unused).
    pub fn widen(&self, arity: usize) -> Self {
        assert!(arity >= self.arity);
        SparsePolynomial {
            arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(arity, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn eval<S: Scalar>(&self, values: &[S]) -> S {
        assert_eq!(values.len(), self.arity);
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * values[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "poly {}", self.arity)?;
        for (m, c) in &self.terms {
            let exps: Vec<String> = m.0.iter().map(|e| e.to_string()).collect();
            writeln!(f, "term {} {}", rat_to_string(c), exps.join(" "))?;
        }
        Ok(())
    }
}

/// Parse one or more `poly <n>` blocks, each followed by `term <coeff>
/// <e1..en>` lines. All blocks must share the same arity; each block is one
/// polynomial (an equation `p = 0` in the system readers).
pub fn parse_poly_system(text: &str) -> Result<Vec<SparsePolynomial>, PolyError> {
    let mut polys: Vec<SparsePolynomial> = Vec::new();
    let mut arity: Option<usize> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ln = ln + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "poly" => {
                if toks.len() != 2 {
                    return Err(PolyError::Malformed(format!("line {ln}: expected `poly <n>`")));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|e| PolyError::Malformed(format!("line {ln}: bad arity: {e}")))?;
                if let Some(a) = arity {
                    if a != n {
                        return Err(PolyError::Arity(a, n));
                    }
                } else {
                    arity = Some(n);
                }
                polys.push(SparsePolynomial::zero(n));
            }
            "term" => {
                let p = polys.last_mut().ok_or_else(|| {
                    PolyError::Malformed(format!("line {ln}: `term` before any `poly`"))
                })?;
                if toks.len() != 2 + p.arity {
                    return Err(PolyError::Malformed(format!(
                        "line {ln}: expected coefficient and {} exponents",
                        p.arity
                    )));
                }
                let coeff: BigInt = toks[1].parse().map_err(|e| {
                    PolyError::Malformed(format!("line {ln}: bad coefficient: {e}"))
                })?;
                let exps: Result<Vec<u32>, _> = toks[2..].iter().map(|t| t.parse()).collect();
                let exps = exps
                    .map_err(|e| PolyError::Malformed(format!("line {ln}: bad exponent: {e}")))?;
                p.add_term(Monomial(exps), Rational::from_integer(coeff));
            }
            other => {
                return Err(PolyError::Malformed(format!(
                    "line {ln}: unexpected token {other:?}"
                )))
            }
        }
    }
    if polys.is_empty() {
        return Err(PolyError::Malformed("no polynomials in input".into()));
    }
    Ok(polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn p_x2_minus_2() -> SparsePolynomial {
        let x = SparsePolynomial::var(1, 0);
        x.square().sub(&SparsePolynomial::constant(1, rat_int(2)))
    }

    #[test]
    fn square_expansion_matches_hand_computation() {
        // (x + y - z)^2 = x^2 + 2xy - 2xz + y^2 - 2yz + z^2
        let x = SparsePolynomial::var(3, 0);
        let y = SparsePolynomial::var(3, 1);
        let z = SparsePolynomial::var(3, 2);
        let f = x.add(&y).sub(&z);
        let sq = f.square();
        assert_eq!(sq.term_count(), 6);
        assert_eq!(sq.terms[&Monomial(vec![2, 0, 0])], rat_int(1));
        assert_eq!(sq.terms[&Monomial(vec![1, 1, 0])], rat_int(2));
        assert_eq!(sq.terms[&Monomial(vec![1, 0, 1])], rat_int(-2));
        assert_eq!(sq.terms[&Monomial(vec![0, 1, 1])], rat_int(-2));
        assert_eq!(sq.degree(), 2);
    }

    #[test]
    fn graded_lex_iteration_is_by_degree_then_lex() {
        let mut p = SparsePolynomial::zero(2);
        p.add_term(Monomial(vec![2, 0]), rat_int(1));
        p.add_term(Monomial(vec![0, 1]), rat_int(1));
        p.add_term(Monomial(vec![1, 1]), rat_int(1));
        p.add_term(Monomial(vec![0, 0]), rat_int(1));
        let order: Vec<Vec<u32>> = p.terms.keys().map(|m| m.0.clone()).collect();
        assert_eq!(
            order,
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![2, 0]]
        );
    }

    #[test]
    fn eval_exact() {
        let p = p_x2_minus_2();
        assert_eq!(p.eval(&[rat_int(3)]), rat_int(7));
        use crate::scalar::QuadRat;
        use num_traits::Zero;
        let root2 = QuadRat::sqrt_of(2);
        assert!(p.eval(&[root2]).is_zero());
    }

    #[test]
    fn parse_round_trip() {
        let p = p_x2_minus_2();
        let sys = parse_poly_system(&p.to_string()).unwrap();
        assert_eq!(sys, vec![p]);

        let multi = "poly 2\nterm 1 1 0\nterm 1 0 1\npoly 2\nterm 1 1 1\nterm -1 0 0\n";
        let sys = parse_poly_system(multi).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].degree(), 1);
        assert_eq!(sys[1].degree(), 2);

        assert!(parse_poly_system("term 1 0\n").is_err());
        assert!(parse_poly_system("poly 1\nterm 1/2 0\n").is_err());
    }

    #[test]
    fn cancelling_terms_vanish() {
        let x = SparsePolynomial::var(1, 0);
        let d = x.sub(&x);
        assert!(d.is_zero());
    }
}
