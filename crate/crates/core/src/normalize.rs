//! Compiler passes from polynomial equation systems down to constraint
//! systems with a distinctness promise.
//!
//! The pipeline is
//!
//! ```text
//! polynomial equations --flatten--> ADD/MUL/ONE system
//!                      --squares--> single degree-4 polynomial
//!                      --bounds --> strict-inequality instance (symbolic)
//!                      --chains --> ADD/MUL/ONE/POS system, distinct promise
//! ```
//!
//! The bounding constants are towers `2^(2^k)`: astronomically large or
//! small by design. They are kept in chain form and never materialized at
//! full scale; a test scale substitutes small concrete values so that
//! end-to-end solution transport is executable.

use crate::constraints::{Constraint, ConstraintError, ConstraintSystem, SystemBuilder, VarId};
use crate::poly::{Monomial, SparsePolynomial};
use crate::rational::Rational;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("flatten requires integer coefficients, found {0}")]
    NonIntegerCoefficient(String),
    #[error("degree bound violated: {0}")]
    Degree(String),
    #[error("coefficient bound violated: {0}")]
    CoefficientBound(String),
    #[error("constraint count bound violated: {0}")]
    ConstraintBound(String),
    #[error("POS constraint is not part of the ADD/MUL/ONE fragment")]
    PosInEtrami,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("test scale values must be positive")]
    BadScale,
    #[error(transparent)]
    Chain(#[from] ConstraintError),
}

const MAX_ARITY: usize = 64;
const MAX_TERMS: usize = 100_000;

/// Build a variable holding the value of `p` at the source variables:
/// constants via chains, monomials via stepwise products, the sum via
/// partial sums in graded-lex term order.
fn build_poly_value(
    b: &mut SystemBuilder,
    p: &SparsePolynomial,
) -> Result<VarId, NormalizeError> {
    if p.is_zero() {
        return Ok(b.zero());
    }
    let mut sum: Option<VarId> = None;
    let terms: Vec<(Monomial, Rational)> =
        p.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    for (m, c) in terms {
        let term_var = if m.degree() == 0 {
            b.const_rational(&c)?.out
        } else {
            let mono = build_monomial(b, &m)?;
            if c.is_one() {
                mono
            } else {
                let cv = b.const_rational(&c)?.out;
                b.mul_of(cv, mono, "t")
            }
        };
        sum = Some(match sum {
            None => term_var,
            Some(s) => b.add_of(s, term_var, "psum"),
        });
    }
    Ok(sum.unwrap())
}

/// Stepwise product for one monomial, ascending over variable indices with
/// multiplicity. Shared sub-monomials dedup through the builder memo.
fn build_monomial(b: &mut SystemBuilder, m: &Monomial) -> Result<VarId, NormalizeError> {
    let mut acc: Option<VarId> = None;
    for (i, &e) in m.0.iter().enumerate() {
        for _ in 0..e {
            let xi = VarId(i); // source variables come first in the builder
            acc = Some(match acc {
                None => xi,
                Some(a) => b.mul_of(a, xi, "mon"),
            });
        }
    }
    Ok(acc.expect("nonconstant monomial"))
}

pub struct EtramiOutput {
    pub cs: ConstraintSystem,
    pub defs: Vec<Option<SparsePolynomial>>,
    pub source_vars: Vec<VarId>,
}

/// Flatten a conjunction of polynomial equations `p_i = 0` (integer
/// coefficients) into an ADD/MUL/ONE system whose solutions project onto
/// the input's solutions. Each final equation `P = 0` is pinned with the
/// one-variable trick `one + P = one`; equations of the shape `x - 1 = 0`
/// simplify to a direct ONE constraint.
pub fn flatten_to_etrami(eqs: &[SparsePolynomial]) -> Result<EtramiOutput, NormalizeError> {
    let arity = eqs.first().map(|p| p.arity).unwrap_or(0);
    if arity > MAX_ARITY {
        return Err(NormalizeError::SizeGuard(format!("arity {arity}")));
    }
    for p in eqs {
        assert_eq!(p.arity, arity, "mixed arities");
        if !p.has_integer_coefficients() {
            return Err(NormalizeError::NonIntegerCoefficient(format!("{p}")));
        }
        if p.term_count() > MAX_TERMS {
            return Err(NormalizeError::SizeGuard("term count".into()));
        }
    }
    let names: Vec<String> = (0..arity).map(|i| format!("x{}", i + 1)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut b = SystemBuilder::new(&name_refs);
    for p in eqs {
        if p.is_zero() {
            continue;
        }
        if let Some(i) = matches_var_minus_one(p) {
            b.emit(Constraint::One(VarId(i)));
            continue;
        }
        let pv = build_poly_value(&mut b, p)?;
        let one = b.one();
        b.emit(Constraint::Add(one, pv, one));
    }
    b.assert_defs_unique();
    let source_vars = (0..arity).map(VarId).collect();
    let (cs, defs) = b.into_parts();
    Ok(EtramiOutput {
        cs,
        defs,
        source_vars,
    })
}

/// Recognize `±(x_i - 1)`.
fn matches_var_minus_one(p: &SparsePolynomial) -> Option<usize> {
    if p.term_count() != 2 {
        return None;
    }
    let mut var_idx = None;
    let mut var_coeff = Rational::zero();
    let mut const_coeff = Rational::zero();
    for (m, c) in &p.terms {
        if m.degree() == 0 {
            const_coeff = c.clone();
        } else if m.degree() == 1 {
            var_idx = m.0.iter().position(|&e| e == 1);
            var_coeff = c.clone();
        } else {
            return None;
        }
    }
    let idx = var_idx?;
    if var_coeff.clone() + const_coeff == Rational::zero()
        && (var_coeff == Rational::one() || var_coeff == -Rational::one())
    {
        Some(idx)
    } else {
        None
    }
}

/// The defining polynomials of an ADD/MUL/ONE system's constraints:
/// `x+y=z` becomes `x+y-z`, `x*y=z` becomes `xy-z`, `x=1` becomes `x-1`.
/// Duplicate constraints collapse. POS constraints are rejected.
pub fn constraint_polynomials(
    cs: &ConstraintSystem,
) -> Result<Vec<SparsePolynomial>, NormalizeError> {
    let n = cs.vars.len();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for c in &cs.constraints {
        let p = match *c {
            Constraint::Add(x, y, z) => SparsePolynomial::var(n, x.0)
                .add(&SparsePolynomial::var(n, y.0))
                .sub(&SparsePolynomial::var(n, z.0)),
            Constraint::Mul(x, y, z) => SparsePolynomial::var(n, x.0)
                .mul(&SparsePolynomial::var(n, y.0))
                .sub(&SparsePolynomial::var(n, z.0)),
            Constraint::One(x) => SparsePolynomial::var(n, x.0)
                .sub(&SparsePolynomial::constant(n, Rational::one())),
            Constraint::Pos(_) => return Err(NormalizeError::PosInEtrami),
        };
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Sum of squares of degree-≤2 integer polynomials. Enforces the bounds
/// that hold for constraint polynomials: at most `3n^3` summands and output
/// coefficients of absolute value at most `36n^3`.
pub fn to_feasibility(fs: &[SparsePolynomial]) -> Result<SparsePolynomial, NormalizeError> {
    if fs.is_empty() {
        return Ok(SparsePolynomial::zero(0));
    }
    let n = fs[0].arity;
    let mut uniq = std::collections::HashSet::new();
    let mut m = 0usize;
    let mut p = SparsePolynomial::zero(n);
    for f in fs {
        assert_eq!(f.arity, n, "mixed arities");
        if f.degree() > 2 {
            return Err(NormalizeError::Degree(format!(
                "summand of degree {} > 2",
                f.degree()
            )));
        }
        if !f.has_integer_coefficients() {
            return Err(NormalizeError::NonIntegerCoefficient(format!("{f}")));
        }
        if !uniq.insert(f.clone()) {
            continue;
        }
        m += 1;
        p = p.add(&f.square());
    }
    let n3 = BigInt::from(n.max(1)).pow(3);
    if BigInt::from(m) > BigInt::from(3) * &n3 {
        return Err(NormalizeError::ConstraintBound(format!(
            "{m} distinct constraints exceeds 3n^3"
        )));
    }
    let bound = Rational::from_integer(BigInt::from(36) * n3);
    if p.max_abs_coefficient() > bound {
        return Err(NormalizeError::CoefficientBound(format!(
            "coefficient {} exceeds 36n^3 = {}",
            crate::rational::rat_to_string(&p.max_abs_coefficient()),
            crate::rational::rat_to_string(&bound),
        )));
    }
    Ok(p)
}

/// Bit-complexity derived chain indices.
///
/// `L` is the serialized bit length of the input polynomial. `Lbar`
/// follows `L + n*ceil(log2(L+2)) + 64`; the hidden constant is this
/// crate's fixed choice and is recorded in output metadata. The tower
/// indices pin `delta <= 2^(-2^(Lbar+5))` and `R = 2^(2^k)` with
/// `2^(L^(8n)) < R < 2^(L^(8n+1))`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct NormalizationParams {
    pub l_bits: u64,
    pub lbar: u64,
    pub n: usize,
    pub delta_chain_k: u64,
    pub r_chain_k: u64,
    pub r_squeeze_lower_k: u64,
    pub r_squeeze_upper_k: u64,
}

impl NormalizationParams {
    pub fn for_polynomial(p: &SparsePolynomial) -> Self {
        let l_bits = (p.to_string().len() as u64 * 8).max(16);
        let n = p.arity.max(1);
        Self::from_l_and_n(l_bits, n)
    }

    pub fn from_l_and_n(l_bits: u64, n: usize) -> Self {
        let l = l_bits.max(16);
        let lbar = l + (n as u64) * ceil_log2(l + 2) + 64;
        // ceil(8n log2 L) and floor((8n+1) log2 L), exactly via big powers
        let lb = BigInt::from(l);
        let pow_lower = lb.pow(8 * n as u32);
        let pow_upper = lb.pow(8 * n as u32 + 1);
        let r_squeeze_lower_k = (&pow_lower - 1u32).bits();
        let r_squeeze_upper_k = pow_upper.bits() - 1;
        NormalizationParams {
            l_bits: l,
            lbar,
            n,
            delta_chain_k: lbar + 5,
            r_chain_k: r_squeeze_lower_k + 1,
            r_squeeze_lower_k,
            r_squeeze_upper_k,
        }
    }

    pub fn validate(&self) -> bool {
        let recomputed = Self::from_l_and_n(self.l_bits, self.n);
        *self == recomputed
    }
}

fn ceil_log2(x: u64) -> u64 {
    assert!(x >= 1);
    64 - (x - 1).leading_zeros() as u64
}

/// The symbolic strict-inequality instance: `-delta < p(x) < delta` and
/// `||x||^2 < R^2`, with repeated-squaring chains bounding `delta` from
/// above and squeezing `a < R < b`. Purely structural; no tower value is
/// ever materialized here.
#[derive(Debug, Clone)]
pub struct StrictIneqInstance {
    pub p: SparsePolynomial,
    pub params: NormalizationParams,
}

pub fn to_strict_ineq(p: &SparsePolynomial, params: NormalizationParams) -> StrictIneqInstance {
    StrictIneqInstance {
        p: p.clone(),
        params,
    }
}

impl StrictIneqInstance {
    /// Human-readable listing of the symbolic constraints.
    pub fn constraint_lines(&self) -> Vec<String> {
        let k = self.params.delta_chain_k;
        let t1 = self.params.r_squeeze_lower_k;
        let t2 = self.params.r_squeeze_upper_k;
        vec![
            "-delta < p(x) < delta".to_string(),
            "||x||^2 < R^2".to_string(),
            format!("delta chain: y0 > 0, 2*y0 < 1, y_i > 0, y_i < y_(i-1)^2 for i = 1..{k}, delta = y_{k}"),
            format!("R lower squeeze: a0 > 2, a_i > a_(i-1)^2 for i = 1..{t1}, a = a_{t1}"),
            format!("R upper squeeze: b0 < 2, b_i > 0, b_i < b_(i-1)^2 for i = 1..{t2}, b = b_{t2}"),
            "a < R < b".to_string(),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p.to_string(),
            "params": self.params,
            "constraints": self.constraint_lines(),
        })
    }
}

/// How the tower constants are produced in the final system.
#[derive(Debug, Clone)]
pub enum TowerScale {
    /// Chains at the indices mandated by the parameters; values stay
    /// symbolic.
    Full,
    /// Small concrete values so transported solutions can be checked.
    Test { delta: Rational, r: Rational },
}

pub struct DistinctOutput {
    pub cs: ConstraintSystem,
    pub defs: Vec<Option<SparsePolynomial>>,
    pub source_vars: Vec<VarId>,
    pub p_var: VarId,
    pub norm_var: VarId,
    pub delta_var: VarId,
    pub r_var: VarId,
    pub slack_a: VarId,
    pub slack_b: VarId,
    pub slack_c: VarId,
    pub metadata: serde_json::Value,
}

/// Final reduction: coefficient constants, stepwise monomials, partial sums
/// `P_k`, the norm chain `X = ||x||^2`, tower (or test-scale) constants for
/// `delta` and `R`, and slack variables pinned positive:
///
/// ```text
/// P + delta = a,  b + P = delta,  c + X = R,  a, b, c > 0
/// ```
///
/// which enforce `-delta < p(x) < delta` and `||x||^2 < R`.
pub fn to_distinct(
    si: &StrictIneqInstance,
    scale: &TowerScale,
) -> Result<DistinctOutput, NormalizeError> {
    let n = si.p.arity;
    if n > MAX_ARITY {
        return Err(NormalizeError::SizeGuard(format!("arity {n}")));
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{}", i + 1)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut b = SystemBuilder::new(&name_refs);

    let (delta_var, r_var) = match scale {
        TowerScale::Full => {
            let dk = si.params.delta_chain_k;
            let rk = si.params.r_chain_k;
            let d = b.pow_tower_chain(
                dk.to_u32().ok_or(NormalizeError::SizeGuard("delta index".into()))?,
                true,
            )?;
            let r = b.pow_tower_chain(
                rk.to_u32().ok_or(NormalizeError::SizeGuard("R index".into()))?,
                false,
            )?;
            (d.out, r.out)
        }
        TowerScale::Test { delta, r } => {
            if !Signed::is_positive(delta) || !Signed::is_positive(r) {
                return Err(NormalizeError::BadScale);
            }
            (b.const_rational(delta)?.out, b.const_rational(r)?.out)
        }
    };

    let p_var = build_poly_value(&mut b, &si.p)?;
    let mut norm_poly = SparsePolynomial::zero(n);
    for i in 0..n {
        norm_poly = norm_poly.add(&SparsePolynomial::var(n, i).square());
    }
    let norm_var = build_poly_value(&mut b, &norm_poly)?;

    let delta_def = b.def_of(delta_var).cloned();
    let p_def = b.def_of(p_var).cloned();
    let norm_def = b.def_of(norm_var).cloned();
    let r_def = b.def_of(r_var).cloned();

    // P + delta = a > 0 enforces p(x) > -delta
    let slack_a = define_slack(&mut b, combine(&p_def, &delta_def, false), "slack_a");
    b.emit(Constraint::Add(p_var, delta_var, slack_a));
    b.emit(Constraint::Pos(slack_a));
    // b + P = delta, b > 0 enforces p(x) < delta
    let slack_b = define_slack(&mut b, combine(&delta_def, &p_def, true), "slack_b");
    b.emit(Constraint::Add(slack_b, p_var, delta_var));
    b.emit(Constraint::Pos(slack_b));
    // c + X = R, c > 0 enforces ||x||^2 < R
    let slack_c = define_slack(&mut b, combine(&r_def, &norm_def, true), "slack_c");
    b.emit(Constraint::Add(slack_c, norm_var, r_var));
    b.emit(Constraint::Pos(slack_c));

    b.assert_defs_unique();
    b.set_distinct_promise(true);
    let source_vars = (0..n).map(VarId).collect();
    let (cs, defs) = b.into_parts();
    let metadata = serde_json::json!({
        "params": si.params,
        "scale": match scale {
            TowerScale::Full => serde_json::json!("full"),
            TowerScale::Test { delta, r } => serde_json::json!({
                "delta": crate::rational::rat_to_string(delta),
                "r": crate::rational::rat_to_string(r),
            }),
        },
        "vars": cs.vars.len(),
        "constraints": cs.constraints.len(),
    });
    Ok(DistinctOutput {
        cs,
        defs,
        source_vars,
        p_var,
        norm_var,
        delta_var,
        r_var,
        slack_a,
        slack_b,
        slack_c,
        metadata,
    })
}

fn combine(
    a: &Option<SparsePolynomial>,
    b: &Option<SparsePolynomial>,
    subtract: bool,
) -> Option<SparsePolynomial> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if subtract { x.sub(y) } else { x.add(y) }),
        _ => None,
    }
}

fn define_slack(b: &mut SystemBuilder, def: Option<SparsePolynomial>, hint: &str) -> VarId {
    match def {
        Some(d) => b.define(hint, d).0,
        // full-scale towers: the defining value is not materializable
        None => b.fresh_undefined(hint),
    }
}

/// Forward-evaluate defining expressions from source values.
pub fn transport_values<S: Scalar>(
    defs: &[Option<SparsePolynomial>],
    source: &[S],
) -> Result<Vec<S>, String> {
    defs.iter()
        .enumerate()
        .map(|(i, d)| match d {
            Some(p) => Ok(p.eval(source)),
            None => Err(format!("variable #{i} has no materializable defining expression")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::scalar::QuadRat;

    fn x2_minus_2() -> SparsePolynomial {
        SparsePolynomial::var(1, 0)
            .square()
            .sub(&SparsePolynomial::constant(1, rat_int(2)))
    }

    #[test]
    fn flatten_x_minus_one_simplifies_to_one_constraint() {
        let p = SparsePolynomial::var(1, 0).sub(&SparsePolynomial::constant(1, rat_int(1)));
        let out = flatten_to_etrami(&[p]).unwrap();
        assert_eq!(out.cs.constraints, vec![Constraint::One(VarId(0))]);
        assert_eq!(out.cs.vars, vec!["x1"]);
    }

    #[test]
    fn flatten_x2_eq_2_is_satisfied_by_sqrt2() {
        let out = flatten_to_etrami(&[x2_minus_2()]).unwrap();
        // the system contains a squaring MUL
        assert!(out
            .cs
            .constraints
            .iter()
            .any(|c| matches!(c, Constraint::Mul(x, y, _) if x == y)));
        let vals = transport_values(&out.defs, &[QuadRat::sqrt_of(2)]).unwrap();
        let rep = out.cs.check_values(&vals);
        assert!(rep.all_pass);
    }

    #[test]
    fn flatten_linear_system_projects_correctly() {
        // x + y = 0 and x = 1: y = -1
        let p1 = SparsePolynomial::var(2, 0).add(&SparsePolynomial::var(2, 1));
        let p2 = SparsePolynomial::var(2, 0).sub(&SparsePolynomial::constant(2, rat_int(1)));
        let out = flatten_to_etrami(&[p1, p2]).unwrap();
        let vals = transport_values(&out.defs, &[rat_int(1), rat_int(-1)]).unwrap();
        assert!(out.cs.check_values(&vals).all_pass);
        // wrong projection fails
        let vals = transport_values(&out.defs, &[rat_int(1), rat_int(2)]).unwrap();
        assert!(!out.cs.check_values(&vals).all_pass);
    }

    #[test]
    fn flatten_rejects_rational_coefficients() {
        let p = SparsePolynomial::constant(1, rat(1, 2)).add(&SparsePolynomial::var(1, 0));
        assert!(matches!(
            flatten_to_etrami(&[p]),
            Err(NormalizeError::NonIntegerCoefficient(_))
        ));
    }

    #[test]
    fn feasibility_of_single_addition_constraint() {
        // f = x + y - z: p matches the hand expansion
        let f = SparsePolynomial::var(3, 0)
            .add(&SparsePolynomial::var(3, 1))
            .sub(&SparsePolynomial::var(3, 2));
        let p = to_feasibility(&[f.clone()]).unwrap();
        assert_eq!(p, f.square());
        assert_eq!(p.degree(), 2);
        assert_eq!(to_feasibility(&[]).unwrap(), SparsePolynomial::zero(0));
    }

    #[test]
    fn feasibility_respects_bounds() {
        let f1 = SparsePolynomial::var(2, 0).sub(&SparsePolynomial::constant(2, rat_int(1)));
        let f2 = SparsePolynomial::var(2, 0)
            .mul(&SparsePolynomial::var(2, 1))
            .sub(&SparsePolynomial::var(2, 1));
        let p = to_feasibility(&[f1, f2]).unwrap();
        assert_eq!(p.degree(), 4);
        let n3 = rat_int(36 * 8);
        assert!(p.max_abs_coefficient() <= n3);

        // degree-3 summand rejected
        let bad = SparsePolynomial::var(1, 0)
            .mul(&SparsePolynomial::var(1, 0))
            .mul(&SparsePolynomial::var(1, 0));
        assert!(matches!(
            to_feasibility(&[bad]),
            Err(NormalizeError::Degree(_))
        ));

        // oversized coefficients rejected
        let big = SparsePolynomial::constant(1, rat_int(1000)).add(&SparsePolynomial::var(1, 0));
        assert!(matches!(
            to_feasibility(&[big]),
            Err(NormalizeError::CoefficientBound(_))
        ));
    }

    #[test]
    fn etrami_round_trip_through_feasibility() {
        let out = flatten_to_etrami(&[x2_minus_2()]).unwrap();
        let fs = constraint_polynomials(&out.cs).unwrap();
        let p = to_feasibility(&fs).unwrap();
        assert!(p.degree() <= 4);
        // p vanishes exactly on transported solutions
        let vals = transport_values(&out.defs, &[QuadRat::sqrt_of(2)]).unwrap();
        assert!(num_traits::Zero::is_zero(&p.eval(&vals)));
    }

    #[test]
    fn params_formulas() {
        let p = x2_minus_2();
        let params = NormalizationParams::for_polynomial(&p);
        assert!(params.validate());
        assert_eq!(params.delta_chain_k, params.lbar + 5);
        assert_eq!(params.r_chain_k, params.r_squeeze_lower_k + 1);
        assert!(params.r_squeeze_lower_k < params.r_squeeze_upper_k);
        // r_squeeze_lower_k = ceil(8 n log2 L)
        let expect = {
            let lb = BigInt::from(params.l_bits);
            (lb.pow(8) - 1u32).bits()
        };
        assert_eq!(params.r_squeeze_lower_k, expect);
    }

    #[test]
    fn strict_ineq_is_symbolic() {
        let p = x2_minus_2();
        let params = NormalizationParams::for_polynomial(&p);
        let si = to_strict_ineq(&p, params);
        let lines = si.constraint_lines();
        assert!(lines.iter().any(|l| l.contains("-delta < p(x) < delta")));
        assert!(lines.iter().any(|l| l.contains("a < R < b")));
    }

    #[test]
    fn distinct_output_accepts_transported_solution_at_test_scale() {
        // p = x^2 over one variable; solution x = 1/10 keeps p within delta
        let p = SparsePolynomial::var(1, 0).square();
        let params = NormalizationParams::for_polynomial(&p);
        let si = to_strict_ineq(&p, params);
        let out = to_distinct(
            &si,
            &TowerScale::Test {
                delta: rat(1, 16),
                r: rat_int(100),
            },
        )
        .unwrap();
        assert!(out.cs.distinct_promise);
        let vals = transport_values(&out.defs, &[rat(1, 10)]).unwrap();
        let rep = out.cs.check_values(&vals);
        assert!(
            rep.all_pass,
            "{:?}",
            rep.results.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        );
        assert!(rep.all_distinct, "expected pairwise distinct values");
        // delta materialized at 1/16, R at 100
        assert_eq!(out.defs[out.delta_var.0].as_ref().unwrap().eval(&[rat_int(0)]), rat(1, 16));
        assert_eq!(out.defs[out.r_var.0].as_ref().unwrap().eval(&[rat_int(0)]), rat_int(100));
    }

    #[test]
    fn distinct_full_scale_stays_symbolic_but_small() {
        let p = x2_minus_2();
        let params = NormalizationParams::for_polynomial(&p);
        let k_delta = params.delta_chain_k as usize;
        let k_r = params.r_chain_k as usize;
        let si = to_strict_ineq(&p, params);
        let out = to_distinct(&si, &TowerScale::Full).unwrap();
        // system size is linear in the chain indices, not in the tower values
        assert!(out.cs.constraints.len() < k_delta + k_r + 200);
        assert!(out.cs.constraints.len() > k_delta.max(k_r));
    }

    #[test]
    fn monomial_dedup_collapses_repeats() {
        // xy appears in both polynomials; one monomial variable serves both
        let xy = SparsePolynomial::var(2, 0).mul(&SparsePolynomial::var(2, 1));
        let p1 = xy.sub(&SparsePolynomial::constant(2, rat_int(1)));
        let p2 = xy.add(&SparsePolynomial::var(2, 0));
        let out = flatten_to_etrami(&[p1, p2]).unwrap();
        let mul_xy: Vec<_> = out
            .cs
            .constraints
            .iter()
            .filter(|c| matches!(c, Constraint::Mul(x, y, _) if *x == VarId(0) && *y == VarId(1)))
            .collect();
        assert_eq!(mul_xy.len(), 1);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let p = x2_minus_2();
        let run = || {
            let out = flatten_to_etrami(&[p.clone()]).unwrap();
            let fs = constraint_polynomials(&out.cs).unwrap();
            let q = to_feasibility(&fs).unwrap();
            let params = NormalizationParams::for_polynomial(&q);
            let si = to_strict_ineq(&q, params);
            let d = to_distinct(
                &si,
                &TowerScale::Test {
                    delta: rat(1, 16),
                    r: rat_int(100),
                },
            )
            .unwrap();
            d.cs.to_string()
        };
        assert_eq!(run(), run());
    }
}
