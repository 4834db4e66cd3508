//! The ADD/MUL/ONE/POS constraint language.
//!
//! A system is a list of named variables plus constraints `x+y=z`, `x*y=z`,
//! `x=1`, `x>0`. The `distinct_promise` flag records that the system is
//! meant as a promise instance: either unsatisfiable or satisfiable with
//! pairwise-distinct values.
//!
//! [`SystemBuilder`] constructs systems programmatically and tracks, for
//! every variable it introduces, the defining expression as a polynomial in
//! the source variables. That single bookkeeping device provides value
//! dedup (two identically-defined variables collapse), forward solution
//! transport, and the chain constructions for integer constants and
//! `2^(2^k)` towers.

use crate::poly::SparsePolynomial;
use crate::rational::{rat_to_string, Rational};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Constraint {
    Add(VarId, VarId, VarId),
    Mul(VarId, VarId, VarId),
    One(VarId),
    Pos(VarId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub vars: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub distinct_promise: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undeclared variable {name:?}")]
    Undeclared { line: usize, name: String },
    #[error("line {line}: duplicate declaration of {name:?}")]
    Duplicate { line: usize, name: String },
    #[error("missing value for variable {0:?}")]
    MissingValue(String),
    #[error("chain bound exceeded: {0}")]
    Bound(String),
}

impl ConstraintSystem {
    pub fn empty() -> Self {
        ConstraintSystem {
            vars: Vec::new(),
            constraints: Vec::new(),
            distinct_promise: false,
        }
    }

    pub fn var_index(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v == name).map(VarId)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.vars[v.0]
    }

    /// Evaluate every constraint against a full value vector.
    pub fn check_values<S: Scalar>(&self, values: &[S]) -> CheckReport {
        assert_eq!(values.len(), self.vars.len());
        let mut results = Vec::with_capacity(self.constraints.len());
        for (i, c) in self.constraints.iter().enumerate() {
            let pass = match *c {
                Constraint::Add(x, y, z) => {
                    (values[x.0].clone() + values[y.0].clone() - values[z.0].clone()).is_zero()
                }
                Constraint::Mul(x, y, z) => {
                    (values[x.0].clone() * values[y.0].clone() - values[z.0].clone()).is_zero()
                }
                Constraint::One(x) => (values[x.0].clone() - S::one()).is_zero(),
                Constraint::Pos(x) => values[x.0].is_positive(),
            };
            results.push(ConstraintCheck {
                index: i,
                text: self.constraint_text(c),
                pass,
            });
        }
        let mut all_distinct = true;
        'outer: for i in 0..values.len() {
            for j in i + 1..values.len() {
                if values[i] == values[j] {
                    all_distinct = false;
                    break 'outer;
                }
            }
        }
        CheckReport {
            all_pass: results.iter().all(|r| r.pass),
            all_distinct,
            results,
        }
    }

    /// Evaluate against a named assignment with exact rationals.
    pub fn check_assignment(&self, a: &Assignment) -> Result<CheckReport, ConstraintError> {
        let values: Result<Vec<Rational>, _> = self
            .vars
            .iter()
            .map(|v| {
                a.values
                    .get(v)
                    .cloned()
                    .ok_or_else(|| ConstraintError::MissingValue(v.clone()))
            })
            .collect();
        Ok(self.check_values(&values?))
    }

    pub fn constraint_text(&self, c: &Constraint) -> String {
        match *c {
            Constraint::Add(x, y, z) => {
                format!("ADD {} {} {}", self.name(x), self.name(y), self.name(z))
            }
            Constraint::Mul(x, y, z) => {
                format!("MUL {} {} {}", self.name(x), self.name(y), self.name(z))
            }
            Constraint::One(x) => format!("ONE {}", self.name(x)),
            Constraint::Pos(x) => format!("POS {}", self.name(x)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vars": self.vars,
            "constraints": self
                .constraints
                .iter()
                .map(|c| self.constraint_text(c))
                .collect::<Vec<_>>(),
            "distinct_promise": self.distinct_promise,
        })
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.distinct_promise {
            writeln!(f, "distinct")?;
        }
        for v in &self.vars {
            writeln!(f, "VAR {v}")?;
        }
        for c in &self.constraints {
            writeln!(f, "{}", self.constraint_text(c))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub index: usize,
    pub text: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub all_pass: bool,
    pub all_distinct: bool,
    pub results: Vec<ConstraintCheck>,
}

/// A named, total assignment of rational values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<String, Rational>,
}

impl Assignment {
    pub fn set(&mut self, name: &str, v: Rational) {
        self.values.insert(name.to_string(), v);
    }
}

/// Parse the line grammar: `VAR x`, `ADD x y z`, `MUL x y z`, `ONE x`,
/// `POS x`, optional `distinct` directive, `#` comments.
pub fn parse_system_text(text: &str) -> Result<ConstraintSystem, ConstraintError> {
    let mut cs = ConstraintSystem::empty();
    let mut index: HashMap<String, VarId> = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ln = ln + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let lookup = |name: &str| -> Result<VarId, ConstraintError> {
            index.get(name).copied().ok_or(ConstraintError::Undeclared {
                line: ln,
                name: name.to_string(),
            })
        };
        match toks[0] {
            "distinct" => cs.distinct_promise = true,
            "VAR" => {
                if toks.len() != 2 {
                    return Err(ConstraintError::Syntax {
                        line: ln,
                        msg: "expected `VAR <name>`".into(),
                    });
                }
                let name = toks[1].to_string();
                if index.contains_key(&name) {
                    return Err(ConstraintError::Duplicate { line: ln, name });
                }
                index.insert(name.clone(), VarId(cs.vars.len()));
                cs.vars.push(name);
            }
            "ADD" | "MUL" => {
                if toks.len() != 4 {
                    return Err(ConstraintError::Syntax {
                        line: ln,
                        msg: format!("expected `{} <x> <y> <z>`", toks[0]),
                    });
                }
                let x = lookup(toks[1])?;
                let y = lookup(toks[2])?;
                let z = lookup(toks[3])?;
                cs.constraints.push(if toks[0] == "ADD" {
                    Constraint::Add(x, y, z)
                } else {
                    Constraint::Mul(x, y, z)
                });
            }
            "ONE" | "POS" => {
                if toks.len() != 2 {
                    return Err(ConstraintError::Syntax {
                        line: ln,
                        msg: format!("expected `{} <x>`", toks[0]),
                    });
                }
                let x = lookup(toks[1])?;
                cs.constraints.push(if toks[0] == "ONE" {
                    Constraint::One(x)
                } else {
                    Constraint::Pos(x)
                });
            }
            other => {
                return Err(ConstraintError::Syntax {
                    line: ln,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
    }
    Ok(cs)
}

/// Parse an assignment file: one `<name> <rational>` per line, `#` comments,
/// optional `assignment` header.
pub fn parse_assignment_text(text: &str) -> Result<Assignment, ConstraintError> {
    let mut a = Assignment::default();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "assignment" {
            continue;
        }
        let ln = ln + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ConstraintError::Syntax {
                line: ln,
                msg: "expected `<name> <value>`".into(),
            });
        }
        let v = crate::rational::rat_from_str(toks[1])
            .map_err(|msg| ConstraintError::Syntax { line: ln, msg })?;
        a.set(toks[0], v);
    }
    Ok(a)
}

/// Coefficients larger than this (in bits) stop being materialized in
/// defining expressions; the affected variables opt out of dedup and
/// transport, which only matters for full-scale tower chains.
const MATERIALIZE_BITS: u64 = 1 << 16;

const CONST_CHAIN_BOUND: u64 = 1 << 40;
const TOWER_CHAIN_BOUND: u32 = 100_000;

/// Result of asking the builder to emit a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainInfo {
    pub out: VarId,
    /// Constraints emitted by this call (shared `one`/`zero` infrastructure
    /// is paid for once per system, not per chain).
    pub emitted: usize,
}

/// Incrementally builds a constraint system while tracking defining
/// expressions over a fixed set of source variables.
pub struct SystemBuilder {
    cs: ConstraintSystem,
    /// Defining polynomial over the source variables; `None` once the
    /// coefficients stop being materializable.
    defs: Vec<Option<SparsePolynomial>>,
    memo: HashMap<SparsePolynomial, VarId>,
    used_names: HashSet<String>,
    source_arity: usize,
    one_var: Option<VarId>,
    zero_var: Option<VarId>,
    /// Build integer constants by repeated +1 instead of double-and-add.
    pub unary_constants: bool,
}

impl SystemBuilder {
    pub fn new(source_names: &[&str]) -> Self {
        let mut b = SystemBuilder {
            cs: ConstraintSystem::empty(),
            defs: Vec::new(),
            memo: HashMap::new(),
            used_names: HashSet::new(),
            source_arity: source_names.len(),
            one_var: None,
            zero_var: None,
            unary_constants: false,
        };
        for (i, name) in source_names.iter().enumerate() {
            let def = SparsePolynomial::var(b.source_arity, i);
            let v = b.push_var(name, Some(def.clone()));
            b.memo.insert(def, v);
        }
        b
    }

    pub fn constraint_count(&self) -> usize {
        self.cs.constraints.len()
    }

    pub fn var_count(&self) -> usize {
        self.cs.vars.len()
    }

    pub fn source_arity(&self) -> usize {
        self.source_arity
    }

    pub fn def_of(&self, v: VarId) -> Option<&SparsePolynomial> {
        self.defs[v.0].as_ref()
    }

    fn push_var(&mut self, hint: &str, def: Option<SparsePolynomial>) -> VarId {
        let mut name = hint.to_string();
        let mut k = 1;
        while !self.used_names.insert(name.clone()) {
            name = format!("{hint}_{k}");
            k += 1;
        }
        self.cs.vars.push(name);
        self.defs.push(def);
        VarId(self.cs.vars.len() - 1)
    }

    /// A fresh variable with no tracked defining expression (exempt from
    /// dedup and transport).
    pub fn fresh_undefined(&mut self, hint: &str) -> VarId {
        self.push_var(hint, None)
    }

    /// Introduce (or reuse) a variable with the given defining expression.
    pub fn define(&mut self, hint: &str, def: SparsePolynomial) -> (VarId, bool) {
        if !materializable(&def) {
            return (self.push_var(hint, None), true);
        }
        if let Some(&v) = self.memo.get(&def) {
            return (v, false);
        }
        let v = self.push_var(hint, Some(def.clone()));
        self.memo.insert(def, v);
        (v, true)
    }

    pub fn emit(&mut self, c: Constraint) {
        self.cs.constraints.push(c);
    }

    /// The shared variable pinned to 1 by a ONE constraint.
    pub fn one(&mut self) -> VarId {
        if let Some(v) = self.one_var {
            return v;
        }
        let (v, fresh) = self.define("one", SparsePolynomial::constant(self.source_arity, Rational::one()));
        if fresh {
            self.emit(Constraint::One(v));
        }
        self.one_var = Some(v);
        v
    }

    /// The shared variable pinned to 0 via `one + z = one`.
    pub fn zero(&mut self) -> VarId {
        if let Some(v) = self.zero_var {
            return v;
        }
        let one = self.one();
        let (v, fresh) =
            self.define("zero", SparsePolynomial::constant(self.source_arity, Rational::zero()));
        if fresh {
            self.emit(Constraint::Add(one, v, one));
        }
        self.zero_var = Some(v);
        v
    }

    /// x + y, memoized on the defining expression.
    pub fn add_of(&mut self, x: VarId, y: VarId, hint: &str) -> VarId {
        let def = match (self.def_of(x), self.def_of(y)) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        self.defined_op(def, hint, |v| Constraint::Add(x, y, v))
    }

    /// x * y, memoized on the defining expression.
    pub fn mul_of(&mut self, x: VarId, y: VarId, hint: &str) -> VarId {
        let def = match (self.def_of(x), self.def_of(y)) {
            (Some(a), Some(b)) => Some(a.mul(b)),
            _ => None,
        };
        self.defined_op(def, hint, |v| Constraint::Mul(x, y, v))
    }

    fn defined_op(
        &mut self,
        def: Option<SparsePolynomial>,
        hint: &str,
        make: impl FnOnce(VarId) -> Constraint,
    ) -> VarId {
        match def {
            Some(d) => {
                let (v, fresh) = self.define(hint, d);
                if fresh {
                    self.emit(make(v));
                }
                v
            }
            None => {
                let v = self.push_var(hint, None);
                self.emit(make(v));
                v
            }
        }
    }

    /// A variable holding the integer `k`, built by double-and-add (or the
    /// unary `+1` ladder when `unary_constants` is set). Emits nothing when
    /// the constant already exists.
    pub fn const_chain(&mut self, k: &BigInt) -> Result<ChainInfo, ConstraintError> {
        if k.is_zero() {
            return Err(ConstraintError::Bound("const_chain requires k != 0".into()));
        }
        if k.magnitude().bits() > 40 && k.magnitude() > &BigInt::from(CONST_CHAIN_BOUND).to_biguint().unwrap() {
            return Err(ConstraintError::Bound(format!("constant {k} too large")));
        }
        if k.is_negative() {
            // infrastructure outside the measured window
            self.zero();
        }
        let start = self.constraint_count();
        let mag = k.abs();
        let pos = if self.unary_constants {
            let one = self.one();
            let mut acc = one;
            let mut i = BigInt::one();
            while i < mag {
                acc = self.add_of(acc, one, &const_hint(&(&i + 1)));
                i += 1;
            }
            acc
        } else {
            let one = self.one();
            let bits = mag.bits();
            let mut acc = one;
            for b in (0..bits - 1).rev() {
                let doubled = self.defs[acc.0]
                    .as_ref()
                    .map(|d| d.add(d));
                let hint = doubled
                    .as_ref()
                    .and_then(const_value)
                    .map(|v| const_hint_rat(&v))
                    .unwrap_or_else(|| "c".into());
                acc = self.add_of(acc, acc, &hint);
                if mag.bit(b) {
                    let hint = self.defs[acc.0]
                        .as_ref()
                        .and_then(const_value)
                        .map(|v| const_hint_rat(&(v + Rational::one())))
                        .unwrap_or_else(|| "c".into());
                    acc = self.add_of(acc, one, &hint);
                }
            }
            acc
        };
        let out = if k.is_negative() {
            let zero = self.zero();
            let def = SparsePolynomial::constant(
                self.source_arity,
                Rational::from_integer(k.clone()),
            );
            let (v, fresh) = self.define(&const_hint(k), def);
            if fresh {
                self.emit(Constraint::Add(v, pos, zero));
            }
            v
        } else {
            pos
        };
        Ok(ChainInfo {
            out,
            emitted: self.constraint_count() - start,
        })
    }

    /// A variable holding an arbitrary rational `p/q`: builds the integer
    /// chains for p and q and pins `v * q = p`.
    pub fn const_rational(&mut self, r: &Rational) -> Result<ChainInfo, ConstraintError> {
        let start = self.constraint_count();
        if r.is_zero() {
            let v = self.zero();
            return Ok(ChainInfo {
                out: v,
                emitted: self.constraint_count() - start,
            });
        }
        if r.denom().is_one() {
            return self.const_chain(r.numer());
        }
        let p = self.const_chain(r.numer())?.out;
        let q = self.const_chain(&Rational::from_integer(r.denom().clone()).numer().clone())?.out;
        let (v, fresh) = self.define(
            &const_hint_rat(r),
            SparsePolynomial::constant(self.source_arity, r.clone()),
        );
        if fresh {
            self.emit(Constraint::Mul(v, q, p));
        }
        Ok(ChainInfo {
            out: v,
            emitted: self.constraint_count() - start,
        })
    }

    /// A variable holding `2^(2^k)` (or `2^(-2^k)` when `small`): the
    /// repeated-squaring tower. Exactly k + 2 constraints on a fresh system.
    pub fn pow_tower_chain(&mut self, k: u32, small: bool) -> Result<ChainInfo, ConstraintError> {
        if k > TOWER_CHAIN_BOUND {
            return Err(ConstraintError::Bound(format!("tower index {k} too large")));
        }
        let start = self.constraint_count();
        let one = self.one();
        let mut x = if small {
            // x0 + x0 = 1, so x0 = 1/2
            let def = SparsePolynomial::constant(self.source_arity, crate::rational::rat(1, 2));
            let (v, fresh) = self.define("half", def);
            if fresh {
                self.emit(Constraint::Add(v, v, one));
            }
            v
        } else {
            self.add_of(one, one, "c2")
        };
        for i in 1..=k {
            let hint = if small {
                format!("tinv{i}")
            } else {
                format!("tow{i}")
            };
            x = self.mul_of(x, x, &hint);
        }
        Ok(ChainInfo {
            out: x,
            emitted: self.constraint_count() - start,
        })
    }

    /// Forward-evaluate every defined variable from source values. Fails on
    /// variables whose defining expression was not materializable.
    pub fn transport<S: Scalar>(&self, source: &[S]) -> Result<Vec<S>, String> {
        assert_eq!(source.len(), self.source_arity);
        self.defs
            .iter()
            .enumerate()
            .map(|(i, d)| match d {
                Some(p) => Ok(p.eval(source)),
                None => Err(format!(
                    "variable {} has no materializable defining expression",
                    self.cs.vars[i]
                )),
            })
            .collect()
    }

    /// No two distinct variables may share a materialized defining
    /// expression; this is what the memo guarantees.
    pub fn assert_defs_unique(&self) {
        let mut seen: HashMap<&SparsePolynomial, usize> = HashMap::new();
        for (i, d) in self.defs.iter().enumerate() {
            if let Some(p) = d {
                if let Some(&j) = seen.get(p) {
                    panic!(
                        "variables {} and {} share a defining expression",
                        self.cs.vars[j], self.cs.vars[i]
                    );
                }
                seen.insert(p, i);
            }
        }
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.cs
    }

    pub fn into_parts(self) -> (ConstraintSystem, Vec<Option<SparsePolynomial>>) {
        (self.cs, self.defs)
    }

    pub fn set_distinct_promise(&mut self, v: bool) {
        self.cs.distinct_promise = v;
    }
}

fn materializable(p: &SparsePolynomial) -> bool {
    p.terms
        .values()
        .all(|c| c.numer().magnitude().bits() <= MATERIALIZE_BITS && c.denom().magnitude().bits() <= MATERIALIZE_BITS)
}

fn const_value(p: &SparsePolynomial) -> Option<Rational> {
    if p.is_zero() {
        return Some(Rational::zero());
    }
    if p.term_count() == 1 {
        let (m, c) = p.terms.iter().next().unwrap();
        if m.degree() == 0 {
            return Some(c.clone());
        }
    }
    None
}

fn const_hint(k: &BigInt) -> String {
    if k.is_negative() {
        format!("cm{}", k.magnitude())
    } else {
        format!("c{k}")
    }
}

fn const_hint_rat(r: &Rational) -> String {
    let base = rat_to_string(r).replace('-', "m").replace('/', "_");
    format!("c{base}")
}

/// Standalone chain constructors on fresh systems.
pub fn const_chain(k: i64, unary: bool) -> Result<(ConstraintSystem, VarId, usize), ConstraintError> {
    let mut b = SystemBuilder::new(&[]);
    b.unary_constants = unary;
    let info = b.const_chain(&BigInt::from(k))?;
    let (cs, _) = b.into_parts();
    Ok((cs, info.out, info.emitted))
}

pub fn pow_tower_chain(k: u32, small: bool) -> Result<(ConstraintSystem, VarId, usize), ConstraintError> {
    let mut b = SystemBuilder::new(&[]);
    let info = b.pow_tower_chain(k, small)?;
    let (cs, _) = b.into_parts();
    Ok((cs, info.out, info.emitted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn parse_minimal_and_errors() {
        let cs = parse_system_text("VAR a\nONE a\n").unwrap();
        assert_eq!(cs.vars, vec!["a"]);
        assert_eq!(cs.constraints, vec![Constraint::One(VarId(0))]);

        assert!(matches!(
            parse_system_text("ADD a b c\nVAR a\n"),
            Err(ConstraintError::Undeclared { line: 1, .. })
        ));
        assert!(matches!(
            parse_system_text("VAR a\nVAR a\n"),
            Err(ConstraintError::Duplicate { line: 2, .. })
        ));

        let cs = parse_system_text("VAR x\nVAR y\nMUL x x y\n").unwrap();
        assert_eq!(
            cs.constraints,
            vec![Constraint::Mul(VarId(0), VarId(0), VarId(1))]
        );
    }

    #[test]
    fn serialize_parse_identity() {
        let text = "distinct\nVAR x\nVAR y\nVAR z\nADD x y z\nPOS x\n";
        let cs = parse_system_text(text).unwrap();
        assert_eq!(cs.to_string(), text);
        assert_eq!(parse_system_text(&cs.to_string()).unwrap(), cs);
    }

    #[test]
    fn check_assignment_examples() {
        let cs = parse_system_text("VAR x\nVAR y\nMUL x x y\n").unwrap();
        let mut a = Assignment::default();
        a.set("x", rat_int(3));
        a.set("y", rat_int(9));
        let rep = cs.check_assignment(&a).unwrap();
        assert!(rep.all_pass);

        let cs = parse_system_text("VAR x\nPOS x\n").unwrap();
        let mut a = Assignment::default();
        a.set("x", rat_int(0));
        assert!(!cs.check_assignment(&a).unwrap().all_pass);

        let cs = parse_system_text("VAR x\nVAR y\nVAR z\nADD x y z\n").unwrap();
        let mut a = Assignment::default();
        a.set("x", rat_int(2));
        a.set("y", rat_int(3));
        a.set("z", rat_int(5));
        let rep = cs.check_assignment(&a).unwrap();
        assert!(rep.all_pass && rep.all_distinct);

        a.set("z", rat_int(2));
        let rep = cs.check_assignment(&a).unwrap();
        assert!(!rep.all_pass && !rep.all_distinct);

        let mut missing = Assignment::default();
        missing.set("x", rat_int(1));
        assert!(cs.check_assignment(&missing).is_err());
    }

    fn chain_value(cs: &ConstraintSystem, defs: &[Option<SparsePolynomial>], v: VarId) -> Rational {
        // all chain vars are constants
        let _ = cs;
        defs[v.0].as_ref().unwrap().eval(&[] as &[Rational])
    }

    #[test]
    fn const_chain_values_and_sizes() {
        for (k, max) in [(1i64, 1usize), (2, 2), (5, 4), (100, 10), (-7, 7)] {
            let mut b = SystemBuilder::new(&[]);
            let info = b.const_chain(&BigInt::from(k)).unwrap();
            assert!(
                info.emitted <= max,
                "k={k}: emitted {} > {max}",
                info.emitted
            );
            let (cs, defs) = b.into_parts();
            assert_eq!(chain_value(&cs, &defs, info.out), rat_int(k));
        }
        // k=1 is exactly {ONE a}
        let (cs, _, emitted) = const_chain(1, false).unwrap();
        assert_eq!(emitted, 1);
        assert_eq!(cs.constraints, vec![Constraint::One(VarId(0))]);
        // k=2 is {ONE a, ADD a a b}
        let (cs, out, emitted) = const_chain(2, false).unwrap();
        assert_eq!(emitted, 2);
        assert_eq!(
            cs.constraints,
            vec![
                Constraint::One(VarId(0)),
                Constraint::Add(VarId(0), VarId(0), out)
            ]
        );
        assert!(const_chain(0, false).is_err());
    }

    #[test]
    fn const_chain_log_bound() {
        for k in [3i64, 17, 999, 4096, 1_000_000] {
            let (_, _, emitted) = const_chain(k, false).unwrap();
            let bound = 2 * (k as f64).log2().ceil() as usize + 2;
            assert!(emitted <= bound, "k={k}: {emitted} > {bound}");
        }
    }

    #[test]
    fn unary_chain_is_linear() {
        let (cs, out, emitted) = const_chain(5, true).unwrap();
        assert_eq!(emitted, 5);
        let mut b = SystemBuilder::new(&[]);
        b.unary_constants = true;
        let info = b.const_chain(&BigInt::from(5)).unwrap();
        let (_, defs) = b.into_parts();
        assert_eq!(chain_value(&cs, &defs, out), rat_int(5));
        assert_eq!(info.out, out);
    }

    #[test]
    fn tower_chain_values_and_sizes() {
        // large: k=0 gives 2; k=2 gives 16
        for (k, expect) in [(0u32, rat_int(2)), (1, rat_int(4)), (2, rat_int(16))] {
            let mut b = SystemBuilder::new(&[]);
            let info = b.pow_tower_chain(k, false).unwrap();
            assert_eq!(info.emitted, k as usize + 2);
            let (cs, defs) = b.into_parts();
            assert_eq!(chain_value(&cs, &defs, info.out), expect);
        }
        // small: k=1 gives 1/4
        let mut b = SystemBuilder::new(&[]);
        let info = b.pow_tower_chain(1, true).unwrap();
        assert_eq!(info.emitted, 3);
        let (cs, defs) = b.into_parts();
        assert_eq!(chain_value(&cs, &defs, info.out), rat(1, 4));
    }

    #[test]
    fn chains_have_unique_satisfying_assignment() {
        // forward evaluation of the defs satisfies every constraint
        let mut b = SystemBuilder::new(&[]);
        b.const_chain(&BigInt::from(37)).unwrap();
        b.pow_tower_chain(3, false).unwrap();
        b.pow_tower_chain(2, true).unwrap();
        b.const_rational(&rat(3, 16)).unwrap();
        b.assert_defs_unique();
        let values = b.transport::<Rational>(&[]).unwrap();
        let rep = b.system().check_values(&values);
        assert!(rep.all_pass, "{:#?}", rep.results.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    }

    #[test]
    fn dedup_reuses_constants() {
        let mut b = SystemBuilder::new(&[]);
        let five = b.const_chain(&BigInt::from(5)).unwrap();
        let five_again = b.const_chain(&BigInt::from(5)).unwrap();
        assert_eq!(five.out, five_again.out);
        assert_eq!(five_again.emitted, 0);
    }
}
