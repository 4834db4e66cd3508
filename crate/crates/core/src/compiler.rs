//! Von Staudt gadget compilation: lower an ADD/MUL/ONE/POS constraint
//! system to a rank-3 matroid described by a line registry.
//!
//! The measurement line `ell` carries the distinguished points 0, 1, inf
//! and one point per variable. A second line `ell_inf` crosses `ell` at
//! inf and collects direction helpers. Every arithmetic constraint becomes
//! a fixed pattern of four helper points and five lines; positivity becomes
//! two chained multiplication patterns. Dependencies are exactly the
//! registered lines: helpers are fresh per gadget, so no unintended
//! collinearity is ever declared, and the line registry invariant (no two
//! lines share two points) is checked incrementally on every insertion.

use crate::constraints::{Constraint, ConstraintSystem, VarId};
use crate::matroid::LineSet;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

pub type PointId = usize;
pub type LineId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("coincidence conflict: {0}")]
    Coincidence(String),
    #[error("alias conflict on variable {0:?}: {1}")]
    AliasConflict(String, String),
    #[error("point {0} is not on the required line")]
    NotOnLine(PointId),
    #[error("size guard exceeded: {0}")]
    Guard(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Role {
    Zero,
    One,
    Inf,
    Var(String),
    /// Original order-type element (simulation mode).
    Element(usize),
    Helper {
        gadget: usize,
        tag: String,
    },
}

/// Placement latitude the realizer has for a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Freedom {
    /// Pinned by the frame or the assignment.
    Fixed,
    /// Anywhere on the line at infinity.
    OnLineInf,
    /// Derived from other helpers by line intersections.
    Derived,
    /// On the gadget's measurement line, value solved from the wiring.
    OnMeasureLine,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointInfo {
    pub name: String,
    pub role: Role,
    pub freedom: Freedom,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct GadgetStats {
    pub adds: usize,
    pub muls: usize,
    pub poses: usize,
    pub var_points: usize,
    pub aliased_vars: usize,
}

/// A rank-3 matroid under construction: points plus a line registry.
#[derive(Debug, Clone)]
pub struct CompiledMatroid {
    pub points: Vec<PointInfo>,
    pub lines: Vec<Vec<PointId>>,
    pub ell: Option<LineId>,
    pub ell_inf: LineId,
    pub zero: Option<PointId>,
    pub one: Option<PointId>,
    pub inf: Option<PointId>,
    pair_map: HashMap<(PointId, PointId), LineId>,
    gadget_seq: usize,
    pub stats: GadgetStats,
}

impl CompiledMatroid {
    fn empty() -> Self {
        CompiledMatroid {
            points: Vec::new(),
            lines: Vec::new(),
            ell: None,
            ell_inf: 0,
            zero: None,
            one: None,
            inf: None,
            pair_map: HashMap::new(),
            gadget_seq: 0,
            stats: GadgetStats::default(),
        }
    }

    /// The frame for constraint compilation: points 0, 1, inf; lines
    /// `ell = {0, 1, inf}` and `ell_inf = {inf}`.
    pub fn init_frame() -> Self {
        let mut cm = Self::empty();
        let z = cm.add_point("0", Role::Zero, Freedom::Fixed);
        let o = cm.add_point("1", Role::One, Freedom::Fixed);
        let i = cm.add_point("inf", Role::Inf, Freedom::Fixed);
        cm.zero = Some(z);
        cm.one = Some(o);
        cm.inf = Some(i);
        let ell = cm.add_line(vec![z, o, i]).expect("fresh frame");
        cm.ell = Some(ell);
        cm.ell_inf = cm.add_line(vec![i]).expect("fresh frame");
        cm
    }

    /// The frame for order-type simulation: no measurement line, an
    /// initially empty line at infinity.
    pub fn init_simulation_frame() -> Self {
        let mut cm = Self::empty();
        cm.ell_inf = cm.add_line(vec![]).expect("fresh frame");
        cm
    }

    pub fn add_point(&mut self, name: &str, role: Role, freedom: Freedom) -> PointId {
        self.points.push(PointInfo {
            name: name.to_string(),
            role,
            freedom,
        });
        self.points.len() - 1
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn line_members(&self, l: LineId) -> &[PointId] {
        &self.lines[l]
    }

    pub fn line_of_pair(&self, p: PointId, q: PointId) -> Option<LineId> {
        self.pair_map.get(&pair_key(p, q)).copied()
    }

    pub fn on_line(&self, l: LineId, p: PointId) -> bool {
        self.lines[l].contains(&p)
    }

    /// Register a new line. Fails if any pair of its members already lies
    /// on another registered line.
    pub fn add_line(&mut self, members: Vec<PointId>) -> Result<LineId, CompileError> {
        let id = self.lines.len();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if members[i] == members[j] {
                    return Err(CompileError::Coincidence(format!(
                        "line {:?} repeats point {}",
                        members, self.points[members[i]].name
                    )));
                }
                let key = pair_key(members[i], members[j]);
                if let Some(&other) = self.pair_map.get(&key) {
                    return Err(CompileError::Coincidence(format!(
                        "points {} and {} already lie on line #{other}; refusing a second line",
                        self.points[members[i]].name, self.points[members[j]].name
                    )));
                }
            }
        }
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                self.pair_map.insert(pair_key(members[i], members[j]), id);
            }
        }
        self.lines.push(members);
        Ok(id)
    }

    /// Append a point to an existing line, preserving the pair invariant.
    pub fn append_to_line(&mut self, l: LineId, p: PointId) -> Result<(), CompileError> {
        if self.lines[l].contains(&p) {
            return Ok(());
        }
        for &q in &self.lines[l] {
            let key = pair_key(p, q);
            if let Some(&other) = self.pair_map.get(&key) {
                if other != l {
                    return Err(CompileError::Coincidence(format!(
                        "appending {} to line #{l} collides with line #{other} through {}",
                        self.points[p].name, self.points[q].name
                    )));
                }
            }
        }
        let members: Vec<PointId> = self.lines[l].clone();
        for q in members {
            self.pair_map.insert(pair_key(p, q), l);
        }
        self.lines[l].push(p);
        Ok(())
    }

    /// Lines with at least three members, as a plain line set.
    pub fn to_line_set(&self) -> LineSet {
        let lines: Vec<Vec<usize>> = self
            .lines
            .iter()
            .filter(|l| l.len() >= 3)
            .cloned()
            .collect();
        LineSet::new(self.n_points(), lines).expect("registry invariant")
    }

    /// Full recheck of the registry invariant (tests and post-conditions).
    pub fn check_invariants(&self) -> Result<(), CompileError> {
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let shared = self.lines[i]
                    .iter()
                    .filter(|p| self.lines[j].contains(p))
                    .count();
                if shared >= 2 {
                    return Err(CompileError::Coincidence(format!(
                        "lines #{i} and #{j} share {shared} points"
                    )));
                }
            }
        }
        if let (Some(ell), ell_inf) = (self.ell, self.ell_inf) {
            let shared: Vec<&PointId> = self.lines[ell]
                .iter()
                .filter(|p| self.lines[ell_inf].contains(p))
                .collect();
            if shared.len() != 1 || Some(*shared[0]) != self.inf {
                return Err(CompileError::Coincidence(
                    "ell and ell_inf must meet exactly at inf".into(),
                ));
            }
        }
        Ok(())
    }

    fn next_gadget_id(&mut self) -> usize {
        let id = self.gadget_counter();
        self.bump_gadget_counter();
        id
    }

    fn gadget_counter(&self) -> usize {
        self.points
            .iter()
            .filter_map(|p| match &p.role {
                Role::Helper { gadget, .. } => Some(*gadget + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn bump_gadget_counter(&mut self) {}

    /// The von Staudt addition pattern in the frame (origin, at_inf):
    /// helpers a, b on the line at infinity, crossing points c, d; lines
    /// {origin,b,c}, {in1,a,c}, {at_inf,c,d}, {in2,b,d}, {a,d,out}.
    pub fn emit_add_framed(
        &mut self,
        origin: PointId,
        at_inf: PointId,
        in1: PointId,
        in2: PointId,
        out: PointId,
    ) -> Result<AddWiring, CompileError> {
        let g = self.next_gadget_id();
        let a = self.add_point(&format!("g{g}.a"), helper(g, "a"), Freedom::OnLineInf);
        let b = self.add_point(&format!("g{g}.b"), helper(g, "b"), Freedom::OnLineInf);
        let c = self.add_point(&format!("g{g}.c"), helper(g, "c"), Freedom::Derived);
        let d = self.add_point(&format!("g{g}.d"), helper(g, "d"), Freedom::Derived);
        self.append_to_line(self.ell_inf, a)?;
        self.append_to_line(self.ell_inf, b)?;
        self.add_line(vec![origin, b, c])?;
        self.add_line(vec![in1, a, c])?;
        self.add_line(vec![at_inf, c, d])?;
        self.add_line(vec![in2, b, d])?;
        self.add_line(vec![a, d, out])?;
        Ok(AddWiring {
            origin,
            at_inf,
            in1,
            in2,
            out,
            a,
            b,
            c,
            d,
        })
    }

    /// The von Staudt multiplication pattern in the frame (origin, unit):
    /// lines {unit,b,c}, {in1,a,c}, {origin,c,d}, {b,in2,d}, {a,d,out}.
    pub fn emit_mul_framed(
        &mut self,
        origin: PointId,
        unit: PointId,
        in1: PointId,
        in2: PointId,
        out: PointId,
    ) -> Result<MulWiring, CompileError> {
        let g = self.next_gadget_id();
        let a = self.add_point(&format!("g{g}.a"), helper(g, "a"), Freedom::OnLineInf);
        let b = self.add_point(&format!("g{g}.b"), helper(g, "b"), Freedom::OnLineInf);
        let c = self.add_point(&format!("g{g}.c"), helper(g, "c"), Freedom::Derived);
        let d = self.add_point(&format!("g{g}.d"), helper(g, "d"), Freedom::Derived);
        self.append_to_line(self.ell_inf, a)?;
        self.append_to_line(self.ell_inf, b)?;
        self.add_line(vec![unit, b, c])?;
        self.add_line(vec![in1, a, c])?;
        self.add_line(vec![origin, c, d])?;
        self.add_line(vec![b, in2, d])?;
        self.add_line(vec![a, d, out])?;
        Ok(MulWiring {
            origin,
            unit,
            in1,
            in2,
            out,
            a,
            b,
            c,
            d,
        })
    }

    /// Addition gadget in the standard frame; arguments must lie on `ell`.
    pub fn emit_add(
        &mut self,
        x: PointId,
        y: PointId,
        z: PointId,
    ) -> Result<AddWiring, CompileError> {
        let (ell, zero, inf) = self.arithmetic_frame()?;
        for p in [x, y, z] {
            if !self.on_line(ell, p) {
                return Err(CompileError::NotOnLine(p));
            }
        }
        let w = self.emit_add_framed(zero, inf, x, y, z)?;
        self.stats.adds += 1;
        Ok(w)
    }

    /// Multiplication gadget in the standard frame.
    pub fn emit_mul(
        &mut self,
        x: PointId,
        y: PointId,
        z: PointId,
    ) -> Result<MulWiring, CompileError> {
        let (ell, zero, _) = self.arithmetic_frame()?;
        let one = self.one.expect("arithmetic frame");
        for p in [x, y, z] {
            if !self.on_line(ell, p) {
                return Err(CompileError::NotOnLine(p));
            }
        }
        let w = self.emit_mul_framed(zero, one, x, y, z)?;
        self.stats.muls += 1;
        Ok(w)
    }

    /// Positivity gadget in a general frame on `host_line` (which must
    /// contain origin, unit and x). Two helpers y, z on the host line and
    /// two multiplication patterns:
    ///
    /// * `(z, z) -> x` in the frame (origin, unit): pins x to the nonzero
    ///   square z^2 of the frame;
    /// * `(z, z) -> origin` in the frame (y, unit): the square relation
    ///   with the origin role played by y, which solves to y = z^2/(2z-1)
    ///   and keeps both helpers off the distinguished points.
    pub fn emit_pos_framed(
        &mut self,
        host_line: LineId,
        origin: PointId,
        unit: PointId,
        x: PointId,
    ) -> Result<PosWiring, CompileError> {
        for p in [origin, unit, x] {
            if !self.on_line(host_line, p) {
                return Err(CompileError::NotOnLine(p));
            }
        }
        let g = self.gadget_counter();
        let y = self.add_point(&format!("g{g}.y"), helper(g, "y"), Freedom::OnMeasureLine);
        let z = self.add_point(&format!("g{g}.z"), helper(g, "z"), Freedom::OnMeasureLine);
        self.append_to_line(host_line, y)?;
        self.append_to_line(host_line, z)?;
        let sub_square = self.emit_mul_framed(origin, unit, z, z, x)?;
        let sub_anchor = self.emit_mul_framed(y, unit, z, z, origin)?;
        self.stats.poses += 1;
        Ok(PosWiring {
            host_line,
            origin,
            unit,
            x,
            y,
            z,
            sub_square,
            sub_anchor,
        })
    }

    pub fn emit_pos(&mut self, x: PointId) -> Result<PosWiring, CompileError> {
        let (ell, zero, _) = self.arithmetic_frame()?;
        let one = self.one.expect("arithmetic frame");
        if !self.on_line(ell, x) {
            return Err(CompileError::NotOnLine(x));
        }
        self.emit_pos_framed(ell, zero, one, x)
    }

    fn arithmetic_frame(&self) -> Result<(LineId, PointId, PointId), CompileError> {
        match (self.ell, self.zero, self.inf) {
            (Some(ell), Some(zero), Some(inf)) => Ok((ell, zero, inf)),
            _ => Err(CompileError::Coincidence(
                "arithmetic frame not initialized".into(),
            )),
        }
    }
}

fn helper(gadget: usize, tag: &str) -> Role {
    Role::Helper {
        gadget,
        tag: tag.to_string(),
    }
}

fn pair_key(p: PointId, q: PointId) -> (PointId, PointId) {
    if p < q {
        (p, q)
    } else {
        (q, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AddWiring {
    pub origin: PointId,
    pub at_inf: PointId,
    pub in1: PointId,
    pub in2: PointId,
    pub out: PointId,
    pub a: PointId,
    pub b: PointId,
    pub c: PointId,
    pub d: PointId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MulWiring {
    pub origin: PointId,
    pub unit: PointId,
    pub in1: PointId,
    pub in2: PointId,
    pub out: PointId,
    pub a: PointId,
    pub b: PointId,
    pub c: PointId,
    pub d: PointId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PosWiring {
    pub host_line: LineId,
    pub origin: PointId,
    pub unit: PointId,
    pub x: PointId,
    pub y: PointId,
    pub z: PointId,
    pub sub_square: MulWiring,
    pub sub_anchor: MulWiring,
}

#[derive(Debug, Clone, Serialize)]
pub enum GadgetTrace {
    Add { constraint: usize, wiring: AddWiring },
    Mul { constraint: usize, wiring: MulWiring },
    Pos { constraint: usize, wiring: PosWiring },
}

#[derive(Debug, Clone)]
pub struct CompileOutput {
    pub matroid: CompiledMatroid,
    pub var_points: Vec<(String, PointId)>,
    pub traces: Vec<GadgetTrace>,
}

/// Lower a constraint system to a compiled matroid.
///
/// ONE constraints alias their variable to the distinguished point 1; the
/// zero identity `x + z = x` aliases z to the point 0. Constraints whose
/// gadget would force two registered lines through the same two points are
/// rejected as coincidence conflicts, except for the identities
/// `0 + y = y`, `1 * y = y`, `0 * y = 0`, which are vacuous and dropped.
pub fn compile(cs: &ConstraintSystem) -> Result<CompileOutput, CompileError> {
    let mut cm = CompiledMatroid::init_frame();
    let zero_pt = cm.zero.unwrap();
    let one_pt = cm.one.unwrap();

    // alias pass
    let mut alias: Vec<Option<PointId>> = vec![None; cs.vars.len()];
    let mut consumed = vec![false; cs.constraints.len()];
    fn set_alias(
        cs: &ConstraintSystem,
        alias: &mut [Option<PointId>],
        v: VarId,
        pt: PointId,
        what: &str,
    ) -> Result<(), CompileError> {
        match alias[v.0] {
            None => {
                alias[v.0] = Some(pt);
                Ok(())
            }
            Some(existing) if existing == pt => Ok(()),
            Some(_) => Err(CompileError::AliasConflict(
                cs.vars[v.0].clone(),
                format!("already pinned, cannot also alias to {what}"),
            )),
        }
    }
    for (i, c) in cs.constraints.iter().enumerate() {
        match *c {
            Constraint::One(v) => {
                set_alias(cs, &mut alias, v, one_pt, "1")?;
                consumed[i] = true;
            }
            Constraint::Add(x, y, z) if z == x && y != x => {
                set_alias(cs, &mut alias, y, zero_pt, "0")?;
                consumed[i] = true;
            }
            Constraint::Add(x, y, z) if z == y && x != y => {
                set_alias(cs, &mut alias, x, zero_pt, "0")?;
                consumed[i] = true;
            }
            _ => {}
        }
    }
    let aliased_vars = alias.iter().filter(|a| a.is_some()).count();

    // variable points on ell, in declaration order
    let ell = cm.ell.unwrap();
    let mut pt_of: Vec<PointId> = Vec::with_capacity(cs.vars.len());
    for (i, name) in cs.vars.iter().enumerate() {
        match alias[i] {
            Some(p) => pt_of.push(p),
            None => {
                let p = cm.add_point(name, Role::Var(name.clone()), Freedom::Fixed);
                cm.append_to_line(ell, p)
                    .map_err(|e| CompileError::Coincidence(format!("variable {name}: {e}")))?;
                pt_of.push(p);
                cm.stats.var_points += 1;
            }
        }
    }
    cm.stats.aliased_vars = aliased_vars;

    let mut traces = Vec::new();
    for (i, c) in cs.constraints.iter().enumerate() {
        if consumed[i] {
            continue;
        }
        match *c {
            Constraint::Add(x, y, z) => {
                let (px, py, pz) = (pt_of[x.0], pt_of[y.0], pt_of[z.0]);
                if px == zero_pt || py == zero_pt {
                    let other = if px == zero_pt { py } else { px };
                    if pz == other {
                        continue; // 0 + y = y
                    }
                    return Err(CompileError::Coincidence(format!(
                        "constraint {}: addition with a zero input requires the output to coincide with the other input",
                        cs.constraint_text(c)
                    )));
                }
                let w = cm.emit_add(px, py, pz).map_err(|e| {
                    CompileError::Coincidence(format!("constraint {}: {e}", cs.constraint_text(c)))
                })?;
                traces.push(GadgetTrace::Add {
                    constraint: i,
                    wiring: w,
                });
            }
            Constraint::Mul(x, y, z) => {
                let (px, py, pz) = (pt_of[x.0], pt_of[y.0], pt_of[z.0]);
                if px == one_pt || py == one_pt {
                    let other = if px == one_pt { py } else { px };
                    if pz == other {
                        continue; // 1 * y = y
                    }
                    return Err(CompileError::Coincidence(format!(
                        "constraint {}: multiplication by one requires the output to coincide with the other input",
                        cs.constraint_text(c)
                    )));
                }
                if px == zero_pt || py == zero_pt {
                    if pz == zero_pt {
                        continue; // 0 * y = 0
                    }
                    return Err(CompileError::Coincidence(format!(
                        "constraint {}: multiplication by zero requires a zero output",
                        cs.constraint_text(c)
                    )));
                }
                let w = cm.emit_mul(px, py, pz).map_err(|e| {
                    CompileError::Coincidence(format!("constraint {}: {e}", cs.constraint_text(c)))
                })?;
                traces.push(GadgetTrace::Mul {
                    constraint: i,
                    wiring: w,
                });
            }
            Constraint::Pos(x) => {
                let px = pt_of[x.0];
                if px == zero_pt {
                    return Err(CompileError::Coincidence(
                        "POS on the zero-aliased variable is unsatisfiable".into(),
                    ));
                }
                let w = cm.emit_pos(px)?;
                traces.push(GadgetTrace::Pos {
                    constraint: i,
                    wiring: w,
                });
            }
            Constraint::One(_) => unreachable!("consumed by the alias pass"),
        }
    }

    cm.check_invariants()?;
    let var_points = cs
        .vars
        .iter()
        .zip(&pt_of)
        .map(|(n, p)| (n.clone(), *p))
        .collect();
    Ok(CompileOutput {
        matroid: cm,
        var_points,
        traces,
    })
}

/// Closed-form size of a compiled system:
/// points = 3 + var_points + 4(adds+muls) + 10 pos,
/// lines  = 2 + 5(adds+muls) + 10 pos.
pub fn expected_counts(stats: &GadgetStats) -> (usize, usize) {
    let arith = stats.adds + stats.muls;
    (
        3 + stats.var_points + 4 * arith + 10 * stats.poses,
        2 + 5 * arith + 10 * stats.poses,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::parse_system_text;
    use crate::matroid::from_lines;

    #[test]
    fn frame_shape() {
        let cm = CompiledMatroid::init_frame();
        assert_eq!(cm.n_points(), 3);
        assert_eq!(cm.lines.len(), 2);
        assert_eq!(cm.lines[cm.ell.unwrap()], vec![0, 1, 2]);
        assert_eq!(cm.lines[cm.ell_inf], vec![2]);
        // frame alone is all-collinear: from_lines must reject it
        assert!(from_lines(&cm.to_line_set()).is_err());
    }

    #[test]
    fn add_gadget_counts() {
        let cs = parse_system_text("VAR x\nVAR y\nVAR z\nADD x y z\n").unwrap();
        let out = compile(&cs).unwrap();
        let (pts, lns) = expected_counts(&out.matroid.stats);
        assert_eq!(out.matroid.n_points(), pts);
        assert_eq!(out.matroid.lines.len(), lns);
        assert_eq!(out.matroid.n_points(), 3 + 3 + 4);
        assert_eq!(out.matroid.lines.len(), 2 + 5);
        let m = from_lines(&out.matroid.to_line_set()).unwrap();
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn mul_gadget_counts() {
        let cs = parse_system_text("VAR x\nVAR y\nVAR z\nMUL x y z\n").unwrap();
        let out = compile(&cs).unwrap();
        assert_eq!(out.matroid.n_points(), 3 + 3 + 4);
        assert_eq!(out.matroid.lines.len(), 2 + 5);
    }

    #[test]
    fn pos_gadget_counts() {
        let cs = parse_system_text("VAR x\nPOS x\n").unwrap();
        let out = compile(&cs).unwrap();
        // 2 on-line helpers + 8 off/infinity helpers, 10 lines
        assert_eq!(out.matroid.n_points(), 3 + 1 + 10);
        assert_eq!(out.matroid.lines.len(), 2 + 10);
        let m = from_lines(&out.matroid.to_line_set()).unwrap();
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn one_constraint_aliases_without_gadget() {
        let cs = parse_system_text("VAR u\nVAR v\nVAR w\nONE u\nADD u v w\n").unwrap();
        let out = compile(&cs).unwrap();
        assert_eq!(out.matroid.stats.aliased_vars, 1);
        assert_eq!(out.matroid.stats.var_points, 2);
        // u's point is the distinguished 1
        assert_eq!(out.var_points[0].1, out.matroid.one.unwrap());
        assert_eq!(out.matroid.stats.adds, 1);
    }

    #[test]
    fn zero_identity_aliases() {
        let cs = parse_system_text("VAR x\nVAR z\nADD x z x\n").unwrap();
        let out = compile(&cs).unwrap();
        assert_eq!(out.var_points[1].1, out.matroid.zero.unwrap());
        assert!(out.traces.is_empty());
    }

    #[test]
    fn coincidence_conflicts_are_reported() {
        // x * y = x forces y = 1: degenerate wiring
        let cs = parse_system_text("VAR x\nVAR y\nMUL x y x\n").unwrap();
        assert!(matches!(compile(&cs), Err(CompileError::Coincidence(_))));

        // 1 * y = z with z distinct from y
        let cs = parse_system_text("VAR o\nVAR y\nVAR z\nONE o\nMUL o y z\n").unwrap();
        assert!(matches!(compile(&cs), Err(CompileError::Coincidence(_))));

        // 1 * y = y is vacuous
        let cs = parse_system_text("VAR o\nVAR y\nONE o\nMUL o y y\n").unwrap();
        let out = compile(&cs).unwrap();
        assert!(out.traces.is_empty());

        // 0 + 0 = z with z not aliased to zero
        let cs = parse_system_text("VAR x\nVAR n\nVAR z\nADD x n x\nADD n n z\n").unwrap();
        assert!(matches!(compile(&cs), Err(CompileError::Coincidence(_))));
    }

    #[test]
    fn doubling_is_allowed() {
        let cs = parse_system_text("VAR x\nVAR y\nADD x x y\nMUL x x y\n").unwrap();
        let out = compile(&cs).unwrap();
        assert_eq!(out.traces.len(), 2);
        let m = from_lines(&out.matroid.to_line_set()).unwrap();
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn registry_invariants_after_chained_gadgets() {
        let text = "VAR a\nVAR b\nVAR c\nVAR d\nVAR e\nADD a b c\nMUL a b d\nADD c d e\nPOS a\n";
        let cs = parse_system_text(text).unwrap();
        let out = compile(&cs).unwrap();
        out.matroid.check_invariants().unwrap();
        let (pts, lns) = expected_counts(&out.matroid.stats);
        assert_eq!(out.matroid.n_points(), pts);
        assert_eq!(out.matroid.lines.len(), lns);
        let m = from_lines(&out.matroid.to_line_set()).unwrap();
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn ell_memberships_are_append_only() {
        let mut cm = CompiledMatroid::init_frame();
        let ell = cm.ell.unwrap();
        let before: Vec<PointId> = cm.lines[ell].clone();
        let px = cm.add_point("x", Role::Var("x".into()), Freedom::Fixed);
        cm.append_to_line(ell, px).unwrap();
        assert_eq!(&cm.lines[ell][..before.len()], &before[..]);
        assert_eq!(*cm.lines[ell].last().unwrap(), px);
    }
}
