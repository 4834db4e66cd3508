//! Explicit-bases matroids.
//!
//! A matroid is stored as its ground-set size, rank, and the full family of
//! bases in canonical form: each basis sorted ascending, the family sorted
//! lexicographically, no duplicates. Construction enforces the structural
//! invariants; basis exchange is checked separately by [`validate_axioms`] so
//! that deliberately broken families can still be built and fed to the
//! representation verifier.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("malformed matroid: {0}")]
    Malformed(String),
    #[error("element {0} out of range (n = {1})")]
    OutOfRange(usize, usize),
    #[error("degenerate line set: every 3-subset lies on a line (rank < 3)")]
    Degenerate,
    #[error("invalid line set: {0}")]
    BadLineSet(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
}

/// A matroid given by the exhaustive list of its bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matroid {
    pub n: usize,
    pub r: usize,
    pub bases: Vec<Vec<usize>>,
}

/// Outcome of the axiom check: either the family satisfies basis exchange or
/// a concrete witness of failure is returned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ValidationReport {
    Pass,
    ExchangeFailure {
        b1: Vec<usize>,
        b2: Vec<usize>,
        x: usize,
    },
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, ValidationReport::Pass)
    }
}

impl Matroid {
    /// Build a matroid from raw parts, canonicalizing and checking the
    /// structural invariants (well-formedness only, not basis exchange).
    pub fn new(n: usize, r: usize, bases: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        if bases.is_empty() {
            return Err(MatroidError::Malformed("empty bases family".into()));
        }
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(bases.len());
        for b in bases {
            let mut b = b;
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(MatroidError::Malformed(format!(
                    "repeated element in basis {b:?}"
                )));
            }
            if b.len() != r {
                return Err(MatroidError::Malformed(format!(
                    "basis {b:?} has size {}, expected rank {r}",
                    b.len()
                )));
            }
            if let Some(&e) = b.iter().find(|&&e| e >= n) {
                return Err(MatroidError::OutOfRange(e, n));
            }
            canon.push(b);
        }
        canon.sort();
        canon.dedup();
        Ok(Matroid { n, r, bases: canon })
    }

    pub fn uniform(r: usize, n: usize) -> Self {
        let bases = subsets_of_size(n, r);
        Matroid { n, r, bases }
    }

    fn basis_set(&self) -> BTreeSet<&[usize]> {
        self.bases.iter().map(|b| b.as_slice()).collect()
    }

    /// Max over all bases of `|s ∩ B|`.
    pub fn rank_of(&self, s: &[usize]) -> Result<usize, MatroidError> {
        let set = check_subset(s, self.n)?;
        Ok(self
            .bases
            .iter()
            .map(|b| b.iter().filter(|e| set.contains(e)).count())
            .max()
            .unwrap_or(0))
    }

    /// A set is independent iff its rank equals its size.
    pub fn is_independent(&self, s: &[usize]) -> Result<bool, MatroidError> {
        let set = check_subset(s, self.n)?;
        Ok(self.rank_of(s)? == set.len())
    }

    /// Pairwise basis-exchange check. Returns the first violating
    /// `(B1, B2, x)` in lexicographic scan order.
    pub fn validate_axioms(&self) -> ValidationReport {
        let set = self.basis_set();
        for b1 in &self.bases {
            for b2 in &self.bases {
                for &x in b1 {
                    if b2.contains(&x) {
                        continue;
                    }
                    let found = b2.iter().any(|&y| {
                        if b1.contains(&y) {
                            return false;
                        }
                        let mut cand: Vec<usize> =
                            b1.iter().copied().filter(|&e| e != x).collect();
                        cand.push(y);
                        cand.sort_unstable();
                        set.contains(cand.as_slice())
                    });
                    if !found {
                        return ValidationReport::ExchangeFailure {
                            b1: b1.clone(),
                            b2: b2.clone(),
                            x,
                        };
                    }
                }
            }
        }
        ValidationReport::Pass
    }

    /// All minimal dependent sets, by enumeration of subsets of size ≤ r+1.
    pub fn circuits(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 1..=(self.r + 1).min(self.n) {
            for s in SubsetIter::new(self.n, k) {
                if self.rank_of(&s).unwrap() == s.len() {
                    continue;
                }
                // minimal: every proper subset independent
                let minimal = (0..s.len()).all(|i| {
                    let mut t = s.clone();
                    t.remove(i);
                    self.rank_of(&t).unwrap() == t.len()
                });
                if minimal {
                    out.push(s);
                }
            }
        }
        out
    }
}

fn check_subset(s: &[usize], n: usize) -> Result<BTreeSet<usize>, MatroidError> {
    let mut set = BTreeSet::new();
    for &e in s {
        if e >= n {
            return Err(MatroidError::OutOfRange(e, n));
        }
        set.insert(e);
    }
    Ok(set)
}

/// A set of lines over a ground set: each line has at least three elements
/// and no two lines share two elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSet {
    pub n: usize,
    pub lines: Vec<Vec<usize>>,
}

impl LineSet {
    pub fn new(n: usize, lines: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        let mut canon = Vec::with_capacity(lines.len());
        for l in lines {
            let mut l = l;
            l.sort_unstable();
            if l.windows(2).any(|w| w[0] == w[1]) {
                return Err(MatroidError::BadLineSet(format!(
                    "repeated element in line {l:?}"
                )));
            }
            if l.len() < 3 {
                return Err(MatroidError::BadLineSet(format!(
                    "line {l:?} has fewer than 3 elements"
                )));
            }
            if let Some(&e) = l.iter().find(|&&e| e >= n) {
                return Err(MatroidError::OutOfRange(e, n));
            }
            canon.push(l);
        }
        canon.sort();
        for i in 0..canon.len() {
            for j in i + 1..canon.len() {
                let shared = intersection_size(&canon[i], &canon[j]);
                if shared >= 2 {
                    return Err(MatroidError::BadLineSet(format!(
                        "lines {:?} and {:?} share {} elements",
                        canon[i], canon[j], shared
                    )));
                }
            }
        }
        Ok(LineSet { n, lines: canon })
    }

    pub fn contains_triple(&self, t: &[usize; 3]) -> bool {
        self.lines
            .iter()
            .any(|l| t.iter().all(|e| l.binary_search(e).is_ok()))
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    // both sorted
    let mut i = 0;
    let mut j = 0;
    let mut c = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Rank-3 simple matroid whose dependent triples are exactly the collinear
/// ones. Errors out if no independent triple remains.
pub fn from_lines(ls: &LineSet) -> Result<Matroid, MatroidError> {
    if ls.n < 3 {
        return Err(MatroidError::Degenerate);
    }
    let mut bases = Vec::new();
    for s in SubsetIter::new(ls.n, 3) {
        let t = [s[0], s[1], s[2]];
        if !ls.contains_triple(&t) {
            bases.push(s);
        }
    }
    if bases.is_empty() {
        return Err(MatroidError::Degenerate);
    }
    Ok(Matroid {
        n: ls.n,
        r: 3,
        bases,
    })
}

/// Iterator over all k-subsets of {0..n-1} in lexicographic order.
pub struct SubsetIter {
    n: usize,
    k: usize,
    cur: Option<Vec<usize>>,
}

impl SubsetIter {
    pub fn new(n: usize, k: usize) -> Self {
        let cur = if k <= n {
            Some((0..k).collect())
        } else {
            None
        };
        SubsetIter { n, k, cur }
    }
}

impl Iterator for SubsetIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        // advance
        let k = self.k;
        if k == 0 {
            self.cur = None;
            return Some(out);
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if cur[i] != i + self.n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    SubsetIter::new(n, k).collect()
}

/// Either form a matroid file can carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidInput {
    Bases(Matroid),
    Lines(LineSet),
}

impl MatroidInput {
    pub fn into_matroid(self) -> Result<Matroid, MatroidError> {
        match self {
            MatroidInput::Bases(m) => Ok(m),
            MatroidInput::Lines(ls) => from_lines(&ls),
        }
    }
}

/// Parse the text format:
///
/// ```text
/// matroid n=<int> r=<int>
/// bases            # or: lines
/// 0 1 2
/// ...
/// ```
pub fn parse_matroid_text(text: &str) -> Result<MatroidInput, MatroidError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            None
        } else {
            Some((i + 1, t))
        }
    });
    let (ln, header) = lines
        .next()
        .ok_or_else(|| MatroidError::Malformed("empty input".into()))?;
    let mut n = None;
    let mut r = None;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("matroid") {
        return Err(MatroidError::Malformed(format!(
            "line {ln}: expected `matroid` header"
        )));
    }
    for t in toks {
        if let Some(v) = t.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|e| {
                MatroidError::Malformed(format!("line {ln}: bad n: {e}"))
            })?);
        } else if let Some(v) = t.strip_prefix("r=") {
            r = Some(v.parse::<usize>().map_err(|e| {
                MatroidError::Malformed(format!("line {ln}: bad r: {e}"))
            })?);
        } else {
            return Err(MatroidError::Malformed(format!(
                "line {ln}: unexpected token {t:?}"
            )));
        }
    }
    let n = n.ok_or_else(|| MatroidError::Malformed(format!("line {ln}: missing n=")))?;
    let (ln2, mode) = lines
        .next()
        .ok_or_else(|| MatroidError::Malformed("missing `bases` or `lines` section".into()))?;
    let mut sets = Vec::new();
    for (ln, l) in lines {
        let mut set = Vec::new();
        for t in l.split_whitespace() {
            set.push(t.parse::<usize>().map_err(|e| {
                MatroidError::Malformed(format!("line {ln}: bad index {t:?}: {e}"))
            })?);
        }
        sets.push(set);
    }
    match mode {
        "bases" => {
            let r = r.ok_or_else(|| {
                MatroidError::Malformed(format!("line {ln2}: bases form requires r="))
            })?;
            Ok(MatroidInput::Bases(Matroid::new(n, r, sets)?))
        }
        "lines" => Ok(MatroidInput::Lines(LineSet::new(n, sets)?)),
        other => Err(MatroidError::Malformed(format!(
            "line {ln2}: expected `bases` or `lines`, got {other:?}"
        ))),
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matroid n={} r={}", self.n, self.r)?;
        writeln!(f, "bases")?;
        for b in &self.bases {
            let toks: Vec<String> = b.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matroid n={} r=3", self.n)?;
        writeln!(f, "lines")?;
        for l in &self.lines {
            let toks: Vec<String> = l.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// The Fano matroid on elements 0..6, using the classical picture labels
/// 1..7 shifted down by one: the dependent triples are
/// {1,4,7},{1,2,3},{1,5,6},{3,6,7},{2,5,7},{3,4,5},{2,4,6}.
pub fn fano() -> Matroid {
    from_lines(&fano_lines()).unwrap()
}

pub fn fano_lines() -> LineSet {
    let raw: [[usize; 3]; 7] = [
        [1, 4, 7],
        [1, 2, 3],
        [1, 5, 6],
        [3, 6, 7],
        [2, 5, 7],
        [3, 4, 5],
        [2, 4, 6],
    ];
    let lines = raw
        .iter()
        .map(|l| l.iter().map(|e| e - 1).collect())
        .collect();
    LineSet::new(7, lines).unwrap()
}

/// Fano with the dependency {2,4,6} removed (elements 1,3,5 after the
/// shift); representable over the rationals.
pub fn non_fano() -> Matroid {
    let raw: [[usize; 3]; 6] = [
        [1, 4, 7],
        [1, 2, 3],
        [1, 5, 6],
        [3, 6, 7],
        [2, 5, 7],
        [3, 4, 5],
    ];
    let lines = raw
        .iter()
        .map(|l| l.iter().map(|e| e - 1).collect())
        .collect();
    from_lines(&LineSet::new(7, lines).unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u24_passes_axioms() {
        let m = Matroid::uniform(2, 4);
        assert_eq!(m.bases.len(), 6);
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn fano_passes_axioms_and_has_28_bases() {
        let m = fano();
        assert_eq!(m.bases.len(), 28);
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn parallel_pair_with_coloop_is_a_matroid() {
        // bases {{0,1},{0,2}}: elements 1 and 2 are parallel, 0 is a coloop.
        // Exchange only quantifies over x in B1 \ B2, so this family passes.
        let m = Matroid::new(3, 2, vec![vec![0, 1], vec![2, 0]]).unwrap();
        assert!(m.validate_axioms().is_pass());
    }

    #[test]
    fn disjoint_bases_fail_exchange_with_witness() {
        let m = Matroid::new(4, 2, vec![vec![0, 1], vec![2, 3]]).unwrap();
        match m.validate_axioms() {
            ValidationReport::ExchangeFailure { b1, b2, x } => {
                assert_eq!(b1, vec![0, 1]);
                assert_eq!(b2, vec![2, 3]);
                assert_eq!(x, 0);
            }
            ValidationReport::Pass => panic!("expected exchange failure"),
        }
    }

    #[test]
    fn malformed_is_distinct_from_axiom_failure() {
        assert!(matches!(
            Matroid::new(3, 2, vec![vec![0, 5]]),
            Err(MatroidError::OutOfRange(5, 3))
        ));
        assert!(matches!(
            Matroid::new(3, 2, vec![vec![0, 1, 2]]),
            Err(MatroidError::Malformed(_))
        ));
        assert!(matches!(
            Matroid::new(3, 2, vec![]),
            Err(MatroidError::Malformed(_))
        ));
    }

    #[test]
    fn fano_independence_and_rank() {
        let m = fano();
        // picture labels 1,2,3 are elements 0,1,2
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert_eq!(m.rank_of(&[0, 1, 2]).unwrap(), 2);
        assert!(m.is_independent(&[0, 1, 3]).unwrap());
        assert!(m.is_independent(&[]).unwrap());
        assert_eq!(m.rank_of(&[]).unwrap(), 0);
        assert_eq!(m.rank_of(&(0..7).collect::<Vec<_>>()).unwrap(), 3);
        assert!(matches!(
            m.rank_of(&[9]),
            Err(MatroidError::OutOfRange(9, 7))
        ));
    }

    #[test]
    fn from_lines_small_cases() {
        let free = from_lines(&LineSet::new(3, vec![]).unwrap()).unwrap();
        assert_eq!(free.bases, vec![vec![0, 1, 2]]);

        let one_line = from_lines(&LineSet::new(4, vec![vec![0, 1, 2]]).unwrap()).unwrap();
        let mut expect = subsets_of_size(4, 3);
        expect.retain(|s| s != &vec![0, 1, 2]);
        assert_eq!(one_line.bases, expect);

        // all points on one line: degenerate, not silently rank-2
        let degenerate = LineSet::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(from_lines(&degenerate), Err(MatroidError::Degenerate)));
    }

    #[test]
    fn line_set_invariants_enforced() {
        assert!(LineSet::new(5, vec![vec![0, 1]]).is_err());
        assert!(LineSet::new(5, vec![vec![0, 1, 2], vec![0, 1, 3]]).is_err());
        assert!(LineSet::new(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).is_ok());
    }

    #[test]
    fn circuits_of_standard_examples() {
        let u24 = Matroid::uniform(2, 4);
        assert_eq!(u24.circuits(), subsets_of_size(4, 3));

        let u33 = Matroid::uniform(3, 3);
        assert!(u33.circuits().is_empty());

        let f = fano();
        let circuits = f.circuits();
        // seven dependent triples plus seven line-complement quadrilaterals
        assert_eq!(circuits.len(), 14);
        let triples: Vec<_> = circuits.iter().filter(|c| c.len() == 3).collect();
        assert_eq!(triples.len(), 7);
        for l in &fano_lines().lines {
            assert!(triples.iter().any(|t| t.as_slice() == l.as_slice()));
        }
    }

    #[test]
    fn text_round_trip() {
        let m = fano();
        let text = m.to_string();
        let back = parse_matroid_text(&text).unwrap().into_matroid().unwrap();
        assert_eq!(m, back);

        let ls = fano_lines();
        let back = parse_matroid_text(&ls.to_string()).unwrap();
        match back {
            MatroidInput::Lines(l2) => assert_eq!(ls, l2),
            _ => panic!("expected lines form"),
        }
    }
}
