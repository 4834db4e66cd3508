//! Exact rational matrices, fraction-free rank, projective points, and
//! vector matroids.

use crate::matroid::{Matroid, MatroidError, SubsetIter};
use crate::rational::{canonical_homogeneous, rat_from_str, rat_to_string, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("column {0} out of range (cols = {1})")]
    ColumnOutOfRange(usize, usize),
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("matrix has {actual} columns, matroid has {expected} elements")]
    DimensionMismatch { expected: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Rational>, // row-major
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinalgError::Malformed("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
            .collect();
        Self::from_rows(data).unwrap()
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Exact column rank by fraction-free (Bareiss) elimination on the
    /// denominator-cleared integer matrix. Row scaling by the positive lcm of
    /// denominators does not change rank.
    pub fn rank(&self) -> usize {
        let ints = self.cleared_rows(None);
        bareiss_rank(ints, self.cols)
    }

    /// Rank of the submatrix formed by the selected columns.
    pub fn submatrix_rank(&self, cols: &[usize]) -> Result<usize, LinalgError> {
        for &c in cols {
            if c >= self.cols {
                return Err(LinalgError::ColumnOutOfRange(c, self.cols));
            }
        }
        let ints = self.cleared_rows(Some(cols));
        Ok(bareiss_rank(ints, cols.len()))
    }

    fn cleared_rows(&self, cols: Option<&[usize]>) -> Vec<Vec<BigInt>> {
        use num_integer::Integer;
        (0..self.rows)
            .map(|r| {
                let picked: Vec<&Rational> = match cols {
                    Some(cs) => cs.iter().map(|&c| self.at(r, c)).collect(),
                    None => (0..self.cols).map(|c| self.at(r, c)).collect(),
                };
                let lcm = picked
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                picked
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect()
    }
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        // find pivot in this column at or below `row`
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let t = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                m[i][j] = &t / &prev; // exact by Bareiss
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

/// Exact determinant of the 3x3 matrix with the given columns.
pub fn det3(p: &[Rational; 3], q: &[Rational; 3], r: &[Rational; 3]) -> Rational {
    &p[0] * (&q[1] * &r[2] - &q[2] * &r[1]) - &q[0] * (&p[1] * &r[2] - &p[2] * &r[1])
        + &r[0] * (&p[1] * &q[2] - &p[2] * &q[1])
}

/// The vector matroid M[A]: bases are the full-rank column subsets of size
/// rank(A). Guarded to desk scale.
pub fn matroid_from_matrix(a: &RationalMatrix) -> Result<Matroid, LinalgError> {
    if a.cols > 20 {
        return Err(LinalgError::SizeGuard(format!(
            "matroid_from_matrix limited to 20 columns, got {}",
            a.cols
        )));
    }
    let r = a.rank();
    let mut bases = Vec::new();
    for s in SubsetIter::new(a.cols, r) {
        if a.submatrix_rank(&s)? == r {
            bases.push(s);
        }
    }
    Ok(Matroid {
        n: a.cols,
        r,
        bases,
    })
}

/// A labeled list of homogeneous rational triples. Points with z = 0 are at
/// infinity and are first-class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    pub points: Vec<[Rational; 3]>,
}

impl PointConfig {
    pub fn new(points: Vec<[Rational; 3]>) -> Result<Self, LinalgError> {
        for (i, p) in points.iter().enumerate() {
            if p.iter().all(|x| x.is_zero()) {
                return Err(LinalgError::Malformed(format!("point {i} is the zero vector")));
            }
        }
        Ok(PointConfig { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when no two points are proportional (simple configurations).
    pub fn pairwise_distinct(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.points {
            if !seen.insert(canonical_homogeneous(p)) {
                return false;
            }
        }
        true
    }

    /// Points as the columns of a 3xN matrix.
    pub fn as_matrix(&self) -> RationalMatrix {
        let mut entries = Vec::with_capacity(3 * self.points.len());
        for row in 0..3 {
            for p in &self.points {
                entries.push(p[row].clone());
            }
        }
        RationalMatrix::new(3, self.points.len(), entries).unwrap()
    }
}

impl fmt::Display for PointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points {}", self.points.len())?;
        for p in &self.points {
            writeln!(
                f,
                "{} {} {}",
                rat_to_string(&p[0]),
                rat_to_string(&p[1]),
                rat_to_string(&p[2])
            )?;
        }
        Ok(())
    }
}

/// Parse the matrix text format: `matrix <rows> <cols>` then one row per
/// line, entries `p/q` or integers.
pub fn parse_matrix_text(text: &str) -> Result<RationalMatrix, LinalgError> {
    let mut lines = nonempty_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| LinalgError::Malformed("empty input".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "matrix" {
        return Err(LinalgError::Malformed(format!(
            "line {ln}: expected `matrix <rows> <cols>`"
        )));
    }
    let rows: usize = toks[1]
        .parse()
        .map_err(|e| LinalgError::Malformed(format!("line {ln}: bad rows: {e}")))?;
    let cols: usize = toks[2]
        .parse()
        .map_err(|e| LinalgError::Malformed(format!("line {ln}: bad cols: {e}")))?;
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| LinalgError::Malformed("missing matrix row".into()))?;
        let row: Result<Vec<Rational>, LinalgError> = l
            .split_whitespace()
            .map(|t| rat_from_str(t).map_err(|e| LinalgError::Malformed(format!("line {ln}: {e}"))))
            .collect();
        let row = row?;
        if row.len() != cols {
            return Err(LinalgError::Malformed(format!(
                "line {ln}: expected {cols} entries, got {}",
                row.len()
            )));
        }
        entries.extend(row);
    }
    RationalMatrix::new(rows, cols, entries)
}

/// Parse the points text format: `points <n>` then one homogeneous triple
/// per line.
pub fn parse_points_text(text: &str) -> Result<PointConfig, LinalgError> {
    let mut lines = nonempty_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| LinalgError::Malformed("empty input".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "points" {
        return Err(LinalgError::Malformed(format!(
            "line {ln}: expected `points <n>`"
        )));
    }
    let n: usize = toks[1]
        .parse()
        .map_err(|e| LinalgError::Malformed(format!("line {ln}: bad count: {e}")))?;
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| LinalgError::Malformed("missing point line".into()))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(LinalgError::Malformed(format!(
                "line {ln}: expected 3 coordinates"
            )));
        }
        let mut p = Vec::with_capacity(3);
        for t in toks {
            p.push(
                rat_from_str(t)
                    .map_err(|e| LinalgError::Malformed(format!("line {ln}: {e}")))?,
            );
        }
        points.push([p[0].clone(), p[1].clone(), p[2].clone()]);
    }
    PointConfig::new(points)
}

fn nonempty_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            None
        } else {
            Some((i + 1, t))
        }
    })
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let toks: Vec<String> = (0..self.cols).map(|c| rat_to_string(self.at(r, c))).collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_int_rows(rows)
    }

    #[test]
    fn rank_basics() {
        assert_eq!(m(&[&[1, 0, 1], &[0, 1, 1]]).rank(), 2);
        assert_eq!(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).rank(), 3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
    }

    #[test]
    fn rank_handles_rational_entries() {
        let a = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(3, 2), rat_int(1)],
        ])
        .unwrap();
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn submatrix_rank_basics() {
        let id3 = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id3.submatrix_rank(&[0, 1]).unwrap(), 2);
        assert_eq!(id3.submatrix_rank(&[]).unwrap(), 0);
        assert!(id3.submatrix_rank(&[3]).is_err());
    }

    #[test]
    fn det3_examples() {
        let p = [rat_int(0), rat_int(0), rat_int(1)];
        let q = [rat_int(1), rat_int(0), rat_int(1)];
        let r = [rat_int(2), rat_int(0), rat_int(1)];
        assert!(det3(&p, &q, &r).is_zero());

        let s = [rat_int(0), rat_int(1), rat_int(1)];
        assert_eq!(det3(&p, &q, &s), rat_int(1));
        assert_eq!(det3(&q, &p, &s), rat_int(-1));
    }

    #[test]
    fn det3_zero_iff_rank_deficient() {
        let cols = [
            [rat_int(1), rat_int(2), rat_int(1)],
            [rat_int(2), rat_int(4), rat_int(2)],
            [rat_int(0), rat_int(1), rat_int(5)],
        ];
        let a = RationalMatrix::from_rows(vec![
            vec![cols[0][0].clone(), cols[1][0].clone(), cols[2][0].clone()],
            vec![cols[0][1].clone(), cols[1][1].clone(), cols[2][1].clone()],
            vec![cols[0][2].clone(), cols[1][2].clone(), cols[2][2].clone()],
        ])
        .unwrap();
        let d = det3(&cols[0], &cols[1], &cols[2]);
        assert_eq!(d.is_zero(), a.submatrix_rank(&[0, 1, 2]).unwrap() <= 2);
    }

    #[test]
    fn vector_matroid_u34() {
        let a = m(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]]);
        let mat = matroid_from_matrix(&a).unwrap();
        assert_eq!(mat, Matroid::uniform(3, 4));
    }

    #[test]
    fn vector_matroid_zero_column() {
        let a = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let mat = matroid_from_matrix(&a).unwrap();
        assert_eq!(mat.r, 2);
        assert!(mat.bases.iter().all(|b| !b.contains(&2)));
    }

    #[test]
    fn vector_matroid_identity() {
        let a = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(matroid_from_matrix(&a).unwrap(), Matroid::uniform(2, 2));
    }

    #[test]
    fn matrix_text_round_trip() {
        let a = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat_int(3)],
            vec![rat_int(-1), rat(7, 5)],
        ])
        .unwrap();
        let back = parse_matrix_text(&a.to_string()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn points_text_round_trip() {
        let pc = PointConfig::new(vec![
            [rat_int(0), rat_int(0), rat_int(1)],
            [rat(1, 2), rat_int(0), rat_int(1)],
            [rat_int(1), rat_int(0), rat_int(0)],
        ])
        .unwrap();
        let back = parse_points_text(&pc.to_string()).unwrap();
        assert_eq!(pc, back);
        assert!(pc.pairwise_distinct());
    }
}
