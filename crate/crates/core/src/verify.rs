//! Representation verification: decide whether a rational matrix represents
//! an explicit-bases matroid.
//!
//! The verifier never trusts its matroid input to satisfy the axioms. It
//! runs three steps: a global rank comparison, a full-rank check for every
//! stated basis, and a scan over all exchange triples (B, x, y) looking for
//! an independent column set one swap away from a stated basis. The triple
//! scan is complete because a strict containment of basis families always
//! leaves a witness at symmetric difference two.

use crate::linalg::{matroid_from_matrix, LinalgError, RationalMatrix};
use crate::matroid::Matroid;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VerificationOutcome {
    Represents,
    RankMismatch {
        matroid_rank: usize,
        matrix_rank: usize,
    },
    MissingBasis {
        basis: Vec<usize>,
    },
    ExtraBasis {
        basis: Vec<usize>,
        x: usize,
        y: usize,
    },
}

impl VerificationOutcome {
    pub fn represents(&self) -> bool {
        matches!(self, VerificationOutcome::Represents)
    }
}

/// The check runs in time polynomial in |bases|, n and r. Scan order is
/// deterministic: bases in stored order, x ascending within the basis, y
/// ascending over the complement; the first witness is returned.
pub fn verify_representation(
    m: &Matroid,
    a: &RationalMatrix,
) -> Result<VerificationOutcome, LinalgError> {
    if a.cols != m.n {
        return Err(LinalgError::DimensionMismatch {
            expected: m.n,
            actual: a.cols,
        });
    }
    let matrix_rank = a.rank();
    if matrix_rank != m.r {
        return Ok(VerificationOutcome::RankMismatch {
            matroid_rank: m.r,
            matrix_rank,
        });
    }
    for b in &m.bases {
        if a.submatrix_rank(b)? < m.r {
            return Ok(VerificationOutcome::MissingBasis { basis: b.clone() });
        }
    }
    let basis_set: BTreeSet<&[usize]> = m.bases.iter().map(|b| b.as_slice()).collect();
    for b in &m.bases {
        for &x in b {
            for y in 0..m.n {
                if b.contains(&y) {
                    continue;
                }
                let mut cand: Vec<usize> = b.iter().copied().filter(|&e| e != x).collect();
                cand.push(y);
                cand.sort_unstable();
                if basis_set.contains(cand.as_slice()) {
                    continue;
                }
                if a.submatrix_rank(&cand)? == m.r {
                    return Ok(VerificationOutcome::ExtraBasis {
                        basis: b.clone(),
                        x,
                        y,
                    });
                }
            }
        }
    }
    Ok(VerificationOutcome::Represents)
}

/// Brute-force oracle: enumerate M[A] outright and compare basis families.
/// Guarded to small ground sets; used to cross-check the verifier.
pub fn brute_force_equal(m: &Matroid, a: &RationalMatrix) -> Result<bool, LinalgError> {
    if m.n > 10 || a.cols > 10 {
        return Err(LinalgError::SizeGuard(format!(
            "brute_force_equal limited to 10 elements, got {}",
            m.n.max(a.cols)
        )));
    }
    if a.cols != m.n {
        return Err(LinalgError::DimensionMismatch {
            expected: m.n,
            actual: a.cols,
        });
    }
    let ma = matroid_from_matrix(a)?;
    Ok(ma.r == m.r && ma.bases == m.bases)
}
