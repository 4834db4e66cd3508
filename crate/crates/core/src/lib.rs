//! Exact-arithmetic matroid toolkit.
//!
//! The crate is organized around a small set of pipelines that all share the
//! same exact rational core:
//!
//! * [`matroid`] — explicit-bases matroids, axiom validation, rank queries,
//!   and construction from rank-3 line sets.
//! * [`linalg`] — arbitrary-precision rational matrices, fraction-free rank,
//!   projective point configurations, and vector matroids.
//! * [`verify`] — the polynomial-time check that a rational matrix represents
//!   a given explicit-bases matroid, plus a brute-force oracle.
//! * [`constraints`] — the ADD/MUL/ONE/POS constraint language, its parser
//!   and checker, and number-construction chains.
//! * [`normalize`] — compiler passes from polynomial systems down to
//!   constraint systems with a distinctness promise.
//! * [`compiler`] — von Staudt gadget compilation of constraint systems into
//!   rank-3 matroid line registries.
//! * [`realize`] — exact construction of point configurations witnessing a
//!   compiled matroid, value read-back, and projective transforms.
//! * [`ordertype`] — chirotopes and their simulation by rank-3 matroids.
//!
//! Everything on the verification paths is exact: collinearity and rank are
//! equality predicates over the rationals and are never decided in floating
//! point.

pub mod cli;
pub mod compiler;
pub mod constraints;
pub mod formula;
pub mod foursq;
pub mod linalg;
pub mod matroid;
pub mod normalize;
pub mod ordertype;
pub mod poly;
pub mod rational;
pub mod realize;
pub mod scalar;
pub mod verify;

pub use rational::Rational;
