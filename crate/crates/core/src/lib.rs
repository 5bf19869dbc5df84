//! Exact-arithmetic Chow rings of loopless matroids.
//!
//! The crate builds the Chow ring and the augmented Chow ring of a
//! matroid as graded rational algebras with explicit monomial bases, the
//! Bergman and augmented Bergman fans with their structural certificates,
//! the graded ring maps relating the Chow rings of a matroid and its
//! minors, and machine checks for the semi-small decompositions and the
//! Kähler package (Poincaré duality, hard Lefschetz, Hodge–Riemann) on
//! concrete matroids. All arithmetic is exact over the rationals.

pub mod chow;
pub mod decomp;
pub mod fan;
pub mod kahler;
pub mod linalg;
pub mod maps;
pub mod matroid;

pub use linalg::{Mat, Rat};
pub use matroid::{ElementId, Flat, FlatsLattice, Mask, Matroid, MatroidError};
