//! Exact-arithmetic truth-value colorings of quantum measurements.
//!
//! Values 0/1 are assigned to rays, projection matrices and positive
//! operators so that every *suitable* decomposition of the identity contains
//! exactly one element of value 1. Nearby suitable decompositions can be
//! built for any target to any precision, and the classic Kochen–Specker
//! coloring problem is solved for exact ray sets.
//!
//! All arithmetic is exact, over Gaussian rationals and Q(√2).
#![allow(clippy::needless_range_loop)]

pub mod coloring;
pub mod density;
pub mod error;
pub mod fields;
pub mod gen;
pub mod io;
pub mod kscheck;
pub mod linalg;
pub mod povm;

pub use coloring::{ColoredRay, ProjectionRep, TruthValue};
pub use density::ApproxResult;
pub use error::{Error, Result};
pub use fields::{GaussianRational, QuadComplex, QuadRational, Rational};
pub use kscheck::{Coloring, OrthGraph, RaySet};
pub use linalg::{Frame, GMatrix, GVector, QuadHermitian};
pub use povm::{PovmDecomposition, PovmElement, PovmVerdict};
