//! Exact linear algebra over the Gaussian rationals and over Q(√2) + iQ(√2).
//!
//! Rays are never normalized: the normalization constant of a rational
//! vector is generally irrational, and every quantity used downstream
//! (orthogonality, projectors, distances) can be expressed without it.

mod frame;
mod hermitian;
mod matrix;
mod vector;

pub use frame::Frame;
pub use hermitian::{psd_check, QuadHermitian};
pub use matrix::{cayley_unitary, frob_dist2, projector_of, ray_dist2, GMatrix};
pub use vector::{gram_schmidt, inner_product, GVector};
