//! Exact scalar fields: lowest-terms rationals, Gaussian rationals, the
//! quadratic field Q(√2) and its complexification.

mod gaussian;
mod quad;
mod rational;

pub use gaussian::GaussianRational;
pub use quad::{QuadComplex, QuadRational};
pub use rational::{
    adjust_denominator, denominator_candidate, rationalize, rationalize_exact, reduce, Rational,
};

/// Implements the four owned/borrowed combinations of a binary operator in
/// terms of the `&T op &T` implementation.
macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                std::ops::$tr::$m(&self, rhs)
            }
        }
        impl std::ops::$tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(self, &rhs)
            }
        }
    };
}
pub(crate) use forward_binop;
