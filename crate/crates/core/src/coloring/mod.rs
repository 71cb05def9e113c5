//! The truth function on projections.
//!
//! A ray is TRUE when its first real coordinate has a lowest-terms
//! denominator divisible by 3, no other coordinate does, and no coordinate
//! is zero. An orthogonal frame containing a TRUE leg is *suitable*; its
//! remaining legs are FALSE. Anything else stays UNDETERMINED: the truth
//! function is deliberately partial.

mod projection;
mod ray;

use serde::{Deserialize, Serialize};

pub use projection::{classify_decomposition, classify_projection_matrix, ProjectionRep};
pub use ray::{
    certifying_representative, classify_in_frame, classify_ray, colored_frame, is_suitable,
    lemma1_certificate, verify_eq1, ColoredRay,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TruthValue {
    True,
    False,
    Undetermined,
}

impl TruthValue {
    /// The value of the truth function `p`, where it is defined.
    pub fn p(self) -> Option<u32> {
        match self {
            TruthValue::True => Some(1),
            TruthValue::False => Some(0),
            TruthValue::Undetermined => None,
        }
    }
}

impl std::fmt::Display for TruthValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TruthValue::True => "TRUE",
            TruthValue::False => "FALSE",
            TruthValue::Undetermined => "UNDETERMINED",
        })
    }
}
