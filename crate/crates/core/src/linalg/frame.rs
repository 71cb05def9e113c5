use serde::{Deserialize, Deserializer, Serialize};

use super::{inner_product, GVector};
use crate::error::{Error, Result};

/// An exactly orthogonal n-tuple of nonzero rays in C^n, i.e. a complete
/// projective decomposition of the identity into rank-1 projections.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Frame {
    legs: Vec<GVector>,
}

impl Frame {
    pub fn new(legs: Vec<GVector>) -> Result<Self> {
        let n = legs.len();
        if n < 2 {
            return Err(Error::invalid("a frame needs at least two legs"));
        }
        if let Some(bad) = legs.iter().find(|v| v.dim() != n) {
            return Err(Error::invalid(format!(
                "leg of length {} in a frame of {n} legs",
                bad.dim()
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if !inner_product(&legs[i], &legs[j])?.is_zero() {
                    return Err(Error::invalid(format!(
                        "legs {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(Frame { legs })
    }

    pub fn legs(&self) -> &[GVector] {
        &self.legs
    }

    pub fn dim(&self) -> usize {
        self.legs.len()
    }

    pub fn into_legs(self) -> Vec<GVector> {
        self.legs
    }

    /// Position of a leg spanning the same ray as `v`, if any.
    pub fn position_of(&self, v: &GVector) -> Option<usize> {
        self.legs.iter().position(|l| l.same_ray(v))
    }

    /// The same frame with its legs reordered; `order[k]` names the old
    /// index of new leg k.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim()];
        if order.len() != self.dim()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::invalid("not a permutation"));
        }
        Ok(Frame {
            legs: order.iter().map(|&i| self.legs[i].clone()).collect(),
        })
    }
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.legs).finish()
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let legs = Vec::<GVector>::deserialize(d)?;
        Frame::new(legs).map_err(serde::de::Error::custom)
    }
}
