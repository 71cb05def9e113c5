use serde::{Deserialize, Serialize};

use super::TruthValue;
use crate::error::{Error, Result};
use crate::fields::{GaussianRational, Rational};
use crate::linalg::{inner_product, Frame, GVector};

/// A ray with its value and, for FALSE, the suitable frame that makes it so.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredRay {
    pub ray: GVector,
    pub value: TruthValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Frame>,
}

impl ColoredRay {
    /// Checks the FALSE-needs-witness invariant against the coloring rules.
    pub fn is_consistent(&self) -> bool {
        match (self.value, &self.witness) {
            (TruthValue::True, _) => classify_ray(&self.ray) == TruthValue::True,
            (TruthValue::False, Some(w)) => {
                w.legs().contains(&self.ray)
                    && is_suitable(w)
                    && classify_ray(&self.ray) != TruthValue::True
            }
            (TruthValue::False, None) => false,
            (TruthValue::Undetermined, _) => classify_ray(&self.ray) != TruthValue::True,
        }
    }
}

fn is_true_coords(coords: &[Rational]) -> bool {
    let Some((first, rest)) = coords.split_first() else {
        return false;
    };
    matches!(first.v3(), Some(k) if k <= -1)
        && rest.iter().all(|r| matches!(r.v3(), Some(k) if k >= 0))
}

/// Judges the representative it is handed: TRUE iff every real coordinate
/// is nonzero, `v3(r1) <= -1` and `v3(ri) >= 0` for `i >= 2`. Falseness
/// needs a frame, so everything else comes back UNDETERMINED.
pub fn classify_ray(v: &GVector) -> TruthValue {
    if is_true_coords(&v.coords()) {
        TruthValue::True
    } else {
        TruthValue::Undetermined
    }
}

/// Searches the rescalings `±3^k` and `±i·3^k`, `k` in `[-8, 8]`, for a
/// representative of the same ray that classifies TRUE.
pub fn certifying_representative(v: &GVector) -> Option<GVector> {
    (-8..=8).find_map(|k| {
        let s = GaussianRational::real(Rational::pow3(k));
        [s.clone(), s.mul_i()]
            .into_iter()
            .filter_map(|u| v.scale(&u).ok())
            .find(|w| classify_ray(w) == TruthValue::True)
    })
}

/// Values of the legs of a frame: one TRUE leg makes the frame suitable and
/// every other leg FALSE; otherwise every leg is UNDETERMINED.
pub fn classify_in_frame(frame: &Frame) -> Vec<TruthValue> {
    let raw: Vec<TruthValue> = frame.legs().iter().map(classify_ray).collect();
    if !raw.contains(&TruthValue::True) {
        return raw;
    }
    debug_assert_eq!(
        raw.iter().filter(|&&t| t == TruthValue::True).count(),
        1,
        "two orthogonal TRUE rays"
    );
    raw.into_iter()
        .map(|t| {
            if t == TruthValue::True {
                t
            } else {
                TruthValue::False
            }
        })
        .collect()
}

/// [`classify_in_frame`] with each FALSE leg carrying the frame as witness.
pub fn colored_frame(frame: &Frame) -> Vec<ColoredRay> {
    classify_in_frame(frame)
        .into_iter()
        .zip(frame.legs())
        .map(|(value, ray)| ColoredRay {
            ray: ray.clone(),
            value,
            witness: (value == TruthValue::False).then(|| frame.clone()),
        })
        .collect()
}

pub fn is_suitable(frame: &Frame) -> bool {
    frame
        .legs()
        .iter()
        .any(|l| classify_ray(l) == TruthValue::True)
}

/// `sum_i p(P_i)` over the legs of a suitable frame. Always 1.
pub fn verify_eq1(frame: &Frame) -> Result<u32> {
    classify_in_frame(frame)
        .into_iter()
        .map(TruthValue::p)
        .sum::<Option<u32>>()
        .ok_or_else(|| {
            Error::NotApplicable("frame is not suitable; p is undefined on its legs".into())
        })
}

/// For two TRUE rays, the real part of their inner product and its 3-adic
/// valuation. The `r1·r1'` term has valuation at most -2 and every other
/// term at least 0, so the valuation is at most -2 and the rays cannot be
/// orthogonal.
pub fn lemma1_certificate(u: &GVector, v: &GVector) -> Result<(Rational, i64)> {
    if classify_ray(u) != TruthValue::True || classify_ray(v) != TruthValue::True {
        return Err(Error::invalid("both rays must classify TRUE"));
    }
    let re = inner_product(u, v)?.re;
    let k = re.v3().expect("valuation gap rules out a zero real part");
    Ok((re, k))
}
