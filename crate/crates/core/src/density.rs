//! Constructive density: nearby TRUE rays, suitable frames and FALSE rays.
//!
//! Every construction works on exact data. Machine-real targets are first
//! converted to their exact dyadic values, and all distances are squared
//! Frobenius distances between normalized projectors, compared exactly
//! against `eps^2`. Approximation runs in rounds: round `r` rationalizes
//! coordinates to within `eta_r = eta_0 / 2^r`, for at most [`MAX_ROUNDS`]
//! rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coloring::{classify_in_frame, classify_ray, is_suitable, TruthValue};
use crate::error::{Error, Result};
use crate::fields::{adjust_denominator, rationalize_exact, GaussianRational, Rational};
use crate::linalg::{inner_product, Frame, GVector};

pub use crate::linalg::ray_dist2;

pub const MAX_ROUNDS: u32 = 40;

/// Largest squared normalized overlap tolerated between distinct target legs.
const ORTHO_TOL: f64 = 1e-6;

/// An exactly verified approximant with its distance to the target and its
/// classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxResult<T> {
    pub object: T,
    /// Squared distance to the target; for frames the maximum over legs.
    pub achieved_dist2: Rational,
    /// One value for a ray, one per leg for a frame.
    pub certificate: Vec<TruthValue>,
    /// Suitable frame containing the ray, for FALSE rays.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Frame>,
}

fn check_eps(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::invalid("epsilon must be positive"))
    }
}

fn eps_from_f64(eps: f64) -> Result<Rational> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::invalid(format!(
            "epsilon must be a positive finite real, got {eps}"
        )));
    }
    Rational::from_f64_exact(eps)
}

pub(crate) fn vector_from_f64(coords: &[f64]) -> Result<GVector> {
    let exact = coords
        .iter()
        .map(|&x| Rational::from_f64_exact(x))
        .collect::<Result<Vec<_>>>()?;
    GVector::from_coords(&exact)
}

/// Grid denominator for round 0: coordinate errors of `1/D` move the
/// projector of a vector with max-norm near 1 by well under `eps/2`.
fn base_denominator(eps: &Rational, dim: usize) -> BigInt {
    (Rational::from(16 * dim as i64) / eps).ceil_int()
}

/// A power of two bringing the largest coordinate magnitude into (1/2, 2).
fn pow2_normalizer(coords: &[Rational]) -> Rational {
    let biggest = coords.iter().map(Rational::abs).max().expect("nonempty");
    let e = biggest.numer().bits() as i64 - biggest.denom().bits() as i64;
    let p = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p.recip().expect("nonzero")
    } else {
        p
    }
}

fn scaled_coords(v: &GVector) -> Vec<Rational> {
    let coords = v.coords();
    let k = pow2_normalizer(&coords);
    coords.iter().map(|c| c * &k).collect()
}

/// Plain rationalization of every coordinate to denominators at most `den`.
fn rationalized(v: &GVector, den: &BigInt) -> Result<GVector> {
    let coords = scaled_coords(v)
        .iter()
        .map(|c| rationalize_exact(c, den))
        .collect::<Result<Vec<_>>>()?;
    GVector::from_coords(&coords)
}

/// A TRUE vector within a few grid steps of `v` in every coordinate.
///
/// Each coordinate is rationalized, zeros are displaced to `±1/den`, then
/// the first coordinate is pushed onto a denominator divisible by 3 and the
/// rest off one.
fn true_candidate(v: &GVector, den: &BigInt) -> Result<GVector> {
    let eta = Rational::new(1, den.clone())?;
    let coords = scaled_coords(v)
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = rationalize_exact(c, den)?;
            if r.is_zero() {
                r = if c.is_negative() { -&eta } else { eta.clone() };
            }
            adjust_denominator(&r, i == 0, &eta)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = GVector::from_coords(&coords)?;
    debug_assert_eq!(classify_ray(&out), TruthValue::True);
    Ok(out)
}

type GaussInt = (BigInt, BigInt);

fn gauss_ints(v: &GVector) -> Vec<GaussInt> {
    v.primitive()
        .entries()
        .iter()
        .map(|z| (z.re.numer().clone(), z.im.numer().clone()))
        .collect()
}

/// `w <- <l,l>·w - <l,w>·l`, then divided by the gcd of all its parts.
fn project_out(w: &mut [GaussInt], l: &[GaussInt]) {
    let norm: BigInt = l.iter().map(|(a, b)| a * a + b * b).sum();
    let (mut ip_re, mut ip_im) = (BigInt::zero(), BigInt::zero());
    for ((a, b), (c, d)) in l.iter().zip(w.iter()) {
        ip_re += a * c + b * d;
        ip_im += a * d - b * c;
    }
    let mut content = BigInt::zero();
    for ((c, d), (a, b)) in w.iter_mut().zip(l) {
        *c = &norm * &*c - (&ip_re * a - &ip_im * b);
        *d = &norm * &*d - (&ip_re * b + &ip_im * a);
        content = content.gcd(c).gcd(d);
    }
    if !content.is_zero() && !content.is_one() {
        for (c, d) in w.iter_mut() {
            *c /= &content;
            *d /= &content;
        }
    }
}

/// Gram–Schmidt of `prefix` followed by standard basis vectors, skipping
/// any that are already in the span, until the frame is complete. Leg 1 is
/// kept as given; later legs are primitive Gaussian-integer vectors.
fn complete_frame(prefix: &[GVector]) -> Result<Frame> {
    let n = prefix[0].dim();
    let candidates = prefix
        .iter()
        .cloned()
        .chain((0..n).map(|k| GVector::basis(n, k)));
    let mut ints: Vec<Vec<GaussInt>> = Vec::with_capacity(n);
    for (idx, v) in candidates.enumerate() {
        if ints.len() == n {
            break;
        }
        let mut w = gauss_ints(&v);
        for l in &ints {
            project_out(&mut w, l);
        }
        if w.iter().any(|(a, b)| !a.is_zero() || !b.is_zero()) {
            ints.push(w);
        } else if idx < prefix.len() {
            return Err(Error::degenerate("prefix vectors are dependent"));
        }
    }
    let mut legs = vec![prefix[0].clone()];
    for w in &ints[1..] {
        let entries = w
            .iter()
            .map(|(a, b)| GaussianRational::new(a.clone().into(), b.clone().into()))
            .collect();
        legs.push(GVector::new(entries)?);
    }
    Frame::new(legs)
}

/// A TRUE ray whose projector lies within `eps` of the target's.
///
/// A target that is already TRUE as given is returned unchanged.
pub fn nearest_true_ray_exact(target: &GVector, eps: &Rational) -> Result<ApproxResult<GVector>> {
    check_eps(eps)?;
    let eps2 = eps.square();
    if classify_ray(target) == TruthValue::True {
        return Ok(ApproxResult {
            object: target.clone(),
            achieved_dist2: Rational::zero(),
            certificate: vec![TruthValue::True],
            witness: None,
        });
    }
    let mut den = base_denominator(eps, target.dim());
    let mut best = None;
    for _ in 0..MAX_ROUNDS {
        let q = true_candidate(target, &den)?;
        let d2 = ray_dist2(&q, target)?;
        if d2 <= eps2 {
            return Ok(ApproxResult {
                object: q,
                achieved_dist2: d2,
                certificate: vec![TruthValue::True],
                witness: None,
            });
        }
        best = Some(d2);
        den *= 2;
    }
    Err(budget_exhausted("nearest TRUE ray", best))
}

/// [`nearest_true_ray_exact`] for `2n` machine-real coordinates.
pub fn nearest_true_ray(target: &[f64], eps: f64) -> Result<ApproxResult<GVector>> {
    nearest_true_ray_exact(&vector_from_f64(target)?, &eps_from_f64(eps)?)
}

fn budget_exhausted(what: &str, best: Option<Rational>) -> Error {
    Error::ResourceLimit {
        message: format!("{what}: epsilon not reached within {MAX_ROUNDS} rounds"),
        achieved: best.map(|b| b.to_string()),
    }
}

fn check_near_orthogonal(targets: &[GVector]) -> Result<()> {
    let n = targets.first().map(GVector::dim).unwrap_or(0);
    if n < 2 || targets.len() != n || targets.iter().any(|t| t.dim() != n) {
        return Err(Error::invalid(format!(
            "need {n} target vectors of length {n}"
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            let ip = inner_product(&targets[i], &targets[j])?.norm_sqr();
            let overlap = (ip / (targets[i].norm_sqr() * targets[j].norm_sqr())).to_f64();
            if overlap > ORTHO_TOL * ORTHO_TOL {
                return Err(Error::invalid(format!(
                    "target legs {i} and {j} are not near-orthogonal"
                )));
            }
        }
    }
    Ok(())
}

fn max_leg_dist2(frame: &Frame, targets: &[GVector]) -> Result<Rational> {
    let mut worst = Rational::zero();
    for (leg, t) in frame.legs().iter().zip(targets) {
        worst = worst.max(ray_dist2(leg, t)?);
    }
    Ok(worst)
}

/// A suitable exact frame, leg by leg within `eps` of a near-orthonormal
/// target, with leg 1 TRUE.
///
/// Leg 1 of the target is replaced by a nearby TRUE ray and the remaining
/// rationalized legs are re-orthogonalized against it. An exactly
/// orthogonal, already suitable target is returned as is.
pub fn suitable_frame_near_exact(
    targets: &[GVector],
    eps: &Rational,
) -> Result<ApproxResult<Frame>> {
    check_eps(eps)?;
    check_near_orthogonal(targets)?;
    if let Ok(f) = Frame::new(targets.to_vec()) {
        if is_suitable(&f) {
            let certificate = classify_in_frame(&f);
            return Ok(ApproxResult {
                object: f,
                achieved_dist2: Rational::zero(),
                certificate,
                witness: None,
            });
        }
    }
    let eps2 = eps.square();
    let mut den = base_denominator(eps, targets.len());
    let mut best = None;
    for _ in 0..MAX_ROUNDS {
        let mut legs = vec![true_candidate(&targets[0], &den)?];
        for t in &targets[1..] {
            legs.push(rationalized(t, &den)?);
        }
        if let Ok(frame) = complete_frame(&legs) {
            let certificate = classify_in_frame(&frame);
            debug_assert_eq!(certificate[0], TruthValue::True);
            let d2 = max_leg_dist2(&frame, targets)?;
            if d2 <= eps2 {
                return Ok(ApproxResult {
                    object: frame,
                    achieved_dist2: d2,
                    certificate,
                    witness: None,
                });
            }
            best = Some(d2);
        }
        den *= 2;
    }
    Err(budget_exhausted("suitable frame", best))
}

/// [`suitable_frame_near_exact`] for machine-real targets. The targets'
/// Gram matrix must be within 1e-6 of the identity.
pub fn suitable_frame_near(targets: &[Vec<f64>], eps: f64) -> Result<ApproxResult<Frame>> {
    let n = targets.len();
    for (i, u) in targets.iter().enumerate() {
        for (j, v) in targets.iter().enumerate() {
            if u.len() != 2 * n || v.len() != 2 * n {
                return Err(Error::invalid(format!(
                    "each target needs {} real coordinates",
                    2 * n
                )));
            }
            let (re, im) = u
                .chunks(2)
                .zip(v.chunks(2))
                .fold((0.0, 0.0), |(re, im), (a, b)| {
                    (
                        re + a[0] * b[0] + a[1] * b[1],
                        im + a[0] * b[1] - a[1] * b[0],
                    )
                });
            let expected = if i == j { 1.0 } else { 0.0 };
            if (re - expected).abs() > ORTHO_TOL || im.abs() > ORTHO_TOL {
                return Err(Error::invalid(
                    "target Gram matrix is not within 1e-6 of the identity",
                ));
            }
        }
    }
    let exact = targets
        .iter()
        .map(|t| vector_from_f64(t))
        .collect::<Result<Vec<_>>>()?;
    suitable_frame_near_exact(&exact, &eps_from_f64(eps)?)
}

/// A FALSE ray within `eps` of the target, with its suitable witness frame.
///
/// The rationalized target becomes leg 2 of a frame whose leg 1 is a TRUE
/// ray close to a vector orthogonal to the target; re-orthogonalizing the
/// target against that leg leaves it FALSE.
pub fn false_ray_near_exact(target: &GVector, eps: &Rational) -> Result<ApproxResult<GVector>> {
    check_eps(eps)?;
    let n = target.dim();
    let eps2 = eps.square();
    let mut den = base_denominator(eps, n);
    let mut best = None;
    for _ in 0..MAX_ROUNDS {
        let p = rationalized(target, &den)?.primitive();
        // Complement direction: e_j minus its component along p, for the
        // coordinate j where p is smallest.
        let j = (0..n)
            .min_by(|&a, &b| p.entries()[a].norm_sqr().cmp(&p.entries()[b].norm_sqr()))
            .expect("n >= 2");
        let e_j = GVector::basis(n, j);
        let coeff = &inner_product(&p, &e_j)? / &GaussianRational::real(p.norm_sqr());
        let w = GVector::new(e_j.sub_scaled(&coeff, &p))?;
        let q = true_candidate(&w, &den)?;
        if let Ok(frame) = complete_frame(&[q, p]) {
            let certificate = classify_in_frame(&frame);
            let ray = frame.legs()[1].clone();
            debug_assert_eq!(certificate[1], TruthValue::False);
            let d2 = ray_dist2(&ray, target)?;
            if d2 <= eps2 {
                return Ok(ApproxResult {
                    object: ray,
                    achieved_dist2: d2,
                    certificate: vec![certificate[1]],
                    witness: Some(frame),
                });
            }
            best = Some(d2);
        }
        den *= 2;
    }
    Err(budget_exhausted("false ray", best))
}

/// [`false_ray_near_exact`] for `2n` machine-real coordinates.
pub fn false_ray_near(target: &[f64], eps: f64) -> Result<ApproxResult<GVector>> {
    false_ray_near_exact(&vector_from_f64(target)?, &eps_from_f64(eps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{colored_frame, verify_eq1, ColoredRay};

    fn vec_of(coords: &[&str]) -> GVector {
        let c: Vec<Rational> = coords.iter().map(|s| s.parse().unwrap()).collect();
        GVector::from_coords(&c).unwrap()
    }

    #[test]
    fn true_ray_near_uniform_target() {
        let x = 1.0 / 6f64.sqrt();
        let r = nearest_true_ray(&[x; 6], 1e-2).unwrap();
        assert_eq!(classify_ray(&r.object), TruthValue::True);
        assert!(r.object.coords()[0].den_divisible_by_3());
        assert!(r.object.coords()[1..]
            .iter()
            .all(|c| !c.den_divisible_by_3()));
        assert!(r.achieved_dist2 <= Rational::from_f64_exact(1e-2).unwrap().square());
    }

    #[test]
    fn true_ray_near_axis_target_fills_zeros() {
        let r = nearest_true_ray(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-3).unwrap();
        assert!(r.object.coords().iter().all(|c| !c.is_zero()));
        assert_eq!(classify_ray(&r.object), TruthValue::True);
        let v = vector_from_f64(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(ray_dist2(&r.object, &v).unwrap(), r.achieved_dist2);
        assert!(r.achieved_dist2 <= Rational::from_f64_exact(1e-3).unwrap().square());
    }

    #[test]
    fn true_target_is_returned_unchanged() {
        let t = vec_of(&["1/3", "1/2", "1/2", "1/2", "1/2", "1/2"]);
        let r = nearest_true_ray_exact(&t, &Rational::frac(1, 100)).unwrap();
        assert_eq!(r.object, t);
        assert!(r.achieved_dist2.is_zero());
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            nearest_true_ray(&[0.0; 6], 1e-2),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            nearest_true_ray(&[1.0; 6], 0.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            nearest_true_ray(&[1.0; 6], f64::NAN),
            Err(Error::InvalidInput(_))
        ));
        let skew = vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.6, 0.0, 0.8, 0.0]];
        assert!(matches!(
            suitable_frame_near(&skew, 1e-2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn suitable_frame_near_standard_basis() {
        let basis: Vec<Vec<f64>> = (0..3)
            .map(|k| (0..6).map(|c| if c == 2 * k { 1.0 } else { 0.0 }).collect())
            .collect();
        let r = suitable_frame_near(&basis, 1e-2).unwrap();
        assert_eq!(
            r.certificate,
            vec![TruthValue::True, TruthValue::False, TruthValue::False]
        );
        assert_eq!(verify_eq1(&r.object).unwrap(), 1);
        assert!(r.achieved_dist2 <= Rational::frac(1, 10_000));
    }

    #[test]
    fn suitable_exact_frame_is_returned_as_is() {
        let t = vec_of(&["1/3", "1/2", "1/2", "1/2", "1/2", "1/2"]);
        let f = complete_frame(&[t]).unwrap();
        let r = suitable_frame_near_exact(f.legs(), &Rational::frac(1, 100)).unwrap();
        assert_eq!(r.object, f);
        assert!(r.achieved_dist2.is_zero());
    }

    #[test]
    fn false_ray_near_true_target() {
        let t = vec_of(&["1/3", "1/2", "1/2", "1/2", "1/2", "1/2"]);
        let eps = Rational::frac(1, 1000);
        let r = false_ray_near_exact(&t, &eps).unwrap();
        assert_eq!(r.certificate, vec![TruthValue::False]);
        assert_ne!(classify_ray(&r.object), TruthValue::True);
        let w = r.witness.clone().unwrap();
        assert!(w.legs().contains(&r.object));
        assert_eq!(verify_eq1(&w).unwrap(), 1);
        assert!(r.achieved_dist2 <= eps.square());
        let colored = ColoredRay {
            ray: r.object.clone(),
            value: TruthValue::False,
            witness: Some(w.clone()),
        };
        assert!(colored.is_consistent());
        assert!(colored_frame(&w).iter().all(ColoredRay::is_consistent));
    }

    #[test]
    fn false_ray_near_axis() {
        let r = false_ray_near(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-2).unwrap();
        assert_eq!(r.certificate, vec![TruthValue::False]);
        assert_eq!(verify_eq1(r.witness.as_ref().unwrap()).unwrap(), 1);
    }

    #[test]
    fn complete_frame_fills_in_basis() {
        let f = complete_frame(&[vec_of(&["1", "0", "1", "0", "0", "0"])]).unwrap();
        assert_eq!(f.dim(), 3);
        assert!(matches!(
            complete_frame(&[vec_of(&["1", "0", "1", "0"]), vec_of(&["2", "0", "2", "0"])]),
            Err(Error::Degenerate(_))
        ));
    }
}
