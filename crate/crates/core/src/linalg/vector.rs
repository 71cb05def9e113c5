use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use super::Frame;
use crate::error::{Error, Result};
use crate::fields::{GaussianRational, Rational};

/// A nonzero vector in C^n (n >= 2) with Gaussian-rational entries.
///
/// The real coordinate tuple `(r1, ..., r2n)` interleaves real and imaginary
/// parts: entry k is `r(2k-1) + i·r(2k)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GVector(Vec<GaussianRational>);

impl GVector {
    pub fn new(entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::invalid(format!(
                "vector length {} < 2",
                entries.len()
            )));
        }
        if entries.iter().all(GaussianRational::is_zero) {
            return Err(Error::invalid("zero vector"));
        }
        Ok(GVector(entries))
    }

    /// Builds a vector from its `2n` real coordinates.
    pub fn from_coords(coords: &[Rational]) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "odd number of real coordinates ({})",
                coords.len()
            )));
        }
        let entries = coords
            .chunks(2)
            .map(|c| GaussianRational::new(c[0].clone(), c[1].clone()))
            .collect();
        Self::new(entries)
    }

    /// Standard basis vector `e_k` of C^n.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut e = vec![GaussianRational::zero(); n];
        e[k] = GaussianRational::one();
        GVector(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.0
    }

    /// The real coordinates `(r1, ..., r2n)`.
    pub fn coords(&self) -> Vec<Rational> {
        self.0
            .iter()
            .flat_map(|z| [z.re.clone(), z.im.clone()])
            .collect()
    }

    pub fn to_f64_coords(&self) -> Vec<f64> {
        self.coords().iter().map(Rational::to_f64).collect()
    }

    /// `<v, v>`.
    pub fn norm_sqr(&self) -> Rational {
        let (parts, den) = integer_parts(self);
        let sum: BigInt = parts.iter().map(|(a, b)| a * a + b * b).sum();
        Rational::new(sum, &den * &den).expect("nonzero denominator")
    }

    /// Multiplies by a nonzero Gaussian-rational scalar.
    pub fn scale(&self, k: &GaussianRational) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::invalid("scaling by zero"));
        }
        Ok(GVector(self.0.iter().map(|z| z * k).collect()))
    }

    /// The positive rescaling whose coordinates are coprime integers. It
    /// spans the same ray and keeps arithmetic on it cheap.
    pub fn primitive(&self) -> Self {
        let coords = self.coords();
        let lcm = coords
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let gcd = coords.iter().fold(BigInt::zero(), |acc, r| {
            acc.gcd(&(r.numer() * (&lcm / r.denom())))
        });
        let k = Rational::new(lcm, gcd).expect("nonzero vector has nonzero content");
        GVector(self.0.iter().map(|z| z.scale(&k)).collect())
    }

    /// True iff both vectors span the same complex line.
    pub fn same_ray(&self, other: &GVector) -> bool {
        self.dim() == other.dim()
            && inner_product(self, other).map(|ip| ip.norm_sqr()).ok()
                == Some(self.norm_sqr() * other.norm_sqr())
    }

    pub(crate) fn sub_scaled(
        &self,
        k: &GaussianRational,
        other: &GVector,
    ) -> Vec<GaussianRational> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a - &(k * b))
            .collect()
    }
}

impl std::fmt::Debug for GVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Accepts either a list of complex entries (`{"re": .., "im": ..}`) or a
/// flat list of `2n` real coordinates.
impl<'de> Deserialize<'de> for GVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Coords(Vec<Rational>),
            Entries(Vec<GaussianRational>),
        }
        match Repr::deserialize(d)? {
            Repr::Coords(c) => GVector::from_coords(&c),
            Repr::Entries(e) => GVector::new(e),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// `<u, v> = sum_k conj(u_k)·v_k`.
pub fn inner_product(u: &GVector, v: &GVector) -> Result<GaussianRational> {
    if u.dim() != v.dim() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    let (us, ud) = integer_parts(u);
    let (vs, vd) = integer_parts(v);
    let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
    for ((a, b), (c, d)) in us.iter().zip(&vs) {
        re += a * c + b * d;
        im += a * d - b * c;
    }
    let den = ud * vd;
    Ok(GaussianRational::new(
        Rational::new(re, den.clone())?,
        Rational::new(im, den)?,
    ))
}

/// Integer coordinates over a common denominator: `v = parts / den`.
fn integer_parts(v: &GVector) -> (Vec<(BigInt, BigInt)>, BigInt) {
    let den = v.0.iter().fold(BigInt::one(), |acc, z| {
        let acc = if z.re.denom().is_one() {
            acc
        } else {
            acc.lcm(z.re.denom())
        };
        if z.im.denom().is_one() {
            acc
        } else {
            acc.lcm(z.im.denom())
        }
    });
    let scale = |r: &Rational| {
        if r.denom().is_one() {
            r.numer() * &den
        } else {
            r.numer() * (&den / r.denom())
        }
    };
    (
        v.0.iter().map(|z| (scale(&z.re), scale(&z.im))).collect(),
        den,
    )
}

/// Exact Gram–Schmidt without normalization: leg k is input k minus its
/// projections `<a, v>/<a, a>·a` onto the previous legs, so leg 1 is input 1.
pub fn gram_schmidt(vectors: &[GVector]) -> Result<Frame> {
    let n = vectors.first().map(GVector::dim).unwrap_or(0);
    if vectors.len() != n {
        return Err(Error::invalid(format!(
            "need {n} vectors, got {}",
            vectors.len()
        )));
    }
    let mut legs: Vec<GVector> = Vec::with_capacity(n);
    for v in vectors {
        if v.dim() != n {
            return Err(Error::invalid("vectors of differing lengths"));
        }
        let mut w = v.clone();
        for leg in &legs {
            let coeff = &inner_product(leg, v)? / &GaussianRational::real(leg.norm_sqr());
            w = GVector(w.sub_scaled(&coeff, leg));
        }
        if w.0.iter().all(GaussianRational::is_zero) {
            return Err(Error::degenerate(
                "linearly dependent input to Gram-Schmidt",
            ));
        }
        legs.push(w);
    }
    Frame::new(legs)
}
