use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::{forward_binop, GaussianRational, Rational};
use crate::error::{Error, Result};

/// An element `rat + sqrt2·√2` of the field Q(√2). Since √2 is irrational the
/// representation is unique and equality is componentwise.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct QuadRational {
    pub rat: Rational,
    pub sqrt2: Rational,
}

impl QuadRational {
    pub fn new(rat: Rational, sqrt2: Rational) -> Self {
        QuadRational { rat, sqrt2 }
    }

    pub fn rational(rat: Rational) -> Self {
        QuadRational {
            rat,
            sqrt2: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    /// The Galois conjugate `rat - sqrt2·√2`.
    pub fn conjugate(&self) -> Self {
        QuadRational {
            rat: self.rat.clone(),
            sqrt2: -&self.sqrt2,
        }
    }

    /// `rat^2 - 2·sqrt2^2`, the product with the Galois conjugate.
    pub fn field_norm(&self) -> Rational {
        self.rat.square() - Rational::from(2) * self.sqrt2.square()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("inverse of zero in Q(sqrt2)"));
        }
        let n = self.field_norm();
        Ok(QuadRational {
            rat: &self.rat / &n,
            sqrt2: -&self.sqrt2 / &n,
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QuadRational {
            rat: &self.rat * k,
            sqrt2: &self.sqrt2 * k,
        }
    }

    /// Exact sign as a real number.
    ///
    /// Same-sign components decide directly; with opposite signs the larger
    /// of `rat^2` and `2·sqrt2^2` wins (they are never equal unless both are 0).
    pub fn signum(&self) -> Ordering {
        let (a, b) = (self.rat.signum(), self.sqrt2.signum());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                let rat_dominates = self.rat.square() > Rational::from(2) * self.sqrt2.square();
                if rat_dominates {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64() + self.sqrt2.to_f64() * std::f64::consts::SQRT_2
    }
}

impl PartialOrd for QuadRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<Rational> for QuadRational {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl std::ops::Add<&QuadRational> for &QuadRational {
    type Output = QuadRational;
    fn add(self, rhs: &QuadRational) -> QuadRational {
        QuadRational {
            rat: &self.rat + &rhs.rat,
            sqrt2: &self.sqrt2 + &rhs.sqrt2,
        }
    }
}

impl std::ops::Sub<&QuadRational> for &QuadRational {
    type Output = QuadRational;
    fn sub(self, rhs: &QuadRational) -> QuadRational {
        QuadRational {
            rat: &self.rat - &rhs.rat,
            sqrt2: &self.sqrt2 - &rhs.sqrt2,
        }
    }
}

impl std::ops::Mul<&QuadRational> for &QuadRational {
    type Output = QuadRational;
    fn mul(self, rhs: &QuadRational) -> QuadRational {
        QuadRational {
            rat: &self.rat * &rhs.rat + Rational::from(2) * &self.sqrt2 * &rhs.sqrt2,
            sqrt2: &self.rat * &rhs.sqrt2 + &self.sqrt2 * &rhs.rat,
        }
    }
}

impl std::ops::Div<&QuadRational> for &QuadRational {
    type Output = QuadRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadRational) -> QuadRational {
        self * &rhs.inverse().expect("division by zero")
    }
}

forward_binop!(QuadRational, Add, add);
forward_binop!(QuadRational, Sub, sub);
forward_binop!(QuadRational, Mul, mul);
forward_binop!(QuadRational, Div, div);

impl std::ops::Neg for &QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        QuadRational {
            rat: -&self.rat,
            sqrt2: -&self.sqrt2,
        }
    }
}

impl std::ops::Neg for QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        -&self
    }
}

impl std::iter::Sum for QuadRational {
    fn sum<I: Iterator<Item = QuadRational>>(iter: I) -> Self {
        iter.fold(QuadRational::zero(), |a, b| a + b)
    }
}

impl fmt::Debug for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}√2", self.rat, self.sqrt2)
    }
}

impl<'de> Deserialize<'de> for QuadRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged, deny_unknown_fields)]
        enum Repr {
            Parts {
                #[serde(default)]
                rat: Rational,
                #[serde(default)]
                sqrt2: Rational,
            },
            Rat(Rational),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Parts { rat, sqrt2 } => QuadRational { rat, sqrt2 },
            Repr::Rat(rat) => QuadRational::rational(rat),
        })
    }
}

/// A complex number whose real and imaginary parts lie in Q(√2).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct QuadComplex {
    pub re: QuadRational,
    pub im: QuadRational,
}

impl QuadComplex {
    pub fn new(re: QuadRational, im: QuadRational) -> Self {
        QuadComplex { re, im }
    }

    pub fn real(re: QuadRational) -> Self {
        QuadComplex {
            re,
            im: QuadRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(QuadRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> QuadRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &QuadRational) -> Self {
        QuadComplex {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("inverse of zero"));
        }
        let n = self.norm_sqr().inverse()?;
        Ok(QuadComplex {
            re: &self.re * &n,
            im: -(&self.im * &n),
        })
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl From<GaussianRational> for QuadComplex {
    fn from(g: GaussianRational) -> Self {
        QuadComplex {
            re: g.re.into(),
            im: g.im.into(),
        }
    }
}

impl From<QuadRational> for QuadComplex {
    fn from(q: QuadRational) -> Self {
        Self::real(q)
    }
}

impl From<Rational> for QuadComplex {
    fn from(r: Rational) -> Self {
        Self::real(r.into())
    }
}

impl std::ops::Add<&QuadComplex> for &QuadComplex {
    type Output = QuadComplex;
    fn add(self, rhs: &QuadComplex) -> QuadComplex {
        QuadComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl std::ops::Sub<&QuadComplex> for &QuadComplex {
    type Output = QuadComplex;
    fn sub(self, rhs: &QuadComplex) -> QuadComplex {
        QuadComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl std::ops::Mul<&QuadComplex> for &QuadComplex {
    type Output = QuadComplex;
    fn mul(self, rhs: &QuadComplex) -> QuadComplex {
        QuadComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

forward_binop!(QuadComplex, Add, add);
forward_binop!(QuadComplex, Sub, sub);
forward_binop!(QuadComplex, Mul, mul);

impl std::ops::Neg for &QuadComplex {
    type Output = QuadComplex;
    fn neg(self) -> QuadComplex {
        QuadComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl std::ops::Neg for QuadComplex {
    type Output = QuadComplex;
    fn neg(self) -> QuadComplex {
        -&self
    }
}

impl std::iter::Sum for QuadComplex {
    fn sum<I: Iterator<Item = QuadComplex>>(iter: I) -> Self {
        iter.fold(QuadComplex::zero(), |a, b| a + b)
    }
}

impl fmt::Debug for QuadComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})i", self.re, self.im)
    }
}

/// Accepts `{"re": q, "im": q}` with Q(√2) parts, or a bare Q(√2) value.
impl<'de> Deserialize<'de> for QuadComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged, deny_unknown_fields)]
        enum Repr {
            Parts {
                #[serde(default)]
                re: QuadRational,
                #[serde(default)]
                im: QuadRational,
            },
            Real(QuadRational),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Parts { re, im } => QuadComplex { re, im },
            Repr::Real(re) => QuadComplex::real(re),
        })
    }
}
