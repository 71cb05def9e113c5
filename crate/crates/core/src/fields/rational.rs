use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::forward_binop;
use crate::error::{Error, Result};

/// An arbitrary-precision rational number, always held in lowest terms with
/// a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

/// Builds `num/den` in lowest terms. Fails on a zero denominator.
pub fn reduce(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(Rational(BigRational::new(num.into(), den)))
}

fn v3_int(n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let three = BigInt::from(3u8);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&three);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        reduce(num, den)
    }

    /// Panicking constructor for literals in code and tests.
    pub fn frac(num: i64, den: i64) -> Self {
        reduce(num, den).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign().cmp(&Sign::NoSign)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("reciprocal of zero"));
        }
        Ok(Rational(self.0.recip()))
    }

    /// 3-adic valuation `v3(num) - v3(den)`; `None` stands for +∞ (the value 0).
    ///
    /// A lowest-terms denominator is divisible by 3 iff `v3 <= -1`, and by 9
    /// iff `v3 <= -2`.
    pub fn v3(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(v3_int(self.numer()) - v3_int(self.denom()))
    }

    /// True iff the lowest-terms denominator is a multiple of 3.
    pub fn den_divisible_by_3(&self) -> bool {
        self.denom().is_multiple_of(&BigInt::from(3u8))
    }

    /// `3^k` for any integer `k`.
    pub fn pow3(k: i64) -> Self {
        let p = num_traits::pow(BigInt::from(3u8), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational(BigRational::new(BigInt::one(), p))
        }
    }

    /// Exact value of a finite double (every finite `f64` is a dyadic rational).
    pub fn from_f64_exact(x: f64) -> Result<Self> {
        BigRational::from_f64(x)
            .map(Rational)
            .ok_or_else(|| Error::invalid(format!("non-finite real {x}")))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest integer `>= self`.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl std::ops::Add<&Rational> for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if self.0.is_integer() && rhs.0.is_integer() {
            return Rational::from_integer(self.0.numer() + rhs.0.numer());
        }
        Rational(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub<&Rational> for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        if self.0.is_integer() && rhs.0.is_integer() {
            return Rational::from_integer(self.0.numer() - rhs.0.numer());
        }
        Rational(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul<&Rational> for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        if self.0.is_integer() && rhs.0.is_integer() {
            return Rational::from_integer(self.0.numer() * rhs.0.numer());
        }
        Rational(&self.0 * &rhs.0)
    }
}

/// Panics on division by zero, like the primitive types.
impl std::ops::Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

forward_binop!(Rational, Add, add);
forward_binop!(Rational, Sub, sub);
forward_binop!(Rational, Mul, mul);
forward_binop!(Rational, Div, div);

impl std::ops::Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `p/q`, an integer, or an exact decimal such as `-0.125` or `1e-6`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse rational from {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return reduce(p, q);
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Rational::from_integer(n));
        }
        parse_decimal(s).ok_or_else(bad)
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u8);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut r = if scale >= 0 {
        Rational::from_integer(all * pow)
    } else {
        reduce(all, pow).ok()?
    };
    if neg {
        r = -r;
    }
    Some(r)
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\", an integer, or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
                Ok(Rational::from(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rational, E> {
                Rational::from_f64_exact(v).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Best rational approximation of an exact rational with denominator at most
/// `max_den`.
///
/// The continued-fraction expansion yields the two Farey neighbours of `x`
/// of order `max_den`: the last convergent and the largest admissible
/// semiconvergent. The one lying on `x`'s side of their mediant is returned,
/// which guarantees `|x - r| <= 1/(den(r) * max_den)`.
pub fn rationalize_exact(x: &Rational, max_den: &BigInt) -> Result<Rational> {
    if max_den < &BigInt::one() {
        return Err(Error::invalid("max_den must be at least 1"));
    }
    if x.denom() <= max_den {
        return Ok(x.clone());
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi_p = &p0 + &k * &p1;
    let semi_q = &q0 + &k * &q1;
    let convergent = Rational(BigRational::new(p1.clone(), q1.clone()));
    let semi = Rational(BigRational::new(semi_p.clone(), semi_q.clone()));
    let mediant = Rational(BigRational::new(semi_p + p1, semi_q + q1));
    // The convergent sits on one side of the mediant, the semiconvergent on
    // the other; pick the neighbour sharing x's side.
    let x_side = x.cmp(&mediant);
    let pick = if x_side == Ordering::Equal {
        if convergent.denom() <= semi.denom() {
            convergent
        } else {
            semi
        }
    } else if convergent.cmp(&mediant) == x_side {
        convergent
    } else {
        semi
    };
    Ok(pick)
}

/// [`rationalize_exact`] for a machine real.
pub fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    let exact = Rational::from_f64_exact(x)?;
    rationalize_exact(&exact, &BigInt::from(max_den))
}

fn has_wanted_denominator(r: &Rational, want_div3: bool) -> bool {
    !r.is_zero() && r.den_divisible_by_3() == want_div3
}

/// The `N`-th candidate of the denominator-adjustment sequences:
/// `(3Np + 1)/(3Nq)` when a denominator divisible by 3 is wanted, and
/// `Np/(Nq + 1)` otherwise, for `r = p/q` in lowest terms.
pub fn denominator_candidate(r: &Rational, n: &BigInt, want_div3: bool) -> Rational {
    let (p, q) = (r.numer(), r.denom());
    if want_div3 {
        let three_n = n * BigInt::from(3u8);
        Rational(BigRational::new(&three_n * p + BigInt::one(), three_n * q))
    } else {
        Rational(BigRational::new(n * p, n * q + BigInt::one()))
    }
}

/// Moves a nonzero rational by at most `eps` so that its lowest-terms
/// denominator is (or is not) divisible by 3.
///
/// Inputs that already qualify are returned unchanged. Otherwise `N` starts at
/// the smallest value whose candidate meets the `eps` bound and increases
/// until the reduced candidate has the wanted divisibility.
pub fn adjust_denominator(r: &Rational, want_div3: bool, eps: &Rational) -> Result<Rational> {
    if r.is_zero() {
        return Err(Error::invalid("cannot adjust the denominator of zero"));
    }
    if !eps.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if has_wanted_denominator(r, want_div3) {
        return Ok(r.clone());
    }
    let q = Rational::from_integer(r.denom().clone());
    // |candidate - r| is 1/(3Nq) for the div-3 sequence and |p|/(q(Nq+1))
    // for the other one.
    let n_min = if want_div3 {
        (Rational::one() / (Rational::from(3) * &q * eps)).ceil_int()
    } else {
        ((r.abs() / (&q * eps) - Rational::one()) / &q).ceil_int()
    };
    let mut n = n_min.max(BigInt::one());
    loop {
        let c = denominator_candidate(r, &n, want_div3);
        if (&c - r).abs() <= *eps && has_wanted_denominator(&c, want_div3) {
            return Ok(c);
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_normalizes_sign_and_gcd() {
        assert_eq!(reduce(6, -9).unwrap(), Rational::frac(-2, 3));
        assert_eq!(reduce(6, -9).unwrap().to_string(), "-2/3");
        let z = reduce(0, 5).unwrap();
        assert_eq!(
            (z.numer().clone(), z.denom().clone()),
            (BigInt::zero(), BigInt::one())
        );
        assert_eq!(reduce(4, 2).unwrap().to_string(), "2");
        assert!(matches!(reduce(1, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn three_adic_valuation() {
        assert_eq!(q("4/9").v3(), Some(-2));
        assert_eq!(q("6/5").v3(), Some(1));
        assert_eq!(q("1/2").v3(), Some(0));
        assert_eq!(Rational::zero().v3(), None);
        assert_eq!(Rational::pow3(-4).v3(), Some(-4));
    }

    #[test]
    fn parses_every_textual_form() {
        assert_eq!(q("3"), Rational::from(3));
        assert_eq!(q("-10/4"), Rational::frac(-5, 2));
        assert_eq!(q("0.125"), Rational::frac(1, 8));
        assert_eq!(q("-.5"), Rational::frac(-1, 2));
        assert_eq!(q("1e-3"), Rational::frac(1, 1000));
        assert_eq!(q("2.5E2"), Rational::from(250));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(0.333333333, 100).unwrap(), Rational::frac(1, 3));
        assert_eq!(rationalize(0.5, 10).unwrap(), Rational::frac(1, 2));
        assert_eq!(
            rationalize(std::f64::consts::SQRT_2, 1000).unwrap(),
            Rational::frac(1393, 985)
        );
        assert_eq!(rationalize(-2.75, 1).unwrap(), Rational::from(-3));
        assert!(rationalize(f64::NAN, 10).is_err());
        assert!(rationalize(f64::INFINITY, 10).is_err());
    }

    #[test]
    fn rationalize_prefers_mediant_side_over_nearest() {
        // 1/10 is nearest among denominators <= 10 but violates the
        // 1/(den * max_den) bound; 0/1 lies on x's side of the mediant 1/11.
        let r = rationalize_exact(&Rational::frac(2, 25), &BigInt::from(10)).unwrap();
        assert_eq!(r, Rational::zero());
    }

    #[test]
    fn adjust_denominator_examples() {
        let eps = Rational::frac(1, 2);
        assert_eq!(
            adjust_denominator(&Rational::one(), true, &eps).unwrap(),
            Rational::frac(4, 3)
        );

        // Smallest admissible N is 1, giving 1/4 at distance 1/12.
        let third = Rational::frac(1, 3);
        let tenth = Rational::frac(1, 10);
        let out = adjust_denominator(&third, false, &tenth).unwrap();
        assert_eq!(out, Rational::frac(1, 4));
        // The N = 3 member of the same sequence is 3/10, 1/30 away.
        let n3 = denominator_candidate(&third, &BigInt::from(3), false);
        assert_eq!(n3, Rational::frac(3, 10));
        assert_eq!((&n3 - &third).abs(), Rational::frac(1, 30));

        let two_sevenths = Rational::frac(2, 7);
        assert_eq!(
            adjust_denominator(&two_sevenths, false, &Rational::frac(1, 1000)).unwrap(),
            two_sevenths
        );
    }

    #[test]
    fn adjust_denominator_rejects_bad_input() {
        assert!(adjust_denominator(&Rational::zero(), true, &Rational::one()).is_err());
        assert!(adjust_denominator(&Rational::one(), true, &Rational::zero()).is_err());
    }
}
