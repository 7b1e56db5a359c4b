//! Exact elements of the Gaussian rationals ℚ(i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `re + im·i` with both parts exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::real(rat(n, d))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Positive in the total order used for root systems: `re > 0`, or `re = 0` and `im > 0`.
    pub fn is_positive(&self) -> bool {
        self.re.is_positive() || (self.re.is_zero() && self.im.is_positive())
    }

    pub fn is_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.re.denom().lcm(self.im.denom())
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Nearest Gaussian rational with the given denominator.
    pub fn round_complex(z: Complex64, denom: i64) -> Self {
        let r = (z.re * denom as f64).round() as i64;
        let i = (z.im * denom as f64).round() as i64;
        Scalar::new(rat(r, denom), rat(i, denom))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_real().then_some(&self.re)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::real(r)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(re, im)`. Only used for canonical ordering, not a field order.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Scalar { re: &a.re + &b.re, im: &a.im + &b.im });
binop!(Sub, sub, |a, b| Scalar { re: &a.re - &b.re, im: &a.im - &b.im });
binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return Scalar::real(&a.re * &b.re);
    }
    Scalar { re: &a.re * &b.re - &a.im * &b.im, im: &a.re * &b.im + &a.im * &b.re }
});
binop!(Div, div, |a, b| a * &b.inv().expect("division by zero"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            if !self.im.is_negative() {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*i", self.im)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.strip_prefix('+').unwrap_or(s);
    if t.is_empty() {
        return Err(Error::Parse(format!("empty number in {s:?}")));
    }
    let r: BigRational = t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(r)
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `a`, `a/b`, `a/b+c/d*i`, `c/d*i`, `i`, `-i`, `3-2i` (whitespace ignored).
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if !s.ends_with('i') {
            return Ok(Scalar::real(parse_rational(&s)?));
        }
        let body = &s[..s.len() - 1];
        let body = body.strip_suffix('*').unwrap_or(body);
        let split = body.char_indices().filter(|&(k, c)| k > 0 && (c == '+' || c == '-')).map(|(k, _)| k).next_back();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t)?,
        };
        let re = if re_part.is_empty() { BigRational::zero() } else { parse_rational(re_part)? };
        Ok(Scalar { re, im })
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("3"), Scalar::int(3));
        assert_eq!(p("-1/2"), Scalar::frac(-1, 2));
        assert_eq!(p("i"), Scalar::i());
        assert_eq!(p("-i"), -Scalar::i());
        assert_eq!(p("1/2+3/4*i"), Scalar::new(rat(1, 2), rat(3, 4)));
        assert_eq!(p("2 - 3i"), Scalar::gaussian(2, -3));
        assert_eq!(p("-5/3*i"), Scalar::new(rat(0, 1), rat(-5, 3)));
        assert!("".parse::<Scalar>().is_err());
        assert!("1/0x".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "7", "-2/3", "1/2+3/4*i", "-1-1*i", "5/7*i"] {
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn field_ops() {
        let a = Scalar::gaussian(1, 2);
        let b = Scalar::gaussian(3, -1);
        assert_eq!(&a * &b, Scalar::gaussian(5, 5));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(Scalar::i().pow(2), -Scalar::one());
        assert_eq!(Scalar::i().pow(-1), -Scalar::i());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn positivity() {
        assert!(Scalar::frac(1, 3).is_positive());
        assert!(Scalar::gaussian(0, 2).is_positive());
        assert!(!Scalar::gaussian(0, -2).is_positive());
        assert!(!Scalar::gaussian(-1, 5).is_positive());
        assert!(!Scalar::zero().is_positive());
    }

    #[test]
    fn serde_as_string() {
        let v = serde_json::to_string(&Scalar::new(rat(1, 2), rat(-1, 3))).unwrap();
        assert_eq!(v, "\"1/2-1/3*i\"");
        let back: Scalar = serde_json::from_str(&v).unwrap();
        assert_eq!(back, Scalar::new(rat(1, 2), rat(-1, 3)));
    }
}
