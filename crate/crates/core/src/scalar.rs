//! Scalar fields used throughout: exact Gaussian rationals and complex doubles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
/// Element of Q(i).
pub type Exact = Complex<BigRational>;
pub type Float = Complex64;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn imag_unit() -> Self;
    fn conj(&self) -> Self;
    fn try_inv(&self) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    /// `None` in exact mode: floating values have no place in Q(i).
    fn try_from_c64(z: Complex64) -> Option<Self>;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn from_exact(z: &Exact) -> Self {
        Self::from_rational(&z.re) + Self::imag_unit() * Self::from_rational(&z.im)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.try_inv().map(|inv| self.clone() * inv)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_rational(q: &Rational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(Complex::new(&self.re / &n, -(&self.im / &n)))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn from_exact(z: &Exact) -> Self {
        z.clone()
    }
    fn try_from_c64(_: Complex64) -> Option<Self> {
        None
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rat_to_f64(q), 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn try_inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn try_from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Rational p/q. Panics when q == 0.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rint(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn ex(p: i64, q: i64) -> Exact {
    Complex::new(rat(p, q), BigRational::zero())
}

pub fn ex_re(q: Rational) -> Exact {
    Complex::new(q, BigRational::zero())
}

pub fn ex_im(q: Rational) -> Exact {
    Complex::new(BigRational::zero(), q)
}

pub fn exact_to_string(z: &Exact) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        _ => format!("{}{}{}i", z.re, if z.im.is_negative() { "-" } else { "+" }, z.im.abs()),
    }
}

/// Parses a rational literal: an integer, `p/q`, or a finite decimal such as
/// `0.75` or `-1.5e-2`. Decimals are converted exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational literal")));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in '{t}'")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in '{t}'")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{t}'")));
        }
        return Ok(BigRational::new(p, q));
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational literal: '{t}'"));
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    if exp.unsigned_abs() > 4000 {
        return Err(bad());
    }
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

/// Exact square root of a non-negative rational when it exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Serde adapters writing rationals as "p/q" strings.
pub mod rational_serde {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{parse_rational, Rational};

    pub fn serialize<Se: Serializer>(q: &Rational, s: Se) -> Result<Se::Ok, Se::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<Se: Serializer>(q: &Option<Rational>, s: Se) -> Result<Se::Ok, Se::Error> {
            match q {
                Some(q) => s.serialize_some(&q.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(D::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use serde::ser::SerializeSeq;

        use super::*;

        pub fn serialize<Se: Serializer>(v: &[Rational], s: Se) -> Result<Se::Ok, Se::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&q.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

/// Rising factorial (a)_n over any scalar field.
pub fn pochhammer<S: Scalar>(a: &S, n: u32) -> S {
    let mut acc = S::one();
    for i in 0..n {
        acc = acc * (a.clone() + S::from_i64(i as i64));
    }
    acc
}
