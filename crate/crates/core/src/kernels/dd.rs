//! Double-double arithmetic for the floating three-term recurrences. The
//! recurrences cancel badly near sign changes; 106 bits keep them within
//! 1e-12 of the exact series for the indices we use.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::scalar::{rat_to_f64, Rational};

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, o: Dd) {
        *self = *self + o;
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        // two Newton-style correction steps on the quotient
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

macro_rules! mixed {
    ($tr:ident, $f:ident) => {
        impl $tr<f64> for Dd {
            type Output = Dd;
            fn $f(self, o: f64) -> Dd {
                $tr::$f(self, Dd::from(o))
            }
        }
        impl $tr<Dd> for f64 {
            type Output = Dd;
            fn $f(self, o: Dd) -> Dd {
                $tr::$f(Dd::from(self), o)
            }
        }
    };
}
mixed!(Add, add);
mixed!(Sub, sub);
mixed!(Mul, mul);
mixed!(Div, div);

/// Complex double-double, only what the series need.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, r: Dd) -> CDd {
        CDd::new(self.re * r, self.im * r)
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, o: CDd) -> CDd {
        CDd::new(self.re + o.re, self.im + o.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, o: CDd) -> CDd {
        CDd::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

pub fn dd(v: f64) -> Dd {
    Dd::from(v)
}

/// Rational to double-double, correct to ~106 bits when numerator and
/// denominator are exactly representable.
pub fn dd_rat(q: &Rational) -> Dd {
    const LIMIT: f64 = 9007199254740992.0; // 2^53
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.abs() <= LIMIT && d <= LIMIT => dd(n) / dd(d),
        _ => dd(rat_to_f64(q)),
    }
}

pub fn to_f64(v: Dd) -> f64 {
    v.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn third_is_accurate() {
        let t = dd(1.0) / dd(3.0);
        let r = t * 3.0 - 1.0;
        assert!(r.hi.abs() < 1e-31, "{r:?}");
        let q = dd_rat(&rat(3, 4)) * dd_rat(&rat(4, 3)) - 1.0;
        assert!(q.hi.abs() < 1e-31);
    }
}
