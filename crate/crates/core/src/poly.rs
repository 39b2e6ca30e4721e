//! Sparse multivariate polynomials over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{binomial, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, S::one())
    }

    pub fn monomial(exps: Vec<u32>, c: S) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut p = Self::zero(1);
        for (d, c) in coeffs.into_iter().enumerate() {
            p.add_term(vec![d as u32], c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.scale(&-S::one()))
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = Self::zero(self.nvars);
        for (e1, v1) in &self.terms {
            for (e2, v2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, v1.clone() * v2.clone());
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        self.derivative_n(i, 1)
    }

    /// `order`-th partial derivative in variable `i`.
    pub fn derivative_n(&self, i: usize, order: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        if order == 0 {
            return self.clone();
        }
        for (e, v) in &self.terms {
            if e[i] < order {
                continue;
            }
            let mut f = S::one();
            for j in 0..order {
                f = f * S::from_i64((e[i] - j) as i64);
            }
            let mut e2 = e.clone();
            e2[i] -= order;
            out.add_term(e2, v.clone() * f);
        }
        out
    }

    /// Mixed partial derivative with orders per variable.
    pub fn partial(&self, orders: &[u32]) -> Self {
        let mut p = self.clone();
        for (i, &o) in orders.iter().enumerate() {
            if o > 0 {
                p = p.derivative_n(i, o);
            }
        }
        p
    }

    /// Substitutes `v_i -> v_i + a`.
    pub fn shift_var(&self, i: usize, a: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            let d = e[i];
            let mut apow = S::one();
            // (v + a)^d = sum_j C(d, j) a^(d-j) v^j, iterate j downward
            for j in (0..=d).rev() {
                let mut e2 = e.clone();
                e2[i] = j;
                let b = S::from_i64(binomial(d, j).try_into().expect("binomial fits i64"));
                out.add_term(e2, v.clone() * b * apow.clone());
                apow = apow * a.clone();
            }
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        let mut acc = S::zero();
        for (e, v) in &self.terms {
            let mut t = v.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * x.pow(k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn eval_i64(&self, point: &[i64]) -> S {
        let pt: Vec<S> = point.iter().map(|&v| S::from_i64(v)).collect();
        self.eval(&pt)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), f(v));
        }
        out
    }

    /// Places a univariate polynomial into variable `site` of an `nvars`-variate ring.
    pub fn embed(&self, site: usize, nvars: usize) -> Self {
        assert_eq!(self.nvars, 1, "embed expects a univariate polynomial");
        assert!(site < nvars);
        let mut out = Self::zero(nvars);
        for (e, v) in &self.terms {
            let mut e2 = vec![0; nvars];
            e2[site] = e[0];
            out.add_term(e2, v.clone());
        }
        out
    }

    /// Relabels variables: variable `i` of `self` becomes variable `map[i]` of an `nvars`-variate ring.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (e, v) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            out.add_term(e2, v.clone());
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|v| v.modulus()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Self {
        self.scale(&-S::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ex, Exact};

    fn x() -> Poly<Exact> {
        Poly::var(2, 0)
    }
    fn y() -> Poly<Exact> {
        Poly::var(2, 1)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = x() + y();
        let q = x() - y();
        let r = p.clone() * q;
        assert_eq!(r, x() * x() - y() * y());
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn derivatives() {
        let p = x() * x() * y();
        assert_eq!(p.derivative(0), (x() * y()).scale(&ex(2, 1)));
        assert_eq!(p.partial(&[2, 1]), Poly::constant(2, ex(2, 1)));
        assert!(p.derivative_n(1, 2).is_zero());
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = x() * x() * x() + y().scale(&ex(3, 2));
        let s = p.shift_var(0, &ex(-2, 1));
        for a in -3..4 {
            for b in -2..3 {
                assert_eq!(s.eval_i64(&[a, b]), p.eval_i64(&[a - 2, b]));
            }
        }
    }

    #[test]
    fn embed_and_degree() {
        let p = Poly::<Exact>::from_coeffs(vec![ex(1, 1), ex(0, 1), ex(5, 1)]);
        assert_eq!(p.degree(), Some(2));
        let e = p.embed(2, 3);
        assert_eq!(e.coeff(&[0, 0, 2]), ex(5, 1));
        assert_eq!(Poly::<Exact>::zero(1).degree(), None);
    }
}
