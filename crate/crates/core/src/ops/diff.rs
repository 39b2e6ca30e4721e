use std::collections::BTreeMap;

use super::LinearOp;
use crate::poly::Poly;
use crate::scalar::{binomial, Scalar};

/// `sum_alpha p_alpha(x) d^alpha` with polynomial coefficients; `alpha` is a
/// multi-index of derivative orders.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Poly<S>>,
}

impl<S: Scalar> DiffOp<S> {
    pub fn new(nvars: usize) -> Self {
        DiffOp { nvars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, orders: Vec<u32>, coeff: Poly<S>) {
        assert_eq!(orders.len(), self.nvars);
        assert_eq!(coeff.nvars(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&orders) {
            Some(prev) => prev.add_ref(&coeff),
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(orders, merged);
        }
    }

    pub fn term(nvars: usize, orders: Vec<u32>, coeff: Poly<S>) -> Self {
        let mut op = Self::new(nvars);
        op.add_term(orders, coeff);
        op
    }

    pub fn multiplication(coeff: Poly<S>) -> Self {
        let n = coeff.nvars();
        Self::term(n, vec![0; n], coeff)
    }

    /// Partial derivative in variable `i`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut o = vec![0; nvars];
        o[i] = 1;
        Self::term(nvars, o, Poly::one(nvars))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Poly<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, orders: &[u32]) -> Option<&Poly<S>> {
        self.terms.get(orders)
    }

    /// Highest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|o| o.iter().sum()).max().unwrap_or(0)
    }

    /// Exact action on a polynomial.
    pub fn apply_poly(&self, f: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero(self.nvars);
        for (o, c) in &self.terms {
            let d = f.partial(o);
            if !d.is_zero() {
                out = out.add_ref(&c.mul_ref(&d));
            }
        }
        out
    }

    /// Pointwise action given the partial derivatives of `f` at `point`;
    /// `derivs(alpha)` must return `d^alpha f(point)`.
    pub fn apply_at(&self, point: &[S], derivs: impl Fn(&[u32]) -> S) -> S {
        let mut acc = S::zero();
        for (o, c) in &self.terms {
            let cv = c.eval(point);
            if cv.is_zero() {
                continue;
            }
            acc = acc + cv * derivs(o);
        }
        acc
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> DiffOp<T> {
        let mut out = DiffOp::new(self.nvars);
        for (o, c) in &self.terms {
            out.add_term(o.clone(), c.map_coeffs(f));
        }
        out
    }

    /// Largest amount by which the operator can raise total polynomial degree.
    pub fn degree_raise(&self) -> i64 {
        self.terms
            .iter()
            .map(|(o, c)| c.degree().unwrap_or(0) as i64 - o.iter().sum::<u32>() as i64)
            .max()
            .unwrap_or(0)
    }
}

impl<S: Scalar> LinearOp<S> for DiffOp<S> {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn identity(nvars: usize) -> Self {
        Self::term(nvars, vec![0; nvars], Poly::one(nvars))
    }

    fn zero(nvars: usize) -> Self {
        Self::new(nvars)
    }

    /// Leibniz rule: `d^alpha (q g) = sum_{gamma <= alpha} C(alpha, gamma) (d^gamma q) d^(alpha-gamma) g`.
    fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::new(self.nvars);
        for (alpha, p) in &self.terms {
            for gamma in sub_multi_indices(alpha) {
                let mut c = S::one();
                for (a, g) in alpha.iter().zip(&gamma) {
                    c = c * S::from_i64(binomial(*a, *g).try_into().expect("small binomial"));
                }
                for (beta, q) in &other.terms {
                    let dq = q.partial(&gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let order: Vec<u32> =
                        alpha.iter().zip(&gamma).zip(beta).map(|((a, g), b)| a - g + b).collect();
                    out.add_term(order, p.mul_ref(&dq).scale(&c));
                }
            }
        }
        out
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, c) in &other.terms {
            out.add_term(o.clone(), c.clone());
        }
        out
    }

    fn scale(&self, c: &S) -> Self {
        let mut out = Self::new(self.nvars);
        for (o, p) in &self.terms {
            out.add_term(o.clone(), p.scale(c));
        }
        out
    }

    fn embed(&self, site: usize, nsites: usize) -> Self {
        assert_eq!(self.nvars, 1);
        let mut out = Self::new(nsites);
        for (o, c) in &self.terms {
            let mut o2 = vec![0; nsites];
            o2[site] = o[0];
            out.add_term(o2, c.embed(site, nsites));
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn sub_multi_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &a in alpha {
        let mut next = Vec::new();
        for p in &out {
            for g in 0..=a {
                let mut q = p.clone();
                q.push(g);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ex, Exact};

    fn x() -> Poly<Exact> {
        Poly::var(1, 0)
    }

    #[test]
    fn derivative_and_multiplication_commutator() {
        let d = DiffOp::<Exact>::partial(1, 0);
        let m = DiffOp::multiplication(x());
        assert_eq!(d.commutator(&m), DiffOp::identity(1));
    }

    #[test]
    fn composition_agrees_with_sequential_application() {
        let a = DiffOp::term(1, vec![2], x().mul_ref(&x())).add(&DiffOp::multiplication(x()));
        let b = DiffOp::term(1, vec![1], x().scale(&ex(3, 2))).add(&DiffOp::partial(1, 0));
        let f = Poly::from_coeffs((0..7).map(|i| ex(i + 1, 3)).collect());
        let ab = a.compose(&b);
        assert_eq!(ab.apply_poly(&f), a.apply_poly(&b.apply_poly(&f)));
    }

    #[test]
    fn pointwise_matches_polynomial_action() {
        let a = DiffOp::term(1, vec![2], x()).add(&DiffOp::multiplication(Poly::constant(1, ex(2, 1))));
        let f = Poly::from_coeffs(vec![ex(1, 1), ex(2, 1), ex(0, 1), ex(-1, 1)]);
        let pt = [ex(5, 2)];
        let got = a.apply_at(&pt, |o| f.partial(o).eval(&pt));
        assert_eq!(got, a.apply_poly(&f).eval(&pt));
        assert_eq!(a.order(), 2);
        assert_eq!(a.degree_raise(), 0);
    }
}
