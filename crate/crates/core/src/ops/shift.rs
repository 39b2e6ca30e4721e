use std::collections::BTreeMap;

use num_complex::Complex64;

use super::LinearOp;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Lattice step of the shift: `T^s f(v) = f(v + s)` or `f(v + i s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Unit,
    Imag,
}

impl Step {
    pub fn as_scalar<S: Scalar>(self) -> S {
        match self {
            Step::Unit => S::one(),
            Step::Imag => S::imag_unit(),
        }
    }
}

/// Finitely supported function on the lattice N^d, keyed by index vector.
pub type SparseFn<S> = BTreeMap<Vec<i64>, S>;

/// `sum_s c_s(v) T^s` with polynomial coefficients `c_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOp<S> {
    nvars: usize,
    step: Step,
    terms: BTreeMap<Vec<i32>, Poly<S>>,
}

impl<S: Scalar> ShiftOp<S> {
    pub fn new(nvars: usize, step: Step) -> Self {
        ShiftOp { nvars, step, terms: BTreeMap::new() }
    }

    pub fn with_step(mut self, step: Step) -> Self {
        self.step = step;
        self
    }

    pub fn step(&self) -> Step {
        self.step
    }

    /// Adds `coeff(v) * T^shift`.
    pub fn add_term(&mut self, shift: Vec<i32>, coeff: Poly<S>) {
        assert_eq!(shift.len(), self.nvars);
        assert_eq!(coeff.nvars(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&shift) {
            Some(prev) => prev.add_ref(&coeff),
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(shift, merged);
        }
    }

    pub fn term(nvars: usize, step: Step, shift: Vec<i32>, coeff: Poly<S>) -> Self {
        let mut op = Self::new(nvars, step);
        op.add_term(shift, coeff);
        op
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(coeff: Poly<S>, step: Step) -> Self {
        let n = coeff.nvars();
        Self::term(n, step, vec![0; n], coeff)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Poly<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, shift: &[i32]) -> Option<&Poly<S>> {
        self.terms.get(shift)
    }

    /// Largest l1-length of a shift carried by a term.
    pub fn shift_radius(&self) -> u32 {
        self.terms.keys().map(|s| s.iter().map(|v| v.unsigned_abs()).sum()).max().unwrap_or(0)
    }

    /// Largest shift along one coordinate.
    pub fn site_radius(&self) -> u32 {
        self.terms.keys().flat_map(|s| s.iter().map(|v| v.unsigned_abs())).max().unwrap_or(0)
    }

    /// `[L f](n) = sum_s c_s(n) f(n + s)` for `f` defined on N^d. Terms with a
    /// vanishing coefficient are skipped, and `f` is taken to vanish off N^d.
    pub fn apply_lattice(&self, point: &[i64], f: impl Fn(&[i64]) -> S) -> S {
        debug_assert_eq!(self.step, Step::Unit);
        let pt: Vec<S> = point.iter().map(|&v| S::from_i64(v)).collect();
        let mut acc = S::zero();
        let mut target = vec![0i64; self.nvars];
        for (s, c) in &self.terms {
            let cv = c.eval(&pt);
            if cv.is_zero() {
                continue;
            }
            let mut inside = true;
            for i in 0..self.nvars {
                target[i] = point[i] + s[i] as i64;
                inside &= target[i] >= 0;
            }
            if inside {
                acc = acc + cv * f(&target);
            }
        }
        acc
    }

    /// Pointwise application at a complex point, `f` evaluated at `v + s * step`.
    pub fn apply_complex(&self, point: &[Complex64], f: impl Fn(&[Complex64]) -> Complex64) -> Complex64 {
        let h: Complex64 = self.step.as_scalar();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut target = vec![Complex64::new(0.0, 0.0); self.nvars];
        for (s, c) in &self.terms {
            let cf = c.map_coeffs(|v| v.to_c64());
            let cv = cf.eval(point);
            if cv == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..self.nvars {
                target[i] = point[i] + h * s[i] as f64;
            }
            acc += cv * f(&target);
        }
        acc
    }

    /// Action on a polynomial in the shifted variables:
    /// `sum_s c_s(v) p(v + s * step)`.
    pub fn apply_poly(&self, p: &Poly<S>) -> Poly<S> {
        self.apply_poly_twisted(p, |_| S::one())
    }

    /// As [`apply_poly`](Self::apply_poly) with each term `s` further scaled
    /// by `twist(s)`; conjugation by an exponential prefactor takes this form.
    pub fn apply_poly_twisted(&self, p: &Poly<S>, mut twist: impl FnMut(&[i32]) -> S) -> Poly<S> {
        let h: S = self.step.as_scalar();
        let mut out = Poly::zero(self.nvars);
        for (s, c) in &self.terms {
            let mut q = p.clone();
            for (i, &si) in s.iter().enumerate() {
                if si != 0 {
                    q = q.shift_var(i, &(h.clone() * S::from_i64(si as i64)));
                }
            }
            out = out.add_ref(&c.mul_ref(&q).scale(&twist(s)));
        }
        out
    }

    /// Exact application to a finitely supported function on N^d. The result
    /// is the untruncated image, restricted to N^d.
    pub fn apply_sparse(&self, f: &SparseFn<S>) -> SparseFn<S> {
        debug_assert_eq!(self.step, Step::Unit);
        let mut out: SparseFn<S> = BTreeMap::new();
        for (m, fv) in f {
            for (s, c) in &self.terms {
                let n: Vec<i64> = m.iter().zip(s).map(|(&a, &b)| a - b as i64).collect();
                if n.iter().any(|&v| v < 0) {
                    continue;
                }
                let cv = c.eval_i64(&n);
                if cv.is_zero() {
                    continue;
                }
                let e = out.entry(n).or_insert_with(S::zero);
                *e = e.clone() + cv * fv.clone();
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Like [`apply_sparse`](Self::apply_sparse) but rejects any output that
    /// leaves the box `{0..=n_max[i]}`.
    pub fn apply_truncated(&self, n_max: &[usize], f: &SparseFn<S>) -> Result<SparseFn<S>> {
        let out = self.apply_sparse(f);
        for n in out.keys() {
            if n.iter().zip(n_max).any(|(&v, &m)| v > m as i64) {
                return Err(Error::Margin(format!(
                    "output index {n:?} leaves the truncation box {n_max:?}"
                )));
            }
        }
        Ok(out)
    }

    /// Sparse matrix on the truncated box: row `n` lists `(m, M[n][m])` with
    /// `[L f](n) = sum_m M[n][m] f(m)`. Rows whose stencil leaves the box
    /// are reported as a margin violation.
    pub fn to_matrix(&self, n_max: &[usize]) -> Result<BTreeMap<Vec<i64>, Vec<(Vec<i64>, S)>>> {
        let mut rows = BTreeMap::new();
        for n in box_points(n_max) {
            let pt: Vec<S> = n.iter().map(|&v| S::from_i64(v)).collect();
            let mut row = Vec::new();
            for (s, c) in &self.terms {
                let cv = c.eval(&pt);
                if cv.is_zero() {
                    continue;
                }
                let m: Vec<i64> = n.iter().zip(s).map(|(&a, &b)| a + b as i64).collect();
                if m.iter().any(|&v| v < 0) {
                    continue;
                }
                if m.iter().zip(n_max).any(|(&v, &mx)| v > mx as i64) {
                    return Err(Error::Margin(format!("row {n:?} reaches {m:?}")));
                }
                row.push((m, cv));
            }
            rows.insert(n, row);
        }
        Ok(rows)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ShiftOp<T> {
        let mut out = ShiftOp::new(self.nvars, self.step);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c.map_coeffs(f));
        }
        out
    }

    fn merged_step(&self, other: &Self) -> Step {
        let self_moves = self.terms.keys().any(|s| s.iter().any(|&v| v != 0));
        let other_moves = other.terms.keys().any(|s| s.iter().any(|&v| v != 0));
        match (self_moves, other_moves) {
            (true, true) => {
                assert_eq!(self.step, other.step, "composing shift operators with different steps");
                self.step
            }
            (true, false) => self.step,
            (false, true) => other.step,
            (false, false) => self.step,
        }
    }
}

/// All index vectors of the box `prod_i {0..=n_max[i]}` in lexicographic order.
pub fn box_points(n_max: &[usize]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &m in n_max {
        let mut next = Vec::with_capacity(out.len() * (m + 1));
        for p in &out {
            for v in 0..=m as i64 {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

impl<S: Scalar> LinearOp<S> for ShiftOp<S> {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn identity(nvars: usize) -> Self {
        Self::term(nvars, Step::Unit, vec![0; nvars], Poly::one(nvars))
    }

    fn zero(nvars: usize) -> Self {
        Self::new(nvars, Step::Unit)
    }

    fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let step = self.merged_step(other);
        let h: S = step.as_scalar();
        let mut out = Self::new(self.nvars, step);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let mut b_shifted = b.clone();
                for (i, &si) in s.iter().enumerate() {
                    if si != 0 {
                        b_shifted = b_shifted.shift_var(i, &(h.clone() * S::from_i64(si as i64)));
                    }
                }
                let st: Vec<i32> = s.iter().zip(t).map(|(x, y)| x + y).collect();
                out.add_term(st, a.mul_ref(&b_shifted));
            }
        }
        out
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        out.step = self.merged_step(other);
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    fn scale(&self, c: &S) -> Self {
        let mut out = Self::new(self.nvars, self.step);
        for (s, p) in &self.terms {
            out.add_term(s.clone(), p.scale(c));
        }
        out
    }

    fn embed(&self, site: usize, nsites: usize) -> Self {
        assert_eq!(self.nvars, 1);
        let mut out = Self::new(nsites, self.step);
        for (s, c) in &self.terms {
            let mut s2 = vec![0; nsites];
            s2[site] = s[0];
            out.add_term(s2, c.embed(site, nsites));
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ex, Exact};

    fn n() -> Poly<Exact> {
        Poly::var(1, 0)
    }

    /// f(n) -> n f(n-1)
    fn lower() -> ShiftOp<Exact> {
        ShiftOp::term(1, Step::Unit, vec![-1], n())
    }

    fn raise() -> ShiftOp<Exact> {
        ShiftOp::term(1, Step::Unit, vec![1], Poly::one(1))
    }

    #[test]
    fn composition_matches_pointwise() {
        let ab = lower().compose(&raise());
        let f = |p: &[i64]| ex(p[0] * p[0] + 1, 1);
        for m in 0..6 {
            let direct = lower().apply_lattice(&[m], |q| raise().apply_lattice(q, f));
            assert_eq!(ab.apply_lattice(&[m], f), direct);
        }
    }

    #[test]
    fn commutator_of_lowering_and_raising() {
        // [R, A] f(n) = f(n+1)(n+1) ... identity check against hand computation:
        // A R f(n) = n f(n), R A f(n) = (n+1) f(n)  =>  R A - A R = 1
        let c = raise().compose(&lower()).sub(&lower().compose(&raise()));
        assert_eq!(c, ShiftOp::identity(1));
    }

    #[test]
    fn sparse_application_and_margin() {
        let mut f = SparseFn::new();
        f.insert(vec![3], ex(1, 1));
        // lowering moves mass from index 3 to index 4 with weight 4
        let out = lower().apply_sparse(&f);
        assert_eq!(out.get(&vec![4]), Some(&ex(4, 1)));
        assert!(lower().apply_truncated(&[3], &f).is_err());
        assert!(lower().apply_truncated(&[4], &f).is_ok());
    }

    #[test]
    fn radius_and_embedding() {
        let op = lower().compose(&lower());
        assert_eq!(op.shift_radius(), 2);
        let e = raise().embed(1, 3);
        assert_eq!(e.nvars(), 3);
        assert!(e.coefficient(&[0, 1, 0]).is_some());
    }

    #[test]
    fn imaginary_step_composition() {
        // (x T^{i}) o (x T^{-i}) = x (x + i) T^0
        let x = Poly::<Exact>::var(1, 0);
        let a = ShiftOp::term(1, Step::Imag, vec![1], x.clone());
        let b = ShiftOp::term(1, Step::Imag, vec![-1], x.clone());
        let ab = a.compose(&b);
        let expect = x.mul_ref(&x.add_ref(&Poly::constant(1, Exact::imag_unit())));
        assert_eq!(ab.coefficient(&[0]), Some(&expect));
    }

    #[test]
    fn matrix_rows() {
        let rows = lower().to_matrix(&[3]).unwrap();
        assert_eq!(rows[&vec![3]], vec![(vec![2], ex(3, 1))]);
        let rows = raise().to_matrix(&[3]);
        assert!(rows.is_err());
        let d = ShiftOp::<Exact>::multiplication(n(), Step::Unit).to_matrix(&[3]).unwrap();
        assert_eq!(d[&vec![2]], vec![(vec![2], ex(2, 1))]);
    }
}
