//! Linear operators with polynomial coefficients: difference/shift operators
//! acting on functions of integer (or complex-shifted) arguments, and
//! differential operators acting on polynomials or analytic functions.

mod diff;
mod shift;

pub use diff::DiffOp;
pub use shift::{box_points, ShiftOp, SparseFn, Step};

use std::fmt::Debug;

use crate::scalar::Scalar;

/// Operations shared by every operator realization. Composition reads right
/// to left: `a.compose(&b)` applies `b` first.
pub trait LinearOp<S: Scalar>: Clone + Debug + PartialEq + Send + Sync {
    fn nvars(&self) -> usize;
    fn identity(nvars: usize) -> Self;
    fn zero(nvars: usize) -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &S) -> Self;
    /// Lifts a single-variable operator to act on variable `site` of `nsites`.
    fn embed(&self, site: usize, nsites: usize) -> Self;
    fn is_zero(&self) -> bool;

    fn scalar(nvars: usize, c: S) -> Self {
        Self::identity(nvars).scale(&c)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }
}
