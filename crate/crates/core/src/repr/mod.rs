//! Concrete representations: ρ_c and σ_c of the Heisenberg algebra, π_k, σ_k
//! and ρ_k of su(1,1), acting on truncated sequences, polynomials and
//! exponential-polynomials e^{xφ}p(x).

mod checks;
pub mod weight;

pub(crate) use checks::compare_fns;
pub use checks::{scale_equivalence_check, scale_equivalence_check_with, tensor_zero_residual, ScalePower};
pub use weight::Weight;

use num_complex::Complex64;

use crate::algebra::{Algebra, AlgebraElement, AlgebraMorphism, Gen, StarName, TensorElement};
use crate::error::{Error, Result};
use crate::ops::{box_points, DiffOp, LinearOp, ShiftOp, SparseFn, Step};
use crate::poly::Poly;
use crate::scalar::{rational_sqrt, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    RhoC,
    SigmaC,
    PiK,
    SigmaK,
    /// ρ_k with the printed sign of F, for which [ρ(E), ρ(F)] = −ρ(H).
    RhoK,
    /// ρ_k with F f(x) = (k+ix) f(x−i), a genuine representation.
    RhoKCorrected,
}

/// Function space a representation acts on, per site.
#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    TruncatedSeq { n_max: usize },
    Poly { maxdeg: u32 },
    /// e^{φ(x_1+…+x_N)} p(x), stored through p.
    ExpPoly { phi: f64, maxdeg: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum CarrierFn<S> {
    Seq(SparseFn<S>),
    Poly(Poly<S>),
}

impl<S: Scalar> CarrierFn<S> {
    pub fn delta(n: Vec<i64>) -> Self {
        let mut f = SparseFn::new();
        f.insert(n, S::one());
        CarrierFn::Seq(f)
    }

    pub fn scale(&self, c: &S) -> Self {
        match self {
            CarrierFn::Seq(f) => {
                let mut out = SparseFn::new();
                for (k, v) in f {
                    let w = v.clone() * c.clone();
                    if !w.is_zero() {
                        out.insert(k.clone(), w);
                    }
                }
                CarrierFn::Seq(out)
            }
            CarrierFn::Poly(p) => CarrierFn::Poly(p.scale(c)),
        }
    }

    /// Pairs of corresponding entries (values or coefficients) of two
    /// functions of the same kind; missing entries are zero.
    pub fn zip_entries(&self, other: &Self) -> Result<Vec<(S, S)>> {
        match (self, other) {
            (CarrierFn::Seq(a), CarrierFn::Seq(b)) => {
                let keys: std::collections::BTreeSet<&Vec<i64>> = a.keys().chain(b.keys()).collect();
                Ok(keys
                    .into_iter()
                    .map(|k| (a.get(k).cloned().unwrap_or_else(S::zero), b.get(k).cloned().unwrap_or_else(S::zero)))
                    .collect())
            }
            (CarrierFn::Poly(a), CarrierFn::Poly(b)) => {
                let keys: std::collections::BTreeSet<&Vec<u32>> =
                    a.terms().map(|(e, _)| e).chain(b.terms().map(|(e, _)| e)).collect();
                Ok(keys.into_iter().map(|e| (a.coeff(e), b.coeff(e))).collect())
            }
            _ => Err(Error::WrongCarrier("comparing a sequence with a polynomial".into())),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            CarrierFn::Seq(f) => f.values().map(|v| v.modulus()).fold(0.0, f64::max),
            CarrierFn::Poly(p) => p.max_abs_coeff(),
        }
    }
}

impl Carrier {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Carrier::TruncatedSeq { .. } => "truncated-seq",
            Carrier::Poly { .. } => "poly",
            Carrier::ExpPoly { .. } => "exp-poly",
        }
    }

    /// Basis functions whose images under operators of the given reach stay
    /// inside the truncation: δ_n with n_i ≤ N_max − reach, or monomials with
    /// every exponent ≤ maxdeg − reach.
    pub fn interior_basis<S: Scalar>(&self, nsites: usize, reach: u32) -> Vec<CarrierFn<S>> {
        match self {
            Carrier::TruncatedSeq { n_max } => {
                let Some(top) = n_max.checked_sub(reach as usize) else { return Vec::new() };
                box_points(&vec![top; nsites]).into_iter().map(CarrierFn::delta).collect()
            }
            Carrier::Poly { maxdeg } | Carrier::ExpPoly { maxdeg, .. } => {
                let Some(top) = maxdeg.checked_sub(reach) else { return Vec::new() };
                box_points(&vec![top as usize; nsites])
                    .into_iter()
                    .map(|e| CarrierFn::Poly(Poly::monomial(e.iter().map(|&v| v as u32).collect(), S::one())))
                    .collect()
            }
        }
    }

    fn check_degree<S: Scalar>(&self, p: Poly<S>) -> Result<CarrierFn<S>> {
        let maxdeg = match self {
            Carrier::Poly { maxdeg } | Carrier::ExpPoly { maxdeg, .. } => *maxdeg,
            Carrier::TruncatedSeq { .. } => unreachable!("degree check on a sequence carrier"),
        };
        for i in 0..p.nvars() {
            if let Some(d) = p.degree_in(i) {
                if d > maxdeg {
                    return Err(Error::Margin(format!("degree {d} in variable {i} exceeds maxdeg {maxdeg}")));
                }
            }
        }
        Ok(CarrierFn::Poly(p))
    }
}

/// Operators that know how to act on a carrier.
pub trait CarrierOp<S: Scalar>: LinearOp<S> {
    fn apply_fn(&self, carrier: &Carrier, f: &CarrierFn<S>) -> Result<CarrierFn<S>>;
    /// How far one application moves support: index steps on sequences,
    /// degree increase on polynomials.
    fn reach(&self, carrier: &Carrier) -> u32;
}

impl<S: Scalar> CarrierOp<S> for ShiftOp<S> {
    fn apply_fn(&self, carrier: &Carrier, f: &CarrierFn<S>) -> Result<CarrierFn<S>> {
        match (carrier, f) {
            (Carrier::TruncatedSeq { n_max }, CarrierFn::Seq(v)) => {
                if self.step() != Step::Unit && self.shift_radius() > 0 {
                    return Err(Error::WrongCarrier("complex shifts do not act on sequences".into()));
                }
                Ok(CarrierFn::Seq(self.apply_truncated(&vec![*n_max; self.nvars()], v)?))
            }
            (Carrier::Poly { .. }, CarrierFn::Poly(p)) => carrier.check_degree(self.apply_poly(p)),
            (Carrier::ExpPoly { phi, .. }, CarrierFn::Poly(p)) => {
                let h: Complex64 = self.step().as_scalar();
                let mut err = None;
                let q = self.apply_poly_twisted(p, |s| {
                    let total: i32 = s.iter().sum();
                    let z = (h * (*phi * total as f64)).exp();
                    S::try_from_c64(z).unwrap_or_else(|| {
                        err = Some(Error::FloatOnly("exponential-polynomial carrier".into()));
                        S::zero()
                    })
                });
                // a zero shift needs no twist and works in exact mode too
                if let Some(e) = err {
                    if self.terms().any(|(s, _)| s.iter().any(|&v| v != 0)) {
                        return Err(e);
                    }
                }
                carrier.check_degree(q)
            }
            _ => Err(Error::WrongCarrier(format!("shift operator on {} with mismatched function", carrier.kind_name()))),
        }
    }

    fn reach(&self, carrier: &Carrier) -> u32 {
        match carrier {
            Carrier::TruncatedSeq { .. } => self.site_radius(),
            _ => self.terms().map(|(_, c)| c.degree().unwrap_or(0)).max().unwrap_or(0),
        }
    }
}

impl<S: Scalar> CarrierOp<S> for DiffOp<S> {
    fn apply_fn(&self, carrier: &Carrier, f: &CarrierFn<S>) -> Result<CarrierFn<S>> {
        match (carrier, f) {
            (Carrier::Poly { .. }, CarrierFn::Poly(p)) => carrier.check_degree(self.apply_poly(p)),
            _ => Err(Error::WrongCarrier(format!("differential operator on {}", carrier.kind_name()))),
        }
    }

    fn reach(&self, _: &Carrier) -> u32 {
        self.degree_raise().max(0) as u32
    }
}

#[derive(Clone, Debug)]
pub struct Representation<S, O> {
    pub kind: RepKind,
    pub algebra: Algebra,
    pub carrier: Carrier,
    pub label: String,
    images: [O; 3],
    pub weight: Option<Weight<S>>,
    /// Star structure for which the representation is a *-representation
    /// with respect to `weight`.
    pub star: Option<StarName>,
}

pub type ShiftRep<S> = Representation<S, ShiftOp<S>>;
pub type DiffRep<S> = Representation<S, DiffOp<S>>;

impl<S: Scalar, O: CarrierOp<S>> Representation<S, O> {
    pub fn image(&self, g: Gen) -> Result<&O> {
        let pos = self
            .algebra
            .generators()
            .iter()
            .position(|&x| x == g)
            .ok_or(Error::MixedAlgebra)?;
        Ok(&self.images[pos])
    }

    /// A representation with one generator image replaced; used to build
    /// deliberately corrupted negative controls.
    pub fn with_image(&self, g: Gen, op: O) -> Result<Self> {
        let pos = self.algebra.generators().iter().position(|&x| x == g).ok_or(Error::MixedAlgebra)?;
        let mut out = self.clone();
        out.images[pos] = op;
        out.label = format!("{} [modified {}]", self.label, g.symbol());
        Ok(out)
    }

    /// ρ(g_1 g_2 … g_m) = ρ(g_1)∘ρ(g_2)∘…∘ρ(g_m).
    pub fn word_op(&self, w: &[Gen]) -> Result<O> {
        let mut op = O::identity(1);
        for &g in w {
            op = op.compose(self.image(g)?);
        }
        Ok(op)
    }

    pub fn element_op(&self, x: &AlgebraElement<S>) -> Result<O> {
        if x.algebra() != self.algebra {
            return Err(Error::MixedAlgebra);
        }
        let mut out = O::zero(1);
        for (w, c) in x.terms() {
            out = out.add(&self.word_op(w)?.scale(c));
        }
        Ok(out)
    }

    pub fn apply_element(&self, x: &AlgebraElement<S>, f: &CarrierFn<S>) -> Result<CarrierFn<S>> {
        self.element_op(x)?.apply_fn(&self.carrier, f)
    }

    pub fn is_exact(&self) -> bool {
        S::EXACT
    }

    /// ρ∘m: generator g acts as ρ(m(g)).
    pub fn precompose(&self, m: &AlgebraMorphism<S>, star: Option<StarName>) -> Result<Self> {
        if m.algebra != self.algebra {
            return Err(Error::MixedAlgebra);
        }
        let gens = self.algebra.generators();
        let images = [
            self.element_op(m.image(gens[0]))?,
            self.element_op(m.image(gens[1]))?,
            self.element_op(m.image(gens[2]))?,
        ];
        Ok(Representation {
            kind: self.kind,
            algebra: self.algebra,
            carrier: self.carrier.clone(),
            label: format!("{} o {}", self.label, m.name),
            images,
            weight: self.weight.clone(),
            star,
        })
    }
}

/// (ρ_1 ⊗ … ⊗ ρ_N)(y) as an operator in N variables.
pub fn tensor_op<S: Scalar, O: CarrierOp<S>>(reps: &[&Representation<S, O>], y: &TensorElement<S>) -> Result<O> {
    let n = reps.len();
    if y.nfactors() != n {
        return Err(Error::FactorMismatch { expected: n, got: y.nfactors() });
    }
    if reps.iter().any(|r| r.algebra != y.algebra()) {
        return Err(Error::MixedAlgebra);
    }
    let mut out = O::zero(n);
    for (words, c) in y.terms() {
        let mut term = O::identity(n);
        for (i, w) in words.iter().enumerate() {
            if !w.is_empty() {
                term = term.compose(&reps[i].word_op(w)?.embed(i, n));
            }
        }
        out = out.add(&term.scale(c));
    }
    Ok(out)
}

pub fn apply_tensor<S: Scalar, O: CarrierOp<S>>(
    reps: &[&Representation<S, O>],
    y: &TensorElement<S>,
    f: &CarrierFn<S>,
) -> Result<CarrierFn<S>> {
    let op = tensor_op(reps, y)?;
    let carrier = &reps.first().ok_or(Error::FactorMismatch { expected: 1, got: 0 })?.carrier;
    op.apply_fn(carrier, f)
}

fn positive<S: Scalar>(name: &str, v: &S) -> Result<()> {
    let z = v.to_c64();
    if z.im != 0.0 || !(z.re > 0.0) {
        return Err(Error::Domain(format!("{name} must be a positive real, got {z}")));
    }
    Ok(())
}

/// √c in the scalar field: exact only for rational squares.
pub fn sqrt_param<S: Scalar>(c: &Rational) -> Result<S> {
    if S::EXACT {
        let s = rational_sqrt(c).ok_or_else(|| {
            Error::Domain(format!("c = {c} has no rational square root; exact mode needs one"))
        })?;
        Ok(S::from_rational(&s))
    } else {
        let v = crate::scalar::rat_to_f64(c);
        if !(v >= 0.0) {
            return Err(Error::Domain(format!("c = {c} must be non-negative")));
        }
        Ok(S::try_from_c64(Complex64::new(v.sqrt(), 0.0)).expect("float mode"))
    }
}

fn n_poly<S: Scalar>() -> Poly<S> {
    Poly::var(1, 0)
}

fn cst<S: Scalar>(c: S) -> Poly<S> {
    Poly::constant(1, c)
}

fn seq_carrier(n_max: usize) -> Result<Carrier> {
    if n_max == 0 {
        return Err(Error::Domain("truncation must be at least 1".into()));
    }
    Ok(Carrier::TruncatedSeq { n_max })
}

/// ρ_c: a ↦ n f(n−1), a† ↦ c f(n+1), Z ↦ c, with f(−1) = 0.
pub fn rho_c<S: Scalar>(c: S, n_max: usize) -> Result<ShiftRep<S>> {
    positive("c", &c)?;
    let u = Step::Unit;
    let images = [
        ShiftOp::term(1, u, vec![-1], n_poly()),
        ShiftOp::term(1, u, vec![1], cst(c.clone())),
        ShiftOp::multiplication(cst(c.clone()), u),
    ];
    Ok(Representation {
        kind: RepKind::RhoC,
        algebra: Algebra::Heisenberg,
        carrier: seq_carrier(n_max)?,
        label: format!("rho_c(c={})", c.to_c64().re),
        images,
        weight: Some(Weight::Poisson { c }),
        star: Some(StarName::Heisenberg),
    })
}

/// σ_c: a ↦ x − c∂, a† ↦ c∂, Z ↦ c on polynomials.
pub fn sigma_c<S: Scalar>(c: S, maxdeg: u32) -> Result<DiffRep<S>> {
    positive("c", &c)?;
    let x = Poly::var(1, 0);
    let images = [
        DiffOp::multiplication(x).add(&DiffOp::term(1, vec![1], cst(-c.clone()))),
        DiffOp::term(1, vec![1], cst(c.clone())),
        DiffOp::multiplication(cst(c.clone())),
    ];
    Ok(Representation {
        kind: RepKind::SigmaC,
        algebra: Algebra::Heisenberg,
        carrier: Carrier::Poly { maxdeg },
        label: format!("sigma_c(c={})", c.to_c64().re),
        images,
        weight: Some(Weight::Gaussian { c }),
        star: Some(StarName::Heisenberg),
    })
}

fn pi_images<S: Scalar>(k: &S, s: &S) -> Result<[ShiftOp<S>; 3]> {
    let u = Step::Unit;
    let two = S::from_i64(2);
    let inv_s = s.try_inv().ok_or_else(|| Error::Domain("sqrt(c) must be nonzero".into()))?;
    Ok([
        ShiftOp::multiplication(n_poly().add_ref(&cst(k.clone())).scale(&two), u),
        ShiftOp::term(1, u, vec![-1], n_poly().scale(&inv_s)),
        ShiftOp::term(1, u, vec![1], n_poly().add_ref(&cst(two * k.clone())).scale(&-s.clone())),
    ])
}

/// π_{k,c}: H ↦ 2(k+n), E ↦ (n/√c) f(n−1), F ↦ −√c(2k+n) f(n+1), taking √c
/// directly. For c ≥ 1 the weight is dropped.
pub fn pi_k<S: Scalar>(k: S, sqrt_c: S, n_max: usize) -> Result<ShiftRep<S>> {
    positive("k", &k)?;
    positive("sqrt(c)", &sqrt_c)?;
    let c = sqrt_c.clone() * sqrt_c.clone();
    let weight = (c.to_c64().re < 1.0).then(|| Weight::NegBinomial { k: k.clone(), c: c.clone() });
    Ok(Representation {
        kind: RepKind::PiK,
        algebra: Algebra::Sl2,
        carrier: seq_carrier(n_max)?,
        label: format!("pi_k(k={}, c={})", k.to_c64().re, c.to_c64().re),
        images: pi_images(&k, &sqrt_c)?,
        star: weight.as_ref().map(|_| StarName::Su11),
        weight,
    })
}

/// The same action formulas at an arbitrary real k, e.g. k = −j/2 for the
/// exclusion process; no weight is attached.
pub fn pi_k_formal<S: Scalar>(k: S, sqrt_c: S, n_max: usize) -> Result<ShiftRep<S>> {
    positive("sqrt(c)", &sqrt_c)?;
    Ok(Representation {
        kind: RepKind::PiK,
        algebra: Algebra::Sl2,
        carrier: seq_carrier(n_max)?,
        label: format!("pi_k formal (k={})", k.to_c64().re),
        images: pi_images(&k, &sqrt_c)?,
        weight: None,
        star: None,
    })
}

/// σ_k on polynomials:
/// H ↦ −2x∂ − (2k − x), E ↦ −½ix, F ↦ −2ix∂² − 2i(2k − x)∂ + (i/2)(4k − x).
pub fn sigma_k<S: Scalar>(k: S, maxdeg: u32) -> Result<DiffRep<S>> {
    positive("k", &k)?;
    let i = S::imag_unit();
    let two = S::from_i64(2);
    let half = S::from_i64(1).div(&two).expect("2 is invertible");
    let x: Poly<S> = Poly::var(1, 0);
    let two_k = two.clone() * k.clone();
    let two_k_minus_x = cst(two_k.clone()).sub_ref(&x);
    let h = DiffOp::term(1, vec![1], x.scale(&-two.clone()))
        .add(&DiffOp::multiplication(two_k_minus_x.scale(&-S::one())));
    let e = DiffOp::multiplication(x.scale(&-(half.clone() * i.clone())));
    let f = DiffOp::term(1, vec![2], x.scale(&-(two.clone() * i.clone())))
        .add(&DiffOp::term(1, vec![1], two_k_minus_x.scale(&-(two.clone() * i.clone()))))
        .add(&DiffOp::multiplication(
            cst(two.clone() * two_k).sub_ref(&x).scale(&(half * i)),
        ));
    Ok(Representation {
        kind: RepKind::SigmaK,
        algebra: Algebra::Sl2,
        carrier: Carrier::Poly { maxdeg },
        label: format!("sigma_k(k={})", k.to_c64().re),
        images: [h, e, f],
        weight: Some(Weight::Gamma { k }),
        star: Some(StarName::Sl2Real),
    })
}

/// ρ_k on functions of a real variable with complex shifts:
/// H ↦ 2ix, E ↦ (k − ix) f(x+i), F ↦ ∓(k + ix) f(x−i), the upper sign
/// being the printed one (`corrected = false`).
pub fn rho_k<S: Scalar>(k: S, corrected: bool, carrier: Carrier) -> Result<ShiftRep<S>> {
    positive("k", &k)?;
    let weight = match &carrier {
        Carrier::ExpPoly { phi, .. } => {
            if !(*phi > 0.0 && *phi < std::f64::consts::PI) {
                return Err(Error::Domain(format!("phi must lie in (0, pi), got {phi}")));
            }
            Some(Weight::MeixnerPollaczek { k: k.to_c64().re, phi: *phi })
        }
        Carrier::Poly { .. } => None,
        Carrier::TruncatedSeq { .. } => {
            return Err(Error::WrongCarrier("rho_k acts on functions of a real variable".into()))
        }
    };
    let i = S::imag_unit();
    let st = Step::Imag;
    let x: Poly<S> = Poly::var(1, 0);
    let ix = x.scale(&i);
    let f_sign = if corrected { S::one() } else { -S::one() };
    let images = [
        ShiftOp::multiplication(ix.scale(&S::from_i64(2)), st),
        ShiftOp::term(1, st, vec![1], cst(k.clone()).sub_ref(&ix)),
        ShiftOp::term(1, st, vec![-1], cst(k.clone()).add_ref(&ix).scale(&f_sign)),
    ];
    Ok(Representation {
        kind: if corrected { RepKind::RhoKCorrected } else { RepKind::RhoK },
        algebra: Algebra::Sl2,
        carrier,
        label: format!("rho_k(k={}{})", k.to_c64().re, if corrected { ", corrected F" } else { "" }),
        images,
        weight,
        star: None,
    })
}

#[cfg(test)]
mod tests;
