//! Identity checks on representations: brackets, star-adjointness, Casimir
//! scalar, and the c-rescaling equivalence of π_{k,c}.

use num_complex::Complex64;
use num_traits::{One, Signed};

use super::{tensor_op, CarrierFn, CarrierOp, Carrier, Representation, Weight};
use crate::algebra::{casimir, AlgebraElement, StarName, TensorElement};
use crate::error::{Error, Result};
use crate::quad::truncated_line;
use crate::report::{Measure, Mode, Residuals, VerificationReport};
use crate::scalar::{rat_to_f64, Rational, Scalar};

pub(crate) fn mode<S: Scalar>() -> Mode {
    if S::EXACT {
        Mode::Exact
    } else {
        Mode::Float
    }
}

/// One residual per compared vector; the relative residual divides by the
/// larger of the two sup-norms.
pub(crate) fn compare_fns<S: Scalar>(res: &mut Residuals, lhs: &CarrierFn<S>, rhs: &CarrierFn<S>) -> Result<()> {
    let mut abs = 0.0f64;
    for (a, b) in lhs.zip_entries(rhs)? {
        abs = abs.max((a - b).modulus());
    }
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1e-300);
    res.push_raw(abs, abs / scale);
    Ok(())
}

fn report<S: Scalar>(res: &Residuals, case: String, float_tol: f64) -> VerificationReport {
    if S::EXACT {
        res.report(case, Mode::Exact, Measure::Abs, 0.0)
    } else {
        res.report(case, Mode::Float, Measure::Rel, float_tol)
    }
}

impl<S: Scalar, O: CarrierOp<S>> Representation<S, O> {
    /// ρ([X,Y]) against ρ(X)ρ(Y) − ρ(Y)ρ(X) on interior basis functions, for
    /// every pair of generators.
    pub fn bracket_residual(&self) -> Result<VerificationReport> {
        self.bracket_residual_signed(false)
    }

    /// ρ([X,Y]) against ρ(Y)ρ(X) − ρ(X)ρ(Y): zero for an anti-homomorphism,
    /// which is what an action on the second slot of a kernel must be.
    pub fn antibracket_residual(&self) -> Result<VerificationReport> {
        self.bracket_residual_signed(true)
    }

    fn bracket_residual_signed(&self, anti: bool) -> Result<VerificationReport> {
        let gens = self.algebra.generators();
        let mut res = Residuals::new();
        for (i, &x) in gens.iter().enumerate() {
            for &y in &gens[i + 1..] {
                let br = AlgebraElement::<S>::gen(x).commutator(&AlgebraElement::gen(y))?;
                let lhs = self.element_op(&br)?;
                let (ox, oy) = (self.image(x)?, self.image(y)?);
                let rhs = if anti { oy.commutator(ox) } else { ox.commutator(oy) };
                let reach = lhs.reach(&self.carrier).max(ox.reach(&self.carrier) + oy.reach(&self.carrier));
                let basis = self.carrier.interior_basis::<S>(1, reach);
                if basis.is_empty() {
                    return Err(Error::Margin(format!("no interior basis for reach {reach}")));
                }
                for f in &basis {
                    compare_fns(&mut res, &lhs.apply_fn(&self.carrier, f)?, &rhs.apply_fn(&self.carrier, f)?)?;
                }
            }
        }
        let what = if anti { "anti-bracket" } else { "bracket" };
        Ok(report::<S>(&res, format!("{what} {}", self.label), 1e-12))
    }

    /// ρ(Ω) against `value`·Id on interior basis functions.
    pub fn casimir_residual(&self, value: &S) -> Result<VerificationReport> {
        let om = casimir().map_coeffs(|c| S::from_exact(c));
        let op = self.element_op(&om)?;
        let basis = self.carrier.interior_basis::<S>(1, op.reach(&self.carrier));
        let mut res = Residuals::new();
        for f in &basis {
            compare_fns(&mut res, &op.apply_fn(&self.carrier, f)?, &f.scale(value))?;
        }
        Ok(report::<S>(&res, format!("casimir {}", self.label), 1e-12))
    }

    /// max |⟨ρ(X)f, g⟩_w − ⟨f, ρ(X*)g⟩_w| over generators and interior basis
    /// pairs. Discrete weights enter without their normalizing constant.
    pub fn star_adjointness_residual(&self, star: StarName) -> Result<VerificationReport> {
        let weight = self
            .weight
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} carries no weight", self.label)))?;
        let ip = InnerProduct::new(&self.carrier, weight)?;
        let mut res = Residuals::new();
        for &x in &self.algebra.generators() {
            let xs = AlgebraElement::<S>::gen(x).star(star)?;
            let (ox, oxs) = (self.image(x)?, self.element_op(&xs)?);
            let reach = ox.reach(&self.carrier).max(oxs.reach(&self.carrier));
            let basis = self.carrier.interior_basis::<S>(1, reach);
            for f in &basis {
                let xf = ox.apply_fn(&self.carrier, f)?;
                for g in &basis {
                    let lhs = ip.eval(&xf, g)?;
                    let rhs = ip.eval(f, &oxs.apply_fn(&self.carrier, g)?)?;
                    res.push_scalar(&lhs, &rhs);
                }
            }
        }
        let tol = if ip.quadrature { 1e-9 } else { 1e-12 };
        let case = format!("star-adjointness {} ({star:?})", self.label);
        Ok(if S::EXACT && !ip.quadrature {
            res.report(case, Mode::Exact, Measure::Abs, 0.0)
        } else {
            res.report(case, mode::<S>(), Measure::Rel, tol)
        })
    }
}

/// ⟨f, g⟩ = Σ w(n) f(n) conj g(n), or Σ p_i conj(q_j) μ_{i+j} for polynomials.
struct InnerProduct<'a, S> {
    weight: &'a Weight<S>,
    moments: Vec<S>,
    quadrature: bool,
}

impl<'a, S: Scalar> InnerProduct<'a, S> {
    fn new(carrier: &Carrier, weight: &'a Weight<S>) -> Result<Self> {
        let (moments, quadrature) = match (carrier, weight) {
            (Carrier::TruncatedSeq { .. }, w) if w.is_discrete() => (Vec::new(), false),
            (Carrier::Poly { maxdeg }, Weight::Gaussian { .. } | Weight::Gamma { .. }) => {
                ((0..=2 * maxdeg + 2).map(|m| weight.moment(m)).collect::<Result<Vec<_>>>()?, false)
            }
            (Carrier::ExpPoly { phi, maxdeg }, Weight::MeixnerPollaczek { .. }) => {
                // |e^{xφ}|² = e^{2xφ} multiplies the density
                let line = truncated_line(80.0, 320, 20)?;
                let mut ms = Vec::new();
                for m in 0..=2 * maxdeg + 2 {
                    let v = line.integrate(|x| weight.density(x) * (2.0 * phi * x).exp() * x.powi(m as i32));
                    if !v.is_finite() {
                        return Err(Error::Quadrature(format!("moment {m} diverged")));
                    }
                    ms.push(S::try_from_c64(Complex64::new(v, 0.0)).ok_or_else(|| {
                        Error::FloatOnly("Meixner-Pollaczek inner product".into())
                    })?);
                }
                (ms, true)
            }
            _ => return Err(Error::WrongCarrier("weight does not match the carrier".into())),
        };
        Ok(InnerProduct { weight, moments, quadrature })
    }

    fn eval(&self, f: &CarrierFn<S>, g: &CarrierFn<S>) -> Result<S> {
        match (f, g) {
            (CarrierFn::Seq(a), CarrierFn::Seq(b)) => {
                let mut acc = S::zero();
                for (n, fv) in a {
                    if let Some(gv) = b.get(n) {
                        acc = acc + self.weight.unnormalized(n[0] as u32)? * fv.clone() * gv.conj();
                    }
                }
                Ok(acc)
            }
            (CarrierFn::Poly(p), CarrierFn::Poly(q)) => {
                let mut acc = S::zero();
                for (e1, a) in p.terms() {
                    for (e2, b) in q.terms() {
                        let m = (e1[0] + e2[0]) as usize;
                        let mu = self.moments.get(m).ok_or_else(|| Error::Index(format!("moment {m}")))?;
                        acc = acc + a.clone() * b.conj() * mu.clone();
                    }
                }
                Ok(acc)
            }
            _ => Err(Error::WrongCarrier("inner product of mismatched functions".into())),
        }
    }
}

/// How the unitary I of the c-rescaling remark scales δ_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalePower {
    /// (c1/c2)^{n/2}, the correct map.
    Half,
    /// (c1/c2)^n, a negative control.
    Full,
}

/// q·√d with d > 0; enough to multiply matrix entries of π_{k,c} exactly.
#[derive(Clone, Debug)]
struct Surd {
    q: Rational,
    d: Rational,
}

impl Surd {
    fn rational(q: Rational) -> Self {
        Surd { q, d: Rational::one() }
    }

    fn mul(&self, o: &Surd) -> Surd {
        Surd { q: &self.q * &o.q, d: &self.d * &o.d }
    }

    fn same(&self, o: &Surd) -> bool {
        let a = &self.q * &self.q * &self.d;
        let b = &o.q * &o.q * &o.d;
        a == b && self.q.signum() == o.q.signum()
    }

    fn to_f64(&self) -> f64 {
        rat_to_f64(&self.q) * rat_to_f64(&self.d).sqrt()
    }
}

/// Entries (row n, column m, value) of π_{k,c}(X) for X = H, E, F on rows
/// 0..rows.
fn pi_entries(k: &Rational, c: &Rational, rows: i64) -> [Vec<(i64, i64, Surd)>; 3] {
    let two = Rational::from_integer(2.into());
    let mut h = Vec::new();
    let mut e = Vec::new();
    let mut f = Vec::new();
    for n in 0..rows {
        let nr = Rational::from_integer(n.into());
        h.push((n, n, Surd::rational(&two * (k + &nr))));
        if n > 0 {
            e.push((n, n - 1, Surd { q: nr.clone(), d: c.recip() }));
        }
        f.push((n, n + 1, Surd { q: -(&two * k + &nr), d: c.clone() }));
    }
    [h, e, f]
}

/// Residual of I∘π_{k,c1}(X) − π_{k,c2}(X)∘I on rows n < trunc, exact.
/// The operator of `t` on the tensor product of `reps`, against zero on
/// interior basis functions.
pub fn tensor_zero_residual<S: Scalar, O: CarrierOp<S>>(
    reps: &[&Representation<S, O>],
    t: &TensorElement<S>,
) -> Result<VerificationReport> {
    let op = tensor_op(reps, t)?;
    let first = reps.first().ok_or_else(|| Error::FactorMismatch { expected: t.nfactors(), got: 0 })?;
    let carrier = &first.carrier;
    let basis = carrier.interior_basis::<S>(reps.len(), op.reach(carrier));
    if basis.is_empty() {
        return Err(Error::Margin(format!("no interior basis for reach {}", op.reach(carrier))));
    }
    let mut res = Residuals::new();
    for f in &basis {
        let out = op.apply_fn(carrier, f)?;
        compare_fns(&mut res, &out, &f.scale(&S::zero()))?;
    }
    let label = reps.iter().map(|r| r.label.as_str()).collect::<Vec<_>>().join(" x ");
    Ok(report::<S>(&res, format!("zero operator on {label}"), 1e-12))
}

pub fn scale_equivalence_check(k: &Rational, c1: &Rational, c2: &Rational, trunc: usize) -> Result<VerificationReport> {
    scale_equivalence_check_with(k, c1, c2, trunc, ScalePower::Half)
}

pub fn scale_equivalence_check_with(
    k: &Rational,
    c1: &Rational,
    c2: &Rational,
    trunc: usize,
    power: ScalePower,
) -> Result<VerificationReport> {
    for (name, c) in [("c1", c1), ("c2", c2)] {
        if !(c.is_positive() && c < &Rational::one()) {
            return Err(Error::Domain(format!("{name} = {c} must lie in (0, 1)")));
        }
    }
    if trunc < 2 {
        return Err(Error::Domain("truncation must be at least 2".into()));
    }
    let ratio = c1 / c2;
    let scale = |n: i64| {
        let e = match power {
            ScalePower::Half => n,
            ScalePower::Full => 2 * n,
        };
        Surd { q: Rational::one(), d: num_traits::pow(ratio.clone(), e as usize) }
    };
    let rows = trunc as i64;
    let m1 = pi_entries(k, c1, rows);
    let m2 = pi_entries(k, c2, rows);
    let mut res = Residuals::new();
    for (a, b) in m1.iter().zip(&m2) {
        for ((n, m, v1), (n2, m2_, v2)) in a.iter().zip(b) {
            debug_assert_eq!((n, m), (n2, m2_));
            let lhs = scale(*n).mul(v1);
            let rhs = v2.mul(&scale(*m));
            if lhs.same(&rhs) {
                res.push_raw(0.0, 0.0);
            } else {
                let (l, r) = (lhs.to_f64(), rhs.to_f64());
                let d = (l - r).abs().max(f64::MIN_POSITIVE);
                res.push_raw(d, d / l.abs().max(r.abs()).max(1e-300));
            }
        }
    }
    let label = match power {
        ScalePower::Half => "",
        ScalePower::Full => " [exponent n]",
    };
    Ok(res.report(format!("scale-equivalence k={k} c1={c1} c2={c2}{label}"), Mode::Exact, Measure::Abs, 0.0))
}
