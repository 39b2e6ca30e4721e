//! Markov generators on N-site product carriers, built from the explicit
//! pair formulas and, independently, as Σ ρ(Y_{i,j}) through the
//! representations.

mod checks;
#[cfg(test)]
mod tests;

pub use checks::{conservation_residual, ctmc_residual, generator_equivalence, reversibility_residual};

use serde::{Deserialize, Serialize};

use crate::algebra::{y_heisenberg, y_su11, TensorElement};
use crate::error::{Error, Result};
use crate::ops::{DiffOp, LinearOp, ShiftOp, Step};
use crate::poly::Poly;
use crate::repr::{pi_k, pi_k_formal, rho_c, rho_k, sigma_c, sigma_k, tensor_op, Carrier, CarrierOp, Representation};
use crate::scalar::{rat_to_f64, rational_serde, Exact, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Irw,
    Dif,
    Sip,
    Sep,
    Bep,
    Hyp,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::Irw, Family::Dif, Family::Sip, Family::Sep, Family::Bep, Family::Hyp];

    pub fn name(self) -> &'static str {
        match self {
            Family::Irw => "irw",
            Family::Dif => "dif",
            Family::Sip => "sip",
            Family::Sep => "sep",
            Family::Bep => "bep",
            Family::Hyp => "hyp",
        }
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, Family::Irw | Family::Sip | Family::Sep)
    }

    pub fn is_diffusion(self) -> bool {
        matches!(self, Family::Dif | Family::Bep)
    }
}

/// Pair drift of the energy process.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BepDrift {
    /// −2(k_j x_i − k_i x_j)(∂_i − ∂_j), what σ_k(Y_{i,j}) + 2k_ik_j produces.
    #[default]
    Derived,
    /// −2(k_i x_i − k_j x_j)(∂_i − ∂_j) as displayed with the generator; it
    /// agrees with the derived form only when k_i = k_j.
    Literal,
}

/// Which version of the hyperbolic difference operator is built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypVariant {
    /// Direct: −½ × the displayed operator. Algebraic: ρ'⊗ρ'(Y) + 2k_ik_j
    /// with the sign-corrected ρ'. These agree, and this is the operator
    /// dual to the inclusion process.
    #[default]
    Corrected,
    /// Direct: the displayed operator. Algebraic: ρ_k⊗ρ_k(Y) + k_ik_j with
    /// the printed ρ_k. They do not agree.
    Printed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub family: Family,
    pub n_sites: usize,
    /// Scale of IRW and DIF; for SIP the weight parameter of the
    /// reversibility check.
    #[serde(default, with = "rational_serde::option", skip_serializing_if = "Option::is_none")]
    pub c: Option<Rational>,
    #[serde(default, with = "rational_serde::vec", skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub j: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    /// Per-site N_max of the truncated sequence carrier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Per-variable degree bound of the polynomial carrier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maxdeg: Option<u32>,
    #[serde(default)]
    pub bep_drift: BepDrift,
    #[serde(default)]
    pub hyp_variant: HypVariant,
}

/// Shift-radius margin kept free at the top of a truncation.
pub const MARGIN: usize = 2;

impl ProcessSpec {
    fn base(family: Family, n_sites: usize) -> Self {
        ProcessSpec {
            family,
            n_sites,
            c: None,
            k: Vec::new(),
            j: Vec::new(),
            phi: None,
            truncation: None,
            maxdeg: None,
            bep_drift: BepDrift::Derived,
            hyp_variant: HypVariant::Corrected,
        }
    }

    pub fn irw(n_sites: usize, c: Rational, truncation: usize) -> Self {
        ProcessSpec { c: Some(c), truncation: Some(truncation), ..Self::base(Family::Irw, n_sites) }
    }

    pub fn dif(n_sites: usize, c: Rational, maxdeg: u32) -> Self {
        ProcessSpec { c: Some(c), maxdeg: Some(maxdeg), ..Self::base(Family::Dif, n_sites) }
    }

    pub fn sip(k: Vec<Rational>, truncation: usize) -> Self {
        ProcessSpec { truncation: Some(truncation), ..Self::base(Family::Sip, k.len()) }.with_k(k)
    }

    pub fn sep(j: Vec<u32>) -> Self {
        let top = j.iter().copied().max().unwrap_or(0) as usize;
        ProcessSpec { truncation: Some(top), ..Self::base(Family::Sep, j.len()) }.with_j(j)
    }

    pub fn bep(k: Vec<Rational>, maxdeg: u32) -> Self {
        ProcessSpec { maxdeg: Some(maxdeg), ..Self::base(Family::Bep, k.len()) }.with_k(k)
    }

    pub fn hyp(k: Vec<Rational>, phi: f64, maxdeg: u32) -> Self {
        ProcessSpec { phi: Some(phi), maxdeg: Some(maxdeg), ..Self::base(Family::Hyp, k.len()) }.with_k(k)
    }

    fn with_k(mut self, k: Vec<Rational>) -> Self {
        self.k = k;
        self
    }

    fn with_j(mut self, j: Vec<u32>) -> Self {
        self.j = j;
        self
    }

    pub fn with_c(mut self, c: Rational) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_drift(mut self, d: BepDrift) -> Self {
        self.bep_drift = d;
        self
    }

    pub fn with_hyp_variant(mut self, v: HypVariant) -> Self {
        self.hyp_variant = v;
        self
    }

    pub fn label(&self) -> String {
        let mut s = format!("{}(N={}", self.family.name(), self.n_sites);
        if let Some(c) = &self.c {
            s += &format!(", c={c}");
        }
        if !self.k.is_empty() {
            let ks: Vec<String> = self.k.iter().map(|q| q.to_string()).collect();
            s += &format!(", k=({})", ks.join(","));
        }
        if !self.j.is_empty() {
            let js: Vec<String> = self.j.iter().map(|q| q.to_string()).collect();
            s += &format!(", j=({})", js.join(","));
        }
        if let Some(p) = self.phi {
            s += &format!(", phi={p:.6}");
        }
        if self.family == Family::Bep && self.bep_drift == BepDrift::Literal {
            s += ", literal drift";
        }
        if self.family == Family::Hyp && self.hyp_variant == HypVariant::Printed {
            s += ", printed";
        }
        s + ")"
    }

    pub fn c_value(&self) -> Result<&Rational> {
        self.c.as_ref().ok_or_else(|| Error::Domain(format!("{} needs the parameter c", self.family.name())))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if n < 2 {
            return Err(Error::Domain(format!("need at least 2 sites, got {n}")));
        }
        let pos = |name: &str, q: &Rational| {
            if rat_to_f64(q) > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive, got {q}")))
            }
        };
        match self.family {
            Family::Irw | Family::Dif => pos("c", self.c_value()?)?,
            Family::Sip | Family::Bep | Family::Hyp => {
                if self.k.len() != n {
                    return Err(Error::Domain(format!("k has {} entries for {n} sites", self.k.len())));
                }
                for q in &self.k {
                    pos("k", q)?;
                }
                if let Some(c) = &self.c {
                    pos("c", c)?;
                }
            }
            Family::Sep => {
                if self.j.len() != n {
                    return Err(Error::Domain(format!("j has {} entries for {n} sites", self.j.len())));
                }
                if self.j.iter().any(|&v| v == 0) {
                    return Err(Error::Domain("j must be positive".into()));
                }
            }
        }
        if self.family == Family::Hyp {
            let phi = self.phi.ok_or_else(|| Error::Domain("hyp needs phi".into()))?;
            if !(phi > 0.0 && phi < std::f64::consts::PI) {
                return Err(Error::Domain(format!("phi must lie in (0, pi), got {phi}")));
            }
        }
        if self.family.is_discrete() {
            let t = self.truncation.ok_or_else(|| Error::Domain("discrete process needs a truncation".into()))?;
            if self.family == Family::Sep {
                let top = *self.j.iter().max().expect("validated") as usize;
                if t < top {
                    return Err(Error::Margin(format!("truncation {t} is below the largest cap {top}")));
                }
            } else if t < MARGIN + 1 {
                return Err(Error::Margin(format!("truncation {t} leaves no interior with margin {MARGIN}")));
            }
        } else if self.maxdeg.is_none() {
            return Err(Error::Domain(format!("{} needs maxdeg", self.family.name())));
        }
        Ok(())
    }

    /// Carrier of one site. The hyperbolic operator moves x_i by ±i with
    /// zero total shift, so e^{φΣx} commutes with it and it acts on the
    /// polynomial part alone.
    pub fn carrier(&self) -> Result<Carrier> {
        self.validate()?;
        Ok(match self.family {
            Family::Irw | Family::Sip | Family::Sep => Carrier::TruncatedSeq { n_max: self.truncation.expect("validated") },
            Family::Dif | Family::Bep | Family::Hyp => Carrier::Poly { maxdeg: self.maxdeg.expect("validated") },
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n_sites;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    DirectFormula,
    Algebraic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorOp<S> {
    Shift(ShiftOp<S>),
    Diff(DiffOp<S>),
}

impl<S: Scalar> GeneratorOp<S> {
    pub fn sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (GeneratorOp::Shift(a), GeneratorOp::Shift(b)) => Ok(GeneratorOp::Shift(a.sub(b))),
            (GeneratorOp::Diff(a), GeneratorOp::Diff(b)) => Ok(GeneratorOp::Diff(a.sub(b))),
            _ => Err(Error::WrongCarrier("difference of a shift and a differential operator".into())),
        }
    }

    pub fn as_shift(&self) -> Option<&ShiftOp<S>> {
        match self {
            GeneratorOp::Shift(s) => Some(s),
            GeneratorOp::Diff(_) => None,
        }
    }

    pub fn as_diff(&self) -> Option<&DiffOp<S>> {
        match self {
            GeneratorOp::Diff(d) => Some(d),
            GeneratorOp::Shift(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MarkovGenerator<S> {
    pub spec: ProcessSpec,
    pub provenance: Provenance,
    pub op: GeneratorOp<S>,
    pub carrier: Carrier,
}

impl<S: Scalar> MarkovGenerator<S> {
    pub fn apply(&self, f: &crate::repr::CarrierFn<S>) -> Result<crate::repr::CarrierFn<S>> {
        match &self.op {
            GeneratorOp::Shift(s) => match (&self.carrier, f) {
                // exact on N^d; the truncation only fixes the interior
                (Carrier::TruncatedSeq { .. }, crate::repr::CarrierFn::Seq(v)) => {
                    Ok(crate::repr::CarrierFn::Seq(s.apply_sparse(v)))
                }
                _ => s.apply_fn(&self.carrier, f),
            },
            GeneratorOp::Diff(d) => d.apply_fn(&self.carrier, f),
        }
    }

    /// Off-diagonal jump rates out of a lattice state: (target, rate).
    pub fn rates(&self, state: &[i64]) -> Result<Vec<(Vec<i64>, S)>> {
        let op = self.op.as_shift().ok_or_else(|| Error::WrongCarrier("rates of a diffusion".into()))?;
        if op.step() != Step::Unit {
            return Err(Error::WrongCarrier("rates need lattice shifts".into()));
        }
        let pt: Vec<S> = state.iter().map(|&v| S::from_i64(v)).collect();
        let mut out = Vec::new();
        for (s, c) in op.terms() {
            if s.iter().all(|&v| v == 0) {
                continue;
            }
            let r = c.eval(&pt);
            if r.is_zero() {
                continue;
            }
            let target: Vec<i64> = state.iter().zip(s).map(|(&a, &b)| a + b as i64).collect();
            out.push((target, r));
        }
        Ok(out)
    }
}

fn coeff<S: Scalar>(q: &Rational) -> S {
    S::from_rational(q)
}

fn var<S: Scalar>(n: usize, i: usize) -> Poly<S> {
    Poly::var(n, i)
}

fn cst<S: Scalar>(n: usize, c: S) -> Poly<S> {
    Poly::constant(n, c)
}

/// r_out (T^{e_j − e_i} − 1) + r_in (T^{e_i − e_j} − 1).
fn pair_jumps<S: Scalar>(n: usize, i: usize, j: usize, step: Step, r_out: Poly<S>, r_in: Poly<S>) -> ShiftOp<S> {
    let mut fwd = vec![0; n];
    fwd[i] = -1;
    fwd[j] = 1;
    let back: Vec<i32> = fwd.iter().map(|v| -v).collect();
    let mut op = ShiftOp::new(n, step);
    op.add_term(fwd, r_out.clone());
    op.add_term(back, r_in.clone());
    op.add_term(vec![0; n], r_out.add_ref(&r_in).scale(&-S::one()));
    op
}

/// ∂_i − ∂_j.
fn d_pair<S: Scalar>(n: usize, i: usize, j: usize) -> DiffOp<S> {
    DiffOp::partial(n, i).sub(&DiffOp::partial(n, j))
}

fn diffusion_pair<S: Scalar>(n: usize, i: usize, j: usize, diff_coeff: Poly<S>, drift: Poly<S>) -> DiffOp<S> {
    let d = d_pair::<S>(n, i, j);
    DiffOp::multiplication(diff_coeff)
        .compose(&d.compose(&d))
        .add(&DiffOp::multiplication(drift).compose(&d))
}

fn k_at<S: Scalar>(spec: &ProcessSpec, i: usize) -> S {
    coeff(&spec.k[i])
}

/// The generator from its explicit pair formula.
pub fn build_generator_direct<S: Scalar>(spec: &ProcessSpec) -> Result<MarkovGenerator<S>> {
    let carrier = spec.carrier()?;
    let n = spec.n_sites;
    let two = S::from_i64(2);
    let op = match spec.family {
        Family::Irw | Family::Sip | Family::Sep => {
            let mut op = ShiftOp::new(n, Step::Unit);
            for (i, j) in spec.pairs() {
                let (ni, nj) = (var::<S>(n, i), var::<S>(n, j));
                let (r_out, r_in) = match spec.family {
                    Family::Irw => (ni, nj),
                    Family::Sip => {
                        let ki: S = k_at(spec, i);
                        let kj: S = k_at(spec, j);
                        (
                            ni.mul_ref(&nj.add_ref(&cst(n, two.clone() * kj))),
                            nj.mul_ref(&ni.add_ref(&cst(n, two.clone() * ki))),
                        )
                    }
                    _ => {
                        let ji = S::from_i64(spec.j[i] as i64);
                        let jj = S::from_i64(spec.j[j] as i64);
                        (ni.mul_ref(&cst(n, jj).sub_ref(&nj)), nj.mul_ref(&cst(n, ji).sub_ref(&ni)))
                    }
                };
                op = op.add(&pair_jumps(n, i, j, Step::Unit, r_out, r_in));
            }
            GeneratorOp::Shift(op)
        }
        Family::Dif => {
            let c: S = coeff(spec.c_value()?);
            let mut op = DiffOp::new(n);
            for (i, j) in spec.pairs() {
                let drift = var::<S>(n, i).sub_ref(&var(n, j)).scale(&-S::one());
                op = op.add(&diffusion_pair(n, i, j, cst(n, c.clone()), drift));
            }
            GeneratorOp::Diff(op)
        }
        Family::Bep => {
            let mut op = DiffOp::new(n);
            for (i, j) in spec.pairs() {
                let (xi, xj) = (var::<S>(n, i), var::<S>(n, j));
                let (ki, kj): (S, S) = (k_at(spec, i), k_at(spec, j));
                let inner = match spec.bep_drift {
                    BepDrift::Derived => xi.scale(&kj).sub_ref(&xj.scale(&ki)),
                    BepDrift::Literal => xi.scale(&ki).sub_ref(&xj.scale(&kj)),
                };
                op = op.add(&diffusion_pair(n, i, j, xi.mul_ref(&xj), inner.scale(&-two.clone())));
            }
            GeneratorOp::Diff(op)
        }
        Family::Hyp => {
            let im = S::imag_unit();
            let scale = match spec.hyp_variant {
                HypVariant::Printed => S::one(),
                HypVariant::Corrected => -S::one().div(&two).expect("2 is invertible"),
            };
            let mut op = ShiftOp::new(n, Step::Imag);
            for (i, j) in spec.pairs() {
                let (ki, kj): (S, S) = (k_at(spec, i), k_at(spec, j));
                let ixi = var::<S>(n, i).scale(&im);
                let ixj = var::<S>(n, j).scale(&im);
                // x_i + i, x_j − i is the shift (+1, −1) in units of i
                let r_fwd = cst(n, ki.clone()).sub_ref(&ixi).mul_ref(&cst(n, kj.clone()).add_ref(&ixj));
                let r_back = cst(n, ki).add_ref(&ixi).mul_ref(&cst(n, kj).sub_ref(&ixj));
                let f = two.clone() * scale.clone();
                // pair_jumps moves (−1, +1) with its first rate
                op = op.add(&pair_jumps(n, i, j, Step::Imag, r_back.scale(&f), r_fwd.scale(&f)));
            }
            GeneratorOp::Shift(op)
        }
    };
    Ok(MarkovGenerator { spec: spec.clone(), provenance: Provenance::DirectFormula, op, carrier })
}

fn y_for<S: Scalar>(family: Family) -> TensorElement<S> {
    let y: TensorElement<Exact> = match family {
        Family::Irw | Family::Dif => y_heisenberg(),
        _ => y_su11(),
    };
    y.map_coeffs(|v| S::from_exact(v))
}

fn assemble<S: Scalar, O: CarrierOp<S>>(
    spec: &ProcessSpec,
    reps: &[Representation<S, O>],
    pair_scalar: impl Fn(usize, usize) -> S,
    overall: S,
) -> Result<O> {
    let n = spec.n_sites;
    let y = y_for::<S>(spec.family);
    let refs: Vec<&Representation<S, O>> = reps.iter().collect();
    let mut out = O::zero(n);
    for (i, j) in spec.pairs() {
        let yij = y.embed_pair(i + 1, j + 1, n)?;
        out = out.add(&tensor_op(&refs, &yij)?);
        out = out.add(&O::scalar(n, pair_scalar(i, j)));
    }
    Ok(out.scale(&overall))
}

/// Σ_{i<j} ρ(Y_{i,j}) plus the scalar shifts, through the representations.
pub fn build_generator_algebraic<S: Scalar>(spec: &ProcessSpec) -> Result<MarkovGenerator<S>> {
    let carrier = spec.carrier()?;
    let n = spec.n_sites;
    let two = S::from_i64(2);
    let zero = |_: usize, _: usize| S::zero();
    let op = match spec.family {
        Family::Irw => {
            let c: S = coeff(spec.c_value()?);
            let t = spec.truncation.expect("validated");
            let reps = (0..n).map(|_| rho_c(c.clone(), t)).collect::<Result<Vec<_>>>()?;
            let inv = c.try_inv().expect("c > 0");
            GeneratorOp::Shift(assemble(spec, &reps, zero, inv)?)
        }
        Family::Dif => {
            let c: S = coeff(spec.c_value()?);
            let d = spec.maxdeg.expect("validated");
            let reps = (0..n).map(|_| sigma_c(c.clone(), d)).collect::<Result<Vec<_>>>()?;
            let inv = c.try_inv().expect("c > 0");
            GeneratorOp::Diff(assemble(spec, &reps, zero, inv)?)
        }
        Family::Sip | Family::Sep => {
            let t = spec.truncation.expect("validated");
            // √c cancels in every E⊗F and F⊗E term of Y; take √c = 1
            let ks: Vec<S> = match spec.family {
                Family::Sip => spec.k.iter().map(coeff).collect(),
                _ => spec.j.iter().map(|&v| S::from_i64(-(v as i64)).div(&two).expect("2 is invertible")).collect(),
            };
            let reps = ks
                .iter()
                .map(|k| if spec.family == Family::Sip { pi_k(k.clone(), S::one(), t) } else { pi_k_formal(k.clone(), S::one(), t) })
                .collect::<Result<Vec<_>>>()?;
            let shift = |i: usize, j: usize| two.clone() * ks[i].clone() * ks[j].clone();
            // at k = −j/2 the inclusion generator is minus the exclusion one
            let sign = if spec.family == Family::Sip { S::one() } else { -S::one() };
            GeneratorOp::Shift(assemble(spec, &reps, shift, sign)?)
        }
        Family::Bep => {
            let d = spec.maxdeg.expect("validated");
            let ks: Vec<S> = spec.k.iter().map(coeff).collect();
            let reps = ks.iter().map(|k| sigma_k(k.clone(), d)).collect::<Result<Vec<_>>>()?;
            let shift = |i: usize, j: usize| two.clone() * ks[i].clone() * ks[j].clone();
            GeneratorOp::Diff(assemble(spec, &reps, shift, S::one())?)
        }
        Family::Hyp => {
            let d = spec.maxdeg.expect("validated");
            let ks: Vec<S> = spec.k.iter().map(coeff).collect();
            let corrected = spec.hyp_variant == HypVariant::Corrected;
            let reps = ks
                .iter()
                .map(|k| rho_k(k.clone(), corrected, Carrier::Poly { maxdeg: d }))
                .collect::<Result<Vec<_>>>()?;
            let factor = if corrected { two.clone() } else { S::one() };
            let shift = |i: usize, j: usize| factor.clone() * ks[i].clone() * ks[j].clone();
            GeneratorOp::Shift(assemble(spec, &reps, shift, S::one())?)
        }
    };
    Ok(MarkovGenerator { spec: spec.clone(), provenance: Provenance::Algebraic, op, carrier })
}

pub fn build_generator<S: Scalar>(spec: &ProcessSpec, provenance: Provenance) -> Result<MarkovGenerator<S>> {
    match provenance {
        Provenance::DirectFormula => build_generator_direct(spec),
        Provenance::Algebraic => build_generator_algebraic(spec),
    }
}
