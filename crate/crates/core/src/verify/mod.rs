//! Duality and intertwining residuals. A duality case pairs two generators
//! with a product kernel D(x, y) = Π_j K_j(x_j, y_j) and compares
//! [L₁D(·, y)](x) with [L₂D(x, ·)](y) over a grid; an intertwining case does
//! the same for single representation operators on a one-site kernel.

mod engine;
mod intertwine;
#[cfg(test)]
mod tests;

pub use intertwine::{
    intertwining_residual, IntertwiningCase, IntertwiningForm, IntertwiningKernel, INTERTWINING_CASES,
};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    charlier, eval_bessel, eval_exp_kernel, eval_mp, hermite_poly, krawtchouk, laguerre_poly, ExpForm,
};
use crate::ops::{box_points, DiffOp, ShiftOp};
use crate::poly::Poly;
use crate::processes::{
    build_generator, BepDrift, Family, GeneratorOp, HypVariant, ProcessSpec, Provenance, MARGIN,
};
use crate::report::{timed, Measure, Mode, Residuals, VerificationReport};
use crate::scalar::{rat, rat_to_f64, Exact, Float, Rational, Scalar};

use engine::DerivTable;

/// Tolerance of the floating plans, relative.
pub const FLOAT_TOL: f64 = 1e-9;
/// A perturbed case must miss by more than this.
pub const CONTROL_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Plan {
    /// Both slots discrete, values compared exactly.
    ExactDiscrete,
    /// Discrete first slot, polynomial second slot, coefficients compared exactly.
    ExactPolynomial,
    /// At least one slot analytic; analytic derivatives on a float grid.
    FloatAnalytic,
}

/// Product kernel with one parameter set per site.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    Charlier { c: Vec<Rational> },
    Hermite { c: Vec<Rational> },
    ExpKernel { c: Vec<f64>, form: ExpForm },
    Meixner { k: Vec<Rational>, c: Vec<Rational> },
    Krawtchouk { j: Vec<u32>, c: Vec<Rational> },
    Laguerre { k: Vec<Rational> },
    Bessel { k: Vec<f64> },
    MeixnerPollaczek { k: Vec<f64>, phi: f64 },
    /// D ≡ 1 on `sites` sites, in the shape of the given plan.
    Constant { sites: usize },
}

impl KernelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Charlier { .. } => "charlier",
            KernelSpec::Hermite { .. } => "hermite",
            KernelSpec::ExpKernel { .. } => "exp",
            KernelSpec::Meixner { .. } => "meixner",
            KernelSpec::Krawtchouk { .. } => "krawtchouk",
            KernelSpec::Laguerre { .. } => "laguerre",
            KernelSpec::Bessel { .. } => "bessel",
            KernelSpec::MeixnerPollaczek { .. } => "meixner-pollaczek",
            KernelSpec::Constant { .. } => "constant",
        }
    }

    pub fn sites(&self) -> usize {
        match self {
            KernelSpec::Charlier { c } | KernelSpec::Hermite { c } => c.len(),
            KernelSpec::ExpKernel { c, .. } => c.len(),
            KernelSpec::Meixner { k, .. } | KernelSpec::Laguerre { k } => k.len(),
            KernelSpec::Krawtchouk { j, .. } => j.len(),
            KernelSpec::Bessel { k } | KernelSpec::MeixnerPollaczek { k, .. } => k.len(),
            KernelSpec::Constant { sites } => *sites,
        }
    }

    /// The plan the kernel's slot shapes call for; `None` for the constant
    /// kernel, which fits any plan.
    pub fn natural_plan(&self) -> Option<Plan> {
        match self {
            KernelSpec::Charlier { .. } | KernelSpec::Meixner { .. } | KernelSpec::Krawtchouk { .. } => {
                Some(Plan::ExactDiscrete)
            }
            KernelSpec::Hermite { .. } | KernelSpec::Laguerre { .. } => Some(Plan::ExactPolynomial),
            KernelSpec::ExpKernel { .. } | KernelSpec::Bessel { .. } | KernelSpec::MeixnerPollaczek { .. } => {
                Some(Plan::FloatAnalytic)
            }
            KernelSpec::Constant { .. } => None,
        }
    }

    /// The first site's parameter moved by ½ (c or k); Krawtchouk moves c.
    pub fn perturbed(&self) -> KernelSpec {
        let half = rat(1, 2);
        let mut out = self.clone();
        match &mut out {
            KernelSpec::Charlier { c } | KernelSpec::Hermite { c } | KernelSpec::Krawtchouk { c, .. } => {
                c[0] = &c[0] + &half
            }
            KernelSpec::Meixner { k, .. } | KernelSpec::Laguerre { k } => k[0] = &k[0] + &half,
            KernelSpec::ExpKernel { c, .. } => c[0] += 0.5,
            KernelSpec::Bessel { k } | KernelSpec::MeixnerPollaczek { k, .. } => k[0] += 0.5,
            KernelSpec::Constant { .. } => {}
        }
        out
    }
}

/// Where the kernel is sampled. Discrete slots use every index ≤
/// `index_max` (SEP: every admissible state); continuous float slots use
/// `points` evenly spaced values per variable on [lo, hi].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub index_max: usize,
    pub points: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityCase {
    pub name: String,
    pub left: ProcessSpec,
    pub right: ProcessSpec,
    pub kernel: KernelSpec,
    pub plan: Plan,
    pub grid: Grid,
    /// Constant factor on the kernel.
    pub scale: Rational,
    /// The kernel is multiplied by λ^{Σn} in the discrete first slot.
    pub sigma_n_base: Rational,
    pub provenance: Provenance,
}

/// Parameters shared by the registered cases; each case reads the ones it
/// needs.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseParams {
    pub n_sites: usize,
    pub c: Rational,
    pub k: Vec<Rational>,
    pub j: Vec<u32>,
    pub phi: f64,
    pub trunc: usize,
    pub points: usize,
}

impl Default for CaseParams {
    fn default() -> Self {
        CaseParams {
            n_sites: 2,
            c: rat(3, 4),
            k: vec![rat(1, 2), rat(2, 1)],
            j: vec![3, 2],
            phi: std::f64::consts::FRAC_PI_3,
            trunc: 12,
            points: 25,
        }
    }
}

pub struct CaseInfo {
    pub name: &'static str,
    pub left: Family,
    pub right: Family,
    pub kernel: &'static str,
    pub anchor: &'static str,
}

pub const REGISTERED_CASES: [CaseInfo; 8] = [
    CaseInfo { name: "irw-charlier", left: Family::Irw, right: Family::Irw, kernel: "charlier", anchor: "IRW self-duality theorem" },
    CaseInfo { name: "irw-dif-hermite", left: Family::Irw, right: Family::Dif, kernel: "hermite", anchor: "IRW-DIF duality theorem" },
    CaseInfo { name: "dif-exp", left: Family::Dif, right: Family::Dif, kernel: "exp", anchor: "DIF self-duality theorem" },
    CaseInfo { name: "sip-meixner", left: Family::Sip, right: Family::Sip, kernel: "meixner", anchor: "SIP self-duality theorem" },
    CaseInfo { name: "sep-krawtchouk", left: Family::Sep, right: Family::Sep, kernel: "krawtchouk", anchor: "SEP self-duality remark" },
    CaseInfo { name: "sip-bep-laguerre", left: Family::Sip, right: Family::Bep, kernel: "laguerre", anchor: "SIP-BEP duality theorem" },
    CaseInfo { name: "bep-bessel", left: Family::Bep, right: Family::Bep, kernel: "bessel", anchor: "BEP self-duality theorem" },
    CaseInfo { name: "sip-hyp-mp", left: Family::Sip, right: Family::Hyp, kernel: "meixner-pollaczek", anchor: "hyperbolic SIP-HYP duality display" },
];

fn f64s(v: &[Rational]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

impl DualityCase {
    /// One of the eight registered cases built from `p`.
    pub fn registered(name: &str, p: &CaseParams) -> Result<Self> {
        let n = p.n_sites;
        let t = p.trunc;
        if t < MARGIN {
            return Err(Error::Margin(format!("truncation {t} is below the margin {MARGIN}")));
        }
        let discrete = Grid { index_max: t - MARGIN, points: p.points, lo: 0.0, hi: 0.0 };
        let on = |lo: f64, hi: f64| Grid { index_max: t - MARGIN, points: p.points, lo, hi };
        let maxdeg = 2 * t as u32;
        let ks = || -> Result<Vec<Rational>> {
            if p.k.len() != n {
                return Err(Error::Domain(format!("k has {} entries for {n} sites", p.k.len())));
            }
            Ok(p.k.clone())
        };
        let (left, right, kernel, grid) = match name {
            "irw-charlier" => {
                let s = ProcessSpec::irw(n, p.c.clone(), t);
                (s.clone(), s, KernelSpec::Charlier { c: vec![p.c.clone(); n] }, discrete)
            }
            "irw-dif-hermite" => (
                ProcessSpec::irw(n, p.c.clone(), t),
                ProcessSpec::dif(n, p.c.clone(), maxdeg),
                KernelSpec::Hermite { c: vec![p.c.clone(); n] },
                discrete,
            ),
            "dif-exp" => {
                let s = ProcessSpec::dif(n, p.c.clone(), 2);
                let c = vec![rat_to_f64(&p.c); n];
                (s.clone(), s, KernelSpec::ExpKernel { c, form: ExpForm::Corrected }, on(-5.0, 5.0))
            }
            "sip-meixner" => {
                let s = ProcessSpec::sip(ks()?, t);
                (s.clone(), s, KernelSpec::Meixner { k: ks()?, c: vec![p.c.clone(); n] }, discrete)
            }
            "sep-krawtchouk" => {
                if p.j.len() != n {
                    return Err(Error::Domain(format!("j has {} entries for {n} sites", p.j.len())));
                }
                let s = ProcessSpec::sep(p.j.clone());
                let top = *p.j.iter().max().unwrap_or(&0) as usize;
                let g = Grid { index_max: top, ..discrete };
                (s.clone(), s, KernelSpec::Krawtchouk { j: p.j.clone(), c: vec![p.c.clone(); n] }, g)
            }
            "sip-bep-laguerre" => (
                ProcessSpec::sip(ks()?, t),
                ProcessSpec::bep(ks()?, maxdeg),
                KernelSpec::Laguerre { k: ks()? },
                discrete,
            ),
            "bep-bessel" => {
                let s = ProcessSpec::bep(ks()?, 2);
                (s.clone(), s, KernelSpec::Bessel { k: f64s(&ks()?) }, on(0.1, 10.0))
            }
            "sip-hyp-mp" => (
                ProcessSpec::sip(ks()?, t),
                ProcessSpec::hyp(ks()?, p.phi, 2),
                KernelSpec::MeixnerPollaczek { k: f64s(&ks()?), phi: p.phi },
                on(-5.0, 5.0),
            ),
            other => return Err(Error::Unsupported(format!("no registered duality case '{other}'"))),
        };
        let plan = kernel.natural_plan().expect("registered kernels have a plan");
        Ok(DualityCase {
            name: name.to_string(),
            left,
            right,
            kernel,
            plan,
            grid,
            scale: Rational::one(),
            sigma_n_base: Rational::one(),
            provenance: Provenance::DirectFormula,
        })
    }

    /// The same case with the first site's kernel parameter moved.
    pub fn negative_control(&self) -> Self {
        DualityCase { name: format!("{}/perturbed", self.name), kernel: self.kernel.perturbed(), ..self.clone() }
    }

    /// The verbatim form of a corrected ingredient, where the case has one:
    /// the literal BEP drift, the printed hyperbolic operator, the printed
    /// exponential kernel.
    pub fn literal_variant(&self) -> Option<Self> {
        let mut out = self.clone();
        out.name = format!("{}/literal", self.name);
        match (&self.kernel, self.right.family) {
            (KernelSpec::ExpKernel { c, .. }, _) => {
                out.kernel = KernelSpec::ExpKernel { c: c.clone(), form: ExpForm::Printed };
            }
            (_, Family::Bep) => {
                out.right = self.right.clone().with_drift(BepDrift::Literal);
                if self.left.family == Family::Bep {
                    out.left = self.left.clone().with_drift(BepDrift::Literal);
                }
            }
            (_, Family::Hyp) => out.right = self.right.clone().with_hyp_variant(HypVariant::Printed),
            _ => return None,
        }
        Some(out)
    }

    pub fn with_scale(mut self, s: Rational) -> Self {
        self.scale = s;
        self
    }

    pub fn with_sigma_n_base(mut self, l: Rational) -> Self {
        self.sigma_n_base = l;
        self
    }

    fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        let n = self.left.n_sites;
        if self.right.n_sites != n {
            return Err(Error::FactorMismatch { expected: n, got: self.right.n_sites });
        }
        if self.kernel.sites() != n {
            return Err(Error::FactorMismatch { expected: n, got: self.kernel.sites() });
        }
        if let Some(p) = self.kernel.natural_plan() {
            if p != self.plan {
                return Err(Error::Unsupported(format!(
                    "plan {:?} does not fit the {} kernel (needs {p:?})",
                    self.plan,
                    self.kernel.name()
                )));
            }
        }
        if self.scale.is_zero() || self.sigma_n_base.is_zero() {
            return Err(Error::Domain("kernel factors must be nonzero".into()));
        }
        let slots = match self.plan {
            Plan::ExactDiscrete => (true, true),
            Plan::ExactPolynomial => (true, false),
            Plan::FloatAnalytic => (self.left.family.is_discrete(), self.right.family.is_discrete()),
        };
        if slots != (self.left.family.is_discrete(), self.right.family.is_discrete()) {
            return Err(Error::Unsupported(format!(
                "plan {:?} does not fit {} x {}",
                self.plan,
                self.left.family.name(),
                self.right.family.name()
            )));
        }
        if self.plan == Plan::FloatAnalytic && self.grid.points == 0 {
            return Err(Error::Domain("float grid needs at least one point".into()));
        }
        // discrete indices must keep the margin below every truncation
        for spec in [&self.left, &self.right] {
            if spec.family.is_discrete() && spec.family != Family::Sep {
                let t = spec.truncation.expect("validated");
                if self.grid.index_max + MARGIN > t {
                    return Err(Error::Margin(format!(
                        "grid index {} plus margin {MARGIN} exceeds truncation {t}",
                        self.grid.index_max
                    )));
                }
            }
        }
        Ok(())
    }

    fn left_points(&self) -> Vec<Vec<i64>> {
        lattice_points(&self.left, self.grid.index_max)
    }
}

fn lattice_points(spec: &ProcessSpec, index_max: usize) -> Vec<Vec<i64>> {
    if spec.family == Family::Sep {
        box_points(&spec.j.iter().map(|&v| v as usize).collect::<Vec<_>>())
    } else {
        box_points(&vec![index_max; spec.n_sites])
    }
}

fn shift_op<S: Scalar>(spec: &ProcessSpec, prov: Provenance) -> Result<ShiftOp<S>> {
    match build_generator::<S>(spec, prov)?.op {
        GeneratorOp::Shift(op) => Ok(op),
        GeneratorOp::Diff(_) => Err(Error::WrongCarrier(format!("{} is not a shift generator", spec.family.name()))),
    }
}

fn diff_op<S: Scalar>(spec: &ProcessSpec, prov: Provenance) -> Result<DiffOp<S>> {
    match build_generator::<S>(spec, prov)?.op {
        GeneratorOp::Diff(op) => Ok(op),
        GeneratorOp::Shift(_) => {
            Err(Error::WrongCarrier(format!("{} is not a differential generator", spec.family.name())))
        }
    }
}

/// Per-site exact values K_site(n, x) for n, x ≤ top; Krawtchouk stops at j.
fn discrete_tables(kernel: &KernelSpec, top: usize) -> Result<Vec<Vec<Vec<Exact>>>> {
    let n = kernel.sites();
    (0..n)
        .map(|s| {
            let size = match kernel {
                KernelSpec::Krawtchouk { j, .. } => j[s] as usize,
                _ => top,
            };
            (0..=size as u32)
                .map(|a| {
                    (0..=size as u32)
                        .map(|b| match kernel {
                            KernelSpec::Charlier { c } => charlier(a, b, &Exact::from_rational(&c[s])),
                            KernelSpec::Meixner { k, c } => {
                                crate::kernels::eval_meixner(a, b, &k[s], &c[s], crate::kernels::KernelMode::Bare)
                            }
                            KernelSpec::Krawtchouk { j, c } => krawtchouk(a, b, j[s], &Exact::from_rational(&c[s])),
                            KernelSpec::Constant { .. } => Ok(<Exact as Scalar>::one()),
                            other => Err(Error::Unsupported(format!("{} is not a discrete kernel", other.name()))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Per-site polynomials K_site(n, ·) for n ≤ top, embedded in `nv` variables.
fn poly_tables(kernel: &KernelSpec, top: usize) -> Result<Vec<Vec<Poly<Exact>>>> {
    let n = kernel.sites();
    (0..n)
        .map(|s| {
            (0..=top as u32)
                .map(|a| {
                    let p = match kernel {
                        KernelSpec::Hermite { c } => hermite_poly(a, &Exact::from_rational(&c[s]))?,
                        KernelSpec::Laguerre { k } => laguerre_poly(a, &Exact::from_rational(&k[s]))?,
                        KernelSpec::Constant { .. } => Poly::one(1),
                        other => return Err(Error::Unsupported(format!("{} has no polynomial slot", other.name()))),
                    };
                    Ok(p.embed(s, n))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

fn exact_prefactor(case: &DualityCase, m: &[i64]) -> Exact {
    let total: i64 = m.iter().sum();
    let base = &case.sigma_n_base;
    let lam = if total >= 0 { base.pow(total as i32) } else { Rational::one() / base.pow((-total) as i32) };
    Exact::from_rational(&(case.scale.clone() * lam))
}

fn run_exact_discrete(case: &DualityCase) -> Result<Residuals> {
    let a: ShiftOp<Exact> = shift_op(&case.left, case.provenance)?;
    let b: ShiftOp<Exact> = shift_op(&case.right, case.provenance)?;
    let left = case.left_points();
    let right = lattice_points(&case.right, case.grid.index_max);
    let top = case.grid.index_max + a.site_radius().max(b.site_radius()) as usize;
    let tabs = discrete_tables(&case.kernel, top)?;
    let kernel = |m: &[i64], x: &[i64]| -> Exact {
        let mut acc = exact_prefactor(case, m);
        for s in 0..m.len() {
            let (i, j) = (m[s] as usize, x[s] as usize);
            match tabs[s].get(i).and_then(|row| row.get(j)) {
                Some(v) => acc = acc * v.clone(),
                None => return <Exact as Scalar>::zero(),
            }
        }
        acc
    };
    Ok(engine::lattice_lattice(&a, &b, &kernel, &left, &right))
}

fn run_exact_polynomial(case: &DualityCase) -> Result<Residuals> {
    let a: ShiftOp<Exact> = shift_op(&case.left, case.provenance)?;
    let b: DiffOp<Exact> = diff_op(&case.right, case.provenance)?;
    let left = case.left_points();
    let top = case.grid.index_max + a.site_radius() as usize;
    let tabs = poly_tables(&case.kernel, top)?;
    let nv = case.left.n_sites;
    let kernel = |m: &[i64]| -> Poly<Exact> {
        let mut acc = Poly::constant(nv, exact_prefactor(case, m));
        for s in 0..m.len() {
            acc = acc.mul_ref(&tabs[s][m[s] as usize]);
        }
        acc
    };
    Ok(engine::lattice_poly(&a, &b, &kernel, &left))
}

fn float_points(nv: usize, points: usize) -> Vec<Vec<usize>> {
    box_points(&vec![points - 1; nv]).into_iter().map(|p| p.into_iter().map(|v| v as usize).collect()).collect()
}

fn run_float(case: &DualityCase) -> Result<Residuals> {
    let g = engine::linspace(case.grid.lo, case.grid.hi, case.grid.points);
    let nv = case.left.n_sites;
    let xs = float_points(nv, case.grid.points);
    let scale = rat_to_f64(&case.scale);
    match (&case.kernel, case.left.family.is_discrete()) {
        (KernelSpec::MeixnerPollaczek { .. } | KernelSpec::Constant { .. }, true) => {
            let a: ShiftOp<Float> = shift_op(&case.left, case.provenance)?;
            let b: ShiftOp<Float> = shift_op(&case.right, case.provenance)?;
            let m_top = case.grid.index_max + a.site_radius() as usize;
            let r = b.site_radius() as i32;
            // tab[site][m][a][s + r] = K_site(m, g[a] + i s)
            let tab = (0..nv)
                .map(|site| {
                    (0..=m_top as u32)
                        .map(|m| {
                            g.iter()
                                .map(|&x| {
                                    (-r..=r)
                                        .map(|s| match &case.kernel {
                                            KernelSpec::MeixnerPollaczek { k, phi } => {
                                                eval_mp(m, Complex64::new(x, s as f64), k[site], *phi)
                                            }
                                            _ => Ok(Complex64::new(1.0, 0.0)),
                                        })
                                        .collect::<Result<Vec<_>>>()
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let lam = rat_to_f64(&case.sigma_n_base);
            let kernel = |site: usize, m: i64, a: usize, s: i32| -> Complex64 {
                let v = tab[site][m as usize][a][(s + r) as usize];
                let pre = if site == 0 { scale } else { 1.0 };
                v * pre * lam.powi(m as i32)
            };
            let left = case.left_points();
            Ok(engine::lattice_complex(&a, &b, &kernel, &g, &left, &xs))
        }
        (_, false) => {
            let a: DiffOp<Float> = diff_op(&case.left, case.provenance)?;
            let b: DiffOp<Float> = diff_op(&case.right, case.provenance)?;
            let kernel = case.kernel.clone();
            let eval = move |site: usize, x: f64, y: f64, dx: u32, dy: u32| -> Result<Complex64> {
                let pre = if site == 0 { scale } else { 1.0 };
                let v = match &kernel {
                    KernelSpec::ExpKernel { c, form } => eval_exp_kernel(x, y, c[site], dx, dy, *form)?,
                    KernelSpec::Bessel { k } => Complex64::new(eval_bessel(x, y, k[site], dx, dy)?, 0.0),
                    KernelSpec::Constant { .. } => {
                        Complex64::new(if dx == 0 && dy == 0 { 1.0 } else { 0.0 }, 0.0)
                    }
                    other => return Err(Error::Unsupported(format!("{} has no analytic slots", other.name()))),
                };
                Ok(v * pre)
            };
            let table = DerivTable::build(&g, nv, &eval)?;
            Ok(engine::analytic_analytic(&a, &b, &table, &g, &xs, &xs))
        }
        (k, _) => Err(Error::Unsupported(format!(
            "{} kernel with {} x {}",
            k.name(),
            case.left.family.name(),
            case.right.family.name()
        ))),
    }
}

/// [L₁D(·, y)](x) − [L₂D(x, ·)](y) over the case's grid.
pub fn duality_residual(case: &DualityCase) -> Result<VerificationReport> {
    timed(|| {
        case.validate()?;
        let (res, mode, measure, tol) = match case.plan {
            Plan::ExactDiscrete => (run_exact_discrete(case)?, Mode::Exact, Measure::Abs, 0.0),
            Plan::ExactPolynomial => (run_exact_polynomial(case)?, Mode::Exact, Measure::Abs, 0.0),
            Plan::FloatAnalytic => (run_float(case)?, Mode::Float, Measure::Rel, FLOAT_TOL),
        };
        let label = format!(
            "duality/{}/{} x {}/{}",
            case.name,
            case.left.label(),
            case.right.label(),
            case.kernel.name()
        );
        let mut r = res.report(label, mode, measure, tol);
        match &case.kernel {
            KernelSpec::ExpKernel { form: ExpForm::Corrected, .. } => {
                r = r.with_note("kernel exp((x^2+y^2)/(4c) - ixy/(2c)); the displayed -ixy/c is not dual for DIF")
            }
            KernelSpec::ExpKernel { form: ExpForm::Printed, .. } => r = r.with_note("displayed exponential kernel"),
            _ => {}
        }
        if case.right.family == Family::Hyp {
            r = r.with_note(match case.right.hyp_variant {
                HypVariant::Corrected => "hyperbolic generator rho'(Y) + 2k1k2 (= -1/2 the displayed operator)",
                HypVariant::Printed => "hyperbolic generator rho(Y) + k1k2 as displayed",
            });
        }
        if case.right.family == Family::Bep && case.right.bep_drift == BepDrift::Literal {
            r = r.with_note("literal BEP drift -2(k_i x_i - k_j x_j)");
        }
        Ok(r)
    })
}

/// The perturbed case, reported as passing when its residual exceeds
/// `CONTROL_FLOOR`.
pub fn negative_control_report(case: &DualityCase) -> Result<VerificationReport> {
    let ctl = case.negative_control();
    let inner = duality_residual(&ctl)?;
    let r = match inner.measure {
        Measure::Abs => inner.max_abs_residual,
        Measure::Rel => inner.max_rel_residual,
    };
    let mut out = VerificationReport::expect_failure(format!("negative-control/{}", case.name), &inner, CONTROL_FLOOR);
    out.notes.push(format!("first-site kernel parameter moved by 1/2; residual {r:e}"));
    Ok(out)
}

/// The registered case for every name, with `p`.
pub fn registered_cases(p: &CaseParams) -> Result<Vec<DualityCase>> {
    REGISTERED_CASES.iter().map(|c| DualityCase::registered(c.name, p)).collect()
}
