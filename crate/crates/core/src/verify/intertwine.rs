//! Intertwining relations [ρ₁(A_X) K(·, y)](x) = [ρ₂(B_X) K(x, ·)](y) for a
//! single-site kernel, checked generator by generator. Each kernel has a
//! working form (the one that holds) and the literal one as displayed; the
//! two coincide for Charlier and Hermite.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::engine::{self, DerivTable};
use super::FLOAT_TOL;
use crate::algebra::{
    theta_charlier, theta_parabolic_inverse, theta_phi, theta_phi_inverse, theta_sqrt_c, Algebra, AlgebraElement,
    AlgebraMorphism, Gen, MorphismName, StarName,
};
use crate::error::{Error, Result};
use crate::kernels::{charlier, eval_bessel, eval_exp_kernel, eval_mp, hermite_poly, laguerre_poly, meixner, ExpForm};
use crate::ops::box_points;
use crate::processes::MARGIN;
use crate::repr::{pi_k, rho_c, rho_k, sigma_c, sigma_k, Carrier};
use crate::report::{timed, Measure, Mode, Residuals, VerificationReport};
use crate::scalar::{rat, rat_to_f64, rational_sqrt, Exact, Float, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntertwiningKernel {
    Charlier,
    Hermite,
    ExpKernel,
    Meixner,
    Laguerre,
    Bessel,
    MeixnerPollaczek,
}

pub const INTERTWINING_CASES: [IntertwiningKernel; 7] = [
    IntertwiningKernel::Charlier,
    IntertwiningKernel::Hermite,
    IntertwiningKernel::ExpKernel,
    IntertwiningKernel::Meixner,
    IntertwiningKernel::Laguerre,
    IntertwiningKernel::Bessel,
    IntertwiningKernel::MeixnerPollaczek,
];

impl IntertwiningKernel {
    pub fn name(self) -> &'static str {
        match self {
            IntertwiningKernel::Charlier => "charlier",
            IntertwiningKernel::Hermite => "hermite",
            IntertwiningKernel::ExpKernel => "exp",
            IntertwiningKernel::Meixner => "meixner",
            IntertwiningKernel::Laguerre => "laguerre",
            IntertwiningKernel::Bessel => "bessel",
            IntertwiningKernel::MeixnerPollaczek => "meixner-pollaczek",
        }
    }

    /// The relation in words, working form.
    pub fn relation(self) -> &'static str {
        match self {
            IntertwiningKernel::Charlier => "rho_c(X*)_n C = rho_c(theta(X))_x C",
            IntertwiningKernel::Hermite => "rho_c(X*)_n H = sigma_c(X)_x H",
            IntertwiningKernel::ExpKernel => "sigma_c(X*)_x phi = sigma_c(Psi(X))_y phi",
            IntertwiningKernel::Meixner => "pi_k(X*)_n M = pi_k(psi(theta_{-sqrt c}(X)))_x M",
            IntertwiningKernel::Laguerre => "pi_k(X*)_n L = sigma_k(theta^{-1}(X*))_x L",
            IntertwiningKernel::Bessel => "sigma_k(X*)_x J = sigma_k(X)_y J (su(1,1) star)",
            IntertwiningKernel::MeixnerPollaczek => "pi_k(theta_phi(X))_n P = rho_k(X)_x P",
        }
    }

    /// Generators for which the literal form of the relation fails; on the
    /// others the literal and working forms coincide or both hold.
    pub fn literal_breaks(self) -> &'static [&'static str] {
        match self {
            IntertwiningKernel::Charlier | IntertwiningKernel::Hermite => &[],
            IntertwiningKernel::ExpKernel => &["a", "a†"],
            IntertwiningKernel::Meixner | IntertwiningKernel::Bessel => &["H", "E", "F"],
            IntertwiningKernel::Laguerre | IntertwiningKernel::MeixnerPollaczek => &["E", "F"],
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(
            self,
            IntertwiningKernel::Charlier
                | IntertwiningKernel::Hermite
                | IntertwiningKernel::Meixner
                | IntertwiningKernel::Laguerre
        )
    }

    pub fn parse(s: &str) -> Result<Self> {
        INTERTWINING_CASES
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown intertwining kernel '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntertwiningForm {
    Working,
    Literal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwiningCase {
    pub kernel: IntertwiningKernel,
    pub form: IntertwiningForm,
    /// c for the Heisenberg kernels, Meixner and Laguerre (which need a
    /// rational √c).
    pub c: Rational,
    pub k: Rational,
    pub phi: f64,
    pub index_max: usize,
    pub points: usize,
}

impl IntertwiningCase {
    pub fn new(kernel: IntertwiningKernel) -> Self {
        IntertwiningCase {
            kernel,
            form: IntertwiningForm::Working,
            c: rat(1, 4),
            k: rat(3, 4),
            phi: std::f64::consts::FRAC_PI_3,
            index_max: 10,
            points: 25,
        }
    }

    pub fn literal(mut self) -> Self {
        self.form = IntertwiningForm::Literal;
        self
    }
}

type ElX = AlgebraElement<Exact>;
type ElF = AlgebraElement<Float>;

fn sl2_sign_map(name: &str, signs: [i64; 3]) -> AlgebraMorphism<Exact> {
    let images: BTreeMap<Gen, ElX> = Algebra::Sl2
        .generators()
        .into_iter()
        .zip(signs)
        .map(|(g, s)| (g, ElX::gen(g).scale(&Exact::from_i64(s))))
        .collect();
    AlgebraMorphism::from_images(MorphismName::Composite(name.into()), Algebra::Sl2, images, None)
        .expect("well-formed")
}

/// ψ: H ↦ H, E ↦ −E, F ↦ −F.
fn psi_sl2() -> AlgebraMorphism<Exact> {
    sl2_sign_map("psi", [1, -1, -1])
}

/// Ψ: a ↦ −ia, a† ↦ ia†, Z ↦ Z.
fn psi_heisenberg() -> AlgebraMorphism<Exact> {
    let i = Exact::imag_unit();
    let images: BTreeMap<Gen, ElX> = [
        (Gen::A, ElX::gen(Gen::A).scale(&-i.clone())),
        (Gen::Ad, ElX::gen(Gen::Ad).scale(&i)),
        (Gen::Z, ElX::gen(Gen::Z)),
    ]
    .into_iter()
    .collect();
    AlgebraMorphism::from_images(MorphismName::Composite("Psi".into()), Algebra::Heisenberg, images, None)
        .expect("well-formed")
}

fn sqrt_c(c: &Rational) -> Result<Rational> {
    rational_sqrt(c).ok_or_else(|| Error::Domain(format!("c = {c} needs a rational square root in exact mode")))
}

/// (A_X, B_X) for each generator X, exact.
fn exact_pairs(case: &IntertwiningCase) -> Result<Vec<(Gen, ElX, ElX)>> {
    use IntertwiningForm::*;
    use IntertwiningKernel::*;
    let alg = match case.kernel {
        Charlier | Hermite | ExpKernel => Algebra::Heisenberg,
        _ => Algebra::Sl2,
    };
    alg.generators()
        .into_iter()
        .map(|g| {
            let x = ElX::gen(g);
            let (a, b) = match (case.kernel, case.form) {
                (Charlier, _) => (x.star(StarName::Heisenberg)?, theta_charlier().apply(&x)?),
                (Hermite, _) => (x.star(StarName::Heisenberg)?, x.clone()),
                (ExpKernel, Working) => (x.star(StarName::Heisenberg)?, psi_heisenberg().apply(&x)?),
                (ExpKernel, Literal) => (x.star(StarName::Heisenberg)?, x.clone()),
                (Meixner, form) => {
                    let s = sqrt_c(&case.c)?;
                    let t = theta_sqrt_c(&-s)?.apply(&x)?;
                    let b = if form == Working { psi_sl2().apply(&t)? } else { t };
                    (x.star(StarName::Su11)?, b)
                }
                (Laguerre, form) => {
                    let xs = x.star(StarName::Su11)?;
                    let b = theta_parabolic_inverse().apply(if form == Working { &xs } else { &x })?;
                    (xs, b)
                }
                (Bessel, Working) => (x.star(StarName::Su11)?, x.clone()),
                (Bessel, Literal) => (x.star(StarName::Sl2Real)?, x.clone()),
                (MeixnerPollaczek, _) => return Err(Error::FloatOnly("theta_phi".into())),
            };
            Ok((g, a, b))
        })
        .collect()
}

fn mp_pairs(case: &IntertwiningCase) -> Result<Vec<(Gen, ElF, ElF)>> {
    let th = theta_phi(case.phi)?;
    let th_inv = theta_phi_inverse(case.phi)?;
    Algebra::Sl2
        .generators()
        .into_iter()
        .map(|g| {
            let x = ElF::gen(g);
            Ok(match case.form {
                IntertwiningForm::Working => (g, th.apply(&x)?, x),
                IntertwiningForm::Literal => (g, x.star(StarName::Su11)?, th_inv.apply(&x)?),
            })
        })
        .collect()
}

fn report(case: &IntertwiningCase, g: Gen, res: &Residuals) -> VerificationReport {
    let form = match case.form {
        IntertwiningForm::Working => "working",
        IntertwiningForm::Literal => "literal",
    };
    let name = format!("intertwining/{}/{form}/{}", case.kernel.name(), g.symbol());
    if case.kernel.is_exact() {
        res.report(name, Mode::Exact, Measure::Abs, 0.0)
    } else {
        res.report(name, Mode::Float, Measure::Rel, FLOAT_TOL)
    }
}

fn one_var_points(top: usize) -> Vec<Vec<i64>> {
    box_points(&[top])
}

/// One report per generator X.
pub fn intertwining_residual(case: &IntertwiningCase) -> Result<Vec<VerificationReport>> {
    use IntertwiningKernel::*;
    let top = case.index_max;
    let n_max = top + MARGIN;
    let pts = one_var_points(top);
    let grid_pts: Vec<Vec<usize>> = (0..case.points).map(|a| vec![a]).collect();
    let mut out = Vec::new();
    match case.kernel {
        Charlier | Meixner => {
            let (rep, kern): (_, Box<dyn Fn(u32, u32) -> Result<Exact> + Sync>) = if case.kernel == Charlier {
                let c = Exact::from_rational(&case.c);
                (rho_c(c.clone(), n_max)?, Box::new(move |n, x| charlier(n, x, &c)))
            } else {
                let s = Exact::from_rational(&sqrt_c(&case.c)?);
                let k = Exact::from_rational(&case.k);
                let beta = Exact::from_i64(2) * k.clone();
                let c = Exact::from_rational(&case.c);
                (pi_k(k, s, n_max)?, Box::new(move |n, x| meixner(n, x, &beta, &c)))
            };
            let size = top + 1;
            let tab: Vec<Vec<Exact>> = (0..=size as u32)
                .map(|n| (0..=size as u32).map(|x| kern(n, x)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            let kernel = |m: &[i64], x: &[i64]| tab[m[0] as usize][x[0] as usize].clone();
            for (g, a, b) in exact_pairs(case)? {
                let r = timed(|| -> Result<_> {
                    let res =
                        engine::lattice_lattice(&rep.element_op(&a)?, &rep.element_op(&b)?, &kernel, &pts, &pts);
                    Ok(report(case, g, &res))
                })?;
                out.push(r);
            }
        }
        Hermite | Laguerre => {
            let (rep1, rep2, polys) = if case.kernel == Hermite {
                let c = Exact::from_rational(&case.c);
                let polys = (0..=top as u32 + 1).map(|n| hermite_poly(n, &c)).collect::<Result<Vec<_>>>()?;
                (rho_c(c.clone(), n_max)?, sigma_c(c, 2 * n_max as u32)?, polys)
            } else {
                let s = sqrt_c(&case.c)?;
                let k = Exact::from_rational(&case.k);
                // the normalized kernel c^{−n/2} L_n, rational through s^{−n}
                let inv_s = Exact::from_rational(&(Rational::from_integer(1.into()) / &s));
                let polys = (0..=top as u32 + 1)
                    .map(|n| Ok(laguerre_poly(n, &k)?.scale(&inv_s.pow(n))))
                    .collect::<Result<Vec<_>>>()?;
                (pi_k(k.clone(), Exact::from_rational(&s), n_max)?, sigma_k(k, 2 * n_max as u32)?, polys)
            };
            let kernel = |m: &[i64]| polys[m[0] as usize].clone();
            for (g, a, b) in exact_pairs(case)? {
                let r = timed(|| -> Result<_> {
                    let res = engine::lattice_poly(&rep1.element_op(&a)?, &rep2.element_op(&b)?, &kernel, &pts);
                    Ok(report(case, g, &res))
                })?;
                out.push(r);
            }
        }
        ExpKernel | Bessel => {
            let (lo, hi) = if case.kernel == Bessel { (0.1, 10.0) } else { (-5.0, 5.0) };
            let grid = engine::linspace(lo, hi, case.points);
            let form = match case.form {
                IntertwiningForm::Working => ExpForm::Corrected,
                IntertwiningForm::Literal => ExpForm::Printed,
            };
            let (cf, kf) = (rat_to_f64(&case.c), rat_to_f64(&case.k));
            let kernel = case.kernel;
            let eval = move |_: usize, x: f64, y: f64, dx: u32, dy: u32| -> Result<Complex64> {
                if kernel == Bessel {
                    Ok(Complex64::new(eval_bessel(x, y, kf, dx, dy)?, 0.0))
                } else {
                    eval_exp_kernel(x, y, cf, dx, dy, form)
                }
            };
            let table = DerivTable::build(&grid, 1, &eval)?;
            let rep = if kernel == Bessel {
                sigma_k(Float::new(kf, 0.0), 4)?
            } else {
                sigma_c(Float::new(cf, 0.0), 4)?
            };
            for (g, a, b) in exact_pairs(case)? {
                let r = timed(|| -> Result<_> {
                    let a = rep.element_op(&a.to_float())?;
                    let b = rep.element_op(&b.to_float())?;
                    let res = engine::analytic_analytic(&a, &b, &table, &grid, &grid_pts, &grid_pts);
                    Ok(report(case, g, &res))
                })?;
                out.push(r);
            }
        }
        MeixnerPollaczek => {
            let grid = engine::linspace(-5.0, 5.0, case.points);
            let kf = rat_to_f64(&case.k);
            let rep1 = pi_k(Float::new(kf, 0.0), Float::new(1.0, 0.0), n_max)?;
            let rep2 = rho_k(Float::new(kf, 0.0), false, Carrier::Poly { maxdeg: 4 })?;
            let tab: Vec<Vec<[Complex64; 3]>> = (0..=top as u32 + 1)
                .map(|m| {
                    grid.iter()
                        .map(|&x| {
                            let v = |s: f64| eval_mp(m, Complex64::new(x, s), kf, case.phi);
                            Ok([v(-1.0)?, v(0.0)?, v(1.0)?])
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let kernel = |_: usize, m: i64, a: usize, s: i32| tab[m as usize][a][(s + 1) as usize];
            for (g, a, b) in mp_pairs(case)? {
                let r = timed(|| -> Result<_> {
                    let res = engine::lattice_complex(
                        &rep1.element_op(&a)?,
                        &rep2.element_op(&b)?,
                        &kernel,
                        &grid,
                        &pts,
                        &grid_pts,
                    );
                    Ok(report(case, g, &res))
                })?;
                out.push(r);
            }
        }
    }
    if case.form == IntertwiningForm::Working {
        for r in &mut out {
            r.notes.push(case.kernel.relation().to_string());
        }
    }
    Ok(out)
}
