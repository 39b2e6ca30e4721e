use std::time::Instant;

use duality_core::kernels::{charlier, eval_bessel, eval_meixner, hermite_poly, krawtchouk, laguerre_poly, KernelMode};
use duality_core::poly::Poly;
use duality_core::processes::ProcessSpec;
use duality_core::report::{Measure, Mode, Status, VerificationReport};
use duality_core::scalar::{rat_to_f64, Exact, Float, Scalar};
use duality_core::verify::{DualityCase, KernelSpec};
use duality_core::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ctmc::Ctmc;
use crate::estimate::{McEstimate, Moments};
use crate::rng::trajectory_rng;
use crate::sde::Sde;
use crate::state::State;

/// Width of the agreement band in pooled standard errors.
pub const MC_SIGMAS: f64 = 3.0;

const BLOCK: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub t: f64,
    pub dt: f64,
    pub trials: u64,
    pub seed: u64,
    /// Run diffusions at dt and dt/2 on a shared Brownian path and widen
    /// the band by the estimated Euler bias.
    pub richardson: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { t: 0.5, dt: 1e-3, trials: 100_000, seed: 42, richardson: true }
    }
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::Domain(format!("t must be finite and nonnegative, got {}", self.t)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be positive".into()));
        }
        Ok(())
    }
}

/// Both sides of E[D(η₁(t), η₂)] = E[D(η₁, η₂(t))].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McDuality {
    pub case: String,
    pub left: McEstimate,
    pub right: McEstimate,
    /// |left − right| / pooled standard error.
    pub z_score: f64,
    /// Richardson estimate of the Euler bias plus its own 3σ band; 0 for
    /// pure jump processes.
    pub bias_allowance: f64,
    pub wall_time_ms: f64,
}

impl McDuality {
    pub fn pooled_std_err(&self) -> f64 {
        self.left.std_err.hypot(self.right.std_err)
    }

    pub fn band(&self) -> f64 {
        MC_SIGMAS * self.pooled_std_err() + self.bias_allowance
    }

    pub fn difference(&self) -> f64 {
        (self.left.mean - self.right.mean).abs()
    }

    pub fn passed(&self) -> bool {
        self.difference() <= self.band() && !self.left.heavy_tail && !self.right.heavy_tail
    }

    pub fn report(&self) -> VerificationReport {
        let d = self.difference();
        let scale = self.left.mean.abs().max(self.right.mean.abs());
        let mut notes = vec![
            format!("left {} ± {}", self.left.mean, self.left.std_err),
            format!("right {} ± {}", self.right.mean, self.right.std_err),
            format!("z = {:.3}, band = {MC_SIGMAS} pooled SE + bias allowance {:e}", self.z_score, self.bias_allowance),
        ];
        if self.left.heavy_tail || self.right.heavy_tail {
            notes.push("sample std grows with the trial count; variance may be infinite".into());
        }
        VerificationReport {
            case: self.case.clone(),
            mode: Mode::MonteCarlo,
            max_abs_residual: d,
            max_rel_residual: if scale > 0.0 { d / scale } else { 0.0 },
            tolerance: self.band(),
            measure: Measure::Abs,
            status: if self.passed() { Status::Pass } else { Status::Fail },
            points_checked: self.left.trials as usize,
            wall_time_ms: self.wall_time_ms,
            seed: Some(self.left.seed),
            notes,
        }
    }
}

enum Site {
    /// K(m, x) for lattice m and x.
    Table(Vec<Vec<f64>>),
    /// K(m, ·) as a polynomial for lattice m.
    Poly(Vec<Poly<Float>>),
    Bessel(f64),
}

/// The case's kernel, precomputed for the index range a run can reach.
struct Kernel {
    sites: Vec<Site>,
    scale: f64,
    base: f64,
}

fn reach(spec: &ProcessSpec, s: &State, site: usize) -> usize {
    match spec.family {
        duality_core::processes::Family::Sep => spec.j[site] as usize,
        _ => s.as_lattice().map_or(0, |v| v.iter().sum::<i64>().max(0) as usize),
    }
}

fn re(z: Exact) -> f64 {
    z.to_c64().re
}

impl Kernel {
    fn new(case: &DualityCase, eta1: &State, eta2: &State) -> Result<Kernel> {
        let n = case.kernel.sites();
        let mut sites = Vec::with_capacity(n);
        for s in 0..n {
            let (top_l, top_r) = (reach(&case.left, eta1, s), reach(&case.right, eta2, s));
            let table = |f: &dyn Fn(u32, u32) -> Result<Exact>| -> Result<Site> {
                let rows = (0..=top_l as u32)
                    .map(|a| (0..=top_r as u32).map(|b| f(a, b).map(re)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Site::Table(rows))
            };
            let polys = |f: &dyn Fn(u32) -> Result<Poly<Exact>>| -> Result<Site> {
                let ps = (0..=top_l as u32)
                    .map(|a| f(a).map(|p| p.map_coeffs(|v| v.to_c64())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Site::Poly(ps))
            };
            let site = match &case.kernel {
                KernelSpec::Charlier { c } => table(&|a, b| charlier(a, b, &Exact::from_rational(&c[s])))?,
                KernelSpec::Meixner { k, c } => table(&|a, b| eval_meixner(a, b, &k[s], &c[s], KernelMode::Bare))?,
                KernelSpec::Krawtchouk { j, c } => table(&|a, b| krawtchouk(a, b, j[s], &Exact::from_rational(&c[s])))?,
                KernelSpec::Hermite { c } => polys(&|a| hermite_poly(a, &Exact::from_rational(&c[s])))?,
                KernelSpec::Laguerre { k } => polys(&|a| laguerre_poly(a, &Exact::from_rational(&k[s])))?,
                KernelSpec::Bessel { k } => Site::Bessel(k[s]),
                KernelSpec::Constant { .. } => Site::Table(vec![vec![1.0; top_r + 1]; top_l + 1]),
                KernelSpec::ExpKernel { .. } => {
                    return Err(Error::Unsupported(
                        "the exponential kernel grows like e^{x²/4c}; its expectation under the diffusion is not \
                         guaranteed finite, so this case is checked at generator level only"
                            .into(),
                    ))
                }
                KernelSpec::MeixnerPollaczek { .. } => {
                    return Err(Error::Unsupported("the hyperbolic operator is not a Markov generator".into()))
                }
            };
            sites.push(site);
        }
        Ok(Kernel { sites, scale: rat_to_f64(&case.scale), base: rat_to_f64(&case.sigma_n_base) })
    }

    fn value(&self, l: &State, r: &State) -> Result<f64> {
        let mut acc = self.scale;
        if let State::Lattice(m) = l {
            acc *= self.base.powi(m.iter().sum::<i64>() as i32);
        }
        for (s, site) in self.sites.iter().enumerate() {
            let v = match (site, l, r) {
                (Site::Table(t), State::Lattice(m), State::Lattice(x)) => t
                    .get(m[s] as usize)
                    .and_then(|row| row.get(x[s] as usize))
                    .copied()
                    .ok_or_else(|| Error::Index(format!("({}, {}) outside the kernel table", m[s], x[s])))?,
                (Site::Poly(ps), State::Lattice(m), State::Continuum(y)) => {
                    let p = ps.get(m[s] as usize).ok_or_else(|| Error::Index(format!("degree {}", m[s])))?;
                    p.eval(&[Complex64::new(y[s], 0.0)]).re
                }
                (Site::Bessel(k), State::Continuum(x), State::Continuum(y)) => eval_bessel(x[s], y[s], *k, 0, 0)?,
                _ => return Err(Error::WrongCarrier("state kind does not fit the kernel".into())),
            };
            acc *= v;
        }
        Ok(acc)
    }
}

enum Sim {
    Jump(Ctmc),
    Diffusion(Sde),
}

impl Sim {
    fn new(spec: &ProcessSpec) -> Result<Sim> {
        if spec.family.is_discrete() {
            Ok(Sim::Jump(Ctmc::new(spec)?))
        } else {
            Ok(Sim::Diffusion(Sde::new(spec)?))
        }
    }

    fn check(&self, s: &State) -> Result<()> {
        match (self, s) {
            (Sim::Jump(_), State::Lattice(_)) | (Sim::Diffusion(_), State::Continuum(_)) => Ok(()),
            _ => Err(Error::WrongCarrier("initial state kind does not fit the process".into())),
        }
    }

    /// The state at `t` and, for a coupled diffusion run, the state from
    /// the half step.
    fn run(&self, init: &State, cfg: &McConfig, seed: u64, index: u64) -> Result<(State, Option<State>)> {
        let mut rng = trajectory_rng(seed, index);
        match (self, init) {
            (Sim::Jump(c), State::Lattice(v)) => Ok((State::Lattice(c.simulate(v, cfg.t, &mut rng)?), None)),
            (Sim::Diffusion(d), State::Continuum(x)) if cfg.richardson => {
                let (coarse, fine) = d.simulate_coupled(x, cfg.t, cfg.dt, &mut rng)?;
                Ok((State::Continuum(coarse), Some(State::Continuum(fine))))
            }
            (Sim::Diffusion(d), State::Continuum(x)) => {
                Ok((State::Continuum(d.simulate(x, cfg.t, cfg.dt, &mut rng)?), None))
            }
            _ => Err(Error::WrongCarrier("initial state kind does not fit the process".into())),
        }
    }
}

#[derive(Default)]
struct Block {
    left: Moments,
    right: Moments,
    // coarse − fine per side
    left_bias: Moments,
    right_bias: Moments,
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Simulation("kernel value is not finite".into()))
    }
}

/// Samples both sides of the expectation form of duality for `case`,
/// started from (η₁, η₂).
pub fn mc_duality(case: &DualityCase, eta1: &State, eta2: &State, cfg: &McConfig) -> Result<McDuality> {
    let t0 = Instant::now();
    cfg.validate()?;
    let n = case.kernel.sites();
    for (s, spec) in [(eta1, &case.left), (eta2, &case.right)] {
        if s.len() != n || spec.n_sites != n {
            return Err(Error::FactorMismatch { expected: n, got: s.len().min(spec.n_sites) });
        }
    }
    let kernel = Kernel::new(case, eta1, eta2)?;
    let (left_sim, right_sim) = (Sim::new(&case.left)?, Sim::new(&case.right)?);
    left_sim.check(eta1)?;
    right_sim.check(eta2)?;
    let name = format!("montecarlo/{}", case.name);
    let at_zero = finite(kernel.value(eta1, eta2)?)?;
    if cfg.t == 0.0 {
        let e = McEstimate::constant(at_zero, cfg.trials, cfg.seed);
        return Ok(McDuality {
            case: name,
            left: e.clone(),
            right: e,
            z_score: 0.0,
            bias_allowance: 0.0,
            wall_time_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
    }
    let blocks = cfg.trials.div_ceil(BLOCK);
    let out: Vec<Block> = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<Block> {
            let mut acc = Block::default();
            for i in b * BLOCK..((b + 1) * BLOCK).min(cfg.trials) {
                let (l, l_fine) = left_sim.run(eta1, cfg, cfg.seed, 2 * i)?;
                let lv = finite(kernel.value(&l, eta2)?)?;
                acc.left.push(lv);
                if let Some(f) = l_fine {
                    acc.left_bias.push(lv - finite(kernel.value(&f, eta2)?)?);
                }
                let (r, r_fine) = right_sim.run(eta2, cfg, cfg.seed, 2 * i + 1)?;
                let rv = finite(kernel.value(eta1, &r)?)?;
                acc.right.push(rv);
                if let Some(f) = r_fine {
                    acc.right_bias.push(rv - finite(kernel.value(eta1, &f)?)?);
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let pick = |f: fn(&Block) -> Moments| out.iter().map(f).collect::<Vec<_>>();
    let left = McEstimate::from_blocks(&pick(|b| b.left), cfg.seed);
    let right = McEstimate::from_blocks(&pick(|b| b.right), cfg.seed);
    // weak order one: bias(dt) ≈ 2 (m_dt − m_{dt/2})
    let bias = |f: fn(&Block) -> Moments| {
        let e = McEstimate::from_blocks(&pick(f), cfg.seed);
        if e.trials == 0 {
            0.0
        } else {
            2.0 * (e.mean.abs() + MC_SIGMAS * e.std_err)
        }
    };
    let bias_allowance = bias(|b| b.left_bias) + bias(|b| b.right_bias);
    let pooled = left.std_err.hypot(right.std_err);
    let diff = (left.mean - right.mean).abs();
    let z_score = if pooled > 0.0 {
        diff / pooled
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(McDuality { case: name, left, right, z_score, bias_allowance, wall_time_ms: t0.elapsed().as_secs_f64() * 1e3 })
}
