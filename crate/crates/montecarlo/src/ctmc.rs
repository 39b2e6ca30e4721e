use duality_core::ops::Step;
use duality_core::poly::Poly;
use duality_core::processes::{build_generator_direct, Family, ProcessSpec};
use duality_core::scalar::Float;
use duality_core::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::state::{State, Trajectory};

/// Jump chain of IRW, SIP or SEP with rates from the direct generator.
#[derive(Clone, Debug)]
pub struct Ctmc {
    family: Family,
    caps: Option<Vec<u32>>,
    jumps: Vec<(Vec<i64>, Poly<Float>)>,
}

impl Ctmc {
    pub fn new(spec: &ProcessSpec) -> Result<Self> {
        if !spec.family.is_discrete() || spec.family == Family::Hyp {
            return Err(Error::Unsupported(format!("{} is not a jump process", spec.family.name())));
        }
        spec.validate()?;
        let g = build_generator_direct::<Float>(spec)?;
        let op = g.op.as_shift().ok_or_else(|| Error::WrongCarrier("expected a shift generator".into()))?;
        if op.step() != Step::Unit {
            return Err(Error::WrongCarrier("jump rates need lattice shifts".into()));
        }
        let jumps = op
            .terms()
            .filter(|(s, _)| s.iter().any(|&v| v != 0))
            .map(|(s, p)| (s.iter().map(|&v| v as i64).collect(), p.clone()))
            .collect();
        let caps = (spec.family == Family::Sep).then(|| spec.j.clone());
        Ok(Ctmc { family: spec.family, caps, jumps })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn check_state(&self, s: &[i64]) -> Result<()> {
        let n = self.jumps.first().map_or(s.len(), |(v, _)| v.len());
        if s.len() != n {
            return Err(Error::FactorMismatch { expected: n, got: s.len() });
        }
        if s.iter().any(|&v| v < 0) {
            return Err(Error::Domain(format!("negative occupation in {s:?}")));
        }
        if let Some(caps) = &self.caps {
            if s.iter().zip(caps).any(|(&v, &c)| v > c as i64) {
                return Err(Error::Domain(format!("{s:?} exceeds the caps {caps:?}")));
            }
        }
        Ok(())
    }

    /// Rates of every jump out of `s` into `out`; returns their sum.
    pub fn rates(&self, s: &[i64], out: &mut Vec<f64>) -> Result<f64> {
        let pt: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
        out.clear();
        let mut total = 0.0;
        for (_, p) in &self.jumps {
            let r = p.eval(&pt).re;
            if !r.is_finite() || r < -1e-12 {
                return Err(Error::Simulation(format!("rate {r} out of {s:?}")));
            }
            let r = r.max(0.0);
            out.push(r);
            total += r;
        }
        if !total.is_finite() {
            return Err(Error::Simulation(format!("rate overflow at {s:?}")));
        }
        Ok(total)
    }

    /// One holding period from `s`: (holding time, index of the jump taken),
    /// or None when `s` is absorbing.
    pub fn first_jump<R: Rng>(&self, s: &[i64], rng: &mut R) -> Result<Option<(f64, usize)>> {
        let mut buf = Vec::with_capacity(self.jumps.len());
        self.next(s, rng, &mut buf)
    }

    fn next<R: Rng>(&self, s: &[i64], rng: &mut R, buf: &mut Vec<f64>) -> Result<Option<(f64, usize)>> {
        let total = self.rates(s, buf)?;
        if total <= 0.0 {
            return Ok(None);
        }
        let hold: f64 = Exp1.sample(rng);
        let mut u = rng.random::<f64>() * total;
        let mut pick = buf.len() - 1;
        for (i, r) in buf.iter().enumerate() {
            if u < *r {
                pick = i;
                break;
            }
            u -= r;
        }
        // guard against u landing on a zero-rate tail through rounding
        while buf[pick] == 0.0 {
            pick -= 1;
        }
        Ok(Some((hold / total, pick)))
    }

    fn run<R: Rng>(&self, init: &[i64], t: f64, rng: &mut R, mut visit: impl FnMut(f64, &[i64])) -> Result<Vec<i64>> {
        self.check_state(init)?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")));
        }
        let mut s = init.to_vec();
        let mut now = 0.0;
        let mut buf = Vec::with_capacity(self.jumps.len());
        visit(0.0, &s);
        while let Some((h, k)) = self.next(&s, rng, &mut buf)? {
            now += h;
            if now > t {
                break;
            }
            for (v, d) in s.iter_mut().zip(&self.jumps[k].0) {
                *v += d;
            }
            visit(now, &s);
        }
        Ok(s)
    }

    /// State at time `t` started from `init`.
    pub fn simulate<R: Rng>(&self, init: &[i64], t: f64, rng: &mut R) -> Result<Vec<i64>> {
        self.run(init, t, rng, |_, _| {})
    }

    /// The full path up to `t`.
    pub fn trajectory<R: Rng>(&self, init: &[i64], t: f64, rng: &mut R, seed: u64) -> Result<Trajectory> {
        let mut times = Vec::new();
        let mut states = Vec::new();
        self.run(init, t, rng, |at, s| {
            times.push(at);
            states.push(State::Lattice(s.to_vec()));
        })?;
        Ok(Trajectory { family: self.family, times, states, seed })
    }
}
