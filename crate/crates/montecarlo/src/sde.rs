use duality_core::processes::{BepDrift, Family, ProcessSpec};
use duality_core::scalar::rat_to_f64;
use duality_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::state::{State, Trajectory};

/// Deepest bisection of a BEP step before giving up.
pub const MAX_HALVINGS: u32 = 20;

/// Euler–Maruyama for DIF and BEP. Each pair (i, j) contributes
/// a(x)(∂_i − ∂_j)² + b(x)(∂_i − ∂_j), simulated as
/// dX_i = −dX_j = b dt + √(2a) dW_ij.
#[derive(Clone, Debug)]
pub struct Sde {
    family: Family,
    n: usize,
    pairs: Vec<(usize, usize)>,
    c: f64,
    k: Vec<f64>,
    drift: BepDrift,
}

impl Sde {
    pub fn new(spec: &ProcessSpec) -> Result<Self> {
        spec.validate()?;
        let (c, k) = match spec.family {
            Family::Dif => (rat_to_f64(spec.c_value()?), Vec::new()),
            Family::Bep => (0.0, spec.k.iter().map(rat_to_f64).collect()),
            f => return Err(Error::Unsupported(format!("{} is not a diffusion", f.name()))),
        };
        Ok(Sde { family: spec.family, n: spec.n_sites, pairs: spec.pairs().collect(), c, k, drift: spec.bep_drift })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// (drift, diffusion coefficient) of the pair term at `x`.
    pub fn pair_coefficients(&self, x: &[f64], i: usize, j: usize) -> (f64, f64) {
        match self.family {
            Family::Dif => (-(x[i] - x[j]), self.c),
            _ => {
                let (ki, kj) = (self.k[i], self.k[j]);
                let inner = match self.drift {
                    BepDrift::Derived => kj * x[i] - ki * x[j],
                    BepDrift::Literal => ki * x[i] - kj * x[j],
                };
                (-2.0 * inner, x[i] * x[j])
            }
        }
    }

    fn check_init(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::FactorMismatch { expected: self.n, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("initial state must be finite".into()));
        }
        if self.family == Family::Bep && x.iter().any(|&v| v <= 0.0) {
            return Err(Error::Domain("BEP needs a strictly positive initial state".into()));
        }
        Ok(())
    }

    fn euler(&self, x: &[f64], h: f64, dw: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let (b, a) = self.pair_coefficients(x, i, j);
            let d = b * h + (2.0 * a.max(0.0)).sqrt() * dw[p];
            y[i] += d;
            y[j] -= d;
        }
    }

    /// Advances `x` by `h` along the Brownian increments `dw`. A BEP step
    /// that leaves the open orthant is redone as two half steps, the
    /// midpoint of each increment drawn from the Brownian bridge so the
    /// driving path is unchanged.
    fn step<R: Rng>(&self, x: &mut [f64], h: f64, dw: &[f64], rng: &mut R, depth: u32, y: &mut [f64]) -> Result<()> {
        self.euler(x, h, dw, y);
        if self.family != Family::Bep || y.iter().all(|&v| v > 0.0) {
            x.copy_from_slice(y);
            return Ok(());
        }
        if depth >= MAX_HALVINGS {
            return Err(Error::Simulation(format!("step size underflow after {MAX_HALVINGS} halvings at {x:?}")));
        }
        let sd = h.sqrt() / 2.0;
        let first: Vec<f64> = dw
            .iter()
            .map(|&w| {
                let z: f64 = StandardNormal.sample(rng);
                w / 2.0 + sd * z
            })
            .collect();
        let second: Vec<f64> = dw.iter().zip(&first).map(|(w, f)| w - f).collect();
        self.step(x, h / 2.0, &first, rng, depth + 1, y)?;
        self.step(x, h / 2.0, &second, rng, depth + 1, y)
    }

    fn increments<R: Rng>(&self, h: f64, rng: &mut R, out: &mut [f64]) {
        let sd = h.sqrt();
        for w in out.iter_mut() {
            let z: f64 = StandardNormal.sample(rng);
            *w = sd * z;
        }
    }

    fn check_times(t: f64, dt: f64) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Domain(format!("dt must be positive, got {dt}")));
        }
        Ok(())
    }

    fn run<R: Rng>(&self, init: &[f64], t: f64, dt: f64, rng: &mut R, mut visit: impl FnMut(f64, &[f64])) -> Result<Vec<f64>> {
        self.check_init(init)?;
        Self::check_times(t, dt)?;
        let mut x = init.to_vec();
        let mut y = vec![0.0; self.n];
        let mut dw = vec![0.0; self.pairs.len()];
        let mut now = 0.0;
        visit(0.0, &x);
        for h in steps(t, dt) {
            self.increments(h, rng, &mut dw);
            self.step(&mut x, h, &dw, rng, 0, &mut y)?;
            now += h;
            visit(now, &x);
        }
        Ok(x)
    }

    /// State at time `t` with step `dt`.
    pub fn simulate<R: Rng>(&self, init: &[f64], t: f64, dt: f64, rng: &mut R) -> Result<Vec<f64>> {
        self.run(init, t, dt, rng, |_, _| {})
    }

    pub fn trajectory<R: Rng>(&self, init: &[f64], t: f64, dt: f64, rng: &mut R, seed: u64) -> Result<Trajectory> {
        let mut times = Vec::new();
        let mut states = Vec::new();
        self.run(init, t, dt, rng, |at, x| {
            times.push(at);
            states.push(State::Continuum(x.to_vec()));
        })?;
        Ok(Trajectory { family: self.family, times, states, seed })
    }

    /// States at `t` with steps `dt` and `dt/2` driven by the same Brownian
    /// path, for Richardson estimates of the weak bias.
    pub fn simulate_coupled<R: Rng>(&self, init: &[f64], t: f64, dt: f64, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_init(init)?;
        Self::check_times(t, dt)?;
        // bridge refinements draw from their own streams so that a rejection
        // on one path does not shift the increments of the other
        let mut coarse_rng = ChaCha8Rng::seed_from_u64(rng.random());
        let mut fine_rng = ChaCha8Rng::seed_from_u64(rng.random());
        let mut coarse = init.to_vec();
        let mut fine = init.to_vec();
        let mut y = vec![0.0; self.n];
        let m = self.pairs.len();
        let (mut a, mut b, mut sum) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for h in steps(t, dt) {
            self.increments(h / 2.0, rng, &mut a);
            self.increments(h / 2.0, rng, &mut b);
            for p in 0..m {
                sum[p] = a[p] + b[p];
            }
            self.step(&mut coarse, h, &sum, &mut coarse_rng, 0, &mut y)?;
            self.step(&mut fine, h / 2.0, &a, &mut fine_rng, 0, &mut y)?;
            self.step(&mut fine, h / 2.0, &b, &mut fine_rng, 0, &mut y)?;
        }
        Ok((coarse, fine))
    }
}

/// Step sizes covering [0, t]: full steps of `dt`, then one shorter step
/// if `t` is not a multiple of `dt` (up to rounding).
fn steps(t: f64, dt: f64) -> impl Iterator<Item = f64> {
    let ratio = t / dt;
    let full = if (ratio - ratio.round()).abs() < 1e-9 { ratio.round() as u64 } else { ratio.floor() as u64 };
    let rest = t - full as f64 * dt;
    let tail = (rest > 1e-12 * dt.max(t)).then_some(rest);
    std::iter::repeat_n(dt, full as usize).chain(tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_cover_the_interval() {
        let s: Vec<f64> = steps(0.3, 1e-3).collect();
        assert_eq!(s.len(), 300);
        let s: Vec<f64> = steps(0.25, 0.1).collect();
        assert_eq!(s.len(), 3);
        assert!((s.iter().sum::<f64>() - 0.25).abs() < 1e-15);
        assert_eq!(steps(0.0, 0.1).count(), 0);
    }
}
