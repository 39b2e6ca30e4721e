//! Orthogonality measures of the representations.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::{pochhammer, Scalar};
use crate::special::{abs_gamma_sq, ln_gamma};

#[derive(Clone, Debug, PartialEq)]
pub enum Weight<S> {
    /// c^n e^{-c} / n!
    Poisson { c: S },
    /// e^{-x²/2c} / √(2πc)
    Gaussian { c: S },
    /// (2k)_n c^n (1-c)^{2k} / n!
    NegBinomial { k: S, c: S },
    /// x^{2k-1} e^{-x} / Γ(2k)
    Gamma { k: S },
    /// (2 sin φ)^{2k} e^{-πx} |Γ(k+ix)|² / (2π Γ(2k)); a probability
    /// measure once multiplied by |e^{xφ}|².
    MeixnerPollaczek { k: f64, phi: f64 },
}

fn re<S: Scalar>(v: &S) -> f64 {
    v.to_c64().re
}

impl<S: Scalar> Weight<S> {
    pub fn is_discrete(&self) -> bool {
        matches!(self, Weight::Poisson { .. } | Weight::NegBinomial { .. })
    }

    /// Discrete weight without its n-independent normalizing factor.
    pub fn unnormalized(&self, n: u32) -> Result<S> {
        let mut fact = S::one();
        for i in 1..=n {
            fact = fact * S::from_i64(i as i64);
        }
        let inv = fact.try_inv().expect("n! is nonzero");
        match self {
            Weight::Poisson { c } => Ok(c.pow(n) * inv),
            Weight::NegBinomial { k, c } => {
                Ok(pochhammer(&(S::from_i64(2) * k.clone()), n) * c.pow(n) * inv)
            }
            _ => Err(Error::WrongCarrier("continuous weight has no point masses".into())),
        }
    }

    /// Exact moment ∫ x^m w(x) dx for the Gaussian and Gamma densities.
    pub fn moment(&self, m: u32) -> Result<S> {
        match self {
            Weight::Gaussian { c } => {
                if m % 2 == 1 {
                    return Ok(S::zero());
                }
                let mut acc = c.pow(m / 2);
                let mut j = m as i64 - 1;
                while j > 1 {
                    acc = acc * S::from_i64(j);
                    j -= 2;
                }
                Ok(acc)
            }
            Weight::Gamma { k } => Ok(pochhammer(&(S::from_i64(2) * k.clone()), m)),
            _ => Err(Error::Unsupported("closed-form moments only for Gaussian and Gamma weights".into())),
        }
    }

    /// Normalized density (continuous) or probability mass at the integer
    /// nearest to `x` (discrete).
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Weight::Poisson { c } => {
                let (c, n) = (re(c), x.round());
                (n * c.ln() - c - ln_gamma(n + 1.0)).exp()
            }
            Weight::NegBinomial { k, c } => {
                let (k, c, n) = (re(k), re(c), x.round());
                (ln_gamma(2.0 * k + n) - ln_gamma(2.0 * k) - ln_gamma(n + 1.0) + n * c.ln() + 2.0 * k * (1.0 - c).ln())
                    .exp()
            }
            Weight::Gaussian { c } => {
                let c = re(c);
                (-x * x / (2.0 * c)).exp() / (2.0 * PI * c).sqrt()
            }
            Weight::Gamma { k } => {
                let k = re(k);
                if x <= 0.0 {
                    return 0.0;
                }
                ((2.0 * k - 1.0) * x.ln() - x - ln_gamma(2.0 * k)).exp()
            }
            Weight::MeixnerPollaczek { k, phi } => {
                (2.0 * phi.sin()).powf(2.0 * k) / (2.0 * PI * ln_gamma(2.0 * k).exp())
                    * (-PI * x).exp()
                    * abs_gamma_sq(*k, x)
            }
        }
    }
}
