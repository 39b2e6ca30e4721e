//! Duality kernels and their weights. Polynomial families evaluate exactly
//! in bare mode (constant or Σn-conserving prefactors stripped) and in
//! floating point with the full normalization.

mod analytic;
mod cross;
mod dd;
mod ortho;
mod polys;

pub use analytic::{bessel_bare, eval_bessel, eval_exp_kernel, eval_mp, mp_bare, mp_recurrence, ExpForm};
pub use cross::{cross_validate, CROSS_TOL};
pub use ortho::{gram_residual, orthogonality_residual, GramNormalization, OrthoFamily, Quadrature};
pub use polys::{
    charlier, charlier_recurrence, hermite_poly, hermite_recurrence, krawtchouk, krawtchouk_recurrence,
    laguerre_poly, laguerre_poly_scaled, laguerre_recurrence, meixner, meixner_recurrence,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::repr::Weight;
use crate::scalar::{rat_to_f64, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    Charlier,
    Hermite,
    Meixner,
    Laguerre,
    Krawtchouk,
    Bessel,
    ExpKernel,
    MeixnerPollaczek,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 8] = [
        KernelFamily::Charlier,
        KernelFamily::Hermite,
        KernelFamily::Meixner,
        KernelFamily::Laguerre,
        KernelFamily::Krawtchouk,
        KernelFamily::Bessel,
        KernelFamily::ExpKernel,
        KernelFamily::MeixnerPollaczek,
    ];

    pub fn is_polynomial(self) -> bool {
        !matches!(self, KernelFamily::Bessel | KernelFamily::ExpKernel)
    }

    /// The factor Normalized / Bare.
    pub fn prefactor(self) -> Prefactor {
        match self {
            KernelFamily::Charlier => Prefactor::ExpC,
            KernelFamily::Hermite => Prefactor::ExpHalfC,
            KernelFamily::Laguerre => Prefactor::CPowMinusHalfN,
            KernelFamily::Bessel => Prefactor::ExpHalfXPlusY,
            KernelFamily::MeixnerPollaczek => Prefactor::ExpXPhi,
            KernelFamily::Meixner | KernelFamily::Krawtchouk | KernelFamily::ExpKernel => Prefactor::One,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    /// Prefactor stripped; exact where the family is polynomial.
    Bare,
    /// The full definition, floating point only.
    Normalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefactor {
    One,
    ExpC,
    ExpHalfC,
    /// c^{−n/2}; conserved by the inclusion process since it depends on Σn only.
    CPowMinusHalfN,
    ExpHalfXPlusY,
    ExpXPhi,
}

impl Prefactor {
    /// Value at index or coordinate `n` and second coordinate `x`, with the
    /// family parameter `p` (c or φ).
    pub fn value(self, p: f64, n: f64, x: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Prefactor::One => one,
            Prefactor::ExpC => one * p.exp(),
            Prefactor::ExpHalfC => one * (p / 2.0).exp(),
            Prefactor::CPowMinusHalfN => one * p.powf(-n / 2.0),
            Prefactor::ExpHalfXPlusY => ((x + n) / 2.0).exp(),
            Prefactor::ExpXPhi => (x * p).exp(),
        }
    }
}

fn normalize<S: Scalar>(bare: S, factor: Complex64) -> Result<S> {
    let f = S::try_from_c64(factor).ok_or_else(|| Error::FloatOnly("normalized kernel".into()))?;
    Ok(bare * f)
}

fn positive(name: &str, q: &Rational) -> Result<()> {
    if rat_to_f64(q) <= 0.0 {
        return Err(Error::Domain(format!("{name} must be positive, got {q}")));
    }
    Ok(())
}

/// e^c C_n(x; c) (normalized) or C_n(x; c) (bare).
pub fn eval_charlier<S: Scalar>(n: u32, x: u32, c: &Rational, mode: KernelMode) -> Result<S> {
    positive("c", c)?;
    let bare = charlier(n, x, &S::from_rational(c))?;
    match mode {
        KernelMode::Bare => Ok(bare),
        KernelMode::Normalized => normalize(bare, Prefactor::ExpC.value(rat_to_f64(c), 0.0, 0.0.into())),
    }
}

/// M(n, x; k, c) = M_n(x; 2k, c); no prefactor, so both modes agree.
pub fn eval_meixner<S: Scalar>(n: u32, x: u32, k: &Rational, c: &Rational, _mode: KernelMode) -> Result<S> {
    positive("k", k)?;
    let cf = rat_to_f64(c);
    if !(cf > 0.0 && cf < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
    }
    let beta = S::from_i64(2) * S::from_rational(k);
    meixner(n, x, &beta, &S::from_rational(c))
}

pub fn eval_krawtchouk<S: Scalar>(n: u32, x: u32, j: u32, c: &Rational) -> Result<S> {
    krawtchouk(n, x, j, &S::from_rational(c))
}

/// H(n, x; c) = e^{c/2}(2c)^{−n/2}H_n(x/√(2c)); the bare kernel is rational
/// for every rational c.
pub fn eval_hermite<S: Scalar>(n: u32, x: &S, c: &Rational, mode: KernelMode) -> Result<S> {
    positive("c", c)?;
    let bare = hermite_poly(n, &S::from_rational(c))?.eval(std::slice::from_ref(x));
    match mode {
        KernelMode::Bare => Ok(bare),
        KernelMode::Normalized => normalize(bare, Prefactor::ExpHalfC.value(rat_to_f64(c), 0.0, 0.0.into())),
    }
}

/// L(n, ·; k) as a polynomial: n!c^{−n/2}/(2k)_n L_n^{(2k−1)} when normalized,
/// without c^{−n/2} when bare.
pub fn eval_laguerre<S: Scalar>(n: u32, k: &Rational, c: &Rational, mode: KernelMode) -> Result<Poly<S>> {
    positive("k", k)?;
    positive("c", c)?;
    let bare = laguerre_poly(n, &S::from_rational(k))?;
    match mode {
        KernelMode::Bare => Ok(bare),
        KernelMode::Normalized => {
            let f = Prefactor::CPowMinusHalfN.value(rat_to_f64(c), n as f64, 0.0.into());
            let f = S::try_from_c64(f).ok_or_else(|| Error::FloatOnly("normalized kernel".into()))?;
            Ok(bare.scale(&f))
        }
    }
}

/// Weight values: exact point masses for the discrete families (normalized,
/// so exact only when the normalizing constant is rational), densities for
/// the continuous ones.
pub fn eval_weight(w: &Weight<Complex64>, point: f64) -> Result<f64> {
    match w {
        Weight::Poisson { .. } | Weight::NegBinomial { .. } => {
            if point < 0.0 || point.fract() != 0.0 {
                return Err(Error::Domain(format!("{point} is not a point of the lattice")));
            }
        }
        Weight::Gamma { .. } => {
            if point < 0.0 {
                return Err(Error::Domain(format!("Gamma weight lives on [0, inf), got {point}")));
            }
        }
        _ => {}
    }
    Ok(w.density(point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ex, ex_re, rat, Exact, Float};

    #[test]
    fn normalized_is_prefactor_times_bare() {
        let c = rat(3, 4);
        for n in 0..6 {
            for x in 0..6 {
                let b: Float = eval_charlier(n, x, &c, KernelMode::Bare).unwrap();
                let v: Float = eval_charlier(n, x, &c, KernelMode::Normalized).unwrap();
                assert!((v - b * 0.75f64.exp()).norm() <= 1e-12 * v.norm());
            }
            let xv = Float::new(0.3, 0.0);
            let b: Float = eval_hermite(n, &xv, &c, KernelMode::Bare).unwrap();
            let v: Float = eval_hermite(n, &xv, &c, KernelMode::Normalized).unwrap();
            assert!((v - b * 0.375f64.exp()).norm() <= 1e-12 * v.norm().max(1e-300));
            let lb: Poly<Float> = eval_laguerre(n, &rat(3, 4), &rat(1, 4), KernelMode::Bare).unwrap();
            let lv: Poly<Float> = eval_laguerre(n, &rat(3, 4), &rat(1, 4), KernelMode::Normalized).unwrap();
            let at = [Float::new(1.7, 0.0)];
            assert!((lv.eval(&at) - lb.eval(&at) * 2f64.powi(n as i32)).norm() <= 1e-12 * lv.eval(&at).norm());
            assert_eq!(lb.degree(), Some(n));
        }
        assert!(eval_charlier::<Exact>(1, 1, &c, KernelMode::Normalized).is_err());
    }

    #[test]
    fn exact_evaluators() {
        let v: Exact = eval_charlier(1, 2, &rat(1, 2), KernelMode::Bare).unwrap();
        assert_eq!(v, ex(-3, 1));
        let v: Exact = eval_meixner(1, 2, &rat(1, 2), &rat(1, 2), KernelMode::Bare).unwrap();
        assert_eq!(v, ex(-1, 1));
        let v: Exact = eval_hermite(1, &ex(5, 1), &rat(1, 2), KernelMode::Bare).unwrap();
        assert_eq!(v, ex(10, 1));
        // 2c = 3/2 is not a square; the kernel is still rational
        let v: Exact = eval_hermite(2, &ex_re(rat(1, 1)), &rat(3, 4), KernelMode::Bare).unwrap();
        assert_eq!(v, ex(4, 9));
        let l: Poly<Exact> = eval_laguerre(1, &rat(3, 4), &rat(1, 1), KernelMode::Bare).unwrap();
        assert_eq!(l.eval(&[ex(3, 1)]), ex(1, 1) - ex(2, 1));
        assert!(eval_meixner::<Exact>(1, 1, &rat(1, 2), &rat(3, 2), KernelMode::Bare).is_err());
    }

    #[test]
    fn weights() {
        let p = Weight::Poisson { c: Complex64::new(0.75, 0.0) };
        assert!((eval_weight(&p, 0.0).unwrap() - (-0.75f64).exp()).abs() < 1e-15);
        assert!(eval_weight(&p, 0.5).is_err());
        let nb = Weight::NegBinomial { k: Complex64::new(0.75, 0.0), c: Complex64::new(1.0 / 3.0, 0.0) };
        // Σ (2k)_n c^n / n! = (1−c)^{−2k}
        let s: f64 = (0..200).map(|n| eval_weight(&nb, n as f64).unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-13);
        let g = Weight::Gamma { k: Complex64::new(0.75, 0.0) };
        let rule = crate::quad::gauss_laguerre_raw(40, 0.5).unwrap();
        // raw rule carries x^{1/2}e^{−x}; divide the density by it
        let total = rule.integrate(|x| eval_weight(&g, x).unwrap() / (x.sqrt() * (-x).exp()));
        assert!((total - 1.0).abs() < 1e-13);
        assert!(eval_weight(&g, -1.0).is_err());
    }
}
