//! Orthogonality relations and Gram (unitarity) checks of the kernels.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::analytic::mp_bare;
use super::polys::{
    charlier_recurrence, hermite_recurrence, krawtchouk, laguerre_recurrence, meixner_recurrence,
};
use crate::error::{Error, Result};
use crate::quad::{gauss_hermite, gauss_laguerre, truncated_line, Rule};
use crate::report::{Measure, Mode, Residuals, VerificationReport};
use crate::scalar::{ex_re, rat_to_f64, Exact, Rational, Scalar};
use crate::special::ln_gamma;

#[derive(Clone, Debug, PartialEq)]
pub enum OrthoFamily {
    Charlier { c: Rational },
    Meixner { k: Rational, c: Rational },
    Krawtchouk { j: u32, c: Rational },
    Hermite { c: Rational },
    Laguerre { k: Rational, c: Rational },
    MeixnerPollaczek { k: f64, phi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quadrature {
    /// Lattice sum, stopped once terms stay below `tail_eps` of the running sum.
    DiscreteSum { tail_eps: f64 },
    GaussHermite { m: usize },
    GaussLaguerre { m: usize, alpha: f64 },
    TruncatedLine { panels: usize, order: usize, x_cut: f64 },
}

/// Which constant multiplies the kernel in a Gram check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramNormalization {
    /// The kernel exactly as defined (e^c for Charlier, none for Meixner).
    Printed,
    /// The constant making Λ unitary: e^{c/2} for Charlier, (1−c)^{−k} for
    /// Meixner and Laguerre, (1−c)^{j/2} for Krawtchouk.
    Unitary,
}

impl OrthoFamily {
    pub fn name(&self) -> &'static str {
        match self {
            OrthoFamily::Charlier { .. } => "charlier",
            OrthoFamily::Meixner { .. } => "meixner",
            OrthoFamily::Krawtchouk { .. } => "krawtchouk",
            OrthoFamily::Hermite { .. } => "hermite",
            OrthoFamily::Laguerre { .. } => "laguerre",
            OrthoFamily::MeixnerPollaczek { .. } => "meixner-pollaczek",
        }
    }

    /// Tolerances on the scale-free deviation.
    pub fn tolerance(&self) -> f64 {
        match self {
            OrthoFamily::Charlier { .. } | OrthoFamily::Meixner { .. } | OrthoFamily::Krawtchouk { .. } => 1e-10,
            OrthoFamily::Hermite { .. } | OrthoFamily::Laguerre { .. } => 1e-12,
            OrthoFamily::MeixnerPollaczek { .. } => 1e-8,
        }
    }

    pub fn default_quadrature(&self, max_index: u32) -> Quadrature {
        let m = max_index as usize + 2;
        match self {
            OrthoFamily::Charlier { .. } | OrthoFamily::Meixner { .. } | OrthoFamily::Krawtchouk { .. } => {
                Quadrature::DiscreteSum { tail_eps: 1e-18 }
            }
            OrthoFamily::Hermite { .. } => Quadrature::GaussHermite { m },
            OrthoFamily::Laguerre { k, .. } => Quadrature::GaussLaguerre { m, alpha: 2.0 * rat_to_f64(k) - 1.0 },
            OrthoFamily::MeixnerPollaczek { .. } => Quadrature::TruncatedLine { panels: 320, order: 20, x_cut: 80.0 },
        }
    }

    fn validate(&self) -> Result<()> {
        let pos = |name: &str, q: f64| {
            if q > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive, got {q}")))
            }
        };
        match self {
            OrthoFamily::Charlier { c } | OrthoFamily::Hermite { c } => pos("c", rat_to_f64(c)),
            OrthoFamily::Meixner { k, c } => {
                pos("k", rat_to_f64(k))?;
                let c = rat_to_f64(c);
                if !(c > 0.0 && c < 1.0) {
                    return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
                }
                Ok(())
            }
            OrthoFamily::Laguerre { k, c } => {
                pos("k", rat_to_f64(k))?;
                pos("c", rat_to_f64(c))
            }
            OrthoFamily::Krawtchouk { c, .. } => {
                let c = rat_to_f64(c);
                if c == 0.0 || c == 1.0 {
                    return Err(Error::Domain("Krawtchouk needs c outside {0, 1}".into()));
                }
                Ok(())
            }
            OrthoFamily::MeixnerPollaczek { k, phi } => {
                pos("k", *k)?;
                if !(*phi > 0.0 && *phi < PI) {
                    return Err(Error::Domain(format!("phi must lie in (0, pi), got {phi}")));
                }
                Ok(())
            }
        }
    }

    /// Right-hand side of the orthogonality display, rewritten for the
    /// kernel normalization and the normalized x-side weight.
    fn squared_norm(&self, n: u32) -> f64 {
        let nf = n as f64;
        let lf = ln_gamma(nf + 1.0);
        match self {
            // e^{2c} · c^{−n} n!
            OrthoFamily::Charlier { c } => {
                let c = rat_to_f64(c);
                (2.0 * c - nf * c.ln() + lf).exp()
            }
            // (1−c)^{2k} · c^{−n} n! / ((2k)_n (1−c)^{2k})
            OrthoFamily::Meixner { k, c } => {
                let (k, c) = (rat_to_f64(k), rat_to_f64(c));
                (-nf * c.ln() + lf - ln_poch(2.0 * k, n)).exp()
            }
            OrthoFamily::Krawtchouk { .. } => unreachable!("Krawtchouk is handled exactly"),
            // e^c · (2c)^{−n} · 2^n n!
            OrthoFamily::Hermite { c } => {
                let c = rat_to_f64(c);
                (c - nf * c.ln() + lf).exp()
            }
            // (n!/(2k)_n)² c^{−n} Γ(2k+n)/(n! Γ(2k))
            OrthoFamily::Laguerre { k, c } => {
                let (k, c) = (rat_to_f64(k), rat_to_f64(c));
                (lf - ln_poch(2.0 * k, n) - nf * c.ln()).exp()
            }
            // (n!/(2k)_n)² Γ(n+2k)/((2 sinφ)^{2k} n!) · (2 sinφ)^{2k}/Γ(2k)
            OrthoFamily::MeixnerPollaczek { k, .. } => (lf - ln_poch(2.0 * k, n)).exp(),
        }
    }

    /// Point mass of the index-side weight at m, whose inverse is the
    /// squared norm a unitary Λ must produce.
    fn index_weight(&self, m: u32) -> f64 {
        let mf = m as f64;
        let lf = ln_gamma(mf + 1.0);
        match self {
            OrthoFamily::Charlier { c } | OrthoFamily::Hermite { c } => {
                let c = rat_to_f64(c);
                (mf * c.ln() - c - lf).exp()
            }
            OrthoFamily::Meixner { k, c } | OrthoFamily::Laguerre { k, c } => {
                let (k, c) = (rat_to_f64(k), rat_to_f64(c));
                (ln_poch(2.0 * k, m) + mf * c.ln() + 2.0 * k * (1.0 - c).ln() - lf).exp()
            }
            OrthoFamily::Krawtchouk { j, c } => {
                let c = rat_to_f64(c);
                let p: f64 = (0..m).map(|i| -(*j as f64) + i as f64).product();
                p * c.powi(m as i32) * (1.0 - c).powi(-(*j as i32)) / lf.exp()
            }
            OrthoFamily::MeixnerPollaczek { k, .. } => (ln_poch(2.0 * k, m) - lf).exp(),
        }
    }

    fn unitary_constant(&self) -> Result<f64> {
        Ok(match self {
            OrthoFamily::Charlier { c } => (-rat_to_f64(c) / 2.0).exp(),
            OrthoFamily::Meixner { k, c } | OrthoFamily::Laguerre { k, c } => {
                let c = rat_to_f64(c);
                if c >= 1.0 {
                    return Err(Error::Domain("unitary normalization needs c < 1".into()));
                }
                (1.0 - c).powf(-rat_to_f64(k))
            }
            OrthoFamily::Krawtchouk { j, c } => {
                let c = rat_to_f64(c);
                if c >= 1.0 {
                    return Err(Error::Domain("unitary normalization needs c < 1".into()));
                }
                (1.0 - c).powf(*j as f64 / 2.0)
            }
            OrthoFamily::Hermite { .. } | OrthoFamily::MeixnerPollaczek { .. } => 1.0,
        })
    }
}

fn ln_poch(a: f64, n: u32) -> f64 {
    (0..n).map(|i| (a + i as f64).abs().ln()).sum()
}

/// Rows K(0..=n_max, x) in the printed normalization at one lattice point.
fn discrete_rows(family: &OrthoFamily, n_max: u32, x: u32) -> Result<Vec<f64>> {
    let xr = Rational::from_integer(x.into());
    match family {
        OrthoFamily::Charlier { c } => {
            let e = rat_to_f64(c).exp();
            Ok(charlier_recurrence(n_max, &xr, c)?.into_iter().map(|v| v * e).collect())
        }
        OrthoFamily::Meixner { k, c } => {
            let beta = k * Rational::from_integer(2.into());
            meixner_recurrence(n_max, &xr, &beta, c)
        }
        _ => unreachable!("only infinite lattice families"),
    }
}

fn lattice_weight(family: &OrthoFamily, x: u32) -> f64 {
    // the x-side weight coincides with the index-side one for the
    // self-dual families
    family.index_weight(x)
}

/// ⟨K(m, ·), K(n, ·)⟩ for all m, n ≤ n_max, printed normalization.
fn gram_matrix(family: &OrthoFamily, n_max: u32, quad: &Quadrature) -> Result<Vec<Vec<f64>>> {
    family.validate()?;
    let size = n_max as usize + 1;
    let mut g = vec![vec![0.0; size]; size];
    match (family, quad) {
        (OrthoFamily::Charlier { .. } | OrthoFamily::Meixner { .. }, Quadrature::DiscreteSum { tail_eps }) => {
            let mut abs_sum = vec![vec![0.0f64; size]; size];
            let mut quiet = 0;
            for x in 0..100_000u32 {
                let w = lattice_weight(family, x);
                let rows = discrete_rows(family, n_max, x)?;
                let mut small = x > n_max;
                for m in 0..size {
                    for n in 0..size {
                        let t = w * rows[m] * rows[n];
                        g[m][n] += t;
                        abs_sum[m][n] += t.abs();
                        if t.abs() > tail_eps * abs_sum[m][n] {
                            small = false;
                        }
                    }
                }
                quiet = if small && lattice_weight(family, x + 1) < w { quiet + 1 } else { 0 };
                if quiet >= 5 {
                    return Ok(g);
                }
            }
            Err(Error::NoConvergence(format!("{} lattice sum did not reach its tail", family.name())))
        }
        (OrthoFamily::Hermite { c }, Quadrature::GaussHermite { m }) => {
            need_exact(*m, n_max)?;
            let rule = gauss_hermite(*m, rat_to_f64(c))?;
            let pref = (rat_to_f64(c) / 2.0).exp();
            fill_from_rule(&mut g, &rule, |x| {
                let xr = float_to_rational(x);
                Ok(hermite_recurrence(n_max, &xr, c)?.into_iter().map(|v| v * pref).collect())
            })?;
            Ok(g)
        }
        (OrthoFamily::Laguerre { k, c }, Quadrature::GaussLaguerre { m, alpha }) => {
            need_exact(*m, n_max)?;
            if (alpha - (2.0 * rat_to_f64(k) - 1.0)).abs() > 1e-15 {
                return Err(Error::Quadrature(format!("Gauss-Laguerre alpha {alpha} does not match 2k - 1")));
            }
            let rule = gauss_laguerre(*m, *alpha)?;
            let c = rat_to_f64(c);
            fill_from_rule(&mut g, &rule, |x| {
                let xr = float_to_rational(x);
                Ok(laguerre_recurrence(n_max, &xr, k)?
                    .into_iter()
                    .enumerate()
                    .map(|(n, v)| v * c.powf(-(n as f64) / 2.0))
                    .collect())
            })?;
            Ok(g)
        }
        (OrthoFamily::MeixnerPollaczek { k, phi }, Quadrature::TruncatedLine { panels, order, x_cut }) => {
            let rule = truncated_line(*x_cut, *panels, *order)?;
            let w = crate::repr::Weight::<Complex64>::MeixnerPollaczek { k: *k, phi: *phi };
            let rows_at = |x: f64| -> Result<Vec<Complex64>> {
                (0..=n_max).map(|n| mp_bare(n, Complex64::new(x, 0.0), *k, *phi)).collect()
            };
            for (x, wq) in rule.nodes.iter().zip(&rule.weights) {
                let dens = w.density(*x) * (2.0 * x * phi).exp() * wq;
                if dens == 0.0 {
                    continue;
                }
                let rows = rows_at(*x)?;
                for m in 0..size {
                    for n in 0..size {
                        g[m][n] += dens * (rows[m] * rows[n].conj()).re;
                    }
                }
            }
            Ok(g)
        }
        _ => Err(Error::Quadrature(format!("{:?} does not fit the {} family", quad, family.name()))),
    }
}

fn need_exact(nodes: usize, n_max: u32) -> Result<()> {
    if 2 * n_max as usize > 2 * nodes - 1 {
        return Err(Error::Quadrature(format!(
            "{nodes} Gauss nodes are exact to degree {}, need {}",
            2 * nodes - 1,
            2 * n_max
        )));
    }
    Ok(())
}

fn float_to_rational(x: f64) -> Rational {
    Rational::from_float(x).expect("finite quadrature node")
}

fn fill_from_rule(g: &mut [Vec<f64>], rule: &Rule, rows: impl Fn(f64) -> Result<Vec<f64>>) -> Result<()> {
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let r = rows(*x)?;
        for m in 0..g.len() {
            for n in 0..g.len() {
                g[m][n] += w * r[m] * r[n];
            }
        }
    }
    Ok(())
}

/// Σ_{x≤j} w(x) K(m,x) K(n,x) minus δ_mn c^{−n} n!/(−j)_n, exactly.
fn krawtchouk_exact(j: u32, c: &Rational, n_max: u32) -> Result<Residuals> {
    let ce = ex_re(c.clone());
    let one_minus = ex_re(Rational::from_integer(1.into()) - c);
    let norm_w = one_minus
        .try_inv()
        .ok_or_else(|| Error::Domain("c = 1".into()))?
        .pow(j);
    let weight = |x: u32| -> Exact {
        let mut v = <Exact as Scalar>::one();
        for i in 0..x {
            v = v * Exact::from_i64(i as i64 - j as i64) * Exact::from_i64(i as i64 + 1).try_inv().unwrap();
        }
        v * ce.pow(x) * norm_w.clone()
    };
    let mut res = Residuals::new();
    let top = n_max.min(j);
    for m in 0..=top {
        for n in 0..=top {
            let mut sum = <Exact as Scalar>::zero();
            for x in 0..=j {
                sum = sum + weight(x) * krawtchouk(m, x, j, &ce)? * krawtchouk(n, x, j, &ce)?;
            }
            let target = if m == n {
                let mut t = ce.try_inv().unwrap().pow(n);
                for i in 0..n {
                    t = t * Exact::from_i64(i as i64 + 1) * Exact::from_i64(i as i64 - j as i64).try_inv().unwrap();
                }
                t
            } else {
                <Exact as Scalar>::zero()
            };
            let diff = (sum.clone() - target.clone()).modulus();
            let scale = if m == n { target.modulus() } else { krawtchouk_norm(j, c, m) * krawtchouk_norm(j, c, n) };
            res.push_raw(diff, diff / scale.max(1e-300));
        }
    }
    Ok(res)
}

fn krawtchouk_norm(j: u32, c: &Rational, n: u32) -> f64 {
    let c = rat_to_f64(c);
    let mut t = c.powi(-(n as i32));
    for i in 0..n {
        t *= (i as f64 + 1.0) / (i as f64 - j as f64);
    }
    t.abs().sqrt()
}

/// Deviation of ⟨K(m,·), K(n,·)⟩_w from the orthogonality display over all
/// m, n ≤ max_index, measured on the scale-free quantity
/// |G_mn − δ_mn N_n| / √(N_m N_n).
pub fn orthogonality_residual(family: &OrthoFamily, max_index: u32, quad: &Quadrature) -> Result<VerificationReport> {
    family.validate()?;
    let case = format!("orthogonality/{}", family.name());
    if let OrthoFamily::Krawtchouk { j, c } = family {
        let res = krawtchouk_exact(*j, c, max_index)?;
        return Ok(res.report(case, Mode::Exact, Measure::Rel, family.tolerance()));
    }
    let g = gram_matrix(family, max_index, quad)?;
    let mut res = Residuals::new();
    for (m, row) in g.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let (nm, nn) = (family.squared_norm(m as u32), family.squared_norm(n as u32));
            let target = if m == n { nn } else { 0.0 };
            let d = (v - target).abs();
            res.push_raw(d, d / (nm * nn).sqrt());
        }
    }
    Ok(res.report(case, Mode::Float, Measure::Rel, family.tolerance()))
}

/// Unitarity surrogate: ⟨K(m,·), K(n,·)⟩_w against δ_mn / w(m), with the
/// index-side weight w, as |G_mn − δ_mn/w(m)| · √|w(m) w(n)|.
pub fn gram_residual(family: &OrthoFamily, trunc: u32, normalization: GramNormalization) -> Result<VerificationReport> {
    family.validate()?;
    let quad = family.default_quadrature(trunc);
    let constant = match normalization {
        GramNormalization::Printed => 1.0,
        GramNormalization::Unitary => family.unitary_constant()?,
    };
    if let OrthoFamily::Krawtchouk { j, c } = family {
        let res = krawtchouk_gram_exact(*j, c, trunc, normalization)?;
        return Ok(gram_report(family, res, Mode::Exact, normalization));
    }
    let g = gram_matrix(family, trunc, &quad)?;
    let mut res = Residuals::new();
    for (m, row) in g.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let (wm, wn) = (family.index_weight(m as u32), family.index_weight(n as u32));
            let target = if m == n { 1.0 / wm } else { 0.0 };
            let d = (v * constant * constant - target).abs();
            res.push_raw(d, d * (wm * wn).abs().sqrt());
        }
    }
    Ok(gram_report(family, res, Mode::Float, normalization))
}

fn gram_report(family: &OrthoFamily, res: Residuals, mode: Mode, normalization: GramNormalization) -> VerificationReport {
    let label = match normalization {
        GramNormalization::Printed => "printed",
        GramNormalization::Unitary => "unitary",
    };
    let mut report = res.report(format!("gram/{}/{label}", family.name()), mode, Measure::Rel, family.tolerance());
    if normalization == GramNormalization::Printed && !report.passed() {
        report = report.with_note("the printed normalization misses the unitary constant; see the unitary variant");
    }
    report
}

/// The Krawtchouk Gram matrix is a finite sum with sign-alternating index
/// weights, so it is formed exactly; the unitary constant enters squared,
/// (1 − c)^j, which is rational.
fn krawtchouk_gram_exact(j: u32, c: &Rational, trunc: u32, normalization: GramNormalization) -> Result<Residuals> {
    let ce = ex_re(c.clone());
    let one_minus = ex_re(Rational::from_integer(1.into()) - c);
    if normalization == GramNormalization::Unitary && c >= &Rational::from_integer(1.into()) {
        return Err(Error::Domain("unitary normalization needs c < 1".into()));
    }
    let inv_norm = one_minus.try_inv().ok_or_else(|| Error::Domain("c = 1".into()))?.pow(j);
    // (−j)_x c^x (1 − c)^{−j} / x!
    let weight = |x: u32| -> Exact {
        let mut v = <Exact as Scalar>::one();
        for i in 0..x {
            v = v * Exact::from_i64(i as i64 - j as i64) * Exact::from_i64(i as i64 + 1).try_inv().unwrap();
        }
        v * ce.pow(x) * inv_norm.clone()
    };
    let constant_sq = match normalization {
        GramNormalization::Printed => <Exact as Scalar>::one(),
        GramNormalization::Unitary => one_minus.pow(j),
    };
    let size = trunc.min(j) + 1;
    let rows: Vec<Vec<Exact>> =
        (0..=j).map(|x| (0..size).map(|m| krawtchouk(m, x, j, &ce)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let weights: Vec<Exact> = (0..=j).map(weight).collect();
    let mut res = Residuals::new();
    for m in 0..size as usize {
        for n in 0..size as usize {
            let mut g = <Exact as Scalar>::zero();
            for x in 0..=j as usize {
                g = g + weights[x].clone() * rows[x][m].clone() * rows[x][n].clone();
            }
            let mut d = g * constant_sq.clone();
            if m == n {
                d = d - weights[m].try_inv().ok_or_else(|| Error::Domain("zero index weight".into()))?;
            }
            let scale = (weights[m].clone() * weights[n].clone()).modulus().sqrt();
            let d = d.modulus();
            res.push_raw(d, d * scale);
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn discrete_orthogonality() {
        for fam in [
            OrthoFamily::Charlier { c: rat(1, 2) },
            OrthoFamily::Charlier { c: rat(3, 4) },
            OrthoFamily::Meixner { k: rat(3, 4), c: rat(1, 3) },
            OrthoFamily::Krawtchouk { j: 12, c: rat(1, 3) },
        ] {
            let r = orthogonality_residual(&fam, 12, &fam.default_quadrature(12)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn continuous_orthogonality() {
        let h = OrthoFamily::Hermite { c: rat(3, 4) };
        let r = orthogonality_residual(&h, 10, &h.default_quadrature(10)).unwrap();
        assert!(r.passed(), "{r:?}");
        let l = OrthoFamily::Laguerre { k: rat(3, 4), c: rat(1, 4) };
        let r = orthogonality_residual(&l, 10, &l.default_quadrature(10)).unwrap();
        assert!(r.passed(), "{r:?}");
        let mp = OrthoFamily::MeixnerPollaczek { k: 0.75, phi: PI / 3.0 };
        let r = orthogonality_residual(&mp, 6, &mp.default_quadrature(6)).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn quadrature_exactness_is_enforced() {
        let h = OrthoFamily::Hermite { c: rat(1, 2) };
        assert!(matches!(
            orthogonality_residual(&h, 10, &Quadrature::GaussHermite { m: 5 }),
            Err(Error::Quadrature(_))
        ));
        assert!(orthogonality_residual(&h, 3, &Quadrature::DiscreteSum { tail_eps: 1e-18 }).is_err());
    }

    #[test]
    fn krawtchouk_gram_is_exact() {
        // sign-alternating weights cancel badly in floating point at j = 12
        for (j, c) in [(12, rat(1, 3)), (20, rat(3, 4)), (5, rat(-1, 2))] {
            let fam = OrthoFamily::Krawtchouk { j, c };
            let u = gram_residual(&fam, j, GramNormalization::Unitary).unwrap();
            assert_eq!(u.mode, Mode::Exact);
            assert_eq!(u.max_abs_residual, 0.0, "{u:?}");
            assert!(!gram_residual(&fam, j, GramNormalization::Printed).unwrap().passed());
        }
    }

    #[test]
    fn gram_printed_versus_unitary() {
        let cases = [
            (OrthoFamily::Charlier { c: rat(1, 2) }, false),
            (OrthoFamily::Meixner { k: rat(3, 4), c: rat(1, 3) }, false),
            (OrthoFamily::Krawtchouk { j: 8, c: rat(1, 3) }, false),
            (OrthoFamily::Hermite { c: rat(3, 4) }, true),
            (OrthoFamily::Laguerre { k: rat(3, 4), c: rat(1, 4) }, false),
            (OrthoFamily::MeixnerPollaczek { k: 0.75, phi: PI / 3.0 }, true),
        ];
        for (fam, printed_ok) in cases {
            let p = gram_residual(&fam, 8, GramNormalization::Printed).unwrap();
            assert_eq!(p.passed(), printed_ok, "{p:?}");
            let u = gram_residual(&fam, 8, GramNormalization::Unitary).unwrap();
            assert!(u.passed(), "{u:?}");
        }
    }
}
