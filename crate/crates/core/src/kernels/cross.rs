//! Exact hypergeometric series against the double-double recurrences.

use num_complex::Complex64;

use super::analytic::{mp_bare, mp_recurrence};
use super::ortho::OrthoFamily;
use super::polys::{
    charlier, charlier_recurrence, hermite_poly, hermite_recurrence, krawtchouk, krawtchouk_recurrence,
    laguerre_poly, laguerre_recurrence, meixner, meixner_recurrence,
};
use crate::error::Result;
use crate::report::{Measure, Mode, Residuals, VerificationReport};
use crate::scalar::{ex_re, rat, Exact, Rational, Scalar};

/// Tolerance on the relative disagreement of the two evaluation routes.
pub const CROSS_TOL: f64 = 1e-12;

/// Compares both routes for every n ≤ n_max at the points x = 0..=x_max
/// (lattice families) or x = i/2 for i ≤ 2·x_max (continuous ones). The
/// Meixner-Pollaczek family has no exact route; its double-double series
/// is compared with the f64 recurrence.
pub fn cross_validate(family: &OrthoFamily, n_max: u32, x_max: u32) -> Result<VerificationReport> {
    let mut res = Residuals::new();
    let mut check = |series: Vec<Exact>, rec: Vec<f64>| {
        for (s, r) in series.iter().zip(&rec) {
            res.push(s.to_c64(), Complex64::new(*r, 0.0));
        }
    };
    match family {
        OrthoFamily::Charlier { c } => {
            let ce = ex_re(c.clone());
            for x in 0..=x_max {
                let s = (0..=n_max).map(|n| charlier(n, x, &ce)).collect::<Result<_>>()?;
                check(s, charlier_recurrence(n_max, &Rational::from_integer(x.into()), c)?);
            }
        }
        OrthoFamily::Meixner { k, c } => {
            let beta = k * rat(2, 1);
            let (be, ce) = (ex_re(beta.clone()), ex_re(c.clone()));
            for x in 0..=x_max {
                let s = (0..=n_max).map(|n| meixner(n, x, &be, &ce)).collect::<Result<_>>()?;
                check(s, meixner_recurrence(n_max, &Rational::from_integer(x.into()), &beta, c)?);
            }
        }
        OrthoFamily::Krawtchouk { j, c } => {
            let ce = ex_re(c.clone());
            let top = n_max.min(*j);
            for x in 0..=x_max.min(*j) {
                let s = (0..=top).map(|n| krawtchouk(n, x, *j, &ce)).collect::<Result<_>>()?;
                check(s, krawtchouk_recurrence(top, x, *j, c)?);
            }
        }
        OrthoFamily::Hermite { c } => {
            let ce = ex_re(c.clone());
            for i in 0..=2 * x_max {
                let x = rat(i as i64, 2);
                let xe = [ex_re(x.clone())];
                let s = (0..=n_max).map(|n| Ok(hermite_poly(n, &ce)?.eval(&xe))).collect::<Result<_>>()?;
                check(s, hermite_recurrence(n_max, &x, c)?);
            }
        }
        OrthoFamily::Laguerre { k, .. } => {
            let ke = ex_re(k.clone());
            for i in 0..=2 * x_max {
                let x = rat(i as i64, 2);
                let xe = [ex_re(x.clone())];
                let s = (0..=n_max).map(|n| Ok(laguerre_poly(n, &ke)?.eval(&xe))).collect::<Result<_>>()?;
                check(s, laguerre_recurrence(n_max, &x, k)?);
            }
        }
        OrthoFamily::MeixnerPollaczek { k, phi } => {
            for i in 0..=2 * x_max {
                let x = Complex64::new(i as f64 / 2.0 - x_max as f64 / 2.0, 0.0);
                let rec = mp_recurrence(n_max, x, *k, *phi)?;
                for (n, r) in rec.iter().enumerate() {
                    res.push(mp_bare(n as u32, x, *k, *phi)?, *r);
                }
            }
        }
    }
    let mode = if matches!(family, OrthoFamily::MeixnerPollaczek { .. }) { Mode::Float } else { Mode::Exact };
    Ok(res.report(format!("cross-validate/{}", family.name()), mode, Measure::Rel, CROSS_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_families_agree() {
        let fams = [
            OrthoFamily::Charlier { c: rat(1, 2) },
            OrthoFamily::Charlier { c: rat(3, 4) },
            OrthoFamily::Meixner { k: rat(3, 4), c: rat(1, 3) },
            OrthoFamily::Krawtchouk { j: 20, c: rat(1, 3) },
            OrthoFamily::Krawtchouk { j: 20, c: rat(3, 2) },
            OrthoFamily::Hermite { c: rat(3, 4) },
            OrthoFamily::Laguerre { k: rat(3, 4), c: rat(1, 4) },
            OrthoFamily::MeixnerPollaczek { k: 0.75, phi: std::f64::consts::PI / 3.0 },
        ];
        for f in &fams {
            let r = cross_validate(f, 20, 20).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
