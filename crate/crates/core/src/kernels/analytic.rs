//! Non-polynomial kernels: the Bessel kernel of the energy process, the
//! Gaussian-exponential kernel of the diffusion and the Meixner–Pollaczek
//! kernel. Derivatives are analytic, never finite differences.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::{dd, to_f64, CDd, Dd};
use crate::error::{Error, Result};
use crate::special::ln_gamma;

const BESSEL_MIN_TERMS: usize = 30;
const BESSEL_MAX_TERMS: usize = 500;
const BESSEL_REL_STOP: f64 = 1e-16;

fn check_order(dx: u32, dy: u32) -> Result<()> {
    if dx > 2 || dy > 2 {
        return Err(Error::Unsupported(format!("derivative order ({dx}, {dy}) above 2")));
    }
    Ok(())
}

/// m(m−1)…(m−i+1)
fn falling(m: usize, i: u32) -> f64 {
    (0..i as usize).map(|t| m as f64 - t as f64).product()
}

fn pow0(v: f64, p: i64) -> f64 {
    if p < 0 {
        0.0
    } else {
        v.powi(p as i32)
    }
}

fn binom2(a: u32, i: u32) -> f64 {
    match (a, i) {
        (_, 0) => 1.0,
        (2, 1) => 2.0,
        _ => 1.0,
    }
}

/// ∂_x^i ∂_y^j of g(xy) = Σ_m t_m (xy)^m with t_m = (−1/4)^m / ((2k)_m m!),
/// for all i ≤ dx, j ≤ dy. Terms and sums are carried in double-double since
/// the series alternates with terms far above its value.
fn bessel_series(x: f64, y: f64, k: f64, dx: u32, dy: u32) -> Result<Vec<Vec<f64>>> {
    let two_k = 2.0 * k;
    let mut sums = vec![vec![dd(0.0); dy as usize + 1]; dx as usize + 1];
    // t_m in double-double; the (i, j) term is t_m (m)_i↓ (m)_j↓ x^{m−i} y^{m−j}
    let mut t = dd(1.0);
    for m in 0..BESSEL_MAX_TERMS {
        let mut done = m >= BESSEL_MIN_TERMS;
        for i in 0..=dx {
            for j in 0..=dy {
                let f = falling(m, i) * falling(m, j);
                let term: Dd = if f == 0.0 {
                    dd(0.0)
                } else {
                    let pref = pow0(x, m as i64 - i as i64) * pow0(y, m as i64 - j as i64);
                    t * (f * pref)
                };
                let s = &mut sums[i as usize][j as usize];
                *s += term;
                if term.hi.abs() > BESSEL_REL_STOP * s.hi.abs() {
                    done = false;
                }
            }
        }
        if done {
            return Ok(sums.into_iter().map(|row| row.into_iter().map(to_f64).collect()).collect());
        }
        t = t * (-0.25) / (dd(two_k + m as f64) * (m as f64 + 1.0));
        if !t.hi.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence(format!(
        "Bessel series at x = {x}, y = {y}, k = {k} after {BESSEL_MAX_TERMS} terms"
    )))
}

fn check_bessel_args(x: f64, y: f64, k: f64) -> Result<()> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    if !(x >= 0.0 && y >= 0.0) {
        return Err(Error::Domain(format!("Bessel kernel needs x, y >= 0, got ({x}, {y})")));
    }
    Ok(())
}

/// 2^{1−2k}/Γ(2k)
fn bessel_constant(k: f64) -> f64 {
    ((1.0 - 2.0 * k) * 2f64.ln() - ln_gamma(2.0 * k)).exp()
}

/// ∂_x^dx ∂_y^dy of the bare kernel 2^{1−2k}/Γ(2k) · ₀F₁(; 2k; −xy/4).
pub fn bessel_bare(x: f64, y: f64, k: f64, dx: u32, dy: u32) -> Result<f64> {
    check_order(dx, dy)?;
    check_bessel_args(x, y, k)?;
    let g = bessel_series(x, y, k, dx, dy)?;
    Ok(bessel_constant(k) * g[dx as usize][dy as usize])
}

/// ∂_x^dx ∂_y^dy J(x, y; k) with
/// J = e^{(x+y)/2} (xy)^{½−k} J_{2k−1}(√(xy)) = e^{(x+y)/2} 2^{1−2k}/Γ(2k) ₀F₁(; 2k; −xy/4).
pub fn eval_bessel(x: f64, y: f64, k: f64, dx: u32, dy: u32) -> Result<f64> {
    check_order(dx, dy)?;
    check_bessel_args(x, y, k)?;
    let g = bessel_series(x, y, k, dx, dy)?;
    let mut acc = 0.0;
    for i in 0..=dx {
        for j in 0..=dy {
            let w = binom2(dx, i) * binom2(dy, j) * 0.5f64.powi((dx - i + dy - j) as i32);
            acc += w * g[i as usize][j as usize];
        }
    }
    Ok(((x + y) / 2.0).exp() * bessel_constant(k) * acc)
}

/// Which exponent the mixed term of the Gaussian-exponential kernel carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpForm {
    /// exp((x²+y²)/(4c) − ixy/c), as displayed.
    Printed,
    /// exp((x²+y²)/(4c) − ixy/(2c)); the form dual for the diffusion.
    Corrected,
}

impl ExpForm {
    fn gamma(self) -> f64 {
        match self {
            ExpForm::Printed => 1.0,
            ExpForm::Corrected => 0.5,
        }
    }
}

/// ∂_x^dx ∂_y^dy φ(x, y; c). The exponent α is quadratic, so with
/// α_x = x/(2c) − iγy/c, α_xx = 1/(2c), α_xy = −iγ/c every derivative is a
/// polynomial in these times φ.
pub fn eval_exp_kernel(x: f64, y: f64, c: f64, dx: u32, dy: u32, form: ExpForm) -> Result<Complex64> {
    check_order(dx, dy)?;
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    let i = Complex64::new(0.0, 1.0);
    let g = form.gamma();
    let alpha = Complex64::new((x * x + y * y) / (4.0 * c), 0.0) - i * (g * x * y / c);
    let ax = Complex64::new(x / (2.0 * c), 0.0) - i * (g * y / c);
    let ay = Complex64::new(y / (2.0 * c), 0.0) - i * (g * x / c);
    let axx = Complex64::new(1.0 / (2.0 * c), 0.0);
    let ayy = axx;
    let axy = -i * (g / c);
    let p = match (dx, dy) {
        (0, 0) => Complex64::new(1.0, 0.0),
        (1, 0) => ax,
        (0, 1) => ay,
        (2, 0) => ax * ax + axx,
        (0, 2) => ay * ay + ayy,
        (1, 1) => ax * ay + axy,
        (2, 1) => 2.0 * ax * axy + ay * (ax * ax + axx),
        (1, 2) => 2.0 * ay * axy + ax * (ay * ay + ayy),
        (2, 2) => 2.0 * axy * axy + (ayy + ay * ay) * (ax * ax + axx) + 4.0 * ax * ay * axy,
        _ => unreachable!("orders checked above"),
    };
    Ok(p * alpha.exp())
}

fn check_mp(k: f64, phi: f64) -> Result<()> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    if !(phi > 0.0 && phi < PI) {
        return Err(Error::Domain(format!("phi must lie in (0, pi), got {phi}")));
    }
    Ok(())
}

/// n!/(2k)_n · P_n^{(k)}(x; φ) = e^{inφ} ₂F₁(−n, k+ix; 2k; 1 − e^{−2iφ}) at
/// complex x.
pub fn mp_bare(n: u32, x: Complex64, k: f64, phi: f64) -> Result<Complex64> {
    check_mp(k, phi)?;
    // the terms reach (2 sinφ)^n times the value; sum in double-double
    let (s, c) = phi.sin_cos();
    let z = CDd::new(dd(2.0 * s) * s, dd(2.0 * s) * c);
    let a_re = dd(k) - x.im;
    let a_im = dd(x.re);
    let mut sum = CDd::new(dd(1.0), dd(0.0));
    let mut term = sum;
    for j in 0..n {
        let jf = j as f64;
        let factor = CDd::new(a_re + jf, a_im) * z;
        let r = dd(jf - n as f64) / (dd(2.0 * k + jf) * (jf + 1.0));
        term = (term * factor).scale(r);
        sum = sum + term;
    }
    let i = Complex64::new(0.0, 1.0);
    Ok((i * (n as f64 * phi)).exp() * sum.to_c64())
}

/// P(n, x; k, φ) = e^{xφ} n!/(2k)_n P_n^{(k)}(x; φ); complex x gives the
/// shifted values, e^{(x±i)φ} = e^{±iφ} e^{xφ}.
pub fn eval_mp(n: u32, x: Complex64, k: f64, phi: f64) -> Result<Complex64> {
    Ok((x * phi).exp() * mp_bare(n, x, k, phi)?)
}

/// The bare values for n = 0..=n_max from
/// 2x sinφ P_n = (n+1)P_{n+1} − 2(n+k)cosφ P_n + (n+2k−1)P_{n−1}.
pub fn mp_recurrence(n_max: u32, x: Complex64, k: f64, phi: f64) -> Result<Vec<Complex64>> {
    check_mp(k, phi)?;
    let (s, c) = phi.sin_cos();
    let mut p = vec![Complex64::new(1.0, 0.0), 2.0 * (k * c + x * s)];
    for n in 1..n_max as usize {
        let nf = n as f64;
        let next = (2.0 * (x * s + (nf + k) * c) * p[n] - (nf + 2.0 * k - 1.0) * p[n - 1]) / (nf + 1.0);
        p.push(next);
    }
    p.truncate(n_max as usize + 1);
    // rescale by n!/(2k)_n
    let mut scale = 1.0;
    for (n, v) in p.iter_mut().enumerate() {
        if n > 0 {
            scale *= n as f64 / (2.0 * k + n as f64 - 1.0);
        }
        *v *= scale;
    }
    Ok(p)
}
