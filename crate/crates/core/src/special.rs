//! Gamma function (Lanczos, g = 7, nine coefficients) for real and complex
//! arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(z) on the principal branch, reflection for Re z < ½.
pub fn ln_gamma_c(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_c(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

/// ln |Γ(x)| for real x that is not a non-positive integer.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_c(Complex64::new(x, 0.0)).re
}

pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        return ln_gamma(x).exp();
    }
    if x == x.floor() {
        return f64::NAN;
    }
    PI / ((PI * x).sin() * gamma(1.0 - x))
}

/// |Γ(k + ix)|².
pub fn abs_gamma_sq(k: f64, x: f64) -> f64 {
    (2.0 * ln_gamma_c(Complex64::new(k, x)).re).exp()
}
