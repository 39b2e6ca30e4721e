//! Gauss quadrature built from three-term recurrences.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Orthonormal recurrence values p_0..p_n at x and the derivative of p_n.
/// `x p_j = b_{j+1} p_{j+1} + a_j p_j + b_j p_{j-1}`, with `b[j]` for j >= 1.
fn orthonormal(a: &[f64], b: &[f64], x: f64) -> (Vec<f64>, f64) {
    let n = a.len();
    let mut p = vec![0.0; n + 1];
    let mut dp = vec![0.0; n + 1];
    p[0] = 1.0;
    for j in 0..n {
        let prev = if j > 0 { b[j] * p[j - 1] } else { 0.0 };
        let dprev = if j > 0 { b[j] * dp[j - 1] } else { 0.0 };
        p[j + 1] = ((x - a[j]) * p[j] - prev) / b[j + 1];
        dp[j + 1] = (p[j] + (x - a[j]) * dp[j] - dprev) / b[j + 1];
    }
    let d = dp[n];
    (p, d)
}

/// Golub–Welsch with Newton refinement. `a` has n entries, `b` has n + 1
/// (b[0] unused, b[n] only enters the refinement), `mu0` is the total mass.
pub fn from_recurrence(a: &[f64], b: &[f64], mu0: f64) -> Result<Rule> {
    let n = a.len();
    if n == 0 || b.len() != n + 1 {
        return Err(Error::Quadrature("recurrence length mismatch".into()));
    }
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = a[i];
        if i + 1 < n {
            j[(i, i + 1)] = b[i + 1];
            j[(i + 1, i)] = b[i + 1];
        }
    }
    let mut nodes: Vec<f64> = j.symmetric_eigen().eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d) = orthonormal(a, b, *x);
            if d == 0.0 {
                break;
            }
            let step = p[n] / d;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (p, _) = orthonormal(a, b, *x);
        let s: f64 = p[..n].iter().map(|v| v * v).sum();
        weights.push(mu0 / s);
    }
    if nodes.iter().chain(&weights).any(|v| !v.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite nodes for n = {n}")));
    }
    Ok(Rule { nodes, weights })
}

/// Enforces exact mirror symmetry of a rule for an even weight.
fn symmetrize(mut r: Rule) -> Rule {
    let n = r.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (r.nodes[j] - r.nodes[i]);
        let w = 0.5 * (r.weights[i] + r.weights[j]);
        r.nodes[i] = -x;
        r.nodes[j] = x;
        r.weights[i] = w;
        r.weights[j] = w;
    }
    if n % 2 == 1 {
        r.nodes[n / 2] = 0.0;
    }
    r
}

/// n-point rule for the Gaussian density with variance `var`.
pub fn gauss_hermite(n: usize, var: f64) -> Result<Rule> {
    let a = vec![0.0; n];
    let b: Vec<f64> = (0..=n).map(|j| (j as f64).sqrt()).collect();
    let mut r = symmetrize(from_recurrence(&a, &b, 1.0)?);
    let s = var.sqrt();
    r.nodes.iter_mut().for_each(|x| *x *= s);
    Ok(r)
}

/// n-point rule for the density `x^alpha e^{-x} / Γ(alpha + 1)` on (0, ∞).
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    if alpha <= -1.0 {
        return Err(Error::Domain(format!("Laguerre parameter {alpha} must exceed -1")));
    }
    let a: Vec<f64> = (0..n).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (0..=n).map(|j| (j as f64 * (j as f64 + alpha)).max(0.0).sqrt()).collect();
    from_recurrence(&a, &b, 1.0)
}

/// Unnormalized generalized Laguerre weight `x^alpha e^{-x}`.
pub fn gauss_laguerre_raw(n: usize, alpha: f64) -> Result<Rule> {
    let mut r = gauss_laguerre(n, alpha)?;
    let m = ln_gamma(alpha + 1.0).exp();
    r.weights.iter_mut().for_each(|w| *w *= m);
    Ok(r)
}

/// n-point Gauss–Legendre rule on [lo, hi].
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<Rule> {
    let a = vec![0.0; n];
    let b: Vec<f64> = (0..=n)
        .map(|j| {
            let j = j as f64;
            if j == 0.0 {
                0.0
            } else {
                j / (4.0 * j * j - 1.0).sqrt()
            }
        })
        .collect();
    let mut r = symmetrize(from_recurrence(&a, &b, 2.0)?);
    let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    r.nodes.iter_mut().for_each(|x| *x = m + h * *x);
    r.weights.iter_mut().for_each(|w| *w *= h);
    Ok(r)
}

/// Composite Gauss–Legendre on [-half_width, half_width]: `panels` panels
/// of `order` points. Used for weights decaying exponentially on the line.
pub fn truncated_line(half_width: f64, panels: usize, order: usize) -> Result<Rule> {
    let base = gauss_legendre(order, -1.0, 1.0)?;
    let h = 2.0 * half_width / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = -half_width + p as f64 * h;
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    Ok(Rule { nodes, weights })
}
