//! Polynomial kernels: Charlier, Meixner, Krawtchouk, Hermite and Laguerre.
//! The terminating hypergeometric sums work over any scalar field; the
//! recurrences are the independent floating route.

use num_traits::Zero;

use super::dd::{dd, dd_rat, to_f64};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

fn inv<S: Scalar>(v: &S, what: &str) -> Result<S> {
    v.try_inv().ok_or_else(|| Error::Domain(format!("{what} must be nonzero")))
}

/// Σ_j (−n)_j (−x)_j / ((β)_j j!) z^j, with `beta = None` for ₂F₀.
fn terminating<S: Scalar>(n: u32, x: u32, beta: Option<&S>, z: &S) -> Result<S> {
    let mut sum = S::one();
    let mut term = S::one();
    for j in 0..n.min(x) {
        let jj = S::from_i64(j as i64);
        let num = (S::from_i64(j as i64) - S::from_i64(n as i64)) * (jj.clone() - S::from_i64(x as i64));
        let mut den = S::from_i64(j as i64 + 1);
        if let Some(b) = beta {
            den = den * (b.clone() + jj);
        }
        term = term * num * z.clone() * inv(&den, "hypergeometric denominator")?;
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// C_n(x; c) = ₂F₀(−n, −x; ; −1/c).
pub fn charlier<S: Scalar>(n: u32, x: u32, c: &S) -> Result<S> {
    let z = -inv(c, "c")?;
    terminating(n, x, None, &z)
}

/// M_n(x; β, c) = ₂F₁(−n, −x; β; 1 − 1/c).
pub fn meixner<S: Scalar>(n: u32, x: u32, beta: &S, c: &S) -> Result<S> {
    let z = S::one() - inv(c, "c")?;
    terminating(n, x, Some(beta), &z)
}

/// The Meixner formula at β = −j, i.e. the kernel reached from M by k = −j/2.
pub fn krawtchouk<S: Scalar>(n: u32, x: u32, j: u32, c: &S) -> Result<S> {
    if n > j || x > j {
        return Err(Error::Index(format!("Krawtchouk indices ({n}, {x}) exceed j = {j}")));
    }
    meixner(n, x, &S::from_i64(-(j as i64)), c)
}

/// (2c)^{−n/2} H_n(x/√(2c)) as a polynomial in x. Only even powers of √(2c)
/// survive, so the coefficients are rational whenever c is.
pub fn hermite_poly<S: Scalar>(n: u32, c: &S) -> Result<Poly<S>> {
    let inv_2c = inv(&(S::from_i64(2) * c.clone()), "c")?;
    let mut coeffs = vec![S::zero(); n as usize + 1];
    let mut fact_n = S::one();
    for i in 1..=n {
        fact_n = fact_n * S::from_i64(i as i64);
    }
    for m in 0..=n / 2 {
        let p = n - 2 * m;
        let mut den = S::one();
        for i in 1..=m {
            den = den * S::from_i64(i as i64);
        }
        for i in 1..=p {
            den = den * S::from_i64(i as i64);
        }
        let sign = if m % 2 == 0 { S::one() } else { -S::one() };
        let v = sign * fact_n.clone() * inv(&den, "factorial")? * S::from_i64(2).pow(p) * inv_2c.pow(n - m);
        coeffs[p as usize] = v;
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// n!/(2k)_n · L_n^{(2k−1)}(x) = ₁F₁(−n; 2k; x) as a polynomial in x.
pub fn laguerre_poly<S: Scalar>(n: u32, k: &S) -> Result<Poly<S>> {
    let two_k = S::from_i64(2) * k.clone();
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut term = S::one();
    coeffs.push(term.clone());
    for j in 0..n {
        let num = S::from_i64(j as i64) - S::from_i64(n as i64);
        let den = S::from_i64(j as i64 + 1) * (two_k.clone() + S::from_i64(j as i64));
        term = term * num * inv(&den, "(2k)_j")?;
        coeffs.push(term.clone());
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// The Laguerre kernel with its c^{−n/2} factor, for pairing with π_{k,c}.
pub fn laguerre_poly_scaled<S: Scalar>(n: u32, k: &S, sqrt_c: &S) -> Result<Poly<S>> {
    Ok(laguerre_poly(n, k)?.scale(&inv(sqrt_c, "sqrt(c)")?.pow(n)))
}

fn nonzero(q: &Rational, what: &str) -> Result<()> {
    if q.is_zero() {
        return Err(Error::Domain(format!("{what} must be nonzero")));
    }
    Ok(())
}

/// C_0..=C_{n_max} at x from −xC_n = cC_{n+1} − (n+c)C_n + nC_{n−1}.
pub fn charlier_recurrence(n_max: u32, x: &Rational, c: &Rational) -> Result<Vec<f64>> {
    nonzero(c, "c")?;
    let (x, c) = (dd_rat(x), dd_rat(c));
    let mut out = vec![dd(1.0), dd(1.0) - x / c];
    for n in 1..n_max as usize {
        let nf = n as f64;
        let next = ((nf + c - x) * out[n] - nf * out[n - 1]) / c;
        out.push(next);
    }
    out.truncate(n_max as usize + 1);
    Ok(out.into_iter().map(to_f64).collect())
}

/// M_0..=M_{n_max} at x from
/// (c−1)(x+β/2)M_n = c(n+β)M_{n+1} − (c+1)(n+β/2)M_n + nM_{n−1}.
pub fn meixner_recurrence(n_max: u32, x: &Rational, beta: &Rational, c: &Rational) -> Result<Vec<f64>> {
    nonzero(c, "c")?;
    nonzero(beta, "beta")?;
    let (x, b, c) = (dd_rat(x), dd_rat(beta), dd_rat(c));
    let half_b = b / 2.0;
    let mut out = vec![dd(1.0), dd(1.0) + x * (dd(1.0) - dd(1.0) / c) / b];
    for n in 1..n_max as usize {
        let nf = n as f64;
        let den = c * (nf + b);
        if den.hi == 0.0 {
            return Err(Error::Domain(format!("recurrence breaks down at n = {n}")));
        }
        let lhs = (c - 1.0) * (x + half_b) * out[n];
        let next = (lhs + (c + 1.0) * (nf + half_b) * out[n] - nf * out[n - 1]) / den;
        out.push(next);
    }
    out.truncate(n_max as usize + 1);
    Ok(out.into_iter().map(to_f64).collect())
}

pub fn krawtchouk_recurrence(n_max: u32, x: u32, j: u32, c: &Rational) -> Result<Vec<f64>> {
    if n_max > j || x > j {
        return Err(Error::Index(format!("Krawtchouk indices exceed j = {j}")));
    }
    let beta = Rational::from_integer(num_bigint::BigInt::from(-(j as i64)));
    meixner_recurrence(n_max, &Rational::from_integer(x.into()), &beta, c)
}

/// Kernel-normalized Hermite values h_n = (2c)^{−n/2}H_n(x/√(2c)) from
/// h_{n+1} = (x h_n − n h_{n−1})/c.
pub fn hermite_recurrence(n_max: u32, x: &Rational, c: &Rational) -> Result<Vec<f64>> {
    nonzero(c, "c")?;
    let (x, c) = (dd_rat(x), dd_rat(c));
    let mut out = vec![dd(1.0), x / c];
    for n in 1..n_max as usize {
        let next = (x * out[n] - (n as f64) * out[n - 1]) / c;
        out.push(next);
    }
    out.truncate(n_max as usize + 1);
    Ok(out.into_iter().map(to_f64).collect())
}

/// ℓ_n = ₁F₁(−n; 2k; x) from −xℓ_n = (2k+n)ℓ_{n+1} − (2n+2k)ℓ_n + nℓ_{n−1},
/// the Laguerre recurrence rewritten for this normalization.
pub fn laguerre_recurrence(n_max: u32, x: &Rational, k: &Rational) -> Result<Vec<f64>> {
    nonzero(k, "k")?;
    let (x, k2) = (dd_rat(x), dd_rat(k) * 2.0);
    let mut out = vec![dd(1.0), dd(1.0) - x / k2];
    for n in 1..n_max as usize {
        let nf = n as f64;
        let next = ((2.0 * nf + k2 - x) * out[n] - nf * out[n - 1]) / (k2 + nf);
        out.push(next);
    }
    out.truncate(n_max as usize + 1);
    Ok(out.into_iter().map(to_f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ex, ex_re, rat, Exact};

    fn e(v: &Rational) -> Exact {
        ex_re(v.clone())
    }

    #[test]
    fn charlier_examples() {
        let c = ex(1, 2);
        assert_eq!(charlier(0, 7, &c).unwrap(), ex(1, 1));
        assert_eq!(charlier(1, 2, &c).unwrap(), ex(-3, 1));
        let c = ex(3, 4);
        assert_eq!(charlier(3, 5, &c).unwrap(), charlier(5, 3, &c).unwrap());
    }

    #[test]
    fn charlier_raising_lowering() {
        let c = ex(3, 4);
        for n in 0..=20u32 {
            for x in 0..=20u32 {
                let cn = |n: u32, x: u32| charlier(n, x, &c).unwrap();
                if n > 0 {
                    let lhs = ex(n as i64, 1) * cn(n - 1, x);
                    assert_eq!(lhs, c.clone() * cn(n, x) - c.clone() * cn(n, x + 1));
                }
                if x > 0 {
                    let lhs = c.clone() * cn(n + 1, x);
                    assert_eq!(lhs, c.clone() * cn(n, x) - ex(x as i64, 1) * cn(n, x - 1));
                }
            }
        }
    }

    #[test]
    fn meixner_examples() {
        let (k, c) = (ex(1, 2), ex(1, 2));
        let beta = ex(2, 1) * k;
        assert_eq!(meixner(4, 0, &beta, &c).unwrap(), ex(1, 1));
        assert_eq!(meixner(1, 2, &beta, &c).unwrap(), ex(-1, 1));
        let beta = ex(3, 2);
        assert_eq!(meixner(3, 4, &beta, &ex(1, 3)).unwrap(), meixner(4, 3, &beta, &ex(1, 3)).unwrap());
    }

    #[test]
    fn krawtchouk_bounds_and_symmetry() {
        let c = ex(1, 3);
        assert_eq!(krawtchouk(0, 3, 4, &c).unwrap(), ex(1, 1));
        for n in 0..=4 {
            for x in 0..=4 {
                assert_eq!(krawtchouk(n, x, 4, &c).unwrap(), krawtchouk(x, n, 4, &c).unwrap());
            }
        }
        assert!(krawtchouk(5, 0, 4, &c).is_err());
    }

    #[test]
    fn hermite_examples_and_raising() {
        assert_eq!(hermite_poly(0, &ex(3, 4)).unwrap(), Poly::constant(1, ex(1, 1)));
        assert_eq!(hermite_poly(1, &ex(1, 2)).unwrap(), Poly::from_coeffs(vec![ex(0, 1), ex(2, 1)]));
        // with c = 1/2 the kernel is H_n itself
        let c = ex(1, 2);
        let x = Poly::var(1, 0);
        for n in 0..10 {
            let h = hermite_poly(n, &c).unwrap();
            let raised = x.scale(&ex(2, 1)).mul_ref(&h).sub_ref(&h.derivative(0));
            assert_eq!(raised, hermite_poly(n + 1, &c).unwrap());
            if n > 0 {
                assert_eq!(h.derivative(0), hermite_poly(n - 1, &c).unwrap().scale(&ex(2 * n as i64, 1)));
            }
        }
    }

    #[test]
    fn laguerre_examples_and_ode() {
        let k = ex(3, 4);
        assert_eq!(laguerre_poly(0, &k).unwrap(), Poly::constant(1, ex(1, 1)));
        let l1 = laguerre_poly(1, &k).unwrap();
        assert_eq!(l1, Poly::from_coeffs(vec![ex(1, 1), ex(-2, 3)]));
        // x L'' + (α+1−x) L' + n L = 0 with α + 1 = 2k
        let x = Poly::var(1, 0);
        let n = 5;
        let l = laguerre_poly(n, &k).unwrap();
        let a1 = Poly::constant(1, ex(3, 2)).sub_ref(&x);
        let r = x
            .mul_ref(&l.derivative_n(0, 2))
            .add_ref(&a1.mul_ref(&l.derivative(0)))
            .add_ref(&l.scale(&ex(n as i64, 1)));
        assert!(r.is_zero());
    }

    #[test]
    fn recurrences_match_series() {
        let c = rat(3, 4);
        let rc = charlier_recurrence(20, &rat(7, 1), &c).unwrap();
        for (n, v) in rc.iter().enumerate() {
            let s = charlier(n as u32, 7, &e(&c)).unwrap().to_c64().re;
            assert!((v - s).abs() <= 1e-13 * s.abs().max(1e-300), "{n}: {v} vs {s}");
        }
        let rk = krawtchouk_recurrence(6, 2, 6, &rat(1, 3)).unwrap();
        for (n, v) in rk.iter().enumerate() {
            let s = krawtchouk(n as u32, 2, 6, &ex(1, 3)).unwrap().to_c64().re;
            assert!((v - s).abs() <= 1e-13 * s.abs().max(1e-300));
        }
        let x = rat(-7, 3);
        let rh = hermite_recurrence(12, &x, &c).unwrap();
        let rl = laguerre_recurrence(12, &rat(7, 3), &c).unwrap();
        for n in 0..=12u32 {
            let h = hermite_poly(n, &e(&c)).unwrap().eval(&[e(&x)]).to_c64().re;
            assert!((rh[n as usize] - h).abs() <= 1e-13 * h.abs());
            let l = laguerre_poly(n, &e(&c)).unwrap().eval(&[ex(7, 3)]).to_c64().re;
            assert!((rl[n as usize] - l).abs() <= 1e-13 * l.abs().max(1e-300));
        }
    }
}
