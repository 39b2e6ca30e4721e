//! The four ways of applying an operator pair to a two-slot kernel. Every
//! path computes [A D(·, y)](x) and [B D(x, ·)](y) independently and feeds
//! the pair to a `Residuals`; the outer loop runs in parallel.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ops::{DiffOp, LinearOp, ShiftOp};
use crate::poly::Poly;
use crate::report::Residuals;
use num_traits::Zero;

use crate::scalar::{Exact, Float, Rational, Scalar};

fn reduce(parts: Vec<Residuals>) -> Residuals {
    parts.iter().fold(Residuals::new(), |acc, r| acc.merge(r))
}

/// Σ_s c_s(n) f(n + s) with f vanishing off N^d, for any value type.
fn lattice_sum<T, S: Scalar>(
    op: &ShiftOp<S>,
    n: &[i64],
    zero: T,
    mut f: impl FnMut(&[i64]) -> T,
    mut mul: impl FnMut(&S, T) -> T,
    add: impl Fn(T, T) -> T,
) -> T {
    let pt: Vec<S> = n.iter().map(|&v| S::from_i64(v)).collect();
    let mut acc = zero;
    let mut target = vec![0i64; n.len()];
    for (s, c) in op.terms() {
        let cv = c.eval(&pt);
        if cv.is_zero() {
            continue;
        }
        let mut inside = true;
        for i in 0..n.len() {
            target[i] = n[i] + s[i] as i64;
            inside &= target[i] >= 0;
        }
        if inside {
            acc = add(acc, mul(&cv, f(&target)));
        }
    }
    acc
}

/// Targets and coefficients of a shift operator at each point, with the
/// targets numbered through `index`.
fn stencils(
    op: &ShiftOp<Exact>,
    pts: &[Vec<i64>],
    index: &mut std::collections::HashMap<Vec<i64>, usize>,
    order: &mut Vec<Vec<i64>>,
) -> Vec<Vec<(usize, Exact)>> {
    let mut id = |m: &[i64]| -> usize {
        if let Some(&i) = index.get(m) {
            return i;
        }
        index.insert(m.to_vec(), order.len());
        order.push(m.to_vec());
        order.len() - 1
    };
    pts.iter()
        .map(|n| {
            let pt: Vec<Exact> = n.iter().map(|&v| Exact::from_i64(v)).collect();
            let mut row = Vec::new();
            for (s, c) in op.terms() {
                let cv = c.eval(&pt);
                if Scalar::is_zero(&cv) {
                    continue;
                }
                let target: Vec<i64> = n.iter().zip(s).map(|(&a, &d)| a + d as i64).collect();
                if target.iter().all(|&v| v >= 0) {
                    row.push((id(&target), cv));
                }
            }
            // the point itself, for the other side's lookups
            id(n);
            row
        })
        .collect()
}

/// Both slots discrete: compare values exactly at every (n, x). Operator
/// coefficients and kernel values are computed once and reused.
pub(crate) fn lattice_lattice(
    a: &ShiftOp<Exact>,
    b: &ShiftOp<Exact>,
    kernel: &(dyn Fn(&[i64], &[i64]) -> Exact + Sync),
    left: &[Vec<i64>],
    right: &[Vec<i64>],
) -> Residuals {
    let (mut li, mut lo) = (Default::default(), Vec::new());
    let (mut ri, mut ro) = (Default::default(), Vec::new());
    let sa = stencils(a, left, &mut li, &mut lo);
    let sb = stencils(b, right, &mut ri, &mut ro);
    let table: Vec<Vec<Exact>> = lo.par_iter().map(|m| ro.iter().map(|x| kernel(m, x)).collect()).collect();
    let pair = |n: &Vec<i64>, x: &Vec<i64>| (li[n], ri[x]);
    let real = table.iter().flatten().chain(sa.iter().chain(&sb).flatten().map(|(_, c)| c)).all(|v| v.im.is_zero());
    if real {
        // every value is real: half the work in plain rationals
        let re = |v: &Exact| v.re.clone();
        let table: Vec<Vec<Rational>> = table.iter().map(|row| row.iter().map(re).collect()).collect();
        let sa: Vec<Vec<(usize, Rational)>> = sa.iter().map(|r| r.iter().map(|(i, c)| (*i, re(c))).collect()).collect();
        let sb: Vec<Vec<(usize, Rational)>> = sb.iter().map(|r| r.iter().map(|(i, c)| (*i, re(c))).collect()).collect();
        sweep(left, right, &sa, &sb, &table, pair, |v: &Rational| Exact::new(v.clone(), Rational::zero()))
    } else {
        sweep(left, right, &sa, &sb, &table, pair, |v: &Exact| v.clone())
    }
}

fn sweep<T>(
    left: &[Vec<i64>],
    right: &[Vec<i64>],
    sa: &[Vec<(usize, T)>],
    sb: &[Vec<(usize, T)>],
    table: &[Vec<T>],
    pair: impl Fn(&Vec<i64>, &Vec<i64>) -> (usize, usize) + Sync,
    lift: impl Fn(&T) -> Exact + Sync,
) -> Residuals
where
    T: Clone + Zero + Send + Sync,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let parts: Vec<Residuals> = left
        .par_iter()
        .zip(sa.par_iter())
        .map(|(n, row_a)| {
            let mut res = Residuals::new();
            for (x, row_b) in right.iter().zip(sb) {
                let (ni, xi) = pair(n, x);
                let mut lhs = T::zero();
                for (m, c) in row_a {
                    lhs = lhs + c * &table[*m][xi];
                }
                let mut rhs = T::zero();
                for (y, c) in row_b {
                    rhs = rhs + c * &table[ni][*y];
                }
                res.push_scalar(&lift(&lhs), &lift(&rhs));
            }
            res
        })
        .collect();
    reduce(parts)
}

/// Discrete first slot, polynomial second slot: for every n the two sides
/// are polynomials in x and are compared coefficient by coefficient.
pub(crate) fn lattice_poly(
    a: &ShiftOp<Exact>,
    b: &DiffOp<Exact>,
    kernel: &(dyn Fn(&[i64]) -> Poly<Exact> + Sync),
    left: &[Vec<i64>],
) -> Residuals {
    let nv = b.nvars();
    let parts: Vec<Residuals> = left
        .par_iter()
        .map(|n| {
            let lhs = lattice_sum(a, n, Poly::zero(nv), |m| kernel(m), |c, p| p.scale(c), |p, q| p.add_ref(&q));
            let rhs = b.apply_poly(&kernel(n));
            let mut res = Residuals::new();
            let mut exps: Vec<&Vec<u32>> = lhs.terms().map(|(e, _)| e).collect();
            exps.extend(rhs.terms().map(|(e, _)| e));
            exps.sort();
            exps.dedup();
            for e in exps {
                res.push_scalar(&lhs.coeff(e), &rhs.coeff(e));
            }
            if res.points == 0 {
                // both sides vanish identically
                res.push_scalar(&<Exact as Scalar>::zero(), &<Exact as Scalar>::zero());
            }
            res
        })
        .collect();
    reduce(parts)
}

/// Per-site derivative tables of a product kernel on a one-dimensional grid:
/// `tab[site][a][b][dx][dy]` = ∂_x^dx ∂_y^dy K_site(g[a], g[b]), orders ≤ 2.
pub(crate) struct DerivTable {
    tab: Vec<Vec<Vec<[[Complex64; 3]; 3]>>>,
}

impl DerivTable {
    pub fn build(
        grid: &[f64],
        sites: usize,
        eval: &(dyn Fn(usize, f64, f64, u32, u32) -> crate::Result<Complex64> + Sync),
    ) -> crate::Result<Self> {
        let tab = (0..sites)
            .map(|s| {
                grid.par_iter()
                    .map(|&x| {
                        grid.iter()
                            .map(|&y| {
                                let mut d = [[Complex64::new(0.0, 0.0); 3]; 3];
                                for (i, row) in d.iter_mut().enumerate() {
                                    for (j, v) in row.iter_mut().enumerate() {
                                        *v = eval(s, x, y, i as u32, j as u32)?;
                                    }
                                }
                                Ok(d)
                            })
                            .collect::<crate::Result<Vec<_>>>()
                    })
                    .collect::<crate::Result<Vec<_>>>()
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(DerivTable { tab })
    }

    fn value(&self, xa: &[usize], yb: &[usize], dx: &[u32], dy: &[u32]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for s in 0..xa.len() {
            acc *= self.tab[s][xa[s]][yb[s]][dx[s] as usize][dy[s] as usize];
        }
        acc
    }
}

/// Coefficients of a differential operator evaluated once per grid point.
fn coefficient_table(op: &DiffOp<Float>, grid: &[f64], points: &[Vec<usize>]) -> Vec<Vec<(Vec<u32>, Complex64)>> {
    points
        .iter()
        .map(|p| {
            let at: Vec<Complex64> = p.iter().map(|&a| Complex64::new(grid[a], 0.0)).collect();
            op.terms().map(|(o, c)| (o.clone(), c.eval(&at))).filter(|(_, v)| *v != Complex64::new(0.0, 0.0)).collect()
        })
        .collect()
}

/// Both slots continuous: differential operators applied through the
/// kernels' analytic derivatives at grid points.
pub(crate) fn analytic_analytic(
    a: &DiffOp<Float>,
    b: &DiffOp<Float>,
    table: &DerivTable,
    grid: &[f64],
    left: &[Vec<usize>],
    right: &[Vec<usize>],
) -> Residuals {
    let ca = coefficient_table(a, grid, left);
    let cb = coefficient_table(b, grid, right);
    let nv = a.nvars();
    let zero = vec![0u32; nv];
    let parts: Vec<Residuals> = left
        .par_iter()
        .zip(ca.par_iter())
        .map(|(x, cx)| {
            let mut res = Residuals::new();
            for (y, cy) in right.iter().zip(&cb) {
                let (mut lhs, mut rhs, mut mag) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0f64);
                for (o, c) in cx {
                    let t = c * table.value(x, y, o, &zero);
                    lhs += t;
                    mag = mag.max(t.norm());
                }
                for (o, c) in cy {
                    let t = c * table.value(x, y, &zero, o);
                    rhs += t;
                    mag = mag.max(t.norm());
                }
                res.push_conditioned(lhs, rhs, mag);
            }
            res
        })
        .collect();
    reduce(parts)
}

/// Discrete first slot, second slot a real variable moved by imaginary
/// shifts. `kernel(site, m, a, s)` is K_site(m, g[a] + i s).
pub(crate) fn lattice_complex(
    a: &ShiftOp<Float>,
    b: &ShiftOp<Float>,
    kernel: &(dyn Fn(usize, i64, usize, i32) -> Complex64 + Sync),
    grid: &[f64],
    left: &[Vec<i64>],
    right: &[Vec<usize>],
) -> Residuals {
    let product = |m: &[i64], x: &[usize], s: &[i32]| -> Complex64 {
        (0..m.len()).map(|i| kernel(i, m[i], x[i], s[i])).product()
    };
    let nv = a.nvars();
    let zero = vec![0i32; nv];
    let parts: Vec<Residuals> = left
        .par_iter()
        .map(|n| {
            let mut res = Residuals::new();
            for x in right {
                let mut mag = 0.0f64;
                let lhs = lattice_sum(
                    a,
                    n,
                    Complex64::new(0.0, 0.0),
                    |m| product(m, x, &zero),
                    |c, v| {
                        let t = c * v;
                        mag = mag.max(t.norm());
                        t
                    },
                    |p, q| p + q,
                );
                let at: Vec<Complex64> = x.iter().map(|&i| Complex64::new(grid[i], 0.0)).collect();
                let mut rhs = Complex64::new(0.0, 0.0);
                for (s, c) in b.terms() {
                    let cv = c.eval(&at);
                    if cv != Complex64::new(0.0, 0.0) {
                        let t = cv * product(n, x, s);
                        rhs += t;
                        mag = mag.max(t.norm());
                    }
                }
                res.push_conditioned(lhs, rhs, mag);
            }
            res
        })
        .collect();
    reduce(parts)
}

/// Evenly spaced points on [lo, hi].
pub(crate) fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![(lo + hi) / 2.0];
    }
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}
