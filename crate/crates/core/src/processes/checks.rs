use super::{build_generator_algebraic, build_generator_direct, BepDrift, Family, GeneratorOp, MarkovGenerator, ProcessSpec, MARGIN};
use crate::error::{Error, Result};
use crate::ops::box_points;
use crate::poly::Poly;
use crate::report::{Measure, Mode, Residuals, VerificationReport};
use crate::repr::{compare_fns, Carrier, CarrierFn, CarrierOp as _, Weight};
use crate::scalar::{Exact, Scalar};

type Gen = MarkovGenerator<Exact>;

/// Basis functions on which Direct and Algebraic are compared.
fn interior_basis(g: &Gen) -> Vec<CarrierFn<Exact>> {
    let spec = &g.spec;
    let n = spec.n_sites;
    match (&g.carrier, &g.op) {
        // the exclusion rates vanish at the caps, so every admissible state counts
        (Carrier::TruncatedSeq { .. }, _) if spec.family == Family::Sep => {
            let caps: Vec<usize> = spec.j.iter().map(|&v| v as usize).collect();
            box_points(&caps).into_iter().map(CarrierFn::delta).collect()
        }
        (Carrier::TruncatedSeq { .. }, _) => g.carrier.interior_basis(n, MARGIN as u32),
        (carrier, GeneratorOp::Shift(op)) => carrier.interior_basis(n, op.reach(carrier)),
        // pair terms such as x_i ∂_j trade degree between variables, so
        // one unit of headroom per variable is needed even when the total
        // degree is preserved
        (carrier, GeneratorOp::Diff(op)) => carrier.interior_basis(n, op.reach(carrier).max(1)),
    }
}

fn exact_report(res: &Residuals, case: String) -> VerificationReport {
    res.report(case, Mode::Exact, Measure::Abs, 0.0)
}

/// (Direct − Algebraic) applied to every interior basis function, exactly.
pub fn generator_equivalence(spec: &ProcessSpec) -> Result<VerificationReport> {
    crate::report::timed(|| {
        let direct: Gen = build_generator_direct(spec)?;
        let alg: Gen = build_generator_algebraic(spec)?;
        let mut res = Residuals::new();
        for f in interior_basis(&direct) {
            compare_fns(&mut res, &direct.apply(&f)?, &alg.apply(&f)?)?;
        }
        let mut r = exact_report(&res, format!("generator-equivalence/{}", spec.label()));
        if spec.family == Family::Bep && spec.bep_drift == BepDrift::Literal {
            r = r.with_note(
                "literal drift -2(k_i x_i - k_j x_j) differs from the derived -2(k_j x_i - k_i x_j) whenever k_i != k_j",
            );
        }
        if spec.family == Family::Hyp && spec.hyp_variant == super::HypVariant::Printed {
            r = r.with_note("the displayed hyperbolic operator is -2(rho'(Y) + 2 k1 k2), not rho(Y) + k1 k2");
        }
        Ok(r)
    })
}

/// L·1 and L(Σ_i n_i) (or Σ_i x_i) at interior points, exactly.
pub fn conservation_residual(g: &Gen) -> Result<VerificationReport> {
    let n = g.spec.n_sites;
    let mut res = Residuals::new();
    let zero = <Exact as Scalar>::zero();
    match (&g.op, &g.carrier) {
        (GeneratorOp::Shift(op), Carrier::TruncatedSeq { .. }) => {
            for f in interior_basis(g) {
                let CarrierFn::Seq(v) = f else { unreachable!() };
                let pt = v.keys().next().expect("delta").clone();
                let one = op.apply_lattice(&pt, |_| <Exact as Scalar>::one());
                let total = op.apply_lattice(&pt, |m| Exact::from_i64(m.iter().sum()));
                res.push_scalar(&one, &zero);
                res.push_scalar(&total, &zero);
            }
        }
        _ => {
            let one = CarrierFn::Poly(Poly::one(n));
            let mut sum = Poly::zero(n);
            for i in 0..n {
                sum = sum.add_ref(&Poly::var(n, i));
            }
            let zero_fn = CarrierFn::Poly(Poly::zero(n));
            compare_fns(&mut res, &g.apply(&one)?, &zero_fn)?;
            compare_fns(&mut res, &g.apply(&CarrierFn::Poly(sum))?, &zero_fn)?;
        }
    }
    Ok(exact_report(&res, format!("conservation/{}", g.spec.label())))
}

/// Continuous-time Markov chain generator property at interior states:
/// off-diagonal entries are real and ≥ 0, rows sum to 0. The residual is
/// the largest violation.
pub fn ctmc_residual(g: &Gen) -> Result<VerificationReport> {
    let op = g.op.as_shift().filter(|_| g.spec.family.is_discrete()).ok_or_else(|| {
        Error::WrongCarrier(format!("{} is not a jump process", g.spec.family.name()))
    })?;
    let mut res = Residuals::new();
    for f in interior_basis(g) {
        let CarrierFn::Seq(v) = f else { unreachable!() };
        let pt: Vec<Exact> = v.keys().next().expect("delta").iter().map(|&x| Exact::from_i64(x)).collect();
        let mut row_sum = <Exact as Scalar>::zero();
        for (s, c) in op.terms() {
            let r = c.eval(&pt);
            row_sum = row_sum + r.clone();
            if s.iter().any(|&d| d != 0) {
                let z = r.to_c64();
                let neg = (-z.re).max(0.0) + z.im.abs();
                res.push_raw(neg, neg);
            }
        }
        res.push_scalar(&row_sum, &<Exact as Scalar>::zero());
    }
    Ok(exact_report(&res, format!("ctmc-property/{}", g.spec.label())))
}

fn product_weight(ws: &[Weight<Exact>], n: &[i64]) -> Result<Exact> {
    let mut acc = <Exact as Scalar>::one();
    for (w, &v) in ws.iter().zip(n) {
        acc = acc * w.unnormalized(v as u32)?;
    }
    Ok(acc)
}

/// |⟨Lf, g⟩_w − ⟨f, Lg⟩_w| over interior basis pairs, with the product
/// stationary weight: Poisson for IRW, negative binomial (parameter c) for
/// SIP, Gaussian for DIF, Gamma for BEP. Discrete weights drop their
/// normalizing constants and continuous ones use exact moments.
pub fn reversibility_residual(spec: &ProcessSpec) -> Result<VerificationReport> {
    let g: Gen = build_generator_direct(spec)?;
    let n = spec.n_sites;
    let weights: Vec<Weight<Exact>> = match spec.family {
        Family::Irw => {
            let c = Exact::from_rational(spec.c_value()?);
            vec![Weight::Poisson { c }; n]
        }
        Family::Sip => {
            let c = Exact::from_rational(spec.c.as_ref().ok_or_else(|| {
                Error::Domain("SIP reversibility needs the weight parameter c".into())
            })?);
            if c.to_c64().re >= 1.0 {
                return Err(Error::Domain("the negative binomial weight needs c < 1".into()));
            }
            spec.k.iter().map(|k| Weight::NegBinomial { k: Exact::from_rational(k), c: c.clone() }).collect()
        }
        Family::Dif => vec![Weight::Gaussian { c: Exact::from_rational(spec.c_value()?) }; n],
        Family::Bep => spec.k.iter().map(|k| Weight::Gamma { k: Exact::from_rational(k) }).collect(),
        f => return Err(Error::Unsupported(format!("no product stationary weight for {}", f.name()))),
    };
    let basis = interior_basis(&g);
    let images = basis.iter().map(|f| g.apply(f)).collect::<Result<Vec<_>>>()?;
    let mut res = Residuals::new();
    match &g.carrier {
        Carrier::TruncatedSeq { .. } => {
            let pts: Vec<Vec<i64>> = basis
                .iter()
                .map(|f| match f {
                    CarrierFn::Seq(v) => v.keys().next().expect("delta").clone(),
                    _ => unreachable!(),
                })
                .collect();
            let get = |f: &CarrierFn<Exact>, p: &Vec<i64>| match f {
                CarrierFn::Seq(v) => v.get(p).cloned().unwrap_or_else(<Exact as Scalar>::zero),
                _ => unreachable!(),
            };
            for (a, la) in pts.iter().zip(&images) {
                let wa = product_weight(&weights, a)?;
                for (b, lb) in pts.iter().zip(&images) {
                    let lhs = product_weight(&weights, b)? * get(la, b);
                    let rhs = wa.clone() * get(lb, a).conj();
                    res.push_scalar(&lhs, &rhs);
                }
            }
        }
        Carrier::Poly { maxdeg } => {
            let top = 2 * maxdeg + 2;
            let moments: Vec<Vec<Exact>> = weights
                .iter()
                .map(|w| (0..=top).map(|m| w.moment(m)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            let ip = |p: &CarrierFn<Exact>, q: &CarrierFn<Exact>| -> Exact {
                let (CarrierFn::Poly(p), CarrierFn::Poly(q)) = (p, q) else { unreachable!() };
                let mut acc = <Exact as Scalar>::zero();
                for (e, a) in p.terms() {
                    for (f, b) in q.terms() {
                        let mut t = a.clone() * b.conj();
                        for i in 0..n {
                            t = t * moments[i][(e[i] + f[i]) as usize].clone();
                        }
                        acc = acc + t;
                    }
                }
                acc
            };
            for (f, lf) in basis.iter().zip(&images) {
                for (h, lh) in basis.iter().zip(&images) {
                    res.push_scalar(&ip(lf, h), &ip(f, lh));
                }
            }
        }
        Carrier::ExpPoly { .. } => unreachable!("no ExpPoly generators"),
    }
    Ok(exact_report(&res, format!("reversibility/{}", spec.label())))
}
