use num_traits::{One, Zero};

use super::{coproduct, Algebra, AlgebraElement, Gen, TensorElement};
use crate::error::{Error, Result};
use crate::scalar::{ex, ex_re, Exact, Float, Rational, Scalar};

type El = AlgebraElement<Exact>;
type Te = TensorElement<Exact>;

fn g(x: Gen) -> El {
    El::gen(x)
}

fn w(word: &[Gen]) -> El {
    El::word(word.to_vec(), <Exact as Scalar>::one())
}

/// Ω = ½H² + EF + FE.
pub fn casimir() -> El {
    use Gen::*;
    w(&[H, H]).scale(&ex(1, 2)).plus(&w(&[E, F])).plus(&w(&[F, E]))
}

/// X_a = −aH + E − F.
pub fn x_a(a: &Rational) -> El {
    El::linear(Algebra::Sl2, &[(-ex_re(a.clone()), Gen::H), (ex(1, 1), Gen::E), (ex(-1, 1), Gen::F)])
}

pub fn x_a_float(a: f64) -> AlgebraElement<Float> {
    let one = Float::new(1.0, 0.0);
    AlgebraElement::linear(Algebra::Sl2, &[(Float::new(-a, 0.0), Gen::H), (one, Gen::E), (-one, Gen::F)])
}

fn sqrt_c_parts(s: &Rational) -> Result<(Exact, Exact, Exact)> {
    let c = s * s;
    if c.is_one() || s.is_zero() {
        return Err(Error::Domain(format!("sqrt(c) = {s} gives c in {{0, 1}}")));
    }
    let d = Rational::one() - &c;
    Ok((ex_re(s.clone() / &d), ex_re(c.clone() / &d), ex_re(Rational::one() / &d)))
}

/// H_√c = ((1+c)/(1−c))H − (2√c/(1−c))E + (2√c/(1−c))F.
pub fn h_sqrt_c(s: &Rational) -> Result<El> {
    let (s_d, c_d, one_d) = sqrt_c_parts(s)?;
    let two = ex(2, 1);
    Ok(El::linear(
        Algebra::Sl2,
        &[(one_d + c_d, Gen::H), (-(two.clone() * s_d.clone()), Gen::E), (two * s_d, Gen::F)],
    ))
}

/// E_√c = −(√c/(1−c))H + (1/(1−c))E − (c/(1−c))F.
pub fn e_sqrt_c(s: &Rational) -> Result<El> {
    let (s_d, c_d, one_d) = sqrt_c_parts(s)?;
    Ok(El::linear(Algebra::Sl2, &[(-s_d, Gen::H), (one_d, Gen::E), (-c_d, Gen::F)]))
}

/// F_√c = (√c/(1−c))H − (c/(1−c))E + (1/(1−c))F.
pub fn f_sqrt_c(s: &Rational) -> Result<El> {
    let (s_d, c_d, one_d) = sqrt_c_parts(s)?;
    Ok(El::linear(Algebra::Sl2, &[(s_d, Gen::H), (-c_d, Gen::E), (one_d, Gen::F)]))
}

/// Y = (1⊗a − a⊗1)(a†⊗1 − 1⊗a†).
pub fn y_heisenberg() -> Te {
    use Gen::*;
    let one = El::one(Algebra::Heisenberg);
    let left = Te::pair(&one, &g(A)).minus(&Te::pair(&g(A), &one));
    let right = Te::pair(&g(Ad), &one).minus(&Te::pair(&one, &g(Ad)));
    left.times(&right)
}

/// Y = ½(1⊗Ω + Ω⊗1 − Δ(Ω)).
pub fn y_su11() -> Te {
    let one = El::one(Algebra::Sl2);
    let om = casimir();
    Te::pair(&one, &om).plus(&Te::pair(&om, &one)).minus(&coproduct(&om)).scale(&ex(1, 2))
}

/// −½(H⊗H + 2F⊗E + 2E⊗F).
pub fn y_su11_expanded() -> Te {
    use Gen::*;
    let two = ex(2, 1);
    Te::pair(&g(H), &g(H))
        .plus(&Te::pair(&g(F), &g(E)).scale(&two))
        .plus(&Te::pair(&g(E), &g(F)).scale(&two))
        .scale(&ex(-1, 2))
}

/// 1⊗Ω + Ω⊗1 + H⊗H + 2F⊗E + 2E⊗F.
pub fn coproduct_casimir_expected() -> Te {
    let one = El::one(Algebra::Sl2);
    let om = casimir();
    Te::pair(&one, &om).plus(&Te::pair(&om, &one)).minus(&y_su11_expanded().scale(&ex(2, 1)))
}

/// The eleven-term correction with θ⊗θ(Y) = Y + R for the Charlier map.
pub fn r_element() -> Te {
    use Gen::*;
    let one = El::one(Algebra::Heisenberg);
    let p = |a: &El, b: &El| Te::pair(a, b);
    let za_d = w(&[Z, Ad]);
    let a_z = w(&[A, Z]);
    let zz = w(&[Z, Z]);
    p(&one, &za_d)
        .minus(&p(&g(Z), &g(Ad)))
        .plus(&p(&za_d, &one))
        .minus(&p(&g(Ad), &g(Z)))
        .plus(&p(&one, &a_z))
        .minus(&p(&g(Z), &g(A)))
        .plus(&p(&a_z, &one))
        .minus(&p(&g(A), &g(Z)))
        .plus(&p(&g(Z), &g(Z)).scale(&ex(2, 1)))
        .minus(&p(&zz, &one))
        .minus(&p(&one, &zz))
}

/// Residuals of the two identities expressing E_√c ± F_√c through H and H_√c:
/// `(difference form, sum form with [H, H_√c], sum form with [H_√c, H])`.
/// The sum identity holds with the bracket in the order [H_√c, H].
pub fn efc_residuals(s: &Rational) -> Result<(f64, f64, f64)> {
    let c = s * s;
    let (h, e, f) = (h_sqrt_c(s)?, e_sqrt_c(s)?, f_sqrt_c(s)?);
    let two_s = Rational::from_integer(2.into()) * s;
    let k1 = ex_re((Rational::one() - &c) / &two_s);
    let k2 = ex_re((Rational::one() + &c) / &two_s);
    let diff = e.minus(&f).minus(&g(Gen::H).scale(&k1).minus(&h.scale(&k2)));
    let k3 = ex_re((Rational::one() - &c) / (two_s * Rational::from_integer(2.into())));
    let sum = e.plus(&f);
    let literal = sum.minus(&g(Gen::H).commutator(&h)?.scale(&k3));
    let corrected = sum.minus(&h.commutator(&g(Gen::H))?.scale(&k3));
    Ok((diff.max_abs_coeff(), literal.max_abs_coeff(), corrected.max_abs_coeff()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum NamedElement {
    Casimir,
    Xa(Rational),
    XCosPhi(f64),
    HSqrtC(Rational),
    ESqrtC(Rational),
    FSqrtC(Rational),
    R,
    YHeisenberg,
    YSu11,
    CoproductCasimir,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NamedValue {
    Single(El),
    FloatSingle(AlgebraElement<Float>),
    Tensor(Te),
}

pub fn named_element(name: &NamedElement) -> Result<NamedValue> {
    Ok(match name {
        NamedElement::Casimir => NamedValue::Single(casimir()),
        NamedElement::Xa(a) => NamedValue::Single(x_a(a)),
        NamedElement::XCosPhi(phi) => {
            if !(*phi > 0.0 && *phi < std::f64::consts::PI) {
                return Err(Error::Domain(format!("phi must lie in (0, pi), got {phi}")));
            }
            NamedValue::FloatSingle(x_a_float(phi.cos()))
        }
        NamedElement::HSqrtC(s) => NamedValue::Single(h_sqrt_c(s)?),
        NamedElement::ESqrtC(s) => NamedValue::Single(e_sqrt_c(s)?),
        NamedElement::FSqrtC(s) => NamedValue::Single(f_sqrt_c(s)?),
        NamedElement::R => NamedValue::Tensor(r_element()),
        NamedElement::YHeisenberg => NamedValue::Tensor(y_heisenberg()),
        NamedElement::YSu11 => NamedValue::Tensor(y_su11()),
        NamedElement::CoproductCasimir => NamedValue::Tensor(coproduct(&casimir())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StarName;
    use crate::scalar::rat;

    #[test]
    fn casimir_is_central_and_self_adjoint() {
        let om = casimir();
        for x in [Gen::H, Gen::E, Gen::F] {
            assert!(om.commutator(&g(x)).unwrap().is_zero());
        }
        assert_eq!(om.star(StarName::Su11).unwrap(), om);
    }

    #[test]
    fn y_expansion_and_coproduct() {
        assert_eq!(y_su11(), y_su11_expanded());
        assert_eq!(coproduct(&casimir()), coproduct_casimir_expected());
    }

    #[test]
    fn x_a_at_zero() {
        let e = x_a(&rat(0, 1));
        assert_eq!(e, g(Gen::E).minus(&g(Gen::F)));
    }

    #[test]
    fn efc_identities() {
        for s in [rat(1, 2), rat(2, 3), rat(3, 1), rat(-1, 3)] {
            let (diff, literal, corrected) = efc_residuals(&s).unwrap();
            assert_eq!(diff, 0.0);
            assert_eq!(corrected, 0.0);
            assert!(literal > 0.0);
        }
    }

    #[test]
    fn y_is_minus_half_of_cross_terms() {
        // oracle: Δ(Ω) − 1⊗Ω − Ω⊗1 = H⊗H + 2F⊗E + 2E⊗F by hand
        let cross = coproduct(&casimir())
            .minus(&Te::pair(&El::one(Algebra::Sl2), &casimir()))
            .minus(&Te::pair(&casimir(), &El::one(Algebra::Sl2)));
        assert_eq!(y_su11().scale(&ex(-2, 1)), cross);
    }

    #[test]
    fn domain_errors() {
        assert!(h_sqrt_c(&rat(1, 1)).is_err());
        assert!(h_sqrt_c(&rat(-1, 1)).is_err());
        assert!(named_element(&NamedElement::XCosPhi(0.0)).is_err());
        assert!(matches!(named_element(&NamedElement::R).unwrap(), NamedValue::Tensor(_)));
    }
}
