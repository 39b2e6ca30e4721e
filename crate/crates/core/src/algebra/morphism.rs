use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::{Algebra, AlgebraElement, Gen, StarName, TensorElement};
use crate::error::{Error, Result};
use crate::scalar::{ex, rat, Exact, Float, Rational, Scalar};
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MorphismName {
    ThetaCharlier,
    ThetaExp,
    ThetaExpInverse,
    /// Parameterized by the signed square root s, with c = s².
    ThetaSqrtC(String),
    ThetaParabolic,
    ThetaParabolicInverse,
    ThetaPhi(f64),
    ThetaPhiInverse(f64),
    Identity,
    Composite(String),
    Inverse(String),
}

impl fmt::Display for MorphismName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismName::ThetaCharlier => write!(f, "theta_charlier"),
            MorphismName::ThetaExp => write!(f, "theta_exp"),
            MorphismName::ThetaExpInverse => write!(f, "theta_exp^-1"),
            MorphismName::ThetaSqrtC(s) => write!(f, "theta_sqrt_c({s})"),
            MorphismName::ThetaParabolic => write!(f, "theta_parabolic"),
            MorphismName::ThetaParabolicInverse => write!(f, "theta_parabolic^-1"),
            MorphismName::ThetaPhi(p) => write!(f, "theta_phi({p})"),
            MorphismName::ThetaPhiInverse(p) => write!(f, "theta_phi({p})^-1"),
            MorphismName::Identity => write!(f, "id"),
            MorphismName::Composite(s) | MorphismName::Inverse(s) => write!(f, "{s}"),
        }
    }
}

/// Algebra map given on generators and extended linearly and multiplicatively.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMorphism<S> {
    pub name: MorphismName,
    pub algebra: Algebra,
    images: BTreeMap<Gen, AlgebraElement<S>>,
    pub inverse_name: Option<MorphismName>,
}

impl<S: Scalar> AlgebraMorphism<S> {
    pub fn from_images(
        name: MorphismName,
        algebra: Algebra,
        images: BTreeMap<Gen, AlgebraElement<S>>,
        inverse_name: Option<MorphismName>,
    ) -> Result<Self> {
        for g in algebra.generators() {
            let img = images.get(&g).ok_or_else(|| Error::Index(format!("missing image of {}", g.symbol())))?;
            if img.algebra() != algebra {
                return Err(Error::MixedAlgebra);
            }
        }
        Ok(AlgebraMorphism { name, algebra, images, inverse_name })
    }

    pub fn identity(algebra: Algebra) -> Self {
        let images = algebra.generators().iter().map(|&g| (g, AlgebraElement::gen(g))).collect();
        AlgebraMorphism { name: MorphismName::Identity, algebra, images, inverse_name: Some(MorphismName::Identity) }
    }

    pub fn image(&self, g: Gen) -> &AlgebraElement<S> {
        &self.images[&g]
    }

    fn apply_word(&self, w: &[Gen]) -> AlgebraElement<S> {
        w.iter().fold(AlgebraElement::one(self.algebra), |acc, g| acc.times(&self.images[g]))
    }

    pub fn apply(&self, x: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
        if x.algebra() != self.algebra {
            return Err(Error::MixedAlgebra);
        }
        let mut out = AlgebraElement::zero(self.algebra);
        for (w, c) in x.terms() {
            out = out.plus(&self.apply_word(w).scale(c));
        }
        Ok(out)
    }

    /// θ⊗…⊗θ applied factor-wise.
    pub fn apply_tensor(&self, t: &TensorElement<S>) -> Result<TensorElement<S>> {
        if t.algebra() != self.algebra {
            return Err(Error::MixedAlgebra);
        }
        let mut out = TensorElement::zero(self.algebra, t.nfactors());
        for (ws, c) in t.terms() {
            let factors: Vec<AlgebraElement<S>> = ws.iter().map(|w| self.apply_word(w)).collect();
            out = out.plus(&TensorElement::pure(&factors)?.scale(c));
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebra);
        }
        let mut images = BTreeMap::new();
        for g in self.algebra.generators() {
            images.insert(g, self.apply(other.image(g))?);
        }
        Ok(AlgebraMorphism {
            name: MorphismName::Composite(format!("{} ∘ {}", self.name, other.name)),
            algebra: self.algebra,
            images,
            inverse_name: None,
        })
    }

    /// Max coefficient of θ([X,Y]) − [θX, θY] over generator pairs.
    pub fn bracket_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in self.algebra.generators() {
            for y in self.algebra.generators() {
                let (ex_, ey) = (AlgebraElement::<S>::gen(x), AlgebraElement::<S>::gen(y));
                let lhs = self.apply(&ex_.commutator(&ey).unwrap()).unwrap();
                let rhs = self.image(x).commutator(self.image(y)).unwrap();
                worst = worst.max(lhs.minus(&rhs).max_abs_coeff());
            }
        }
        worst
    }

    /// Max coefficient of θ(X^{s_in}) − θ(X)^{s_out} over generators.
    pub fn star_residual(&self, s_in: StarName, s_out: StarName) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for g in self.algebra.generators() {
            let x = AlgebraElement::<S>::gen(g);
            let lhs = self.apply(&x.star(s_in)?)?;
            let rhs = self.image(g).star(s_out)?;
            worst = worst.max(lhs.minus(&rhs).max_abs_coeff());
        }
        Ok(worst)
    }

    /// Max coefficient of (other ∘ self)(X) − X over generators.
    pub fn inverse_residual(&self, other: &Self) -> Result<f64> {
        let c = other.compose(self)?;
        let mut worst: f64 = 0.0;
        for g in self.algebra.generators() {
            worst = worst.max(c.image(g).minus(&AlgebraElement::gen(g)).max_abs_coeff());
        }
        Ok(worst)
    }

    /// Inverse of a morphism whose generator images are linear in the
    /// generators, by Gauss–Jordan elimination on the 3×3 coefficient matrix.
    pub fn linear_inverse(&self) -> Result<Self> {
        let gens = self.algebra.generators();
        let mut m: Vec<Vec<S>> = vec![vec![S::zero(); 6]; 3];
        for (j, g) in gens.iter().enumerate() {
            let img = self.image(*g);
            for (w, c) in img.terms() {
                if w.len() != 1 {
                    return Err(Error::Unsupported(format!("image of {} is not linear", g.symbol())));
                }
                let i = gens.iter().position(|h| *h == w[0]).expect("generator of algebra");
                m[i][j] = c.clone();
            }
            m[j][3 + j] = S::one();
        }
        for col in 0..3 {
            let piv = (col..3)
                .filter(|&r| !m[r][col].is_zero())
                .max_by(|&a, &b| m[a][col].modulus().total_cmp(&m[b][col].modulus()))
                .ok_or_else(|| Error::Singular(format!("{} is not invertible", self.name)))?;
            m.swap(col, piv);
            let inv = m[col][col].try_inv().expect("nonzero pivot");
            for k in 0..6 {
                m[col][k] = m[col][k].clone() * inv.clone();
            }
            for r in 0..3 {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in 0..6 {
                        m[r][k] = m[r][k].clone() - f.clone() * m[col][k].clone();
                    }
                }
            }
        }
        // Columns of the right block hold the inverse; column j gives the image of gens[j].
        let mut images = BTreeMap::new();
        for (j, g) in gens.iter().enumerate() {
            let parts: Vec<(S, Gen)> = (0..3).map(|i| (m[i][3 + j].clone(), gens[i])).collect();
            images.insert(*g, AlgebraElement::linear(self.algebra, &parts));
        }
        Ok(AlgebraMorphism {
            name: MorphismName::Inverse(format!("{}^-1", self.name)),
            algebra: self.algebra,
            images,
            inverse_name: Some(self.name.clone()),
        })
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> AlgebraMorphism<T> {
        AlgebraMorphism {
            name: self.name.clone(),
            algebra: self.algebra,
            images: self.images.iter().map(|(g, e)| (*g, e.map_coeffs(f))).collect(),
            inverse_name: self.inverse_name.clone(),
        }
    }

    pub fn to_float(&self) -> AlgebraMorphism<Float> {
        self.map_coeffs(|c| c.to_c64())
    }
}

fn lin(alg: Algebra, parts: &[(Exact, Gen)]) -> AlgebraElement<Exact> {
    AlgebraElement::linear(alg, parts)
}

fn build(name: MorphismName, alg: Algebra, imgs: [AlgebraElement<Exact>; 3], inv: MorphismName) -> AlgebraMorphism<Exact> {
    let images = alg.generators().into_iter().zip(imgs).collect();
    AlgebraMorphism::from_images(name, alg, images, Some(inv)).expect("well-formed morphism")
}

/// a ↦ Z − a, a† ↦ Z − a†, Z ↦ Z. An involution.
pub fn theta_charlier() -> AlgebraMorphism<Exact> {
    use Gen::*;
    let h = Algebra::Heisenberg;
    build(
        MorphismName::ThetaCharlier,
        h,
        [
            lin(h, &[(ex(1, 1), Z), (ex(-1, 1), A)]),
            lin(h, &[(ex(1, 1), Z), (ex(-1, 1), Ad)]),
            lin(h, &[(ex(1, 1), Z)]),
        ],
        MorphismName::ThetaCharlier,
    )
}

/// a ↦ ½(a − a†), a† ↦ i(a + a†), Z ↦ iZ.
pub fn theta_exp() -> AlgebraMorphism<Exact> {
    use Gen::*;
    let h = Algebra::Heisenberg;
    let i = Exact::imag_unit();
    build(
        MorphismName::ThetaExp,
        h,
        [
            lin(h, &[(ex(1, 2), A), (ex(-1, 2), Ad)]),
            lin(h, &[(i.clone(), A), (i.clone(), Ad)]),
            lin(h, &[(i, Z)]),
        ],
        MorphismName::ThetaExpInverse,
    )
}

/// a ↦ a − (i/2)a†, a† ↦ −a − (i/2)a†, Z ↦ −iZ.
pub fn theta_exp_inverse() -> AlgebraMorphism<Exact> {
    use Gen::*;
    let h = Algebra::Heisenberg;
    let hi = Exact::new(rat(0, 1), rat(-1, 2));
    build(
        MorphismName::ThetaExpInverse,
        h,
        [
            lin(h, &[(ex(1, 1), A), (hi.clone(), Ad)]),
            lin(h, &[(ex(-1, 1), A), (hi, Ad)]),
            lin(h, &[(-Exact::imag_unit(), Z)]),
        ],
        MorphismName::ThetaExp,
    )
}

/// The map H ↦ H_√c, E ↦ E_√c, F ↦ F_√c for a signed square root `s` (c = s²).
pub fn theta_sqrt_c(s: &Rational) -> Result<AlgebraMorphism<Exact>> {
    let c = s * s;
    if c.is_one() {
        return Err(Error::Domain("theta_sqrt_c needs c != 1".into()));
    }
    let imgs = [
        super::h_sqrt_c(s)?,
        super::e_sqrt_c(s)?,
        super::f_sqrt_c(s)?,
    ];
    Ok(build(
        MorphismName::ThetaSqrtC(s.to_string()),
        Algebra::Sl2,
        imgs,
        MorphismName::ThetaSqrtC((-s).to_string()),
    ))
}

/// H ↦ E + F, E ↦ (i/2)(−H + E − F), F ↦ (i/2)(H + E − F).
pub fn theta_parabolic() -> AlgebraMorphism<Exact> {
    use Gen::*;
    let a = Algebra::Sl2;
    let hi = Exact::new(rat(0, 1), rat(1, 2));
    build(
        MorphismName::ThetaParabolic,
        a,
        [
            lin(a, &[(ex(1, 1), E), (ex(1, 1), F)]),
            lin(a, &[(-hi.clone(), H), (hi.clone(), E), (-hi.clone(), F)]),
            lin(a, &[(hi.clone(), H), (hi.clone(), E), (-hi, F)]),
        ],
        MorphismName::ThetaParabolicInverse,
    )
}

/// H ↦ i(E − F), E ↦ ½(H − iE − iF), F ↦ ½(H + iE + iF).
pub fn theta_parabolic_inverse() -> AlgebraMorphism<Exact> {
    use Gen::*;
    let a = Algebra::Sl2;
    let i = Exact::imag_unit();
    let hi = Exact::new(rat(0, 1), rat(1, 2));
    build(
        MorphismName::ThetaParabolicInverse,
        a,
        [
            lin(a, &[(i.clone(), E), (-i, F)]),
            lin(a, &[(ex(1, 2), H), (-hi.clone(), E), (-hi.clone(), F)]),
            lin(a, &[(ex(1, 2), H), (hi.clone(), E), (hi, F)]),
        ],
        MorphismName::ThetaParabolic,
    )
}

/// The hyperbolic map, floating point only:
/// H ↦ (i/sin φ)(−cos φ H + E − F),
/// E ↦ (1/(2i sin φ))(−H + e^{−iφ}E − e^{iφ}F),
/// F ↦ (1/(2i sin φ))(−H + e^{iφ}E − e^{−iφ}F).
pub fn theta_phi(phi: f64) -> Result<AlgebraMorphism<Float>> {
    use Gen::*;
    if !(phi > 0.0 && phi < std::f64::consts::PI) {
        return Err(Error::Domain(format!("phi must lie in (0, pi), got {phi}")));
    }
    let a = Algebra::Sl2;
    let i = Complex64::new(0.0, 1.0);
    let s = phi.sin();
    let pre = i / s;
    let half = Complex64::new(1.0, 0.0) / (2.0 * i * s);
    let e_m = Complex64::from_polar(1.0, -phi);
    let e_p = Complex64::from_polar(1.0, phi);
    let lf = |parts: &[(Complex64, Gen)]| AlgebraElement::linear(a, parts);
    let images = [
        (H, lf(&[(-pre * phi.cos(), H), (pre, E), (-pre, F)])),
        (E, lf(&[(-half, H), (half * e_m, E), (-half * e_p, F)])),
        (F, lf(&[(-half, H), (half * e_p, E), (-half * e_m, F)])),
    ]
    .into_iter()
    .collect();
    AlgebraMorphism::from_images(MorphismName::ThetaPhi(phi), a, images, Some(MorphismName::ThetaPhiInverse(phi)))
}

pub fn theta_phi_inverse(phi: f64) -> Result<AlgebraMorphism<Float>> {
    let mut inv = theta_phi(phi)?.linear_inverse()?;
    inv.name = MorphismName::ThetaPhiInverse(phi);
    inv.inverse_name = Some(MorphismName::ThetaPhi(phi));
    Ok(inv)
}

/// Exact-mode lookup by name; float-only maps are rejected.
pub fn exact_morphism(name: &MorphismName) -> Result<AlgebraMorphism<Exact>> {
    match name {
        MorphismName::ThetaCharlier => Ok(theta_charlier()),
        MorphismName::ThetaExp => Ok(theta_exp()),
        MorphismName::ThetaExpInverse => Ok(theta_exp_inverse()),
        MorphismName::ThetaSqrtC(s) => theta_sqrt_c(&crate::scalar::parse_rational(s)?),
        MorphismName::ThetaParabolic => Ok(theta_parabolic()),
        MorphismName::ThetaParabolicInverse => Ok(theta_parabolic_inverse()),
        MorphismName::ThetaPhi(_) | MorphismName::ThetaPhiInverse(_) => Err(Error::FloatOnly(name.to_string())),
        other => Err(Error::Unsupported(format!("no registered morphism named {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{casimir, r_element, y_heisenberg};

    #[test]
    fn all_exact_morphisms_preserve_brackets() {
        let ms = vec![
            theta_charlier(),
            theta_exp(),
            theta_exp_inverse(),
            theta_sqrt_c(&rat(1, 2)).unwrap(),
            theta_sqrt_c(&rat(-2, 3)).unwrap(),
            theta_parabolic(),
            theta_parabolic_inverse(),
        ];
        for m in ms {
            assert_eq!(m.bracket_residual(), 0.0, "{}", m.name);
        }
    }

    #[test]
    fn declared_inverses() {
        assert_eq!(theta_charlier().inverse_residual(&theta_charlier()).unwrap(), 0.0);
        assert_eq!(theta_exp().inverse_residual(&theta_exp_inverse()).unwrap(), 0.0);
        assert_eq!(theta_parabolic().inverse_residual(&theta_parabolic_inverse()).unwrap(), 0.0);
        let s = rat(3, 5);
        let fwd = theta_sqrt_c(&s).unwrap();
        let back = theta_sqrt_c(&-s).unwrap();
        assert_eq!(fwd.inverse_residual(&back).unwrap(), 0.0);
        assert_eq!(theta_exp().linear_inverse().unwrap().inverse_residual(&theta_exp()).unwrap(), 0.0);
    }

    #[test]
    fn charlier_image_of_y() {
        let t = theta_charlier();
        let y = y_heisenberg();
        let d = t.apply_tensor(&y).unwrap().minus(&y);
        assert_eq!(d, r_element());
        assert_eq!(t.apply(&AlgebraElement::gen(Gen::Z)).unwrap(), AlgebraElement::gen(Gen::Z));
    }

    #[test]
    fn casimir_fixed() {
        let om = casimir();
        assert_eq!(theta_parabolic().apply(&om).unwrap(), om);
        assert_eq!(theta_sqrt_c(&rat(1, 3)).unwrap().apply(&om).unwrap(), om);
    }

    #[test]
    fn star_compatibility() {
        let t = theta_charlier();
        assert_eq!(t.star_residual(StarName::Heisenberg, StarName::Heisenberg).unwrap(), 0.0);
        let p = theta_parabolic();
        assert_eq!(p.star_residual(StarName::Sl2Real, StarName::Su11).unwrap(), 0.0);
        assert!(p.star_residual(StarName::Su11, StarName::Su11).unwrap() > 0.0);
        assert_eq!(theta_sqrt_c(&rat(1, 2)).unwrap().star_residual(StarName::Su11, StarName::Su11).unwrap(), 0.0);
    }

    #[test]
    fn phi_map_as_printed() {
        use crate::scalar::Float;
        assert!(matches!(exact_morphism(&MorphismName::ThetaPhi(1.0)), Err(Error::FloatOnly(_))));
        let phi = std::f64::consts::FRAC_PI_3;
        let m = theta_phi(phi).unwrap();
        // [θH, θE] = −2θE and [θH, θF] = 2θF, so the printed map is not a Lie homomorphism
        assert!(m.bracket_residual() > 1.0);
        // flipping the signs of the H and E images gives one
        let flip = |x: Gen, sgn: f64| (x, m.image(x).scale(&Float::new(sgn, 0.0)));
        let images = [flip(Gen::H, -1.0), flip(Gen::E, -1.0), flip(Gen::F, 1.0)].into_iter().collect();
        let hom = AlgebraMorphism::from_images(MorphismName::Identity, Algebra::Sl2, images, None).unwrap();
        assert!(hom.bracket_residual() < 1e-14);
        let inv = theta_phi_inverse(phi).unwrap();
        assert!(m.inverse_residual(&inv).unwrap() < 1e-14);
        assert!(theta_phi(0.0).is_err());
        assert!(theta_phi(4.0).is_err());
    }
}
