//! The Heisenberg algebra and sl(2,C), their universal enveloping algebras in
//! normal-ordered form, star structures, coproduct and tensor products.

mod morphism;
mod named;

pub use morphism::{
    exact_morphism, theta_charlier, theta_exp, theta_exp_inverse, theta_parabolic, theta_parabolic_inverse, theta_phi,
    theta_phi_inverse, theta_sqrt_c, AlgebraMorphism, MorphismName,
};
pub use named::{
    casimir, coproduct_casimir_expected, e_sqrt_c, efc_residuals, f_sqrt_c, h_sqrt_c, named_element, r_element, x_a,
    x_a_float, y_heisenberg, y_su11, y_su11_expanded, NamedElement, NamedValue,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algebra {
    Heisenberg,
    Sl2,
}

/// Generators. The derived order is the normal order: a < a† < Z and H < E < F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    A,
    Ad,
    Z,
    H,
    E,
    F,
}

impl Gen {
    pub fn algebra(self) -> Algebra {
        match self {
            Gen::A | Gen::Ad | Gen::Z => Algebra::Heisenberg,
            Gen::H | Gen::E | Gen::F => Algebra::Sl2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Gen::A => "a",
            Gen::Ad => "a†",
            Gen::Z => "Z",
            Gen::H => "H",
            Gen::E => "E",
            Gen::F => "F",
        }
    }
}

impl Algebra {
    pub fn generators(self) -> [Gen; 3] {
        match self {
            Algebra::Heisenberg => [Gen::A, Gen::Ad, Gen::Z],
            Algebra::Sl2 => [Gen::H, Gen::E, Gen::F],
        }
    }
}

/// Lie bracket of two generators as integer combination of generators.
pub fn gen_bracket(x: Gen, y: Gen) -> Vec<(i64, Gen)> {
    use Gen::*;
    match (x, y) {
        (Ad, A) => vec![(1, Z)],
        (A, Ad) => vec![(-1, Z)],
        (H, E) => vec![(2, E)],
        (E, H) => vec![(-2, E)],
        (H, F) => vec![(-2, F)],
        (F, H) => vec![(2, F)],
        (E, F) => vec![(1, H)],
        (F, E) => vec![(-1, H)],
        _ => vec![],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StarName {
    /// a* = a†, Z* = Z.
    Heisenberg,
    /// H* = H, E* = −F.
    Su11,
    /// H⋆ = −H, E⋆ = −E, F⋆ = −F (the star of i·sl(2,R)).
    Sl2Real,
    /// H* = H, E* = F.
    Su2,
}

impl StarName {
    pub fn algebra(self) -> Algebra {
        match self {
            StarName::Heisenberg => Algebra::Heisenberg,
            _ => Algebra::Sl2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heisenberg" | "h" => Ok(StarName::Heisenberg),
            "su11" | "su(1,1)" => Ok(StarName::Su11),
            "sl2r" | "star" | "isl2r" => Ok(StarName::Sl2Real),
            "su2" | "su(2)" => Ok(StarName::Su2),
            other => Err(Error::UnknownStar(other.to_string())),
        }
    }

    /// Image of a generator as (coefficient, generator).
    fn image(self, g: Gen) -> Result<(i64, Gen)> {
        use Gen::*;
        let r = match (self, g) {
            (StarName::Heisenberg, A) => (1, Ad),
            (StarName::Heisenberg, Ad) => (1, A),
            (StarName::Heisenberg, Z) => (1, Z),
            (StarName::Su11, H) => (1, H),
            (StarName::Su11, E) => (-1, F),
            (StarName::Su11, F) => (-1, E),
            (StarName::Sl2Real, g @ (H | E | F)) => (-1, g),
            (StarName::Su2, H) => (1, H),
            (StarName::Su2, E) => (1, F),
            (StarName::Su2, F) => (1, E),
            (s, g) => return Err(Error::UnknownStar(format!("{s:?} on generator {}", g.symbol()))),
        };
        Ok(r)
    }
}

pub type Word = Vec<Gen>;

/// Element of U(g) in normal-ordered form.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S> {
    algebra: Algebra,
    terms: BTreeMap<Word, S>,
}

fn first_descent(w: &[Gen]) -> Option<usize> {
    (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1])
}

/// Adds `coef * word` to `out` after rewriting `XY -> YX + [X,Y]` until sorted.
fn normal_order_into<S: Scalar>(word: Word, coef: S, out: &mut BTreeMap<Word, S>) {
    let mut stack = vec![(word, coef)];
    while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        match first_descent(&w) {
            None => add_into(out, w, c),
            Some(i) => {
                for (k, g) in gen_bracket(w[i], w[i + 1]) {
                    let mut w2 = Vec::with_capacity(w.len() - 1);
                    w2.extend_from_slice(&w[..i]);
                    w2.push(g);
                    w2.extend_from_slice(&w[i + 2..]);
                    stack.push((w2, c.clone() * S::from_i64(k)));
                }
                let mut sw = w;
                sw.swap(i, i + 1);
                stack.push((sw, c));
            }
        }
    }
}

fn add_into<K: Ord, S: Scalar>(map: &mut BTreeMap<K, S>, k: K, c: S) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(v) => {
            let s = v.clone() + c;
            if s.is_zero() {
                map.remove(&k);
            } else {
                *v = s;
            }
        }
        None => {
            map.insert(k, c);
        }
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(algebra: Algebra) -> Self {
        AlgebraElement { algebra, terms: BTreeMap::new() }
    }

    pub fn one(algebra: Algebra) -> Self {
        Self::scalar(algebra, S::one())
    }

    pub fn scalar(algebra: Algebra, c: S) -> Self {
        let mut e = Self::zero(algebra);
        add_into(&mut e.terms, vec![], c);
        e
    }

    pub fn gen(g: Gen) -> Self {
        Self::word(vec![g], S::one())
    }

    /// `c * g1 g2 ... gk`, normal ordered. Panics on an empty word with no
    /// algebra context; use [`scalar`](Self::scalar) for constants.
    pub fn word(w: Word, c: S) -> Self {
        let algebra = w.first().expect("non-empty word").algebra();
        assert!(w.iter().all(|g| g.algebra() == algebra), "word mixes algebras");
        let mut e = Self::zero(algebra);
        normal_order_into(w, c, &mut e.terms);
        e
    }

    /// Linear combination of generators.
    pub fn linear(algebra: Algebra, parts: &[(S, Gen)]) -> Self {
        let mut e = Self::zero(algebra);
        for (c, g) in parts {
            assert_eq!(g.algebra(), algebra);
            add_into(&mut e.terms, vec![*g], c.clone());
        }
        e
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Gen]) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word length.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::MixedAlgebra)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.algebra);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                normal_order_into(w, c1.clone() * c2.clone(), &mut out.terms);
            }
        }
        Ok(out)
    }

    /// Same-algebra addition; panics on mixed algebras.
    pub fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("same algebra")
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.try_sub(other).expect("same algebra")
    }

    pub fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("same algebra")
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.algebra);
        for (w, v) in &self.terms {
            add_into(&mut out.terms, w.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.algebra), |acc, _| acc.times(self))
    }

    /// `xy − yx`, normal ordered.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Antilinear anti-homomorphic involution given by the star table.
    pub fn star(&self, s: StarName) -> Result<Self> {
        if s.algebra() != self.algebra {
            return Err(Error::UnknownStar(format!("{s:?} is not defined on {:?}", self.algebra)));
        }
        let mut out = Self::zero(self.algebra);
        for (w, c) in &self.terms {
            let mut coef = c.conj();
            let mut rev = Vec::with_capacity(w.len());
            for g in w.iter().rev() {
                let (k, h) = s.image(*g)?;
                coef = coef * S::from_i64(k);
                rev.push(h);
            }
            normal_order_into(rev, coef, &mut out.terms);
        }
        Ok(out)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        let mut out = AlgebraElement::zero(self.algebra);
        for (w, c) in &self.terms {
            add_into(&mut out.terms, w.clone(), f(c));
        }
        out
    }

    /// Largest coefficient modulus; the residual measure for element identities.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> AlgebraElement<num_complex::Complex64> {
        self.map_coeffs(|c| c.to_c64())
    }
}

impl AlgebraElement<Exact> {
    pub fn int(algebra: Algebra, v: i64) -> Self {
        Self::scalar(algebra, Exact::from_i64(v))
    }
}

fn fmt_word(w: &[Gen]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|g| g.symbol()).collect::<Vec<_>>().join("")
    }
}

impl<S: Scalar> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({:?})·{}", c, fmt_word(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Element of U(g)^{⊗N}, a combination of tuples of normal-ordered words.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement<S> {
    algebra: Algebra,
    nfactors: usize,
    terms: BTreeMap<Vec<Word>, S>,
}

impl<S: Scalar> TensorElement<S> {
    pub fn zero(algebra: Algebra, nfactors: usize) -> Self {
        TensorElement { algebra, nfactors, terms: BTreeMap::new() }
    }

    pub fn identity(algebra: Algebra, nfactors: usize) -> Self {
        let mut t = Self::zero(algebra, nfactors);
        t.terms.insert(vec![vec![]; nfactors], S::one());
        t
    }

    /// Pure tensor `x_1 ⊗ ... ⊗ x_N`, expanded bilinearly.
    pub fn pure(factors: &[AlgebraElement<S>]) -> Result<Self> {
        let algebra = factors.first().ok_or_else(|| Error::Index("empty tensor".into()))?.algebra;
        if factors.iter().any(|f| f.algebra != algebra) {
            return Err(Error::MixedAlgebra);
        }
        let mut acc: BTreeMap<Vec<Word>, S> = BTreeMap::new();
        acc.insert(vec![], S::one());
        for f in factors {
            let mut next = BTreeMap::new();
            for (prefix, c) in &acc {
                for (w, d) in &f.terms {
                    let mut p = prefix.clone();
                    p.push(w.clone());
                    add_into(&mut next, p, c.clone() * d.clone());
                }
            }
            acc = next;
        }
        Ok(TensorElement { algebra, nfactors: factors.len(), terms: acc })
    }

    pub fn pair(x: &AlgebraElement<S>, y: &AlgebraElement<S>) -> Self {
        Self::pure(&[x.clone(), y.clone()]).expect("same algebra")
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn nfactors(&self) -> usize {
        self.nfactors
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, words: &[Word]) -> S {
        self.terms.get(words).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebra);
        }
        if self.nfactors != other.nfactors {
            return Err(Error::FactorMismatch { expected: self.nfactors, got: other.nfactors });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("compatible tensors")
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.try_sub(other).expect("compatible tensors")
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.algebra, self.nfactors);
        for (w, v) in &self.terms {
            add_into(&mut out.terms, w.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Factor-wise product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.algebra, self.nfactors);
        for (ws1, c1) in &self.terms {
            for (ws2, c2) in &other.terms {
                let mut acc: BTreeMap<Vec<Word>, S> = BTreeMap::new();
                acc.insert(vec![], c1.clone() * c2.clone());
                for (w1, w2) in ws1.iter().zip(ws2) {
                    let mut w = w1.clone();
                    w.extend_from_slice(w2);
                    let mut ordered = BTreeMap::new();
                    normal_order_into(w, S::one(), &mut ordered);
                    let mut next = BTreeMap::new();
                    for (prefix, c) in &acc {
                        for (nw, d) in &ordered {
                            let mut p = prefix.clone();
                            p.push(nw.clone());
                            add_into(&mut next, p, c.clone() * d.clone());
                        }
                    }
                    acc = next;
                }
                for (k, v) in acc {
                    add_into(&mut out.terms, k, v);
                }
            }
        }
        Ok(out)
    }

    pub fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("compatible tensors")
    }

    /// Places a two-factor element on sites `i < j` (1-based) of `n` sites,
    /// padding the others with the identity.
    pub fn embed_pair(&self, i: usize, j: usize, n: usize) -> Result<Self> {
        if self.nfactors != 2 {
            return Err(Error::FactorMismatch { expected: 2, got: self.nfactors });
        }
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::Index(format!("need 1 <= i < j <= N, got i={i}, j={j}, N={n}")));
        }
        let mut out = Self::zero(self.algebra, n);
        for (ws, c) in &self.terms {
            let mut full = vec![vec![]; n];
            full[i - 1] = ws[0].clone();
            full[j - 1] = ws[1].clone();
            add_into(&mut out.terms, full, c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TensorElement<T> {
        let mut out = TensorElement::zero(self.algebra, self.nfactors);
        for (w, c) in &self.terms {
            add_into(&mut out.terms, w.clone(), f(c));
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|v| v.modulus()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Display for TensorElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ws, c)| {
                let body: Vec<String> = ws.iter().map(|w| fmt_word(w)).collect();
                format!("({:?})·{}", c, body.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Δ(X) = 1⊗X + X⊗1 on generators, extended multiplicatively.
pub fn coproduct<S: Scalar>(x: &AlgebraElement<S>) -> TensorElement<S> {
    let alg = x.algebra;
    let one = AlgebraElement::<S>::one(alg);
    let mut out = TensorElement::zero(alg, 2);
    for (w, c) in &x.terms {
        let mut acc = TensorElement::identity(alg, 2);
        for g in w {
            let gx = AlgebraElement::gen(*g);
            let dg = TensorElement::pair(&one, &gx).plus(&TensorElement::pair(&gx, &one));
            acc = acc.times(&dg);
        }
        out = out.plus(&acc.scale(c));
    }
    out
}

/// Structure data for one of the two algebras.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub name: Algebra,
    pub generators: Vec<Gen>,
    pub bracket_table: BTreeMap<(Gen, Gen), AlgebraElement<Exact>>,
    pub star_tables: BTreeMap<StarName, BTreeMap<Gen, AlgebraElement<Exact>>>,
}

impl LieAlgebraSpec {
    pub fn new(name: Algebra) -> Self {
        let generators = name.generators().to_vec();
        let mut bracket_table = BTreeMap::new();
        for &x in &generators {
            for &y in &generators {
                let mut e = AlgebraElement::zero(name);
                for (k, g) in gen_bracket(x, y) {
                    e = e.plus(&AlgebraElement::gen(g).scale(&Exact::from_i64(k)));
                }
                bracket_table.insert((x, y), e);
            }
        }
        let stars: &[StarName] = match name {
            Algebra::Heisenberg => &[StarName::Heisenberg],
            Algebra::Sl2 => &[StarName::Su11, StarName::Sl2Real, StarName::Su2],
        };
        let mut star_tables = BTreeMap::new();
        for &s in stars {
            let table = generators
                .iter()
                .map(|&g| (g, AlgebraElement::gen(g).star(s).expect("star defined")))
                .collect();
            star_tables.insert(s, table);
        }
        LieAlgebraSpec { name, generators, bracket_table, star_tables }
    }

    pub fn heisenberg() -> Self {
        Self::new(Algebra::Heisenberg)
    }

    pub fn sl2() -> Self {
        Self::new(Algebra::Sl2)
    }

    /// Max coefficient of table(X,Y) + table(Y,X).
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &x in &self.generators {
            for &y in &self.generators {
                let s = self.bracket_table[&(x, y)].plus(&self.bracket_table[&(y, x)]);
                worst = worst.max(s.max_abs_coeff());
            }
        }
        worst
    }

    /// Lie bracket of two elements of the Lie algebra (linear combinations of
    /// generators), read from the table.
    fn table_bracket(&self, x: &AlgebraElement<Exact>, y: &AlgebraElement<Exact>) -> AlgebraElement<Exact> {
        let mut out = AlgebraElement::zero(self.name);
        for (wx, cx) in x.terms() {
            for (wy, cy) in y.terms() {
                assert!(wx.len() == 1 && wy.len() == 1, "table bracket expects Lie algebra elements");
                let b = &self.bracket_table[&(wx[0], wy[0])];
                out = out.plus(&b.scale(&(cx.clone() * cy.clone())));
            }
        }
        out
    }

    /// Max coefficient of [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] over all generator triples,
    /// computed twice: from the bracket table and from U(g) commutators.
    pub fn jacobi_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &x in &self.generators {
            for &y in &self.generators {
                for &z in &self.generators {
                    let (ex, ey, ez) = (AlgebraElement::gen(x), AlgebraElement::gen(y), AlgebraElement::gen(z));
                    let t = self
                        .table_bracket(&ex, &self.table_bracket(&ey, &ez))
                        .plus(&self.table_bracket(&ey, &self.table_bracket(&ez, &ex)))
                        .plus(&self.table_bracket(&ez, &self.table_bracket(&ex, &ey)));
                    let c = |a: &AlgebraElement<Exact>, b: &AlgebraElement<Exact>| a.commutator(b).expect("same");
                    let u = c(&ex, &c(&ey, &ez)).plus(&c(&ey, &c(&ez, &ex))).plus(&c(&ez, &c(&ex, &ey)));
                    worst = worst.max(t.max_abs_coeff()).max(u.max_abs_coeff());
                }
            }
        }
        worst
    }

    /// Max coefficient of star(star(X)) − X over generators and star tables.
    pub fn star_involution_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&s, _) in &self.star_tables {
            for &g in &self.generators {
                let x = AlgebraElement::<Exact>::gen(g);
                let d = x.star(s).and_then(|y| y.star(s)).expect("defined").minus(&x);
                worst = worst.max(d.max_abs_coeff());
            }
        }
        worst
    }

    /// Max coefficient of [X,Y]* − [Y*,X*] over generator pairs and stars.
    pub fn star_antihomomorphism_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&s, _) in &self.star_tables {
            for &x in &self.generators {
                for &y in &self.generators {
                    let (ex, ey) = (AlgebraElement::<Exact>::gen(x), AlgebraElement::gen(y));
                    let lhs = ex.commutator(&ey).unwrap().star(s).unwrap();
                    let rhs = ey.star(s).unwrap().commutator(&ex.star(s).unwrap()).unwrap();
                    worst = worst.max(lhs.minus(&rhs).max_abs_coeff());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ex, Exact};

    type E = AlgebraElement<Exact>;

    fn g(x: Gen) -> E {
        E::gen(x)
    }

    #[test]
    fn basic_commutators() {
        assert_eq!(g(Gen::Ad).commutator(&g(Gen::A)).unwrap(), g(Gen::Z));
        assert_eq!(g(Gen::E).commutator(&g(Gen::F)).unwrap(), g(Gen::H));
        assert_eq!(g(Gen::H).commutator(&g(Gen::E)).unwrap(), g(Gen::E).scale(&ex(2, 1)));
        assert!(g(Gen::E).commutator(&g(Gen::E)).unwrap().is_zero());
        assert_eq!(g(Gen::A).commutator(&g(Gen::H)), Err(Error::MixedAlgebra));
    }

    #[test]
    fn normal_ordering_of_fe() {
        // FE = EF − H
        let fe = E::word(vec![Gen::F, Gen::E], Exact::one());
        let expect = E::word(vec![Gen::E, Gen::F], Exact::one()).minus(&g(Gen::H));
        assert_eq!(fe, expect);
    }

    #[test]
    fn star_rules() {
        assert_eq!(g(Gen::E).star(StarName::Su11).unwrap(), g(Gen::F).scale(&ex(-1, 1)));
        let ef = E::word(vec![Gen::E, Gen::F], Exact::one());
        assert_eq!(ef.star(StarName::Su11).unwrap(), ef);
        assert!(g(Gen::A).star(StarName::Su11).is_err());
        let z = g(Gen::H).scale(&Exact::imag_unit());
        assert_eq!(z.star(StarName::Su11).unwrap(), g(Gen::H).scale(&-Exact::imag_unit()));
    }

    #[test]
    fn structure_checks_vanish() {
        for spec in [LieAlgebraSpec::heisenberg(), LieAlgebraSpec::sl2()] {
            assert_eq!(spec.antisymmetry_residual(), 0.0);
            assert_eq!(spec.jacobi_residual(), 0.0);
            assert_eq!(spec.star_involution_residual(), 0.0);
            assert_eq!(spec.star_antihomomorphism_residual(), 0.0);
        }
    }

    #[test]
    fn coproduct_unit_and_generator() {
        let one = E::one(Algebra::Sl2);
        assert_eq!(coproduct(&one), TensorElement::identity(Algebra::Sl2, 2));
        let dh = coproduct(&g(Gen::H));
        let expect = TensorElement::pair(&one, &g(Gen::H)).plus(&TensorElement::pair(&g(Gen::H), &one));
        assert_eq!(dh, expect);
    }

    #[test]
    fn embed_pair_padding() {
        let t = TensorElement::pair(&g(Gen::E), &g(Gen::F));
        let one = E::one(Algebra::Sl2);
        assert_eq!(t.embed_pair(1, 2, 2).unwrap(), t);
        assert_eq!(
            t.embed_pair(1, 3, 3).unwrap(),
            TensorElement::pure(&[g(Gen::E), one.clone(), g(Gen::F)]).unwrap()
        );
        assert_eq!(
            t.embed_pair(2, 3, 4).unwrap(),
            TensorElement::pure(&[one.clone(), g(Gen::E), g(Gen::F), one]).unwrap()
        );
        assert!(t.embed_pair(2, 2, 3).is_err());
        assert!(t.embed_pair(1, 4, 3).is_err());
    }
}
