use super::*;
use crate::algebra::{theta_parabolic_inverse, y_heisenberg};
use crate::scalar::{ex, rat, Exact, Float};

fn q(p: i64, d: i64) -> Exact {
    ex(p, d)
}

#[test]
fn rho_c_lowering_on_delta() {
    let r = rho_c(q(3, 4), 10).unwrap();
    let out = r.apply_element(&AlgebraElement::gen(Gen::A), &CarrierFn::delta(vec![3])).unwrap();
    // [ρ(a)δ_3](n) = n δ_3(n−1): single entry 4 at n = 4
    let CarrierFn::Seq(v) = out else { panic!() };
    assert_eq!(v.len(), 1);
    assert_eq!(v[&vec![4]], q(4, 1));
    // as a matrix acting on coefficient vectors: row 3 reads f(2) with weight 3
    let m = r.image(Gen::A).unwrap().to_matrix(&[5]).unwrap();
    assert_eq!(m[&vec![3]], vec![(vec![2], q(3, 1))]);
}

#[test]
fn pi_k_diagonal_h() {
    let s = Float::new(0.5f64.sqrt(), 0.0);
    let r = pi_k(Float::new(1.0, 0.0), s, 8).unwrap();
    let m = r.image(Gen::H).unwrap().to_matrix(&[8]).unwrap();
    for n in 0..=8i64 {
        assert_eq!(m[&vec![n]], vec![(vec![n], Float::new(2.0 * (1.0 + n as f64), 0.0))]);
    }
}

#[test]
fn sigma_k_e_on_constant() {
    let r = sigma_k(q(1, 1), 4).unwrap();
    let out = r.apply_element(&AlgebraElement::gen(Gen::E), &CarrierFn::Poly(Poly::one(1))).unwrap();
    let want = Poly::monomial(vec![1], Exact::new(rat(0, 1), rat(-1, 2)));
    assert_eq!(out, CarrierFn::Poly(want));
}

#[test]
fn casimir_is_scalar_on_discrete_series() {
    for k in [q(1, 2), q(1, 1), q(3, 4)] {
        let r = pi_k(k.clone(), q(1, 2), 24).unwrap();
        let value = q(2, 1) * k.clone() * (k - q(1, 1));
        let rep = r.casimir_residual(&value).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.points_checked > 20);
    }
}

#[test]
fn exact_brackets_vanish() {
    assert!(rho_c(q(3, 4), 24).unwrap().bracket_residual().unwrap().passed());
    assert!(sigma_c(q(2, 1), 16).unwrap().bracket_residual().unwrap().passed());
    assert!(pi_k(q(3, 4), q(1, 3), 24).unwrap().bracket_residual().unwrap().passed());
    // σ_k reverses brackets
    let sk = sigma_k(q(1, 3), 16).unwrap();
    assert!(!sk.bracket_residual().unwrap().passed());
    assert!(sk.antibracket_residual().unwrap().passed());
    let poly_rho = rho_k(q(3, 4), true, Carrier::Poly { maxdeg: 12 }).unwrap();
    assert!(poly_rho.bracket_residual().unwrap().passed());
}

#[test]
fn printed_rho_k_fails_brackets_and_corrected_passes() {
    let c = Carrier::ExpPoly { phi: 1.0, maxdeg: 10 };
    let printed = rho_k(Float::new(0.75, 0.0), false, c.clone()).unwrap();
    let rep = printed.bracket_residual().unwrap();
    assert!(!rep.passed() && rep.max_rel_residual > 0.5, "{rep:?}");
    let fixed = rho_k(Float::new(0.75, 0.0), true, c).unwrap();
    assert!(fixed.bracket_residual().unwrap().passed());
    // exact mode cannot twist by e^{iφ}
    let ex_rep = rho_k(q(1, 1), true, Carrier::ExpPoly { phi: 1.0, maxdeg: 4 }).unwrap();
    assert!(matches!(ex_rep.bracket_residual(), Err(Error::FloatOnly(_))));
}

#[test]
fn corrupted_action_is_detected() {
    let r = pi_k(q(1, 1), q(1, 2), 12).unwrap();
    let bad = r.with_image(Gen::F, r.image(Gen::F).unwrap().scale(&q(-1, 1))).unwrap();
    let rep = bad.bracket_residual().unwrap();
    assert!(!rep.passed() && rep.max_abs_residual > 0.0);
}

#[test]
fn star_adjointness_exact() {
    let r = rho_c(q(3, 4), 14).unwrap();
    assert!(r.star_adjointness_residual(StarName::Heisenberg).unwrap().passed());
    let s = sigma_c(q(3, 2), 10).unwrap();
    assert!(s.star_adjointness_residual(StarName::Heisenberg).unwrap().passed());
    let p = pi_k(q(3, 4), q(1, 2), 14).unwrap();
    assert!(p.star_adjointness_residual(StarName::Su11).unwrap().passed());
    let sk = sigma_k(q(3, 4), 8).unwrap();
    assert!(sk.star_adjointness_residual(StarName::Sl2Real).unwrap().passed());
    assert!(!sk.star_adjointness_residual(StarName::Su11).unwrap().passed());
}

#[test]
fn sigma_k_after_inverse_parabolic_map_is_su11_adjoint() {
    let sk = sigma_k(q(3, 4), 8).unwrap();
    let composed = sk.precompose(&theta_parabolic_inverse(), Some(StarName::Su11)).unwrap();
    let rep = composed.star_adjointness_residual(StarName::Su11).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn mismatched_weight_breaks_adjointness() {
    let mut p = pi_k(q(3, 4), q(1, 2), 12).unwrap();
    p.weight = Some(Weight::NegBinomial { k: q(3, 4), c: q(1, 3) });
    let rep = p.star_adjointness_residual(StarName::Su11).unwrap();
    assert!(!rep.passed() && rep.max_abs_residual > 1e-3);
}

#[test]
fn scale_equivalence() {
    assert!(scale_equivalence_check(&rat(1, 1), &rat(1, 4), &rat(1, 2), 24).unwrap().passed());
    assert!(scale_equivalence_check(&rat(3, 4), &rat(1, 3), &rat(1, 3), 24).unwrap().passed());
    let bad = scale_equivalence_check_with(&rat(1, 1), &rat(1, 4), &rat(1, 2), 24, ScalePower::Full).unwrap();
    assert!(!bad.passed() && bad.max_abs_residual > 1e-3);
    assert!(scale_equivalence_check(&rat(1, 1), &rat(1, 1), &rat(1, 2), 8).is_err());
}

#[test]
fn two_site_heisenberg_y() {
    let c = q(3, 4);
    let r = rho_c(c.clone(), 16).unwrap();
    let op = tensor_op(&[&r, &r], &y_heisenberg()).unwrap();
    for n1 in 1..6i64 {
        for n2 in 1..6i64 {
            let got = op.apply_lattice(&[n1, n2], |m| q(m[0], 1));
            assert_eq!(got, c.clone() * q(n2 - n1, 1));
        }
    }
    let s = sigma_c(c.clone(), 8).unwrap();
    let op = tensor_op(&[&s, &s], &y_heisenberg()).unwrap();
    let x1 = Poly::var(2, 0);
    let want = Poly::var(2, 0).sub_ref(&Poly::var(2, 1)).scale(&-c);
    assert_eq!(op.apply_poly(&x1), want);
}

#[test]
fn tensor_factor_mismatch() {
    let r = rho_c(q(1, 1), 6).unwrap();
    assert!(matches!(tensor_op(&[&r], &y_heisenberg()), Err(Error::FactorMismatch { expected: 1, got: 2 })));
    let p = pi_k(q(1, 1), q(1, 2), 6).unwrap();
    assert!(matches!(p.element_op(&AlgebraElement::gen(Gen::A)), Err(Error::MixedAlgebra)));
}

#[test]
fn parameter_validation() {
    assert!(rho_c(q(-1, 1), 6).is_err());
    assert!(pi_k(q(0, 1), q(1, 2), 6).is_err());
    assert!(sqrt_param::<Exact>(&rat(1, 2)).is_err());
    assert_eq!(sqrt_param::<Exact>(&rat(4, 9)).unwrap(), q(2, 3));
    assert!(rho_k(q(1, 1), false, Carrier::TruncatedSeq { n_max: 4 }).is_err());
    assert!(rho_k(Float::new(1.0, 0.0), false, Carrier::ExpPoly { phi: 3.5, maxdeg: 4 }).is_err());
}

#[test]
fn margin_violation_is_reported() {
    let r = rho_c(q(1, 1), 4).unwrap();
    let e = r.apply_element(&AlgebraElement::gen(Gen::A), &CarrierFn::delta(vec![4]));
    assert!(matches!(e, Err(Error::Margin(_))));
    let s = sigma_c(q(1, 1), 3).unwrap();
    let e = s.apply_element(&AlgebraElement::gen(Gen::A), &CarrierFn::Poly(Poly::monomial(vec![3], q(1, 1))));
    assert!(matches!(e, Err(Error::Margin(_))));
}

#[test]
fn charlier_r_element_is_the_zero_operator() {
    use crate::algebra::r_element;
    let r = rho_c(q(3, 4), 12).unwrap();
    let rep = tensor_zero_residual(&[&r, &r], &r_element()).unwrap();
    assert!(rep.passed() && rep.max_abs_residual == 0.0, "{rep:?}");
    assert!(rep.points_checked > 0);
    // Y itself is not zero
    let rep = tensor_zero_residual(&[&r, &r], &y_heisenberg()).unwrap();
    assert!(!rep.passed());
}
