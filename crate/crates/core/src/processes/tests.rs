use proptest::prelude::*;

use super::*;
use crate::repr::CarrierFn;
use crate::scalar::{ex, rat, Exact};

fn ks(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(p, q)| rat(p, q)).collect()
}

fn passes(spec: &ProcessSpec) {
    let r = generator_equivalence(spec).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.points_checked > 0);
}

#[test]
fn irw_on_first_coordinate() {
    let g: MarkovGenerator<Exact> = build_generator_direct(&ProcessSpec::irw(2, rat(3, 4), 8)).unwrap();
    let op = g.op.as_shift().unwrap();
    for n1 in 0..5i64 {
        for n2 in 0..5i64 {
            let v = op.apply_lattice(&[n1, n2], |m| Exact::from_i64(m[0]));
            assert_eq!(v, Exact::from_i64(n2 - n1));
        }
    }
}

#[test]
fn sip_rate_example() {
    let g: MarkovGenerator<Exact> = build_generator_direct(&ProcessSpec::sip(ks(&[(1, 1), (1, 1)]), 6)).unwrap();
    let rates = g.rates(&[1, 0]).unwrap();
    assert_eq!(rates, vec![(vec![0, 1], ex(2, 1))]);
}

#[test]
fn sep_rates_respect_caps() {
    let g: MarkovGenerator<Exact> = build_generator_direct(&ProcessSpec::sep(vec![3, 2])).unwrap();
    let rates = g.rates(&[1, 2]).unwrap();
    // site 2 is full, so only the jump 2 -> 1 remains, at rate n_2 (j_1 − n_1) = 4
    assert_eq!(rates, vec![(vec![2, 1], ex(4, 1))]);
    assert!(ctmc_residual(&g).unwrap().passed());
}

#[test]
fn equivalence_of_both_constructions() {
    passes(&ProcessSpec::irw(2, rat(3, 4), 16));
    passes(&ProcessSpec::irw(3, rat(3, 4), 8));
    passes(&ProcessSpec::sip(ks(&[(1, 2), (2, 1)]), 12));
    passes(&ProcessSpec::sip(ks(&[(1, 2), (1, 1), (2, 1)]), 6));
    passes(&ProcessSpec::sep(vec![3, 2]));
    passes(&ProcessSpec::dif(2, rat(1, 1), 8));
    passes(&ProcessSpec::dif(3, rat(1, 1), 6));
    passes(&ProcessSpec::bep(ks(&[(1, 3), (2, 1)]), 8));
    passes(&ProcessSpec::hyp(ks(&[(3, 4), (5, 4)]), std::f64::consts::PI / 3.0, 6));
}

#[test]
fn parameter_sweep() {
    for c in [rat(1, 4), rat(1, 1), rat(4, 1)] {
        passes(&ProcessSpec::irw(2, c.clone(), 8));
        passes(&ProcessSpec::dif(2, c, 5));
    }
    for k in [ks(&[(1, 2), (1, 2)]), ks(&[(1, 1), (1, 1)]), ks(&[(1, 3), (2, 1)])] {
        passes(&ProcessSpec::sip(k.clone(), 8));
        passes(&ProcessSpec::bep(k, 5));
    }
}

#[test]
fn literal_bep_drift_and_printed_hyp_fail() {
    let lit = ProcessSpec::bep(ks(&[(1, 3), (2, 1)]), 8).with_drift(BepDrift::Literal);
    let r = generator_equivalence(&lit).unwrap();
    assert!(!r.passed() && r.max_abs_residual > 0.0);
    assert!(!r.notes.is_empty());
    // equal k: both drifts coincide
    let eq = ProcessSpec::bep(ks(&[(1, 1), (1, 1)]), 6).with_drift(BepDrift::Literal);
    assert!(generator_equivalence(&eq).unwrap().passed());
    let hyp = ProcessSpec::hyp(ks(&[(3, 4), (5, 4)]), 1.0, 5).with_hyp_variant(HypVariant::Printed);
    assert!(!generator_equivalence(&hyp).unwrap().passed());
}

#[test]
fn conservation_and_ctmc() {
    let specs = [
        ProcessSpec::irw(3, rat(1, 2), 6),
        ProcessSpec::sip(ks(&[(1, 2), (2, 1)]), 8),
        ProcessSpec::sep(vec![3, 2]),
        ProcessSpec::dif(3, rat(1, 1), 5),
        ProcessSpec::bep(ks(&[(1, 3), (2, 1)]), 5),
        ProcessSpec::hyp(ks(&[(3, 4), (5, 4)]), 1.0, 5),
    ];
    for s in &specs {
        for p in [Provenance::DirectFormula, Provenance::Algebraic] {
            let g: MarkovGenerator<Exact> = build_generator(s, p).unwrap();
            assert!(conservation_residual(&g).unwrap().passed(), "{}", s.label());
            if s.family.is_discrete() {
                assert!(ctmc_residual(&g).unwrap().passed(), "{}", s.label());
            }
        }
    }
    let g: MarkovGenerator<Exact> = build_generator_direct(&specs[3]).unwrap();
    assert!(ctmc_residual(&g).is_err());
}

#[test]
fn reversibility() {
    assert!(reversibility_residual(&ProcessSpec::irw(2, rat(1, 2), 8)).unwrap().passed());
    let sip = ProcessSpec::sip(ks(&[(1, 1), (1, 1)]), 8).with_c(rat(1, 3));
    assert!(reversibility_residual(&sip).unwrap().passed());
    let sip2 = ProcessSpec::sip(ks(&[(1, 2), (2, 1)]), 7).with_c(rat(1, 3));
    assert!(reversibility_residual(&sip2).unwrap().passed());
    assert!(reversibility_residual(&ProcessSpec::dif(2, rat(3, 4), 5)).unwrap().passed());
    assert!(reversibility_residual(&ProcessSpec::bep(ks(&[(1, 1), (1, 1)]), 5)).unwrap().passed());
    assert!(reversibility_residual(&ProcessSpec::bep(ks(&[(1, 3), (2, 1)]), 5)).unwrap().passed());
    // the literal drift is not reversible for unequal k
    let lit = ProcessSpec::bep(ks(&[(1, 3), (2, 1)]), 5).with_drift(BepDrift::Literal);
    assert!(!reversibility_residual(&lit).unwrap().passed());
    // without c the SIP weight is undefined
    assert!(reversibility_residual(&ProcessSpec::sip(ks(&[(1, 1), (1, 1)]), 6)).is_err());
}

#[test]
fn validation() {
    assert!(ProcessSpec::irw(1, rat(1, 2), 8).validate().is_err());
    assert!(ProcessSpec::irw(2, rat(-1, 2), 8).validate().is_err());
    assert!(ProcessSpec::irw(2, rat(1, 2), 2).validate().is_err());
    assert!(ProcessSpec::sip(ks(&[(1, 1), (0, 1)]), 8).validate().is_err());
    let mut s = ProcessSpec::sip(ks(&[(1, 1), (1, 1)]), 8);
    s.n_sites = 3;
    assert!(s.validate().is_err());
    assert!(ProcessSpec::hyp(ks(&[(1, 1), (1, 1)]), 4.0, 4).validate().is_err());
    assert!(ProcessSpec::sep(vec![0, 2]).validate().is_err());
}

#[test]
fn spec_serde_round_trip() {
    let s = ProcessSpec::sip(ks(&[(1, 2), (2, 1)]), 12).with_c(rat(1, 3));
    let js = serde_json::to_string(&s).unwrap();
    assert!(js.contains("\"1/2\""));
    let back: ProcessSpec = serde_json::from_str(&js).unwrap();
    assert_eq!(back, s);
}

#[test]
fn generator_applies_on_carrier() {
    let g: MarkovGenerator<Exact> = build_generator_direct(&ProcessSpec::dif(2, rat(1, 1), 4)).unwrap();
    // L x1² = 2c·1 − 2(x1 − x2)x1 for one pair
    let f = CarrierFn::Poly(Poly::var(2, 0).mul_ref(&Poly::var(2, 0)));
    let CarrierFn::Poly(p) = g.apply(&f).unwrap() else { panic!() };
    assert_eq!(p.coeff(&[0, 0]), ex(2, 1));
    assert_eq!(p.coeff(&[2, 0]), ex(-2, 1));
    assert_eq!(p.coeff(&[1, 1]), ex(2, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sip_bep_equivalence_for_random_k(a in 1i64..7, b in 1i64..7, p in 1i64..5, q in 1i64..5) {
        let k = vec![rat(a, p), rat(b, q)];
        prop_assert!(generator_equivalence(&ProcessSpec::sip(k.clone(), 6)).unwrap().passed());
        prop_assert!(generator_equivalence(&ProcessSpec::bep(k, 4)).unwrap().passed());
    }

    #[test]
    fn irw_dif_equivalence_for_random_c(p in 1i64..9, q in 1i64..9) {
        prop_assert!(generator_equivalence(&ProcessSpec::irw(2, rat(p, q), 6)).unwrap().passed());
        prop_assert!(generator_equivalence(&ProcessSpec::dif(2, rat(p, q), 4)).unwrap().passed());
    }
}
