use duality_core::scalar::rat;
use duality_core::verify::{CaseParams, DualityCase};
use duality_core::Error;
use duality_mc::{mc_duality, McConfig, State};

fn params() -> CaseParams {
    CaseParams { k: vec![rat(1, 1), rat(1, 1)], ..CaseParams::default() }
}

fn case(name: &str) -> DualityCase {
    DualityCase::registered(name, &params()).unwrap()
}

fn lat(v: &[i64]) -> State {
    State::Lattice(v.to_vec())
}

fn cont(v: &[f64]) -> State {
    State::Continuum(v.to_vec())
}

#[test]
fn zero_time_gives_the_kernel_exactly() {
    let cfg = McConfig { t: 0.0, trials: 50, ..McConfig::default() };
    let r = mc_duality(&case("irw-charlier"), &lat(&[2, 1]), &lat(&[1, 0]), &cfg).unwrap();
    assert_eq!(r.left.mean, r.right.mean);
    assert_eq!(r.left.std_err, 0.0);
    assert_eq!(r.right.std_err, 0.0);
    assert!(r.passed());
    // C_2(1; c) C_1(0; c) = 1 − 2/c at c = 3/4
    assert!((r.left.mean + 5.0 / 3.0).abs() < 1e-14);
}

#[test]
fn jump_cases_agree() {
    let cfg = McConfig { t: 0.5, trials: 20_000, seed: 7, ..McConfig::default() };
    for name in ["irw-charlier", "sip-meixner", "sep-krawtchouk"] {
        let r = mc_duality(&case(name), &lat(&[2, 1]), &lat(&[1, 0]), &cfg).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.report());
        assert_eq!(r.bias_allowance, 0.0);
    }
}

#[test]
fn diffusion_cases_agree() {
    let cfg = McConfig { t: 0.3, dt: 1e-2, trials: 20_000, seed: 9, ..McConfig::default() };
    let r = mc_duality(&case("sip-bep-laguerre"), &lat(&[2, 1]), &cont(&[1.0, 0.5]), &cfg).unwrap();
    assert!(r.passed(), "{:?}", r.report());
    assert!(r.bias_allowance > 0.0);
    let r = mc_duality(&case("irw-dif-hermite"), &lat(&[2, 1]), &cont(&[1.0, -0.5]), &cfg).unwrap();
    assert!(r.passed(), "{:?}", r.report());
    let r = mc_duality(&case("bep-bessel"), &cont(&[1.0, 2.0]), &cont(&[0.5, 1.5]), &cfg).unwrap();
    assert!(r.passed(), "{:?}", r.report());
}

#[test]
fn perturbed_kernel_is_detected() {
    let cfg = McConfig { t: 0.5, trials: 50_000, seed: 3, ..McConfig::default() };
    let bad = case("irw-charlier").negative_control();
    let r = mc_duality(&bad, &lat(&[2, 1]), &lat(&[1, 0]), &cfg).unwrap();
    assert!(!r.passed(), "{:?}", r.report());
}

#[test]
fn seeded_estimates_repeat_exactly() {
    let cfg = McConfig { t: 0.3, dt: 1e-2, trials: 3000, seed: 5, ..McConfig::default() };
    let c = case("sip-bep-laguerre");
    let a = mc_duality(&c, &lat(&[1, 1]), &cont(&[0.7, 0.4]), &cfg).unwrap();
    let b = mc_duality(&c, &lat(&[1, 1]), &cont(&[0.7, 0.4]), &cfg).unwrap();
    assert_eq!(a.left, b.left);
    assert_eq!(a.right, b.right);
    let other = McConfig { seed: 6, ..cfg };
    assert_ne!(mc_duality(&c, &lat(&[1, 1]), &cont(&[0.7, 0.4]), &other).unwrap().left, a.left);
}

#[test]
fn unsupported_and_malformed_inputs() {
    let cfg = McConfig { trials: 10, ..McConfig::default() };
    let r = mc_duality(&case("dif-exp"), &cont(&[0.0, 0.0]), &cont(&[0.0, 0.0]), &cfg);
    assert!(matches!(r, Err(Error::Unsupported(_))));
    let r = mc_duality(&case("sip-hyp-mp"), &lat(&[1, 0]), &cont(&[0.0, 0.0]), &cfg);
    assert!(matches!(r, Err(Error::Unsupported(_))));
    let r = mc_duality(&case("irw-charlier"), &cont(&[1.0, 0.0]), &lat(&[1, 0]), &cfg);
    assert!(r.is_err());
    let r = mc_duality(&case("irw-charlier"), &lat(&[1, 0, 0]), &lat(&[1, 0]), &cfg);
    assert!(matches!(r, Err(Error::FactorMismatch { .. })));
    let zero = McConfig { trials: 0, ..cfg.clone() };
    assert!(mc_duality(&case("irw-charlier"), &lat(&[1, 0]), &lat(&[1, 0]), &zero).is_err());
    let neg = McConfig { t: -1.0, ..cfg };
    assert!(mc_duality(&case("irw-charlier"), &lat(&[1, 0]), &lat(&[1, 0]), &neg).is_err());
}

#[test]
fn report_carries_the_record_fields() {
    let cfg = McConfig { t: 0.5, trials: 2000, seed: 11, ..McConfig::default() };
    let r = mc_duality(&case("irw-charlier"), &lat(&[2, 1]), &lat(&[1, 0]), &cfg).unwrap();
    let rep = r.report();
    assert_eq!(rep.case, "montecarlo/irw-charlier");
    assert_eq!(rep.seed, Some(11));
    assert_eq!(rep.points_checked, 2000);
    assert_eq!(rep.passed(), r.passed());
    assert!((rep.tolerance - r.band()).abs() < 1e-15);
}
