use super::*;

fn small() -> CaseParams {
    CaseParams { trunc: 8, points: 9, ..CaseParams::default() }
}

fn case(name: &str, p: &CaseParams) -> DualityCase {
    DualityCase::registered(name, p).unwrap()
}

#[test]
fn every_registered_case_passes() {
    let p = small();
    for c in registered_cases(&p).unwrap() {
        let r = duality_residual(&c).unwrap();
        assert!(r.passed(), "{} rel {:e}", r.case, r.max_rel_residual);
        assert!(r.points_checked > 0);
    }
}

#[test]
fn exact_cases_have_zero_residual() {
    let p = small();
    for c in registered_cases(&p).unwrap() {
        if c.plan == Plan::FloatAnalytic {
            continue;
        }
        let r = duality_residual(&c).unwrap();
        assert_eq!(r.max_abs_residual, 0.0, "{}", r.case);
        assert_eq!(r.tolerance, 0.0);
    }
}

#[test]
fn parameter_sweep() {
    for c in [rat(1, 4), rat(3, 4)] {
        for k in [vec![rat(1, 1), rat(1, 1)], vec![rat(1, 2), rat(2, 1)]] {
            let p = CaseParams { c: c.clone(), k, trunc: 7, points: 7, ..CaseParams::default() };
            for name in REGISTERED_CASES.iter().map(|i| i.name) {
                let r = duality_residual(&case(name, &p)).unwrap();
                assert!(r.passed(), "{} at c={c}: rel {:e}", r.case, r.max_rel_residual);
            }
        }
    }
}

#[test]
fn three_sites() {
    let p = CaseParams {
        n_sites: 3,
        k: vec![rat(1, 2), rat(1, 1), rat(3, 2)],
        j: vec![1, 2, 1],
        trunc: 5,
        points: 4,
        ..CaseParams::default()
    };
    for name in ["irw-charlier", "sep-krawtchouk", "sip-meixner", "bep-bessel"] {
        let r = duality_residual(&case(name, &p)).unwrap();
        assert!(r.passed(), "{} rel {:e}", r.case, r.max_rel_residual);
    }
}

#[test]
fn negative_controls_fail() {
    let p = small();
    for c in registered_cases(&p).unwrap() {
        let raw = duality_residual(&c.negative_control()).unwrap();
        assert!(raw.max_rel_residual > CONTROL_FLOOR, "{} rel {:e}", raw.case, raw.max_rel_residual);
        assert!(!raw.passed());
        let ctl = negative_control_report(&c).unwrap();
        assert!(ctl.passed(), "{}", ctl.case);
    }
}

#[test]
fn literal_variants_fail() {
    let p = small();
    let mut seen = 0;
    for c in registered_cases(&p).unwrap() {
        if let Some(l) = c.literal_variant() {
            let r = duality_residual(&l).unwrap();
            assert!(r.max_rel_residual > CONTROL_FLOOR, "{} rel {:e}", r.case, r.max_rel_residual);
            seen += 1;
        }
    }
    // exp kernel, the two BEP cases, hyperbolic
    assert_eq!(seen, 4);
}

#[test]
fn constant_kernel_is_self_dual_only_for_conservative_pairs() {
    let p = small();
    let mut c = case("irw-charlier", &p);
    c.kernel = KernelSpec::Constant { sites: 2 };
    // both generators annihilate constants from the left and the right
    let r = duality_residual(&c).unwrap();
    assert_eq!(r.max_abs_residual, 0.0);
}

#[test]
fn scale_invariance() {
    let p = small();
    for name in ["irw-charlier", "sip-meixner", "sep-krawtchouk", "irw-dif-hermite"] {
        let c = case(name, &p).with_scale(rat(7, 3));
        let r = duality_residual(&c).unwrap();
        assert_eq!(r.max_abs_residual, 0.0, "{name}");
    }
    let c = case("sip-meixner", &p).with_scale(Rational::zero());
    assert!(matches!(duality_residual(&c), Err(Error::Domain(_))));
}

#[test]
fn sigma_n_conjugation_keeps_laguerre_dual() {
    let p = small();
    for l in [rat(2, 1), rat(1, 3)] {
        let c = case("sip-bep-laguerre", &p).with_sigma_n_base(l);
        let r = duality_residual(&c).unwrap();
        assert_eq!(r.max_abs_residual, 0.0);
    }
}

#[test]
fn margin_violation_is_an_error() {
    let p = small();
    let mut c = case("sip-meixner", &p);
    c.grid.index_max = p.trunc;
    assert!(matches!(duality_residual(&c), Err(Error::Margin(_))));
    let tight = CaseParams { trunc: 1, ..small() };
    assert!(matches!(DualityCase::registered("irw-charlier", &tight), Err(Error::Margin(_))));
}

#[test]
fn plan_mismatch_is_an_error() {
    let p = small();
    let mut c = case("irw-charlier", &p);
    c.plan = Plan::FloatAnalytic;
    assert!(matches!(duality_residual(&c), Err(Error::Unsupported(_))));
    let mut c = case("dif-exp", &p);
    c.plan = Plan::ExactDiscrete;
    assert!(duality_residual(&c).is_err());
}

#[test]
fn unknown_case_and_bad_lengths() {
    let p = small();
    assert!(matches!(DualityCase::registered("nope", &p), Err(Error::Unsupported(_))));
    let bad = CaseParams { k: vec![rat(1, 2)], ..small() };
    assert!(matches!(DualityCase::registered("sip-meixner", &bad), Err(Error::Domain(_))));
    let mut c = case("irw-charlier", &p);
    c.kernel = KernelSpec::Charlier { c: vec![rat(1, 2); 3] };
    assert!(matches!(duality_residual(&c), Err(Error::FactorMismatch { .. })));
}

#[test]
fn hyperbolic_case_notes_the_operator_variant() {
    let p = small();
    let r = duality_residual(&case("sip-hyp-mp", &p)).unwrap();
    assert!(r.passed());
    assert!(r.notes.iter().any(|n| n.contains("hyperbolic")));
}

#[test]
fn intertwining_working_forms_hold() {
    for k in INTERTWINING_CASES {
        let mut c = IntertwiningCase::new(k);
        c.index_max = 6;
        c.points = 9;
        for r in intertwining_residual(&c).unwrap() {
            assert!(r.passed(), "{} rel {:e}", r.case, r.max_rel_residual);
        }
    }
}

#[test]
fn intertwining_literal_forms() {
    for k in INTERTWINING_CASES {
        let bad = k.literal_breaks();
        let mut c = IntertwiningCase::new(k).literal();
        c.index_max = 6;
        c.points = 9;
        for r in intertwining_residual(&c).unwrap() {
            let gen = r.case.rsplit('/').next().unwrap();
            let expect_fail = bad.contains(&gen);
            assert_eq!(!r.passed(), expect_fail, "{} rel {:e}", r.case, r.max_rel_residual);
            if expect_fail {
                assert!(r.max_rel_residual > CONTROL_FLOOR);
            }
        }
    }
}

#[test]
fn intertwining_parse_round_trip() {
    for k in INTERTWINING_CASES {
        assert_eq!(IntertwiningKernel::parse(k.name()).unwrap(), k);
    }
    assert!(IntertwiningKernel::parse("jacobi").is_err());
}
