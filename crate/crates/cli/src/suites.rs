//! The verification suites. Each returns one report per check, in a fixed
//! order; a check that errors becomes a failing report with NaN residuals.

use std::f64::consts::PI;

use duality_core::algebra::{
    casimir, coproduct, coproduct_casimir_expected, efc_residuals, r_element, theta_charlier, theta_exp,
    theta_exp_inverse, theta_parabolic, theta_parabolic_inverse, theta_phi, theta_sqrt_c, y_heisenberg,
    AlgebraMorphism, LieAlgebraSpec, StarName,
};
use duality_core::kernels::{cross_validate, gram_residual, orthogonality_residual, GramNormalization, OrthoFamily};
use duality_core::processes::{generator_equivalence, BepDrift, Family, ProcessSpec};
use duality_core::report::{timed, Measure, Mode, Residuals, Status, VerificationReport};
use duality_core::repr::{pi_k, rho_c, scale_equivalence_check, sigma_c, sigma_k, tensor_zero_residual};
use duality_core::scalar::{ex, ex_re, rat, Exact, Rational};
use duality_core::verify::{
    duality_residual, intertwining_residual, negative_control_report, CaseParams, DualityCase, IntertwiningCase,
    CONTROL_FLOOR, INTERTWINING_CASES, REGISTERED_CASES,
};
use duality_core::Result;
use duality_mc::{mc_duality, McConfig, McDuality, State};
use rayon::prelude::*;

use crate::catalog::{ALGEBRA_GROUPS, MC_CASES};
use crate::config::{intertwining_selector, RunConfig};

/// Runs `f`, stamping its wall time; an error becomes a failing report.
pub fn guard(case: &str, mode: Mode, f: impl FnOnce() -> Result<VerificationReport>) -> VerificationReport {
    match timed(f) {
        Ok(r) => r,
        Err(e) => failed(case, mode, &e.to_string()),
    }
}

fn guard_many(case: &str, mode: Mode, f: impl FnOnce() -> Result<Vec<VerificationReport>>) -> Vec<VerificationReport> {
    match f() {
        Ok(v) => v,
        Err(e) => vec![failed(case, mode, &e.to_string())],
    }
}

fn failed(case: &str, mode: Mode, err: &str) -> VerificationReport {
    VerificationReport {
        case: case.to_string(),
        mode,
        max_abs_residual: f64::NAN,
        max_rel_residual: f64::NAN,
        tolerance: f64::NAN,
        measure: Measure::Abs,
        status: Status::Fail,
        points_checked: 0,
        wall_time_ms: 0.0,
        seed: None,
        notes: vec![format!("error: {err}")],
    }
}

/// An exact identity whose residual is a max-abs coefficient.
fn exact_value(case: &str, f: impl FnOnce() -> Result<f64>) -> VerificationReport {
    guard(case, Mode::Exact, || {
        let v = f()?;
        let mut res = Residuals::new();
        res.push_raw(v, v);
        Ok(res.report(case, Mode::Exact, Measure::Abs, 0.0))
    })
}

/// A statement known to fail, reported as passing when its residual
/// clears the control floor.
fn expected_failure(label: &str, inner: VerificationReport, note: &str) -> VerificationReport {
    if inner.max_abs_residual.is_nan() {
        return inner;
    }
    let mut r = VerificationReport::expect_failure(label, &inner, CONTROL_FLOOR);
    r.notes.push(note.to_string());
    r.notes.extend(inner.notes);
    r
}

/// Re-judges a passing float check against a user tolerance.
fn retol(mut r: VerificationReport, tol: Option<f64>) -> VerificationReport {
    if let Some(tol) = tol {
        if r.mode == Mode::Float && !r.max_abs_residual.is_nan() {
            r.tolerance = tol;
            let v = match r.measure {
                Measure::Abs => r.max_abs_residual,
                Measure::Rel => r.max_rel_residual,
            };
            r.status = if v <= tol { Status::Pass } else { Status::Fail };
        }
    }
    r
}

fn q(p: i64, d: i64) -> Exact {
    ex(p, d)
}

pub fn algebra_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let groups: Vec<&str> = ALGEBRA_GROUPS.into_iter().filter(|g| cfg.selected(g)).collect();
    if groups.contains(&"lie-algebras") {
        for (name, spec) in [("heisenberg", LieAlgebraSpec::heisenberg()), ("sl2", LieAlgebraSpec::sl2())] {
            out.push(exact_value(&format!("lie-algebra/{name}/jacobi"), || Ok(spec.jacobi_residual())));
            out.push(exact_value(&format!("lie-algebra/{name}/antisymmetry"), || Ok(spec.antisymmetry_residual())));
            out.push(exact_value(&format!("lie-algebra/{name}/star-involution"), || Ok(spec.star_involution_residual())));
            out.push(exact_value(&format!("lie-algebra/{name}/star-antihomomorphism"), || {
                Ok(spec.star_antihomomorphism_residual())
            }));
        }
    }
    if groups.contains(&"morphisms") {
        out.extend(morphism_checks());
    }
    if groups.contains(&"named-elements") {
        out.extend(named_element_checks());
    }
    if groups.contains(&"representations") {
        out.extend(representation_suite(cfg));
    }
    out
}

fn morphism_checks() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let half = rat(1, 2);
    let named: Vec<(&str, Result<AlgebraMorphism<Exact>>)> = vec![
        ("theta_charlier", Ok(theta_charlier())),
        ("theta_exp", Ok(theta_exp())),
        ("theta_exp_inverse", Ok(theta_exp_inverse())),
        ("theta_sqrt_c(1/2)", theta_sqrt_c(&half)),
        ("theta_parabolic", Ok(theta_parabolic())),
        ("theta_parabolic_inverse", Ok(theta_parabolic_inverse())),
    ];
    for (name, m) in named {
        out.push(exact_value(&format!("morphism/{name}/bracket"), || Ok(m?.bracket_residual())));
    }
    out.push(exact_value("morphism/theta_charlier/involution", || {
        theta_charlier().inverse_residual(&theta_charlier())
    }));
    out.push(exact_value("morphism/theta_exp/inverse", || theta_exp().inverse_residual(&theta_exp_inverse())));
    out.push(exact_value("morphism/theta_parabolic/inverse", || {
        theta_parabolic().inverse_residual(&theta_parabolic_inverse())
    }));
    out.push(exact_value("morphism/theta_sqrt_c(1/2)/inverse", || {
        theta_sqrt_c(&half)?.inverse_residual(&theta_sqrt_c(&-half.clone())?)
    }));
    out.push(exact_value("morphism/theta_charlier/star", || {
        theta_charlier().star_residual(StarName::Heisenberg, StarName::Heisenberg)
    }));
    out.push(exact_value("morphism/theta_parabolic/star", || {
        theta_parabolic().star_residual(StarName::Sl2Real, StarName::Su11)
    }));
    out.push(exact_value("morphism/theta_sqrt_c(1/2)/star", || {
        theta_sqrt_c(&half)?.star_residual(StarName::Su11, StarName::Su11)
    }));
    let label = "morphism/theta_phi/bracket-as-displayed";
    let inner = guard(label, Mode::Float, || {
        let v = theta_phi(PI / 3.0)?.bracket_residual();
        let mut res = Residuals::new();
        res.push_raw(v, v);
        Ok(res.report(label, Mode::Float, Measure::Abs, 1e-12))
    });
    out.push(expected_failure(
        label,
        inner,
        "the displayed theta_phi sends [H, E] = 2E to -2 theta(E); flipping the signs of the H and E images gives a homomorphism",
    ));
    out
}

fn named_element_checks() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    out.push(exact_value("named/theta_sqrt_c(1/2)(casimir) - casimir", || {
        let om = casimir();
        Ok(theta_sqrt_c(&rat(1, 2))?.apply(&om)?.minus(&om).max_abs_coeff())
    }));
    out.push(exact_value("named/theta_parabolic(casimir) - casimir", || {
        let om = casimir();
        Ok(theta_parabolic().apply(&om)?.minus(&om).max_abs_coeff())
    }));
    out.push(exact_value("named/(theta x theta)(Y) - Y - R", || {
        let y = y_heisenberg();
        Ok(theta_charlier().apply_tensor(&y)?.minus(&y).minus(&r_element()).max_abs_coeff())
    }));
    out.push(exact_value("named/coproduct(casimir)", || {
        Ok(coproduct(&casimir()).minus(&coproduct_casimir_expected()).max_abs_coeff())
    }));
    let s = rat(1, 2);
    match efc_residuals(&s) {
        Ok((diff, literal, corrected)) => {
            out.push(exact_value("named/E - F difference identity", || Ok(diff)));
            out.push(exact_value("named/E + F sum identity [H_sqrt_c, H]", || Ok(corrected)));
            let label = "named/E + F sum identity as displayed [H, H_sqrt_c]";
            let inner = exact_value(label, || Ok(literal));
            out.push(expected_failure(label, inner, "the displayed bracket order flips the sign of the commutator term"));
        }
        Err(e) => out.push(failed("named/E F identities", Mode::Exact, &e.to_string())),
    }
    out
}

pub fn representation_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for (p, d) in [(1, 2), (1, 1), (3, 4)] {
        let label = format!("representation/pi_k({p}/{d})/casimir");
        out.push(guard(&label, Mode::Exact, || {
            let k = q(p, d);
            let value = q(2, 1) * k.clone() * (k.clone() - q(1, 1));
            let mut r = pi_k(k, q(1, 2), 24)?.casimir_residual(&value)?;
            r.case = label.clone();
            Ok(r)
        }));
    }
    let c = ex_re(cfg.c.clone());
    out.push(guard("representation/rho_c/bracket", Mode::Exact, || rho_c(c.clone(), 24)?.bracket_residual()));
    out.push(guard("representation/sigma_c/bracket", Mode::Exact, || sigma_c(c.clone(), 16)?.bracket_residual()));
    out.push(guard("representation/pi_k/bracket", Mode::Exact, || pi_k(q(3, 4), q(1, 3), 24)?.bracket_residual()));
    out.push(guard("representation/sigma_k/antibracket", Mode::Exact, || sigma_k(q(1, 3), 16)?.antibracket_residual()));
    out.push(guard("representation/rho_c/star", Mode::Exact, || {
        rho_c(c.clone(), 14)?.star_adjointness_residual(StarName::Heisenberg)
    }));
    out.push(guard("representation/sigma_c/star", Mode::Exact, || {
        sigma_c(c.clone(), 10)?.star_adjointness_residual(StarName::Heisenberg)
    }));
    out.push(guard("representation/pi_k/star", Mode::Exact, || {
        pi_k(q(3, 4), q(1, 2), 14)?.star_adjointness_residual(StarName::Su11)
    }));
    out.push(guard("representation/sigma_k/star", Mode::Exact, || {
        sigma_k(q(3, 4), 8)?.star_adjointness_residual(StarName::Sl2Real)
    }));
    out.push(guard("representation/rho_c x rho_c (R)", Mode::Exact, || {
        let r = rho_c(c.clone(), 12)?;
        tensor_zero_residual(&[&r, &r], &r_element())
    }));
    out.push(guard("representation/pi_k scale equivalence", Mode::Exact, || {
        scale_equivalence_check(&rat(1, 1), &rat(1, 4), &rat(1, 2), 24)
    }));
    for r in &mut out {
        if !r.case.starts_with("representation/") {
            r.case = format!("representation/{}", r.case);
        }
    }
    out
}

/// Direct against algebraic construction of every generator family.
pub fn generator_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let d = cfg.maxdeg;
    let ks = |a: Rational, b: Rational| vec![a, b];
    let mut specs: Vec<(&str, ProcessSpec)> = Vec::new();
    for n in [2, 3] {
        specs.push(("generator/irw", ProcessSpec::irw(n, rat(3, 4), 16)));
    }
    specs.push(("generator/sip", ProcessSpec::sip(ks(rat(1, 2), rat(2, 1)), 16)));
    specs.push(("generator/sep", ProcessSpec::sep(vec![3, 2])));
    for n in [2, 3] {
        specs.push(("generator/dif", ProcessSpec::dif(n, rat(1, 1), d)));
    }
    specs.push(("generator/bep", ProcessSpec::bep(ks(rat(1, 3), rat(2, 1)), d)));
    let mut out: Vec<VerificationReport> = specs
        .par_iter()
        .filter(|(sel, _)| cfg.selected(sel))
        .map(|(sel, s)| guard(sel, Mode::Exact, || generator_equivalence(s)))
        .collect();
    if cfg.selected("generator/bep") && cfg.selects_all() {
        let lit = ProcessSpec::bep(ks(rat(1, 3), rat(2, 1)), d).with_drift(BepDrift::Literal);
        let label = format!("generator-equivalence-literal/{}", lit.label());
        let inner = guard(&label, Mode::Exact, || generator_equivalence(&lit));
        out.push(expected_failure(&label, inner, "the literal drift is not the image of the algebraic generator"));
    }
    out
}

pub fn case_params(cfg: &RunConfig) -> CaseParams {
    CaseParams {
        n_sites: cfg.sites,
        c: cfg.c.clone(),
        k: cfg.k.clone(),
        j: cfg.j.clone(),
        phi: cfg.phi,
        trunc: cfg.trunc,
        points: cfg.points,
    }
}

/// Each selected duality case; on full runs also its negative control and
/// the literal variant of any corrected ingredient.
pub fn duality_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let p = case_params(cfg);
    let names: Vec<&str> = REGISTERED_CASES.iter().map(|c| c.name).filter(|n| cfg.selected(n)).collect();
    let full = cfg.selects_all();
    names
        .par_iter()
        .map(|name| {
            let label = format!("duality/{name}");
            let case = match DualityCase::registered(name, &p) {
                Ok(c) => c,
                Err(e) => return vec![failed(&label, Mode::Exact, &e.to_string())],
            };
            let mut out = vec![retol(guard(&label, Mode::Exact, || duality_residual(&case)), cfg.tolerance)];
            if full {
                out.push(guard(&format!("negative-control/{name}"), Mode::Exact, || negative_control_report(&case)));
                if let Some(lit) = case.literal_variant() {
                    let l = format!("literal-variant/{name}");
                    let inner = guard(&l, Mode::Exact, || duality_residual(&lit));
                    out.push(expected_failure(&l, inner, "the displayed form of the corrected ingredient"));
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Working forms for every selected kernel; on full runs also the literal
/// forms on the generators where they break.
pub fn intertwining_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let kernels: Vec<_> = INTERTWINING_CASES
        .into_iter()
        .filter(|k| cfg.selects_all() || cfg.cases.iter().any(|s| intertwining_selector(s) == Some(*k)))
        .collect();
    let full = cfg.selects_all();
    kernels
        .par_iter()
        .map(|&k| {
            let label = format!("intertwining/{}", k.name());
            let mode = if k.is_exact() { Mode::Exact } else { Mode::Float };
            let mut out: Vec<_> = guard_many(&label, mode, || intertwining_residual(&IntertwiningCase::new(k)))
                .into_iter()
                .map(|r| retol(r, cfg.tolerance))
                .collect();
            if full && !k.literal_breaks().is_empty() {
                let lit = guard_many(&label, mode, || intertwining_residual(&IntertwiningCase::new(k).literal()));
                for r in lit {
                    let generator = r.case.rsplit('/').next().unwrap_or("");
                    if r.max_abs_residual.is_nan() || k.literal_breaks().contains(&generator) {
                        let l = format!("intertwining-literal/{}/{generator}", k.name());
                        out.push(expected_failure(&l, r, "the relation in its displayed form"));
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// The fixed family parameters of the orthogonality suite.
pub fn ortho_families() -> [OrthoFamily; 6] {
    [
        OrthoFamily::Charlier { c: rat(3, 4) },
        OrthoFamily::Meixner { k: rat(3, 4), c: rat(1, 3) },
        OrthoFamily::Krawtchouk { j: 12, c: rat(1, 3) },
        OrthoFamily::Hermite { c: rat(3, 4) },
        OrthoFamily::Laguerre { k: rat(3, 4), c: rat(1, 4) },
        OrthoFamily::MeixnerPollaczek { k: 0.75, phi: PI / 3.0 },
    ]
}

fn ortho_max(f: &OrthoFamily) -> u32 {
    match f {
        OrthoFamily::Charlier { .. } | OrthoFamily::Meixner { .. } | OrthoFamily::Krawtchouk { .. } => 12,
        OrthoFamily::Hermite { .. } | OrthoFamily::Laguerre { .. } => 10,
        OrthoFamily::MeixnerPollaczek { .. } => 6,
    }
}

fn discrete(f: &OrthoFamily) -> bool {
    matches!(f, OrthoFamily::Charlier { .. } | OrthoFamily::Meixner { .. } | OrthoFamily::Krawtchouk { .. })
}

pub fn orthogonality_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let fams: Vec<OrthoFamily> = ortho_families().into_iter().filter(|f| cfg.selected(f.name())).collect();
    let full = cfg.selects_all();
    fams.par_iter()
        .map(|f| {
            let m = ortho_max(f);
            let label = format!("orthogonality/{}", f.name());
            let mut out = vec![retol(
                guard(&label, Mode::Float, || orthogonality_residual(f, m, &f.default_quadrature(m))),
                cfg.tolerance,
            )];
            if discrete(f) {
                let g = format!("gram/{}/unitary", f.name());
                out.push(retol(guard(&g, Mode::Float, || gram_residual(f, m, GramNormalization::Unitary)), cfg.tolerance));
                if full {
                    let l = format!("gram/{}/printed", f.name());
                    let inner = guard(&l, Mode::Float, || gram_residual(f, m, GramNormalization::Printed));
                    out.push(expected_failure(&l, inner, "the kernel as defined lacks the unitary constant"));
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Exact series against float recurrence, n and x up to 20.
pub fn cross_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let fams: Vec<OrthoFamily> = ortho_families()
        .into_iter()
        .map(|f| match f {
            OrthoFamily::Krawtchouk { c, .. } => OrthoFamily::Krawtchouk { j: 20, c },
            f => f,
        })
        .filter(|f| cfg.selected(f.name()))
        .collect();
    fams.par_iter()
        .map(|f| retol(guard(&format!("cross/{}", f.name()), Mode::Float, || cross_validate(f, 20, 20)), cfg.tolerance))
        .collect()
}

/// Default (eta1, eta2, t) of each simulated case, for two sites.
pub fn mc_defaults(name: &str) -> (Vec<f64>, Vec<f64>, f64) {
    match name {
        "irw-charlier" | "sip-meixner" | "sep-krawtchouk" => (vec![2.0, 1.0], vec![1.0, 0.0], 0.5),
        "sip-bep-laguerre" => (vec![2.0, 1.0], vec![1.0, 0.5], 0.3),
        "irw-dif-hermite" => (vec![2.0, 1.0], vec![1.0, -0.5], 0.3),
        _ => (vec![1.0, 2.0], vec![0.5, 1.5], 0.3),
    }
}

fn state(family: Family, v: &[f64]) -> State {
    if family.is_discrete() {
        State::Lattice(v.iter().map(|&x| x as i64).collect())
    } else {
        State::Continuum(v.to_vec())
    }
}

/// One Monte Carlo comparison. Without `--k` the simulations use k = 1 on
/// every site.
pub fn simulate_case(cfg: &RunConfig, name: &str) -> Result<McDuality> {
    let mut p = case_params(cfg);
    if !cfg.k_given {
        p.k = vec![rat(1, 1); cfg.sites];
    }
    let case = DualityCase::registered(name, &p)?;
    let (d1, d2, t) = mc_defaults(name);
    let eta1 = cfg.eta1.clone().unwrap_or(d1);
    let eta2 = cfg.eta2.clone().unwrap_or(d2);
    let mc = McConfig {
        t: cfg.t.unwrap_or(t),
        dt: cfg.dt,
        trials: cfg.trials as u64,
        seed: cfg.seed,
        richardson: true,
    };
    mc_duality(&case, &state(case.left.family, &eta1), &state(case.right.family, &eta2), &mc)
}

/// Simulates each selected case; the estimates go to stderr.
pub fn montecarlo_suite(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for name in MC_CASES.into_iter().filter(|n| cfg.selected(n)) {
        let label = format!("montecarlo/{name}");
        match simulate_case(cfg, name) {
            Ok(r) => {
                eprintln!(
                    "{name}: left {:.6} ± {:.2e}, right {:.6} ± {:.2e}, z = {:.3}, bias allowance {:.2e}",
                    r.left.mean, r.left.std_err, r.right.mean, r.right.std_err, r.z_score, r.bias_allowance
                );
                out.push(r.report());
            }
            Err(e) => out.push(failed(&label, Mode::MonteCarlo, &e.to_string()).with_seed(cfg.seed)),
        }
    }
    out
}
