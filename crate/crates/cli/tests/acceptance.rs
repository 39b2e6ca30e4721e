//! The acceptance battery: one PASS/FAIL line per criterion, nonzero exit if
//! any fails. Runs without the test harness so the lines always show.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use duality_core::report::{Mode, VerificationReport};
use duality_lab::suites;
use duality_lab::{Command, RunConfig};

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new() -> Self {
        Verdict { ok: true, detail: String::new() }
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            if self.ok {
                self.detail = what();
            }
            self.ok = false;
        }
    }
}

fn cfg(cmd: Command, cases: &[&str]) -> RunConfig {
    RunConfig { command: cmd, cases: cases.iter().map(|s| s.to_string()).collect(), ..RunConfig::default() }
}

fn is_control(r: &VerificationReport) -> bool {
    r.notes.iter().any(|n| n.starts_with("negative control"))
}

/// Every record passes; the identities (not the controls) have residual
/// exactly 0 when exact.
fn all_pass_exactly(v: &mut Verdict, reports: &[VerificationReport]) {
    v.check(!reports.is_empty(), || "no records".into());
    for r in reports {
        v.check(r.passed(), || format!("{} failed: abs {:e} rel {:e}", r.case, r.max_abs_residual, r.max_rel_residual));
        if r.mode == Mode::Exact && !is_control(r) {
            v.check(r.max_abs_residual == 0.0, || format!("{} has nonzero exact residual", r.case));
        }
    }
}

fn within(v: &mut Verdict, what: &str, took: Duration, limit: Duration) {
    v.check(took < limit, || format!("{what} took {took:?}, limit {limit:?}"));
}

fn algebra() -> Verdict {
    let mut v = Verdict::new();
    let t0 = Instant::now();
    let reports = suites::algebra_suite(&cfg(Command::VerifyAlgebra, &["lie-algebras", "morphisms", "named-elements"]));
    within(&mut v, "algebra suite", t0.elapsed(), Duration::from_secs(5));
    all_pass_exactly(&mut v, &reports);
    for needle in ["jacobi", "bracket", "star-involution", "(casimir) - casimir", "Y - R"] {
        v.check(reports.iter().any(|r| r.case.contains(needle) && r.mode == Mode::Exact), || format!("no {needle} record"));
    }
    v
}

fn representations() -> Verdict {
    let mut v = Verdict::new();
    let reports = suites::representation_suite(&RunConfig::default());
    all_pass_exactly(&mut v, &reports);
    let casimirs = reports.iter().filter(|r| r.case.ends_with("/casimir")).count();
    v.check(casimirs == 3, || format!("{casimirs} Casimir records, want 3"));
    for needle in ["zero operator", "scale-equivalence"] {
        v.check(reports.iter().any(|r| r.case.contains(needle)), || format!("no {needle} record"));
    }
    v
}

fn generators() -> Verdict {
    let mut v = Verdict::new();
    let reports = suites::generator_suite(&RunConfig::default());
    all_pass_exactly(&mut v, &reports);
    v.check(reports.len() == 8, || format!("{} generator records, want 8", reports.len()));
    match reports.iter().find(|r| r.case.contains("literal drift")) {
        Some(lit) => {
            v.check(lit.max_abs_residual > 0.0, || "literal BEP drift has zero residual".into());
            v.check(lit.notes.iter().any(|n| n.contains("literal drift")), || "literal drift record lacks the note".into());
        }
        None => v.check(false, || "no literal BEP drift record".into()),
    }
    v
}

fn duality() -> Verdict {
    let mut v = Verdict::new();
    let t0 = Instant::now();
    let reports = suites::duality_suite(&RunConfig::default());
    within(&mut v, "duality suite", t0.elapsed(), Duration::from_secs(60));
    all_pass_exactly(&mut v, &reports);
    for (name, exact) in [
        ("irw-charlier", true),
        ("irw-dif-hermite", true),
        ("sip-meixner", true),
        ("sep-krawtchouk", true),
        ("sip-bep-laguerre", true),
        ("dif-exp", false),
        ("bep-bessel", false),
        ("sip-hyp-mp", false),
    ] {
        match reports.iter().find(|r| r.case.starts_with(&format!("duality/{name}/"))) {
            Some(r) if exact => v.check(r.mode == Mode::Exact && r.max_abs_residual == 0.0, || format!("{name} not exactly 0")),
            Some(r) => v.check(r.mode == Mode::Float && r.max_rel_residual <= 1e-9, || format!("{name} rel {:e}", r.max_rel_residual)),
            None => v.check(false, || format!("no record for {name}")),
        }
        match reports.iter().find(|r| r.case == format!("negative-control/{name}")) {
            Some(c) => v.check(c.passed() && c.max_rel_residual > 1e-3, || format!("{name} control too small")),
            None => v.check(false, || format!("no negative control for {name}")),
        }
    }
    v
}

fn intertwining() -> Verdict {
    let mut v = Verdict::new();
    let reports = suites::intertwining_suite(&RunConfig::default());
    let working: Vec<_> = reports.iter().filter(|r| r.case.contains("/working/")).collect();
    v.check(working.len() == 21, || format!("{} working records, want 21", working.len()));
    for r in &working {
        v.check(r.passed(), || format!("{} failed: rel {:e}", r.case, r.max_rel_residual));
        match r.mode {
            Mode::Exact => v.check(r.max_abs_residual == 0.0, || format!("{} not exactly 0", r.case)),
            _ => v.check(r.max_rel_residual <= 1e-9, || format!("{} rel {:e}", r.case, r.max_rel_residual)),
        }
    }
    v
}

fn orthogonality() -> Verdict {
    let mut v = Verdict::new();
    let reports = suites::orthogonality_suite(&RunConfig::default());
    all_pass_exactly(&mut v, &reports);
    for (case, tol) in [
        ("gram/charlier/unitary", 1e-10),
        ("gram/meixner/unitary", 1e-10),
        ("gram/krawtchouk/unitary", 1e-10),
        ("orthogonality/hermite", 1e-12),
        ("orthogonality/laguerre", 1e-12),
        ("orthogonality/meixner-pollaczek", 1e-8),
    ] {
        match reports.iter().find(|r| r.case == case) {
            Some(r) => v.check(r.max_rel_residual <= tol, || format!("{case} deviation {:e}", r.max_rel_residual)),
            None => v.check(false, || format!("no {case} record")),
        }
    }
    v
}

fn montecarlo() -> Verdict {
    let mut v = Verdict::new();
    let mut run = RunConfig { command: Command::Simulate, trials: 100_000, dt: 1e-3, seed: 42, ..RunConfig::default() };
    for (name, t) in [("irw-charlier", Some(0.5)), ("sip-meixner", Some(0.5)), ("sip-bep-laguerre", None)] {
        run.t = t;
        let t0 = Instant::now();
        let first = suites::simulate_case(&run, name);
        within(&mut v, name, t0.elapsed(), Duration::from_secs(120));
        let again = suites::simulate_case(&run, name);
        match (first, again) {
            (Ok(a), Ok(b)) => {
                v.check(a.passed(), || {
                    format!("{name}: |diff| {:e} > band {:e} (z {:.2})", a.difference(), a.band(), a.z_score)
                });
                v.check(a.left == b.left && a.right == b.right, || format!("{name} rerun differs"));
                if name == "sip-bep-laguerre" {
                    v.check(a.bias_allowance > 0.0, || "no Richardson allowance for the diffusion".into());
                }
            }
            (Err(e), _) | (_, Err(e)) => v.check(false, || format!("{name}: {e}")),
        }
    }
    v
}

fn cross() -> Verdict {
    let mut v = Verdict::new();
    let reports = suites::cross_suite(&RunConfig::default());
    v.check(reports.len() == 6, || format!("{} families, want 6", reports.len()));
    for r in &reports {
        v.check(r.passed() && r.max_rel_residual <= 1e-12, || format!("{} rel {:e}", r.case, r.max_rel_residual));
    }
    v
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 exact algebra suite", algebra),
        ("2 representation suite", representations),
        ("3 generator equivalence", generators),
        ("4 duality residuals with negative controls", duality),
        ("5 intertwining residuals", intertwining),
        ("6 orthogonality and Gram", orthogonality),
        ("7 Monte Carlo duality", montecarlo),
        ("8 kernel cross-validation", cross),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        let v = f();
        let secs = t0.elapsed().as_secs_f64();
        if v.ok {
            println!("PASS  criterion {name} ({secs:.1} s)");
        } else {
            failures += 1;
            println!("FAIL  criterion {name} ({secs:.1} s): {}", v.detail);
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
