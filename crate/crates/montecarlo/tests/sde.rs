use duality_core::processes::{build_generator_direct, BepDrift, ProcessSpec};
use duality_core::scalar::{rat, Float};
use duality_mc::{trajectory_rng, Moments, Sde};
use num_complex::Complex64;
use proptest::prelude::*;

fn dif(n: usize, c: i64) -> ProcessSpec {
    ProcessSpec::dif(n, rat(c, 1), 4)
}

fn bep3() -> ProcessSpec {
    ProcessSpec::bep(vec![rat(1, 1), rat(3, 2), rat(2, 1)], 4)
}

/// The pair coefficients rebuild the generator: a(∂_i − ∂_j)² + b(∂_i − ∂_j)
/// summed over pairs, compared term by term with the direct operator.
fn coefficients_match(spec: &ProcessSpec, x: &[f64]) {
    let sde = Sde::new(spec).unwrap();
    let g = build_generator_direct::<Float>(spec).unwrap();
    let op = g.op.as_diff().unwrap();
    let n = spec.n_sites;
    let pt: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let at = |orders: &[u32]| op.coefficient(orders).map_or(0.0, |p| p.eval(&pt).re);
    let mut first = vec![0.0; n];
    let mut second = vec![vec![0.0; n]; n];
    for (i, j) in spec.pairs() {
        let (b, a) = sde.pair_coefficients(x, i, j);
        first[i] += b;
        first[j] -= b;
        second[i][i] += a;
        second[j][j] += a;
        second[i][j] -= 2.0 * a;
    }
    for i in 0..n {
        let mut o = vec![0; n];
        o[i] = 1;
        assert!((at(&o) - first[i]).abs() < 1e-12, "first order {i}");
        o[i] = 2;
        assert!((at(&o) - second[i][i]).abs() < 1e-12, "second order {i}{i}");
        for j in i + 1..n {
            let mut o = vec![0; n];
            o[i] = 1;
            o[j] = 1;
            assert!((at(&o) - second[i][j]).abs() < 1e-12, "mixed {i}{j}");
        }
    }
}

#[test]
fn pair_coefficients_rebuild_the_generator() {
    for x in [[0.3, 1.7, 2.2], [1.0, 0.1, 5.0]] {
        coefficients_match(&dif(3, 2), &x);
        coefficients_match(&bep3(), &x);
        coefficients_match(&bep3().with_drift(BepDrift::Literal), &x);
    }
}

#[test]
fn zero_time_returns_the_start() {
    let s = Sde::new(&dif(2, 1)).unwrap();
    assert_eq!(s.simulate(&[0.5, -1.0], 0.0, 1e-3, &mut trajectory_rng(0, 0)).unwrap(), vec![0.5, -1.0]);
}

#[test]
fn ou_variance_matches_a_long_run_oracle() {
    // u = x1 − x2 satisfies du = −2u dt + 2√(2c) dW
    let s = Sde::new(&dif(2, 1)).unwrap();
    let dt = 1e-2;
    let mut ensemble = Moments::default();
    for i in 0..4000 {
        let x = s.simulate(&[0.0, 0.0], 4.0, dt, &mut trajectory_rng(21, i)).unwrap();
        ensemble.push(x[0] - x[1]);
    }
    let tr = s.trajectory(&[0.0, 0.0], 2000.0, dt, &mut trajectory_rng(22, 0), 22).unwrap();
    let mut long = Moments::default();
    for st in tr.states.iter().skip(1000) {
        let x = st.as_continuum().unwrap();
        long.push(x[0] - x[1]);
    }
    let (e, l) = (ensemble.std().powi(2), long.std().powi(2));
    // the ensemble variance of a Gaussian has relative SE √(2/n) ≈ 2.2%;
    // the correlated long run is of similar accuracy
    assert!((e - l).abs() / l < 0.12, "ensemble {e} vs long run {l}");
    // both sit near the continuous-time value 2c
    assert!((l - 2.0).abs() < 0.25, "long run {l}");
}

#[test]
fn bep_stays_positive_and_rejects_bad_input() {
    let s = Sde::new(&ProcessSpec::bep(vec![rat(1, 1), rat(1, 1)], 4)).unwrap();
    for i in 0..200 {
        let tr = s.trajectory(&[0.05, 0.01], 1.0, 1e-2, &mut trajectory_rng(5, i), 5).unwrap();
        for st in &tr.states {
            assert!(st.as_continuum().unwrap().iter().all(|&v| v > 0.0));
        }
    }
    let mut rng = trajectory_rng(0, 0);
    assert!(s.simulate(&[0.0, 1.0], 1.0, 1e-3, &mut rng).is_err());
    assert!(s.simulate(&[1.0, 1.0], 1.0, 0.0, &mut rng).is_err());
    assert!(s.simulate(&[1.0, 1.0], -1.0, 1e-3, &mut rng).is_err());
    assert!(s.simulate(&[1.0], 1.0, 1e-3, &mut rng).is_err());
    assert!(Sde::new(&ProcessSpec::irw(2, rat(1, 1), 4)).is_err());
}

#[test]
fn coupled_paths_agree_to_first_order() {
    let s = Sde::new(&dif(2, 1)).unwrap();
    let mut gap = Moments::default();
    for i in 0..200 {
        let (a, b) = s.simulate_coupled(&[1.0, -1.0], 0.5, 1e-3, &mut trajectory_rng(8, i)).unwrap();
        gap.push((a[0] - b[0]).abs());
    }
    assert!(gap.mean < 1e-2, "coarse and fine paths drift apart: {}", gap.mean);
}

#[test]
fn seeded_runs_repeat() {
    let s = Sde::new(&bep3()).unwrap();
    let a = s.trajectory(&[1.0, 2.0, 0.5], 0.2, 1e-3, &mut trajectory_rng(4, 2), 4).unwrap();
    let b = s.trajectory(&[1.0, 2.0, 0.5], 0.2, 1e-3, &mut trajectory_rng(4, 2), 4).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_is_conserved_every_step(
        bep in any::<bool>(),
        x in proptest::collection::vec(0.05f64..3.0, 3),
        seed in any::<u64>(),
    ) {
        let spec = if bep { bep3() } else { dif(3, 1) };
        let s = Sde::new(&spec).unwrap();
        let total: f64 = x.iter().sum();
        let tr = s.trajectory(&x, 0.1, 1e-3, &mut trajectory_rng(seed, 0), seed).unwrap();
        for st in &tr.states {
            let v = st.as_continuum().unwrap();
            prop_assert!((v.iter().sum::<f64>() - total).abs() <= 1e-12 * total.max(1.0));
            if bep {
                prop_assert!(v.iter().all(|&y| y > 0.0));
            }
        }
    }
}
