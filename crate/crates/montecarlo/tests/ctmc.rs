use duality_core::processes::ProcessSpec;
use duality_core::scalar::rat;
use duality_mc::{trajectory_rng, Ctmc, Moments, State};
use proptest::prelude::*;

fn irw() -> ProcessSpec {
    ProcessSpec::irw(2, rat(3, 4), 12)
}

fn sip(k: (i64, i64)) -> ProcessSpec {
    ProcessSpec::sip(vec![rat(k.0, 1), rat(k.1, 1)], 12)
}

#[test]
fn zero_time_returns_the_start() {
    let c = Ctmc::new(&irw()).unwrap();
    let mut rng = trajectory_rng(1, 0);
    assert_eq!(c.simulate(&[2, 3], 0.0, &mut rng).unwrap(), vec![2, 3]);
}

#[test]
fn sip_from_one_particle_can_only_hop_across() {
    let spec = sip((1, 1));
    let c = Ctmc::new(&spec).unwrap();
    let mut rates = Vec::new();
    let total = c.rates(&[1, 0], &mut rates).unwrap();
    // n1 (n2 + 2k2) = 2 out of site 1, nothing out of the empty site
    assert_eq!(total, 2.0);
    // the first jump lands on (0, 1)
    for i in 0..200 {
        let mut rng = trajectory_rng(5, i);
        let tr = c.trajectory(&[1, 0], 100.0, &mut rng, 5).unwrap();
        assert_eq!(tr.states[1], State::Lattice(vec![0, 1]));
    }
}

#[test]
fn holding_time_mean_is_one_over_total_rate() {
    let c = Ctmc::new(&ProcessSpec::sip(vec![rat(1, 2), rat(2, 1)], 12)).unwrap();
    let state = [2, 1];
    let mut buf = Vec::new();
    let total = c.rates(&state, &mut buf).unwrap();
    let mut m = Moments::default();
    let mut rng = trajectory_rng(11, 0);
    for _ in 0..10_000 {
        let (h, _) = c.first_jump(&state, &mut rng).unwrap().unwrap();
        m.push(h);
    }
    let se = m.std() / 100.0;
    assert!((m.mean - 1.0 / total).abs() <= 3.0 * se, "mean {} vs {}", m.mean, 1.0 / total);
}

#[test]
fn jump_frequencies_follow_the_rates() {
    let c = Ctmc::new(&irw()).unwrap();
    let state = [3, 1];
    let mut buf = Vec::new();
    let total = c.rates(&state, &mut buf).unwrap();
    let mut counts = vec![0u32; buf.len()];
    let mut rng = trajectory_rng(13, 0);
    let n = 20_000;
    for _ in 0..n {
        counts[c.first_jump(&state, &mut rng).unwrap().unwrap().1] += 1;
    }
    for (k, &r) in buf.iter().enumerate() {
        let p = r / total;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((counts[k] as f64 / n as f64 - p).abs() <= 4.0 * se + 1e-12);
    }
}

#[test]
fn seeded_runs_repeat() {
    let c = Ctmc::new(&sip((1, 1))).unwrap();
    let a = c.trajectory(&[3, 2], 2.0, &mut trajectory_rng(42, 7), 42).unwrap();
    let b = c.trajectory(&[3, 2], 2.0, &mut trajectory_rng(42, 7), 42).unwrap();
    assert_eq!(a, b);
    let d = c.trajectory(&[3, 2], 2.0, &mut trajectory_rng(42, 8), 42).unwrap();
    assert_ne!(a, d);
}

#[test]
fn bad_inputs() {
    let c = Ctmc::new(&ProcessSpec::sep(vec![2, 1])).unwrap();
    let mut rng = trajectory_rng(0, 0);
    assert!(c.simulate(&[3, 0], 1.0, &mut rng).is_err());
    assert!(c.simulate(&[-1, 0], 1.0, &mut rng).is_err());
    assert!(c.simulate(&[1, 0, 0], 1.0, &mut rng).is_err());
    assert!(c.simulate(&[1, 0], -1.0, &mut rng).is_err());
    assert!(c.simulate(&[1, 0], f64::NAN, &mut rng).is_err());
    assert!(Ctmc::new(&ProcessSpec::dif(2, rat(1, 1), 4)).is_err());
    assert!(Ctmc::new(&ProcessSpec::hyp(vec![rat(1, 2), rat(1, 2)], 1.0, 2)).is_err());
}

#[test]
fn empty_system_never_moves() {
    let c = Ctmc::new(&irw()).unwrap();
    let mut rng = trajectory_rng(0, 0);
    assert!(c.first_jump(&[0, 0], &mut rng).unwrap().is_none());
    assert_eq!(c.simulate(&[0, 0], 10.0, &mut rng).unwrap(), vec![0, 0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn particle_number_is_conserved(
        family in 0usize..3,
        a in 0i64..4, b in 0i64..4, c in 0i64..3,
        t in 0.0f64..3.0,
        seed in any::<u64>(),
    ) {
        let spec = match family {
            0 => ProcessSpec::irw(3, rat(1, 2), 12),
            1 => ProcessSpec::sip(vec![rat(1, 2), rat(1, 1), rat(2, 1)], 12),
            _ => ProcessSpec::sep(vec![3, 3, 2]),
        };
        let sim = Ctmc::new(&spec).unwrap();
        let tr = sim.trajectory(&[a, b, c], t, &mut trajectory_rng(seed, 0), seed).unwrap();
        prop_assert!(tr.times.windows(2).all(|w| w[0] <= w[1]));
        for s in &tr.states {
            let v = s.as_lattice().unwrap();
            prop_assert_eq!(v.iter().sum::<i64>(), a + b + c);
            prop_assert!(v.iter().all(|&x| x >= 0));
            if family == 2 {
                prop_assert!(v.iter().zip([3, 3, 2]).all(|(&x, cap)| x <= cap));
            }
        }
    }
}
