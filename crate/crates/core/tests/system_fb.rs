use fblab::eigen::{EigenNumerics, RootSearch};
use fblab::halfline::HalfLineNumerics;
use fblab::scenarios::{quartering, symmetric_problem};
use fblab::single_fb::{simulate_single, FrontNumerics, InitialProfile, Thresholds, Verdict};
use fblab::system_fb::{
    classify_quartering, compare_runs, simulate_system, Analysis, Quartering, Species, SystemInit,
};
use proptest::prelude::*;

fn coarse() -> FrontNumerics {
    FrontNumerics {
        ny: 100,
        steps_per_period: 400,
        snapshots: 20,
        ..FrontNumerics::default()
    }
}

fn bump(amplitude: f64) -> InitialProfile {
    InitialProfile::CosineBump { amplitude }
}

#[test]
fn decoupled_system_matches_single_species_runs() {
    let spec = symmetric_problem(0.0, 0.0, 0.7);
    let init = SystemInit {
        s1_0: 1.2,
        s2_0: 2.0,
        u0: bump(0.5),
        v0: InitialProfile::ConstantClipped { level: 0.8 },
    };
    let n = coarse();
    let sys = simulate_system(&spec, &init, 8, &n).unwrap();
    let one = simulate_single(1.0, 0.1, 0.7, &|_, _| 1.0, 1.0, 1.2, &init.u0, 8, &n).unwrap();
    let two = simulate_single(1.0, 0.1, 0.7, &|_, _| 1.0, 1.0, 2.0, &init.v0, 8, &n).unwrap();
    for ((s, a), b) in sys.samples.iter().zip(&one.samples).zip(&two.samples) {
        assert!(
            (s.s1 - a.h).abs() < 1e-12 && (s.s2 - b.h).abs() < 1e-12,
            "t = {}",
            s.t
        );
    }
}

#[test]
fn swapping_species_mirrors_the_run() {
    let mut spec = symmetric_problem(0.3, 0.1, 1.0);
    spec.mu2 = 0.4;
    let init = SystemInit {
        s1_0: 1.0,
        s2_0: 2.5,
        u0: bump(0.4),
        v0: bump(0.9),
    };
    let swapped_init = SystemInit {
        s1_0: init.s2_0,
        s2_0: init.s1_0,
        u0: init.v0.clone(),
        v0: init.u0.clone(),
    };
    let a = simulate_system(&spec, &init, 5, &coarse()).unwrap();
    let b = simulate_system(&spec.swapped(), &swapped_init, 5, &coarse()).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert!((x.s1 - y.s2).abs() < 1e-12 && (x.s2 - y.s1).abs() < 1e-12);
    }
}

#[test]
fn stalled_front_behind_competitor_decays() {
    // u starts small behind a wide established v; once s₁ ≤ s₂ and s₁ stalls,
    // the sup norm of u falls at every period boundary.
    let mut spec = symmetric_problem(0.2, 0.2, 1.0);
    spec.mu1 = 0.05;
    let init = SystemInit {
        s1_0: 0.6,
        s2_0: 3.0,
        u0: bump(0.5),
        v0: bump(0.5),
    };
    let traj = simulate_system(&spec, &init, 40, &coarse()).unwrap();
    let tail = &traj.samples[traj.samples.len() - 20 * 20..];
    assert!(tail.iter().all(|s| s.s1 <= s.s2));
    let last = traj.samples.len() - 1;
    let advance = traj.samples[last].s1 - traj.samples[last - 20].s1;
    assert!(advance < 1e-6);
    let sups: Vec<f64> = traj
        .snapshots
        .iter()
        .rev()
        .take(10)
        .rev()
        .map(|s| s.u.iter().copied().fold(0.0, f64::max))
        .collect();
    assert!(sups.windows(2).all(|w| w[1] < w[0]), "{sups:?}");
}

#[test]
fn larger_mu1_and_smaller_mu2_favour_u() {
    let base = symmetric_problem(0.2, 0.2, 1.0);
    let init = SystemInit {
        s1_0: 1.5,
        s2_0: 1.5,
        u0: bump(0.5),
        v0: bump(0.5),
    };
    let n = coarse();
    let eps = 1e-6 * n.ny as f64;
    for (a, b) in [
        ((1.0, 1.0), (0.5, 1.0)),
        ((1.0, 0.5), (1.0, 1.0)),
        ((2.0, 0.25), (0.5, 1.0)),
    ] {
        let run = |mu: (f64, f64)| {
            let mut s = base.clone();
            s.mu1 = mu.0;
            s.mu2 = mu.1;
            simulate_system(&s, &init, 10, &n).unwrap()
        };
        let (ta, tb) = (run(a), run(b));
        let r = compare_runs(&ta, &tb, eps).unwrap();
        assert!(r.samples_checked > 100 && r.snapshot_points_checked > 0);
        let same = compare_runs(&ta, &ta, 0.0).unwrap();
        assert!(same.worst_s1 <= 0.0 && same.worst_u <= 0.0);
    }
}

#[test]
fn quartering_scenarios_on_a_coarse_grid() {
    let cases = quartering();
    let a = Analysis::compute(
        &cases[0].spec,
        &HalfLineNumerics::default(),
        &RootSearch::default(),
        &EigenNumerics {
            nx: 200,
            nt: 100,
            ..EigenNumerics::default()
        },
    )
    .unwrap();
    for c in &cases {
        let traj = simulate_system(&c.spec, &c.init, 30, &coarse()).unwrap();
        let class = classify_quartering(&traj, &a.criticals, &Thresholds::default(), true);
        assert_eq!(class.verdict, c.expected, "{}", c.name);
        // Once a front passes its upper critical length the species is never
        // judged vanishing.
        let s1_star = a.criticals.s1_star_high.unwrap();
        if traj.samples.iter().any(|s| s.s1 > s1_star) {
            assert_ne!(class.u.verdict, Verdict::Vanishing, "{}", c.name);
        }
        assert!(traj.bound_violations(&c.spec, &c.init, 1e-10).is_empty());
        assert!(traj.speed_estimate(Species::U).is_ok());
    }
}

/// Critical lengths of the symmetric scenario problem (`k = h = 0.2`, `α = 0.1`).
fn constant_criticals() -> fblab::eigen::CriticalLengths {
    fblab::eigen::CriticalLengths {
        s1_star_low: Some(1.5227),
        s2_star_low: Some(1.5227),
        s1_star_high: Some(1.6963),
        s2_star_high: Some(1.6963),
        s1_double_star: Some(1.6632),
        s2_double_star: Some(1.6632),
        s1_tilde: Some(1.6568),
        s2_tilde: Some(1.6568),
        h_star: Some(1.5227),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn bounds_hold_for_random_data(
        s1 in 0.3f64..3.0, s2 in 0.3f64..3.0, mu1 in 0.05f64..2.0, mu2 in 0.05f64..2.0,
        amp_u in 0.1f64..1.5, amp_v in 0.1f64..1.5,
    ) {
        let mut spec = symmetric_problem(0.2, 0.2, 1.0);
        spec.mu1 = mu1;
        spec.mu2 = mu2;
        let init = SystemInit { s1_0: s1, s2_0: s2, u0: bump(amp_u), v0: bump(amp_v) };
        let traj = simulate_system(&spec, &init, 20, &coarse()).unwrap();
        let v = traj.bound_violations(&spec, &init, 1e-10);
        prop_assert!(v.is_empty(), "{:?}", v);
        // Every run lands in exactly one outcome, consistent with the per-species verdicts.
        let class = classify_quartering(&traj, &constant_criticals(), &Thresholds::default(), true);
        let expected = match (class.u.verdict, class.v.verdict) {
            (Verdict::Vanishing, Verdict::Vanishing) => Quartering::BothVanish,
            (Verdict::Spreading, Verdict::Vanishing) => Quartering::USpreadsVVanishes,
            (Verdict::Vanishing, Verdict::Spreading) => Quartering::UVanishesVSpreads,
            (Verdict::Spreading, Verdict::Spreading) => Quartering::BothSpread,
            _ => Quartering::Undetermined,
        };
        prop_assert_eq!(class.verdict, expected);
    }
}
