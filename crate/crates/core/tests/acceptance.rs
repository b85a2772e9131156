//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with its runtime
//! and the measured quantities; tests hold a shared lock so runtimes are not
//! distorted by each other.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fblab::coeffs::{check_hypotheses, CoefficientField, ProblemSpec, Spatial, Temporal, Term};
use fblab::eigen::{critical_length, principal_eigenvalue, EigenNumerics, GrowthFn, RootSearch};
use fblab::halfline::HalfLineNumerics;
use fblab::periodic_ode::periodic_logistic;
use fblab::scenarios::{quartering, symmetric_problem};
use fblab::semiwave::{semiwave_speed, verify_speed_sandwich, SemiWaveNumerics};
use fblab::single_fb::{
    classify_single, mu_star_single, simulate_single, FrontNumerics, InitialProfile, MuSearch,
    RunRecord, Thresholds, Verdict,
};
use fblab::system_fb::{
    classify_quartering, compare_runs, minimal_habitat, mu_threshold, simulate_system,
    verify_longtime_sandwich, Adversary, Analysis, HabitatSearch, Quartering, Species, SystemInit,
};
use fblab::FbError;

static SERIAL: Mutex<()> = Mutex::new(());

struct Check {
    name: &'static str,
    start: Instant,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            start: Instant::now(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn within(&mut self, budget: Duration) {
        let took = self.start.elapsed();
        self.expect(
            took <= budget,
            format!(
                "runtime {:.1} s (budget {} s)",
                took.as_secs_f64(),
                budget.as_secs()
            ),
        );
    }

    fn finish(self) {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "{status} {} ({:.1} s)",
            self.name,
            self.start.elapsed().as_secs_f64()
        );
        for n in &self.notes {
            println!("       ok: {n}");
        }
        for f in &self.failures {
            println!("   FAILED: {f}");
        }
        assert!(
            self.failures.is_empty(),
            "{} failed: {:?}",
            self.name,
            self.failures
        );
    }
}

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn violations_of(runs: &[RunRecord]) -> usize {
    runs.iter().map(|r| r.bound_violations.len()).sum()
}

#[test]
fn eigenvalue_analytic_oracle() {
    let _g = serial();
    let mut c = Check::new("eigenvalue analytic oracle");
    let g = |_: f64, _: f64| 1.0;
    let mut errs = Vec::new();
    for nx in [100, 200, 400] {
        let n = EigenNumerics {
            nx,
            ..EigenNumerics::default()
        };
        let t = Instant::now();
        let r = principal_eigenvalue(1.0, 0.0, &g, FRAC_PI_2, 1.0, &n).unwrap();
        let took = t.elapsed().as_secs_f64();
        c.expect(
            took < 1.0,
            format!("nx = {nx}: evaluation took {took:.3} s"),
        );
        errs.push(r.lambda1.abs());
    }
    c.expect(
        errs[2] < 1e-3,
        format!("|λ₁(π/2)| = {:.3e} at nx = 400", errs[2]),
    );
    let (r1, r2) = (errs[0] / errs[1], errs[1] / errs[2]);
    c.expect(
        r1 > 3.5 && r2 > 3.5,
        format!("refinement ratios {r1:.2}, {r2:.2} (second order ≈ 4)"),
    );
    let root = critical_length(
        1.0,
        0.0,
        &g,
        1.0,
        &RootSearch::default(),
        &EigenNumerics::default(),
    )
    .unwrap()
    .unwrap();
    c.expect(
        (root.length - FRAC_PI_2).abs() < 1e-3,
        format!("critical length {:.6} vs π/2 = {FRAC_PI_2:.6}", root.length),
    );
    c.finish();
}

#[test]
fn eigenvalue_advection_long_domain_limit() {
    let _g = serial();
    let mut c = Check::new("eigenvalue long-domain limit with advection");
    let r =
        principal_eigenvalue(1.0, 0.4, &|_, _| 1.0, 100.0, 1.0, &EigenNumerics::default()).unwrap();
    let target = 0.4 * 0.4 / 4.0 - 1.0;
    c.expect(
        (r.lambda1 - target).abs() <= 0.02,
        format!(
            "λ₁(d=1, α=0.4, γ=1, l=100) = {:.6}, required within 0.02 of {target}",
            r.lambda1
        ),
    );
    // Independent check of the computed value: dense elliptic solve.
    let dense = common::dense_elliptic_eigenvalue(1.0, 0.4, |_| 1.0, 100.0, 800);
    c.notes
        .push(format!("dense elliptic oracle gives {dense:.6}"));
    c.finish();
}

#[test]
fn eigenvalue_monotonicity() {
    let _g = serial();
    let mut c = Check::new("eigenvalue monotonicity in length and growth");
    let n = EigenNumerics::default();
    let g = |x: f64, t: f64| 1.0 + 0.5 * (-x).exp() + 0.4 * (2.0 * PI * t).cos();
    let mut violations = 0;
    let mut last = f64::INFINITY;
    for i in 0..10 {
        let l = 0.25 * 1.4f64.powi(i);
        let lam = principal_eigenvalue(1.0, 0.3, &g, l, 1.0, &n)
            .unwrap()
            .lambda1;
        if !lam.is_finite() || lam >= last {
            violations += 1;
        }
        last = lam;
    }
    c.expect(
        violations == 0,
        format!("{violations} violations across the 10-point length ladder"),
    );
    let mut violations = 0;
    let mut last = f64::INFINITY;
    for shift in [-0.5, -0.25, 0.0, 0.1, 0.2, 0.5, 1.0] {
        let lam = principal_eigenvalue(1.0, 0.3, &|x, t| g(x, t) + shift, 2.0, 1.0, &n)
            .unwrap()
            .lambda1;
        if !lam.is_finite() || lam >= last {
            violations += 1;
        }
        last = lam;
    }
    c.expect(
        violations == 0,
        format!("{violations} violations across constant growth shifts"),
    );
    c.finish();
}

#[test]
fn periodic_logistic_orbits() {
    let _g = serial();
    let mut c = Check::new("periodic logistic orbits");
    let o = periodic_logistic(|_| 0.7, 1.0).unwrap();
    let err = o
        .samples
        .iter()
        .map(|p| (p - 0.7).abs())
        .fold(0.0, f64::max);
    c.expect(err < 1e-10, format!("constant growth error {err:.2e}"));
    let mut worst = 0.0f64;
    let mut worst_mean = 0.0f64;
    for (mean, amp, period) in [(1.0, 0.5, 1.0), (0.3, 1.0, 2.0), (2.0, 1.5, 5.0)] {
        let g = move |t: f64| mean + amp * (2.0 * PI * t / period).cos();
        let o = periodic_logistic(g, period).unwrap();
        let reference = common::logistic_orbit_start(g, period, 10 * 1024);
        worst = worst.max((o.samples[0] - reference).abs());
        worst_mean = worst_mean.max((o.mean - mean).abs());
    }
    c.expect(
        worst < 1e-8,
        format!("max deviation from the 10× quadrature oracle {worst:.2e}"),
    );
    c.expect(
        worst_mean < 1e-6,
        format!("max |mean p − mean γ| = {worst_mean:.2e}"),
    );
    c.finish();
}

#[test]
fn semiwave_matches_shooting() {
    let _g = serial();
    let mut c = Check::new("semi-wave speed against shooting");
    let n = SemiWaveNumerics::default();
    for gamma in [0.5, 1.0] {
        for mu in [0.5, 1.0, 2.0] {
            let r = semiwave_speed(1.0, mu, &|_| gamma, 1.0, &n).unwrap();
            let reference = common::shooting_speed(1.0, gamma, mu);
            let kpp = 2.0 * gamma.sqrt();
            c.expect(
                (r.mean_k0 - reference).abs() < 1e-3 && r.mean_k0 < kpp,
                format!(
                    "γ = {gamma}, μ = {mu}: k₀ = {:.6}, shooting {reference:.6}, 2√(dγ) = {kpp:.4}",
                    r.mean_k0
                ),
            );
        }
    }
    c.within(Duration::from_secs(30));
    c.finish();
}

#[test]
fn single_species_dichotomy() {
    let _g = serial();
    let mut c = Check::new("single-species spreading-vanishing dichotomy");
    let numerics = FrontNumerics {
        ny: 200,
        steps_per_period: 1000,
        ..FrontNumerics::default()
    };
    let u0 = InitialProfile::CosineBump { amplitude: 0.5 };
    let b = mu_star_single(
        1.0,
        0.0,
        &|_, _| 1.0,
        1.0,
        1.0,
        &u0,
        FRAC_PI_2,
        &MuSearch::default(),
        &numerics,
        &Thresholds::default(),
    )
    .unwrap();
    let width = (b.hi - b.lo) / b.hi;
    c.expect(
        width < 0.05,
        format!(
            "bracket [{:.5}, {:.5}], relative width {width:.4}",
            b.lo, b.hi
        ),
    );
    let misordered = b
        .log
        .iter()
        .filter(|(mu, v)| {
            (*mu <= b.lo && *v == Verdict::Spreading) || (*mu >= b.hi && *v == Verdict::Vanishing)
        })
        .count();
    c.expect(
        misordered == 0,
        format!(
            "{misordered} verdicts on the wrong side among {} evaluations",
            b.log.len()
        ),
    );
    let vanishing: Vec<&RunRecord> = b
        .runs
        .iter()
        .filter(|r| r.verdict == Verdict::Vanishing)
        .collect();
    let worst = vanishing.iter().map(|r| r.front).fold(0.0, f64::max);
    c.expect(
        !vanishing.is_empty() && worst <= FRAC_PI_2 * 1.02,
        format!(
            "{} vanishing runs, largest final front {worst:.5} (limit {:.5})",
            vanishing.len(),
            FRAC_PI_2 * 1.02
        ),
    );
    c.expect(
        violations_of(&b.runs) == 0,
        format!(
            "bound violations in {} runs: {}",
            b.runs.len(),
            violations_of(&b.runs)
        ),
    );
    c.within(Duration::from_secs(180));
    c.finish();
}

fn cosine_field(mean: f64, amp: f64) -> CoefficientField {
    CoefficientField::new(
        vec![Term {
            spatial: Spatial::Constant { value: 1.0 },
            temporal: Temporal::Cosine {
                mean,
                amplitude: amp,
                phase: 0.0,
            },
        }],
        1.0,
    )
    .unwrap()
}

#[test]
fn single_species_speed_sandwich() {
    let _g = serial();
    let mut c = Check::new("single-species spreading speed sandwich");
    let numerics = FrontNumerics {
        ny: 800,
        steps_per_period: 1000,
        ..FrontNumerics::default()
    };
    let sw = SemiWaveNumerics::default();
    let periodic = cosine_field(1.0, 0.5);
    type FarField = Box<dyn Fn(f64) -> f64 + Sync>;
    let cases: [(&str, f64, Box<GrowthFn>, FarField); 3] = [
        ("constant γ", 0.0, Box::new(|_, _| 1.0), Box::new(|_| 1.0)),
        (
            "constant γ, α = 0.3",
            0.3,
            Box::new(|_, _| 1.0),
            Box::new(|_| 1.0),
        ),
        (
            "time-periodic γ",
            0.0,
            Box::new(move |x, t| periodic.eval(x, t)),
            Box::new(|t| 1.0 + 0.5 * (2.0 * PI * t).cos()),
        ),
    ];
    for (name, alpha, gamma, far) in &cases {
        let traj = simulate_single(
            1.0,
            *alpha,
            1.0,
            gamma.as_ref(),
            1.0,
            2.0,
            &InitialProfile::CosineBump { amplitude: 0.5 },
            100,
            &numerics,
        )
        .unwrap();
        let k0 = semiwave_speed(1.0, 1.0, far.as_ref(), 1.0, &sw)
            .unwrap()
            .mean_k0;
        let class = classify_single(&traj, FRAC_PI_2, &Thresholds::default());
        let r = verify_speed_sandwich(&traj, (k0, k0 + alpha), 0.05).unwrap();
        c.expect(
            class.verdict == Verdict::Spreading && r.pass,
            format!(
                "{name}: ŝ = {:.5} in [{:.5}, {:.5}] ± 5% ({})",
                r.speed, r.c_low, r.c_high, class.verdict
            ),
        );
        // sup γ ≤ 1.5 in every case and the initial bump is below it.
        let v = traj.bounds.violations(1.5, numerics.eps_num);
        c.expect(v.is_empty(), format!("{name}: bound violations {v:?}"));
    }
    c.within(Duration::from_secs(300));
    c.finish();
}

#[test]
fn comparison_in_front_coefficients() {
    let _g = serial();
    let mut c = Check::new("comparison in front coefficients");
    let base = symmetric_problem(0.2, 0.2, 1.0);
    let numerics = FrontNumerics::default();
    let eps = 1e-6 * numerics.ny as f64;
    let init = SystemInit {
        s1_0: 1.5,
        s2_0: 1.5,
        u0: InitialProfile::CosineBump { amplitude: 0.5 },
        v0: InitialProfile::CosineBump { amplitude: 0.5 },
    };
    for (a, b) in [
        ((1.0, 1.0), (0.5, 1.0)),
        ((1.0, 0.5), (1.0, 1.0)),
        ((2.0, 0.25), (0.5, 1.0)),
    ] {
        let run = |mu: (f64, f64)| {
            let s = ProblemSpec {
                mu1: mu.0,
                mu2: mu.1,
                ..base.clone()
            };
            simulate_system(&s, &init, 20, &numerics).unwrap()
        };
        let (ta, tb) = (run(a), run(b));
        match compare_runs(&ta, &tb, eps) {
            Ok(r) => c.expect(
                true,
                format!(
                    "(μ₁, μ₂) = {a:?} vs {b:?}: ordered, worst excess s₁ {:.1e}, s₂ {:.1e}, u {:.1e}, v {:.1e}",
                    r.worst_s1, r.worst_s2, r.worst_u, r.worst_v
                ),
            ),
            Err(e) => c.expect(false, format!("{a:?} vs {b:?}: {e}")),
        }
        for (t, s) in [(&ta, &base), (&tb, &base)] {
            let v = t.bound_violations(s, &init, numerics.eps_num);
            c.expect(v.is_empty(), format!("bound violations {v:?}"));
        }
    }
    c.finish();
}

fn scenario_analysis(spec: &ProblemSpec) -> Analysis {
    Analysis::compute(
        spec,
        &HalfLineNumerics::default(),
        &RootSearch::default(),
        &EigenNumerics::default(),
    )
    .unwrap()
}

#[test]
fn quartering_witnesses() {
    let _g = serial();
    let mut c = Check::new("four long-time outcomes witnessed");
    let cases = quartering();
    let hyp = check_hypotheses(&cases[0].spec).unwrap();
    c.expect(
        hyp.pass(),
        "weak-competition hypotheses hold for the scenario problem",
    );
    let a = scenario_analysis(&cases[0].spec);
    let numerics = FrontNumerics::default();
    for case in &cases {
        let traj = simulate_system(&case.spec, &case.init, 40, &numerics).unwrap();
        let class = classify_quartering(&traj, &a.criticals, &Thresholds::default(), hyp.pass());
        c.expect(
            class.verdict == case.expected,
            format!("{}: {}", case.name, class.verdict),
        );
        let v = traj.bound_violations(&case.spec, &case.init, numerics.eps_num);
        c.expect(
            v.is_empty(),
            format!("{}: bound violations {v:?}", case.name),
        );
        if case.expected == Quartering::BothSpread {
            let fin = &traj.final_state;
            let diff = fin
                .u
                .u
                .iter()
                .zip(&fin.v.u)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            c.expect(
                diff <= 1e-8 && (fin.u.h - fin.v.h).abs() <= 1e-8,
                format!(
                    "symmetric run: |u − v| = {diff:.1e}, |s₁ − s₂| = {:.1e}",
                    (fin.u.h - fin.v.h).abs()
                ),
            );
        }
    }
    c.within(Duration::from_secs(600));
    c.finish();
}

#[test]
fn longtime_sandwich() {
    let _g = serial();
    let mut c = Check::new("long-time sandwich by extremal profiles");
    let case = quartering()
        .into_iter()
        .find(|s| s.expected == Quartering::BothSpread)
        .unwrap();
    let a = scenario_analysis(&case.spec);
    let traj = simulate_system(&case.spec, &case.init, 40, &FrontNumerics::default()).unwrap();
    let coexist = 0.8 / 0.96;
    let mut dev = 0.0f64;
    for snap in &traj.snapshots[traj.snapshots.len() - 5..] {
        let ny = snap.u.len() - 1;
        for i in 0..=ny {
            let y = i as f64 / ny as f64;
            if snap.s1 * y <= 5.0 {
                dev = dev.max((snap.u[i] - coexist).abs());
            }
            if snap.s2 * y <= 5.0 {
                dev = dev.max((snap.v[i] - coexist).abs());
            }
        }
    }
    c.expect(
        dev <= 0.02,
        format!("max |u − 0.8/0.96|, |v − 0.8/0.96| on [0, 5]: {dev:.2e}"),
    );
    let r = verify_longtime_sandwich(&traj, &a.pair, 5.0, 5, 0.02);
    c.expect(
        r.pass,
        format!(
            "inside [U₁, U₂], [V₁, V₂] with ε = 0.02: worst below {:.1e}, above {:.1e} ({} points)",
            r.u_below.max(r.v_below),
            r.u_above.max(r.v_above),
            r.points
        ),
    );
    c.finish();
}

#[test]
fn minimal_habitat_bounds() {
    let _g = serial();
    let mut c = Check::new("minimal habitat between its eigenvalue bounds");
    let spec = symmetric_problem(0.2, 0.2, 1.0);
    let a = scenario_analysis(&spec);
    let numerics = FrontNumerics {
        ny: 200,
        steps_per_period: 1000,
        ..FrontNumerics::default()
    };
    let th = Thresholds {
        spread_margin: 0.05,
        ..Thresholds::default()
    };
    let r = minimal_habitat(
        &spec,
        Species::U,
        &Adversary::default(),
        &HabitatSearch::default(),
        &a.criticals,
        a.levels.v_upper.max(),
        &numerics,
        &th,
    )
    .unwrap();
    let (lower, upper) = r.theoretical_bounds.unwrap();
    c.expect(
        r.lo >= 0.98 * lower && r.hi <= 1.02 * upper,
        format!(
            "bracket [{:.5}, {:.5}] inside [{:.5}, {:.5}] padded by 2%",
            r.lo, r.hi, lower, upper
        ),
    );
    c.expect(
        violations_of(&r.runs) == 0,
        format!(
            "bound violations in {} runs: {}",
            r.runs.len(),
            violations_of(&r.runs)
        ),
    );

    let decoupled = scenario_analysis(&symmetric_problem(0.0, 0.0, 1.0)).criticals;
    let lens = [
        decoupled.s1_double_star,
        decoupled.s1_star_low,
        decoupled.s1_star_high,
    ]
    .map(Option::unwrap);
    let spread = lens.iter().fold(f64::NEG_INFINITY, |m: f64, x| m.max(*x))
        - lens.iter().fold(f64::INFINITY, |m: f64, x| m.min(*x));
    c.expect(
        spread < 1e-3,
        format!("decoupled lengths {lens:?}, spread {spread:.1e}"),
    );
    c.within(Duration::from_secs(900));
    c.finish();
}

#[test]
fn mu_threshold_scenarios() {
    let _g = serial();
    let mut c = Check::new("front-coefficient thresholds");
    let mut spec = symmetric_problem(0.2, 0.2, 1.0);
    spec.mu2 = 0.05;
    let a = scenario_analysis(&spec);
    let numerics = FrontNumerics {
        ny: 200,
        steps_per_period: 1000,
        ..FrontNumerics::default()
    };
    let th = Thresholds {
        spread_margin: 0.05,
        ..Thresholds::default()
    };
    let bump = InitialProfile::CosineBump { amplitude: 0.5 };
    let s_low = a.criticals.s1_star_low.unwrap();

    // Small habitat: a positive threshold.
    let init = SystemInit {
        s1_0: 1.0,
        s2_0: 0.5,
        u0: bump.clone(),
        v0: bump.clone(),
    };
    c.expect(
        init.s1_0 < s_low,
        format!("first scenario starts below s₁,* = {s_low:.5}"),
    );
    match mu_threshold(
        &spec,
        Species::U,
        &init,
        &MuSearch::default(),
        &a.criticals,
        &numerics,
        &th,
    ) {
        Ok(r) => {
            let misordered = r
                .log
                .iter()
                .filter(|(mu, v)| {
                    (*mu <= r.lo && *v == Verdict::Spreading)
                        || (*mu >= r.hi && *v == Verdict::Vanishing)
                })
                .count();
            c.expect(
                r.lo > 0.0 && r.hi.is_finite() && misordered == 0,
                format!(
                    "bracket [{:.5}, {:.5}], {misordered} misordered verdicts",
                    r.lo, r.hi
                ),
            );
            c.expect(
                violations_of(&r.runs) == 0,
                format!("bound violations: {}", violations_of(&r.runs)),
            );
        }
        Err(e) => c.expect(false, format!("first scenario: {e}")),
    }

    // Habitat above the single-species length, competitor vanishing: no threshold.
    let init = SystemInit {
        s1_0: 1.6,
        s2_0: 0.5,
        u0: bump.clone(),
        v0: bump,
    };
    c.expect(
        init.s1_0 >= s_low,
        "second scenario starts at or above s₁,*",
    );
    let search = MuSearch {
        lo: 1e-3,
        hi: 1.0,
        max_expansions: 0,
        ..MuSearch::default()
    };
    let th_b = Thresholds {
        delta_advance: 1e-4,
        ..th
    };
    match mu_threshold(
        &spec,
        Species::U,
        &init,
        &search,
        &a.criticals,
        &numerics,
        &th_b,
    ) {
        Err(FbError::NoTransition {
            verdict,
            evaluations,
        }) => c.expect(
            evaluations
                .iter()
                .all(|(mu, v)| *mu >= 1e-3 && v == "spreading"),
            format!(
                "no transition ({verdict}) across μ₁ = {:?}",
                evaluations.iter().map(|e| e.0).collect::<Vec<_>>()
            ),
        ),
        Ok(r) => c.expect(false, format!("unexpected bracket [{}, {}]", r.lo, r.hi)),
        Err(e) => c.expect(false, format!("second scenario: {e}")),
    }
    c.within(Duration::from_secs(600));
    c.finish();
}

#[test]
fn bound_invariants() {
    let _g = serial();
    let mut c = Check::new("a priori bounds on positivity, sup norm and fronts");
    let numerics = FrontNumerics::default();
    let mut runs = 0;
    let mut total = Vec::new();
    for case in quartering() {
        let traj = simulate_system(&case.spec, &case.init, 20, &numerics).unwrap();
        total.extend(traj.bound_violations(&case.spec, &case.init, numerics.eps_num));
        runs += 1;
    }
    // Heterogeneous, time-periodic competition with large initial data.
    let a = CoefficientField::new(
        vec![Term {
            spatial: Spatial::ExpApproach {
                limit: 1.0,
                amplitude: 0.3,
                rate: 0.5,
            },
            temporal: Temporal::Cosine {
                mean: 1.0,
                amplitude: 0.3,
                phase: 0.0,
            },
        }],
        1.0,
    )
    .unwrap();
    let spec = ProblemSpec {
        d1: 1.0,
        d2: 1.2,
        alpha1: 0.2,
        alpha2: 0.1,
        mu1: 1.0,
        mu2: 0.8,
        period: 1.0,
        a,
        b: cosine_field(0.9, 0.2),
        k: CoefficientField::constant(0.2, 1.0).unwrap(),
        h: CoefficientField::constant(0.25, 1.0).unwrap(),
    };
    for (amp, level) in [(2.0, 0.3), (0.2, 1.8)] {
        let init = SystemInit {
            s1_0: 2.5,
            s2_0: 1.5,
            u0: InitialProfile::CosineBump { amplitude: amp },
            v0: InitialProfile::ConstantClipped { level },
        };
        let traj = simulate_system(&spec, &init, 20, &numerics).unwrap();
        total.extend(traj.bound_violations(&spec, &init, numerics.eps_num));
        runs += 1;
    }
    for mu in [0.05, 1.0, 4.0] {
        let traj = simulate_single(
            1.0,
            0.3,
            mu,
            &|_, _| 1.0,
            1.0,
            1.0,
            &InitialProfile::CosineBump { amplitude: 1.5 },
            20,
            &numerics,
        )
        .unwrap();
        total.extend(traj.bounds.violations(1.5, numerics.eps_num));
        runs += 1;
    }
    c.expect(
        total.is_empty(),
        format!("{} violations over {runs} runs {total:?}", total.len()),
    );
    c.finish();
}
