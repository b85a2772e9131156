//! The competition system with two free boundaries,
//!
//! ```text
//! u_t = d₁u_xx − α₁u_x + u(a − u − kv),  0 < x < s₁(t),  s₁' = −μ₁ u_x(s₁, t)
//! v_t = d₂v_xx − α₂v_x + v(b − v − hu),  0 < x < s₂(t),  s₂' = −μ₂ v_x(s₂, t)
//! ```
//!
//! with no-flux gradients at the origin. Each species lives on its own
//! front-fixed grid; the competitor enters through linear interpolation of its
//! previous time level, taken as zero beyond its front.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::ProblemSpec;
use crate::eigen::CriticalLengths;
use crate::eigen::{all_critical_lengths, EigenNumerics, RootSearch};
use crate::error::{FbError, Result};
use crate::halfline::{extremal_pair, q_profiles, ExtremalPair, HalfLineNumerics, QProfiles};
use crate::periodic_ode::{carrying_levels, CarryingLevels};
use crate::single_fb::{
    front_evidence, profile_step, substeps, threshold_search, verdict_from, BoundMonitor,
    FrontEvidence, FrontFixedState, FrontNumerics, InitialProfile, MuSearch, RunLog, RunRecord,
    StepWork, Thresholds, Verdict,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemInit {
    pub s1_0: f64,
    pub s2_0: f64,
    pub u0: InitialProfile,
    pub v0: InitialProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    U,
    V,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemState {
    pub u: FrontFixedState,
    pub v: FrontFixedState,
    pub t: f64,
}

impl SystemState {
    /// Front ratio `s₂/s₁`.
    pub fn eta(&self) -> f64 {
        self.v.h / self.u.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemSample {
    pub t: f64,
    pub s1: f64,
    pub s2: f64,
    pub sup_u: f64,
    pub sup_v: f64,
    pub ds1: f64,
    pub ds2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemSnapshot {
    pub t: f64,
    pub s1: f64,
    pub s2: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemTrajectory {
    pub period: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub horizon_periods: usize,
    pub ny: usize,
    pub dt: f64,
    pub samples: Vec<SystemSample>,
    pub snapshots: Vec<SystemSnapshot>,
    /// Sign changes of `s₁ − s₂` across samples.
    pub sign_changes: usize,
    pub bounds_u: BoundMonitor,
    pub bounds_v: BoundMonitor,
    pub final_state: SystemState,
}

impl SystemTrajectory {
    pub fn end(&self) -> &SystemSample {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn front_history(&self, species: Species) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .map(|s| (s.t, if species == Species::U { s.s1 } else { s.s2 }))
            .collect()
    }

    /// Violations of positivity, the sup-norm bounds `max(‖a‖∞, ‖u₀‖∞)` and
    /// `max(‖b‖∞, ‖v₀‖∞)`, and front monotonicity.
    pub fn bound_violations(&self, spec: &ProblemSpec, init: &SystemInit, eps: f64) -> Vec<String> {
        let mut out: Vec<String> = self
            .bounds_u
            .violations(spec.a.sup_norm().max(init.u0.sup()), eps)
            .into_iter()
            .map(|v| format!("u: {v}"))
            .collect();
        out.extend(
            self.bounds_v
                .violations(spec.b.sup_norm().max(init.v0.sup()), eps)
                .into_iter()
                .map(|v| format!("v: {v}")),
        );
        out
    }

    /// Fitted asymptotic speed of one front.
    pub fn speed_estimate(&self, species: Species) -> Result<(f64, f64)> {
        crate::single_fb::fit_slope(&self.front_history(species))
    }
}

pub fn simulate_system(
    spec: &ProblemSpec,
    init: &SystemInit,
    horizon: usize,
    numerics: &FrontNumerics,
) -> Result<SystemTrajectory> {
    spec.validate()?;
    let ny = numerics.ny;
    let mut state = SystemState {
        u: FrontFixedState::new(&init.u0, init.s1_0, ny)?,
        v: FrontFixedState::new(&init.v0, init.s2_0, ny)?,
        t: 0.0,
    };
    let period = spec.period;
    let steps = numerics.steps_per_period;
    let dt = period / steps as f64;
    let stride = (steps / numerics.samples_per_period.max(1)).max(1);
    let mut work_u = StepWork::new(ny);
    let mut work_v = StepWork::new(ny);
    let mut bounds_u = BoundMonitor::new(&state.u);
    let mut bounds_v = BoundMonitor::new(&state.v);
    state.u.dh = state.u.front_velocity(spec.mu1);
    state.v.dh = state.v.front_velocity(spec.mu2);
    let sample = |s: &SystemState| SystemSample {
        t: s.t,
        s1: s.u.h,
        s2: s.v.h,
        sup_u: s.u.sup(),
        sup_v: s.v.sup(),
        ds1: s.u.dh,
        ds2: s.v.dh,
    };
    let mut samples = vec![sample(&state)];
    let mut snapshots: std::collections::VecDeque<SystemSnapshot> = Default::default();
    let mut old_u = state.u.clone();
    let mut old_v = state.v.clone();

    for p in 0..horizon {
        for j in 0..steps {
            let t0 = (p * steps + j) as f64 * dt;
            let pieces = substeps(
                state.u.front_velocity(spec.mu1),
                state.u.h,
                dt,
                ny,
                numerics.cfl,
                numerics.max_halvings,
                t0,
            )?
            .max(substeps(
                state.v.front_velocity(spec.mu2),
                state.v.h,
                dt,
                ny,
                numerics.cfl,
                numerics.max_halvings,
                t0,
            )?);
            let sub = dt / pieces as f64;
            for q in 0..pieces {
                let t_next = t0 + (q + 1) as f64 * sub;
                old_u.clone_from(&state.u);
                old_v.clone_from(&state.v);

                let slope_u = old_u.front_slope();
                let slope_v = old_v.front_slope();
                bounds_u.record_gradient(slope_u, old_u.h);
                bounds_v.record_gradient(slope_v, old_v.h);
                let ds1 = -spec.mu1 / old_u.h * slope_u;
                let ds2 = -spec.mu2 / old_v.h * slope_v;

                let growth_u = |_: usize, x: f64| {
                    spec.a.eval(x, t_next) - spec.k.eval(x, t_next) * old_v.value_at(x)
                };
                profile_step(
                    &mut state.u,
                    spec.d1,
                    spec.alpha1,
                    sub,
                    old_u.h + sub * ds1,
                    ds1,
                    &growth_u,
                    &mut work_u,
                );
                let growth_v = |_: usize, x: f64| {
                    spec.b.eval(x, t_next) - spec.h.eval(x, t_next) * old_u.value_at(x)
                };
                profile_step(
                    &mut state.v,
                    spec.d2,
                    spec.alpha2,
                    sub,
                    old_v.h + sub * ds2,
                    ds2,
                    &growth_v,
                    &mut work_v,
                );

                bounds_u.record(&state.u, old_u.h);
                bounds_v.record(&state.v, old_v.h);
                let low = state.u.min().min(state.v.min());
                if low < -numerics.eps_num {
                    return Err(FbError::NegativeDensity {
                        t: t_next,
                        value: low,
                    });
                }
            }
            state.t = (p * steps + j + 1) as f64 * dt;
            if (j + 1) % stride == 0 {
                samples.push(sample(&state));
            }
        }
        if numerics.snapshots > 0 {
            snapshots.push_back(SystemSnapshot {
                t: state.t,
                s1: state.u.h,
                s2: state.v.h,
                u: state.u.u.clone(),
                v: state.v.u.clone(),
            });
            if snapshots.len() > numerics.snapshots {
                snapshots.pop_front();
            }
        }
    }
    let sign_changes = samples
        .windows(2)
        .filter(|w| (w[0].s1 - w[0].s2).signum() * (w[1].s1 - w[1].s2).signum() < 0.0)
        .count();
    Ok(SystemTrajectory {
        period,
        mu1: spec.mu1,
        mu2: spec.mu2,
        horizon_periods: horizon,
        ny,
        dt,
        samples,
        snapshots: snapshots.into(),
        sign_changes,
        bounds_u,
        bounds_v,
        final_state: state,
    })
}

/// Everything the classification and threshold rules need from the
/// stationary problems: carrying envelopes, extremal half-line profiles and
/// the critical lengths built on them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    #[serde(skip)]
    pub levels: CarryingLevels,
    #[serde(skip)]
    pub pair: ExtremalPair,
    #[serde(skip)]
    pub q: QProfiles,
    pub criticals: CriticalLengths,
}

impl Analysis {
    pub fn compute(
        spec: &ProblemSpec,
        halfline: &HalfLineNumerics,
        search: &RootSearch,
        eigen: &EigenNumerics,
    ) -> Result<Self> {
        let levels = carrying_levels(spec)?;
        let (pair, q) = rayon::join(
            || extremal_pair(spec, halfline),
            || q_profiles(spec, &levels, halfline),
        );
        let (pair, q) = (pair?, q?);
        let criticals = all_critical_lengths(spec, &levels, &pair, &q, search, eigen)?;
        Ok(Self {
            levels,
            pair,
            q,
            criticals,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quartering {
    BothVanish,
    USpreadsVVanishes,
    UVanishesVSpreads,
    BothSpread,
    Undetermined,
}

impl std::fmt::Display for Quartering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::BothVanish => "both_vanish",
            Self::USpreadsVVanishes => "u_spreads_v_vanishes",
            Self::UVanishesVSpreads => "u_vanishes_v_spreads",
            Self::BothSpread => "both_spread",
            Self::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeciesVerdict {
    pub verdict: Verdict,
    pub evidence: FrontEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Quartering,
    pub u: SpeciesVerdict,
    pub v: SpeciesVerdict,
    pub thresholds: Thresholds,
    /// Set when the weak-competition hypotheses fail; the verdict is then
    /// reported without any guarantee.
    pub outside_weak_competition: bool,
}

/// Shortest horizon the quartering rules accept.
pub const MIN_CLASSIFY_PERIODS: usize = 20;

/// Per-species verdicts against the upper critical lengths `s₁*`, `s₂*`.
///
/// When one species has vanished, the other is judged against its own
/// single-species length (`s_{1,*}` or `s_{2,*}`), which is the threshold that
/// applies once the competitor is gone.
pub fn classify_quartering(
    traj: &SystemTrajectory,
    criticals: &CriticalLengths,
    thresholds: &Thresholds,
    weak_competition: bool,
) -> Classification {
    let th = Thresholds {
        min_periods: thresholds.min_periods.max(MIN_CLASSIFY_PERIODS),
        ..*thresholds
    };
    let end = traj.end();
    let crit = |c: Option<f64>| c.unwrap_or(f64::INFINITY);
    let judge = |species: Species, critical: f64| {
        let sup = if species == Species::U {
            end.sup_u
        } else {
            end.sup_v
        };
        let evidence = front_evidence(&traj.front_history(species), sup, traj.period, critical);
        SpeciesVerdict {
            verdict: verdict_from(&evidence, &th),
            evidence,
        }
    };
    let mut u = judge(Species::U, crit(criticals.s1_star_high));
    let mut v = judge(Species::V, crit(criticals.s2_star_high));
    if v.verdict == Verdict::Vanishing && u.verdict == Verdict::Undetermined {
        u = judge(Species::U, crit(criticals.s1_star_low));
    }
    if u.verdict == Verdict::Vanishing && v.verdict == Verdict::Undetermined {
        v = judge(Species::V, crit(criticals.s2_star_low));
    }
    let verdict = match (u.verdict, v.verdict) {
        (Verdict::Vanishing, Verdict::Vanishing) => Quartering::BothVanish,
        (Verdict::Spreading, Verdict::Vanishing) => Quartering::USpreadsVVanishes,
        (Verdict::Vanishing, Verdict::Spreading) => Quartering::UVanishesVSpreads,
        (Verdict::Spreading, Verdict::Spreading) => Quartering::BothSpread,
        _ => Quartering::Undetermined,
    };
    Classification {
        verdict,
        u,
        v,
        thresholds: th,
        outside_weak_competition: !weak_competition,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    pub pass: bool,
    pub eps: f64,
    /// Largest `U₁ − u` and `u − U₂` seen (≤ eps when passing).
    pub u_below: f64,
    pub u_above: f64,
    pub v_below: f64,
    pub v_above: f64,
    pub points: usize,
}

/// Compare the last `periods` snapshots with the extremal profiles on `[0, window]`.
pub fn verify_longtime_sandwich(
    traj: &SystemTrajectory,
    pair: &ExtremalPair,
    window: f64,
    periods: usize,
    eps: f64,
) -> SandwichReport {
    let mut r = SandwichReport {
        pass: true,
        eps,
        u_below: f64::NEG_INFINITY,
        u_above: f64::NEG_INFINITY,
        v_below: f64::NEG_INFINITY,
        v_above: f64::NEG_INFINITY,
        points: 0,
    };
    let skip = traj.snapshots.len().saturating_sub(periods);
    for snap in &traj.snapshots[skip..] {
        let t = snap.t;
        let ny = snap.u.len() - 1;
        for i in 0..=ny {
            let y = i as f64 / ny as f64;
            let xu = snap.s1 * y;
            if xu <= window {
                r.u_below = r.u_below.max(pair.u1.eval(xu, t) - snap.u[i]);
                r.u_above = r.u_above.max(snap.u[i] - pair.u2.eval(xu, t));
                r.points += 1;
            }
            let xv = snap.s2 * y;
            if xv <= window {
                r.v_below = r.v_below.max(pair.v1.eval(xv, t) - snap.v[i]);
                r.v_above = r.v_above.max(snap.v[i] - pair.v2.eval(xv, t));
                r.points += 1;
            }
        }
    }
    r.pass = r.points > 0
        && [r.u_below, r.u_above, r.v_below, r.v_above]
            .iter()
            .all(|m| *m <= eps);
    r
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub quantity: String,
    pub lo: f64,
    pub hi: f64,
    pub log: Vec<(f64, Verdict)>,
    /// Every simulation behind the log, sorted by parameter then horizon.
    pub runs: Vec<RunRecord>,
    /// Bounds the bracket should respect, when known.
    pub theoretical_bounds: Option<(f64, f64)>,
}

/// Worst case for the searched species: competitor established at its carrying
/// level on a wide front, own front coefficient small.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Adversary {
    /// Competitor front as a multiple of its upper critical length.
    pub other_front_factor: f64,
    /// Front coefficient of the searched species.
    pub own_mu: f64,
    pub own_profile: InitialProfile,
}

impl Default for Adversary {
    fn default() -> Self {
        Self {
            other_front_factor: 4.0,
            own_mu: 1e-2,
            own_profile: InitialProfile::CosineBump { amplitude: 0.5 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HabitatSearch {
    /// Bracket ends as multiples of the lower theoretical bound `s_{i,**}` and
    /// the upper one `s_i*`.
    pub lo_factor: f64,
    pub hi_factor: f64,
    pub rel_width: f64,
    pub horizon: usize,
    pub max_horizon_factor: usize,
    pub interior: usize,
}

impl Default for HabitatSearch {
    fn default() -> Self {
        Self {
            lo_factor: 0.98,
            hi_factor: 1.02,
            rel_width: 0.01,
            horizon: 60,
            max_horizon_factor: 4,
            interior: 3,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn species_verdict(
    spec: &ProblemSpec,
    init: &SystemInit,
    species: Species,
    param: f64,
    horizon: usize,
    numerics: &FrontNumerics,
    criticals: &CriticalLengths,
    thresholds: &Thresholds,
    runs: &RunLog,
) -> Result<Verdict> {
    let traj = simulate_system(spec, init, horizon, numerics)?;
    let c = classify_quartering(&traj, criticals, thresholds, true);
    let (verdict, front) = match species {
        Species::U => (c.u.verdict, traj.end().s1),
        Species::V => (c.v.verdict, traj.end().s2),
    };
    runs.push(RunRecord {
        param,
        horizon,
        verdict,
        front,
        bound_violations: traj.bound_violations(spec, init, numerics.eps_num),
    });
    Ok(verdict)
}

/// Run `eval` at growing horizons until the verdict is decided or the cap is hit.
fn with_retries(
    horizon: usize,
    factor: usize,
    run: impl Fn(usize) -> Result<Verdict>,
) -> Result<Verdict> {
    let mut h = horizon;
    loop {
        let v = run(h)?;
        if v != Verdict::Undetermined || h >= horizon * factor {
            return Ok(v);
        }
        h *= 2;
    }
}

/// Bracket on the minimal initial habitat that guarantees spreading against an
/// established competitor.
#[allow(clippy::too_many_arguments)]
pub fn minimal_habitat(
    spec: &ProblemSpec,
    species: Species,
    adversary: &Adversary,
    search: &HabitatSearch,
    criticals: &CriticalLengths,
    carrying_other: f64,
    numerics: &FrontNumerics,
    thresholds: &Thresholds,
) -> Result<ThresholdResult> {
    let (lower, upper, other_upper) = match species {
        Species::U => (
            criticals.s1_double_star,
            criticals.s1_star_high,
            criticals.s2_star_high,
        ),
        Species::V => (
            criticals.s2_double_star,
            criticals.s2_star_high,
            criticals.s1_star_high,
        ),
    };
    let (lower, upper, other_upper) = match (lower, upper, other_upper) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => {
            return Err(FbError::Precondition(
                "minimal habitat search needs finite critical lengths for both species".into(),
            ))
        }
    };
    let mut run_spec = spec.clone();
    match species {
        Species::U => run_spec.mu1 = adversary.own_mu,
        Species::V => run_spec.mu2 = adversary.own_mu,
    }
    let other_front = adversary.other_front_factor * other_upper;
    let other_profile = InitialProfile::ConstantClipped {
        level: carrying_other,
    };
    let runs = RunLog::default();
    let eval = |s0: f64| -> Result<Verdict> {
        let init = match species {
            Species::U => SystemInit {
                s1_0: s0,
                s2_0: other_front,
                u0: adversary.own_profile.clone(),
                v0: other_profile.clone(),
            },
            Species::V => SystemInit {
                s1_0: other_front,
                s2_0: s0,
                u0: other_profile.clone(),
                v0: adversary.own_profile.clone(),
            },
        };
        with_retries(search.horizon, search.max_horizon_factor, |h| {
            species_verdict(
                &run_spec, &init, species, s0, h, numerics, criticals, thresholds, &runs,
            )
        })
    };
    let mut log = Vec::new();
    let (lo, hi) = threshold_search(
        &eval,
        search.lo_factor * lower,
        search.hi_factor * upper,
        search.rel_width,
        search.interior,
        0,
        &mut log,
    )?;
    Ok(ThresholdResult {
        quantity: match species {
            Species::U => "s1_min",
            Species::V => "s2_min",
        }
        .into(),
        lo,
        hi,
        log,
        runs: runs.into_sorted(),
        theoretical_bounds: Some((lower, upper)),
    })
}

/// Bracket on the front coefficient of one species that separates vanishing
/// from spreading, everything else fixed.
#[allow(clippy::too_many_arguments)]
pub fn mu_threshold(
    spec: &ProblemSpec,
    species: Species,
    init: &SystemInit,
    search: &MuSearch,
    criticals: &CriticalLengths,
    numerics: &FrontNumerics,
    thresholds: &Thresholds,
) -> Result<ThresholdResult> {
    let runs = RunLog::default();
    let eval = |mu: f64| -> Result<Verdict> {
        let mut s = spec.clone();
        match species {
            Species::U => s.mu1 = mu,
            Species::V => s.mu2 = mu,
        }
        with_retries(search.horizon, search.max_horizon_factor, |h| {
            species_verdict(
                &s, init, species, mu, h, numerics, criticals, thresholds, &runs,
            )
        })
    };
    let mut log = Vec::new();
    let (lo, hi) = threshold_search(
        &eval,
        search.lo,
        search.hi,
        search.rel_width,
        search.interior,
        search.max_expansions,
        &mut log,
    )?;
    Ok(ThresholdResult {
        quantity: match species {
            Species::U => "mu1_star_star",
            Species::V => "mu2_star_star",
        }
        .into(),
        lo,
        hi,
        log,
        runs: runs.into_sorted(),
        theoretical_bounds: None,
    })
}

/// Evaluate the verdict of `species` at each `mu` concurrently, in input order.
pub fn mu_sweep(
    spec: &ProblemSpec,
    species: Species,
    init: &SystemInit,
    mus: &[f64],
    horizon: usize,
    criticals: &CriticalLengths,
    numerics: &FrontNumerics,
    thresholds: &Thresholds,
) -> Result<Vec<(f64, Verdict)>> {
    mus.par_iter()
        .map(|&mu| {
            let mut s = spec.clone();
            match species {
                Species::U => s.mu1 = mu,
                Species::V => s.mu2 = mu,
            }
            species_verdict(
                &s,
                init,
                species,
                mu,
                horizon,
                numerics,
                criticals,
                thresholds,
                &RunLog::default(),
            )
            .map(|v| (mu, v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingReport {
    pub eps: f64,
    pub samples_checked: usize,
    pub snapshot_points_checked: usize,
    /// Largest `s₁ᵇ − s₁ᵃ` and `s₂ᵃ − s₂ᵇ` (≤ eps when ordered).
    pub worst_s1: f64,
    pub worst_s2: f64,
    pub worst_u: f64,
    pub worst_v: f64,
}

/// Check the ordering expected when run `a` has the larger `μ₁` and the smaller
/// `μ₂`: `s₁ᵃ ≥ s₁ᵇ`, `s₂ᵃ ≤ s₂ᵇ`, `uᵃ ≥ uᵇ`, `vᵃ ≤ vᵇ`, all up to `eps`.
pub fn compare_runs(
    a: &SystemTrajectory,
    b: &SystemTrajectory,
    eps: f64,
) -> Result<OrderingReport> {
    let mut r = OrderingReport {
        eps,
        samples_checked: 0,
        snapshot_points_checked: 0,
        worst_s1: f64::NEG_INFINITY,
        worst_s2: f64::NEG_INFINITY,
        worst_u: f64::NEG_INFINITY,
        worst_v: f64::NEG_INFINITY,
    };
    for (sa, sb) in a.samples.iter().zip(&b.samples) {
        if (sa.t - sb.t).abs() > 1e-9 * a.period {
            continue;
        }
        r.samples_checked += 1;
        let d1 = sb.s1 - sa.s1;
        let d2 = sa.s2 - sb.s2;
        r.worst_s1 = r.worst_s1.max(d1);
        r.worst_s2 = r.worst_s2.max(d2);
        if d1 > eps || d2 > eps {
            return Err(FbError::OrderingViolation(format!(
                "fronts out of order at t = {}: s1 {} vs {}, s2 {} vs {}",
                sa.t, sa.s1, sb.s1, sa.s2, sb.s2
            )));
        }
    }
    for (pa, pb) in a.snapshots.iter().zip(&b.snapshots) {
        if (pa.t - pb.t).abs() > 1e-9 * a.period {
            continue;
        }
        let ny = pb.u.len() - 1;
        let at = |vals: &[f64], front: f64, x: f64| {
            if x >= front {
                0.0
            } else {
                crate::linalg::interp_uniform(vals, 1.0, x / front)
            }
        };
        for i in 0..=ny {
            let y = i as f64 / ny as f64;
            let x = pb.s1.min(pa.s1) * y;
            let du = at(&pb.u, pb.s1, x) - at(&pa.u, pa.s1, x);
            let x = pb.s2.min(pa.s2) * y;
            let dv = at(&pa.v, pa.s2, x) - at(&pb.v, pb.s2, x);
            r.worst_u = r.worst_u.max(du);
            r.worst_v = r.worst_v.max(dv);
            r.snapshot_points_checked += 1;
            if du > eps || dv > eps {
                return Err(FbError::OrderingViolation(format!(
                    "profiles out of order at t = {}, y = {y}: u excess {du:.3e}, v excess {dv:.3e}",
                    pa.t
                )));
            }
        }
    }
    Ok(r)
}
