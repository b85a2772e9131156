//! One species with a Stefan front,
//!
//! ```text
//! u_t = d u_xx − α u_x + u(γ(x,t) − u),   0 < x < h(t),
//! u_x(0,t) = 0,   u(h(t),t) = 0,   h'(t) = −μ u_x(h(t),t),
//! ```
//!
//! solved in the front-fixed coordinate `y = x/h(t)`, where
//! `u_t = (d/h²) u_yy + (h'y − α)/h · u_y + u(γ(hy,t) − u)` on `[0,1]`.
//! Each step updates the front explicitly from the current profile and then
//! takes one linearly implicit step of the profile on the new domain.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::GrowthFn;
use crate::error::{FbError, Result};
use crate::linalg::Tridiag;

/// Initial profile on `[0, s0]`; each kind has zero slope at 0 and vanishes at `s0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialProfile {
    /// `A·cos(πx/(2 s0))`.
    CosineBump { amplitude: f64 },
    /// `level·(1 − (x/s0)^8)`.
    ConstantClipped { level: f64 },
    /// Values on a uniform grid over `[0, s0]`; the last one must be 0.
    Samples { values: Vec<f64> },
}

impl InitialProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::CosineBump { amplitude } if !(*amplitude > 0.0 && amplitude.is_finite()) => {
                Err(FbError::Precondition(format!(
                    "cosine_bump amplitude must be positive, got {amplitude}"
                )))
            }
            Self::ConstantClipped { level } if !(*level > 0.0 && level.is_finite()) => {
                Err(FbError::Precondition(format!(
                    "constant_clipped level must be positive, got {level}"
                )))
            }
            Self::Samples { values } => {
                if values.len() < 3 {
                    return Err(FbError::Precondition(
                        "sampled profile needs at least 3 values".into(),
                    ));
                }
                if *values.last().unwrap() != 0.0 {
                    return Err(FbError::Precondition(
                        "sampled profile must vanish at the front".into(),
                    ));
                }
                if let Some(i) = values[..values.len() - 1]
                    .iter()
                    .position(|v| !(*v > 0.0 && v.is_finite()))
                {
                    return Err(FbError::Precondition(format!(
                        "sampled profile must be positive inside, value {i} is not"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Value at `x` for a front at `s0`.
    pub fn eval(&self, x: f64, s0: f64) -> f64 {
        if x >= s0 {
            return 0.0;
        }
        let z = (x / s0).max(0.0);
        match self {
            Self::CosineBump { amplitude } => amplitude * (std::f64::consts::FRAC_PI_2 * z).cos(),
            Self::ConstantClipped { level } => level * (1.0 - z.powi(8)),
            Self::Samples { values } => crate::linalg::interp_uniform(values, 1.0, z),
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            Self::CosineBump { amplitude } => *amplitude,
            Self::ConstantClipped { level } => *level,
            Self::Samples { values } => values.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrontNumerics {
    /// Intervals on `[0,1]`.
    pub ny: usize,
    pub steps_per_period: usize,
    pub samples_per_period: usize,
    /// Period-boundary snapshots kept at the end of a run.
    pub snapshots: usize,
    /// Largest allowed `|h'|Δt/(hΔy)`.
    pub cfl: f64,
    pub max_halvings: u32,
    /// Slack for positivity and ordering checks.
    pub eps_num: f64,
}

impl Default for FrontNumerics {
    fn default() -> Self {
        Self {
            ny: 400,
            steps_per_period: 2000,
            samples_per_period: 20,
            snapshots: 10,
            cfl: 0.5,
            max_halvings: 10,
            eps_num: 1e-10,
        }
    }
}

/// Profile on the front-fixed grid `y_i = i/ny`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontFixedState {
    pub u: Vec<f64>,
    pub h: f64,
    pub t: f64,
    pub dh: f64,
}

impl FrontFixedState {
    pub fn new(profile: &InitialProfile, h0: f64, ny: usize) -> Result<Self> {
        profile.validate()?;
        if !(h0 > 0.0 && h0.is_finite()) {
            return Err(FbError::Precondition(format!(
                "initial front must be positive, got {h0}"
            )));
        }
        let mut u: Vec<f64> = (0..=ny)
            .map(|i| profile.eval(h0 * i as f64 / ny as f64, h0))
            .collect();
        u[ny] = 0.0;
        Ok(Self {
            u,
            h: h0,
            t: 0.0,
            dh: 0.0,
        })
    }

    pub fn ny(&self) -> usize {
        self.u.len() - 1
    }

    pub fn sup(&self) -> f64 {
        self.u.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.u.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Second-order one-sided `u_y` at the front.
    pub fn front_slope(&self) -> f64 {
        let n = self.ny();
        let dy = 1.0 / n as f64;
        (3.0 * self.u[n] - 4.0 * self.u[n - 1] + self.u[n - 2]) / (2.0 * dy)
    }

    /// Front velocity `−(μ/h) u_y(1)`.
    pub fn front_velocity(&self, mu: f64) -> f64 {
        -mu / self.h * self.front_slope()
    }

    /// Linear interpolation in physical position, zero beyond the front.
    pub fn value_at(&self, x: f64) -> f64 {
        if x >= self.h {
            return 0.0;
        }
        crate::linalg::interp_uniform(&self.u, 1.0, x / self.h)
    }

    /// `∫₀^h u dx` by the trapezoid rule.
    pub fn mass(&self) -> f64 {
        let n = self.ny();
        let inner: f64 = self.u[1..n].iter().sum();
        self.h / n as f64 * (inner + 0.5 * (self.u[0] + self.u[n]))
    }
}

/// Reusable buffers for the implicit profile step.
pub(crate) struct StepWork {
    matrix: Tridiag,
    rhs: Vec<f64>,
}

impl StepWork {
    pub(crate) fn new(ny: usize) -> Self {
        Self {
            matrix: Tridiag::zeros(ny),
            rhs: vec![0.0; ny],
        }
    }
}

/// Implicit profile update on `[0, h_new]` over `dt`.
///
/// `growth(i, x)` is the reaction coefficient at node `i`, position `x`, at the new
/// time level; the density itself enters linearly implicitly as `u^{n+1}(growth − u^n)`.
pub(crate) fn profile_step(
    state: &mut FrontFixedState,
    d: f64,
    alpha: f64,
    dt: f64,
    h_new: f64,
    dh: f64,
    growth: &dyn Fn(usize, f64) -> f64,
    work: &mut StepWork,
) {
    let n = state.ny();
    let dy = 1.0 / n as f64;
    let diff = d * dt / (h_new * h_new * dy * dy);
    let m = &mut work.matrix;
    for i in 0..n {
        let y = i as f64 * dy;
        let drift = (dh * y - alpha) / h_new;
        let adv = drift * dt / (2.0 * dy);
        m.sub[i] = -(diff - adv);
        m.sup[i] = -(diff + adv);
        m.diag[i] = 1.0 + 2.0 * diff - dt * (growth(i, h_new * y) - state.u[i]);
        work.rhs[i] = state.u[i];
    }
    // Mirror node at the origin; the drift term vanishes with u_y(0) = 0.
    m.sup[0] = -2.0 * diff;
    m.factor().solve_in_place(&mut work.rhs);
    state.u[..n].copy_from_slice(&work.rhs);
    state.u[n] = 0.0;
    state.h = h_new;
    state.dh = dh;
}

/// Number of equal substeps needed so the front monitor stays below `cfl`.
pub(crate) fn substeps(
    dh: f64,
    h: f64,
    dt: f64,
    ny: usize,
    cfl: f64,
    max_halvings: u32,
    t: f64,
) -> Result<u32> {
    let dy = 1.0 / ny as f64;
    let monitor = |k: u32| dh.abs() * dt / (2f64.powi(k as i32) * h * dy);
    for k in 0..=max_halvings {
        if monitor(k) <= cfl {
            return Ok(1 << k);
        }
    }
    Err(FbError::StepSizeFailure {
        t,
        monitor: monitor(max_halvings),
        halvings: max_halvings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub h: f64,
    pub sup_u: f64,
    pub dh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub h: f64,
    pub u: Vec<f64>,
}

/// Running extremes checked against the a priori bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundMonitor {
    pub min_density: f64,
    pub max_sup: f64,
    /// Largest single-step decrease of the front (0 when monotone).
    pub max_front_decrease: f64,
    /// Largest `|u_y(1)|/h` seen, the discrete front-gradient bound.
    pub max_front_gradient: f64,
    pub max_front_velocity: f64,
    pub min_front_velocity: f64,
}

impl BoundMonitor {
    pub(crate) fn new(state: &FrontFixedState) -> Self {
        Self {
            min_density: state.min(),
            max_sup: state.sup(),
            max_front_decrease: 0.0,
            max_front_gradient: 0.0,
            max_front_velocity: f64::NEG_INFINITY,
            min_front_velocity: f64::INFINITY,
        }
    }

    pub(crate) fn record(&mut self, state: &FrontFixedState, h_old: f64) {
        self.min_density = self.min_density.min(state.min());
        self.max_sup = self.max_sup.max(state.sup());
        self.max_front_decrease = self.max_front_decrease.max(h_old - state.h);
        self.max_front_velocity = self.max_front_velocity.max(state.dh);
        self.min_front_velocity = self.min_front_velocity.min(state.dh);
    }

    pub(crate) fn record_gradient(&mut self, slope: f64, h: f64) {
        self.max_front_gradient = self.max_front_gradient.max(slope.abs() / h);
    }

    /// Violations of positivity, the sup bound `c1` and front monotonicity.
    pub fn violations(&self, c1: f64, eps: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.min_density < -eps {
            out.push(format!("negative density {:.3e}", self.min_density));
        }
        if self.max_sup > c1 + eps {
            out.push(format!(
                "sup norm {:.12} exceeds bound {:.12}",
                self.max_sup, c1
            ));
        }
        if self.max_front_decrease > eps {
            out.push(format!("front receded by {:.3e}", self.max_front_decrease));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub period: f64,
    pub mu: f64,
    pub horizon_periods: usize,
    pub ny: usize,
    pub dt: f64,
    pub samples: Vec<TrajectorySample>,
    /// Profiles at the last period boundaries, oldest first.
    pub snapshots: Vec<Snapshot>,
    pub bounds: BoundMonitor,
    pub final_state: FrontFixedState,
}

impl Trajectory {
    pub fn end(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory has samples")
    }

    /// Front at time `t`, interpolated between samples.
    pub fn front_at(&self, t: f64) -> f64 {
        let s = &self.samples;
        match s.iter().position(|p| p.t >= t) {
            Some(0) => s[0].h,
            Some(i) => {
                let (a, b) = (&s[i - 1], &s[i]);
                a.h + (b.h - a.h) * (t - a.t) / (b.t - a.t)
            }
            None => s.last().unwrap().h,
        }
    }

    pub fn periods_covered(&self) -> f64 {
        self.end().t / self.period
    }
}

/// Simulate for `horizon` periods.
#[allow(clippy::too_many_arguments)]
pub fn simulate_single(
    d: f64,
    alpha: f64,
    mu: f64,
    gamma: &GrowthFn,
    period: f64,
    h0: f64,
    u0: &InitialProfile,
    horizon: usize,
    numerics: &FrontNumerics,
) -> Result<Trajectory> {
    if !(d > 0.0 && mu > 0.0 && alpha >= 0.0 && period > 0.0) {
        return Err(FbError::Precondition(format!(
            "need d > 0, μ > 0, α ≥ 0, T > 0 (got d = {d}, μ = {mu}, α = {alpha}, T = {period})"
        )));
    }
    let ny = numerics.ny;
    let mut state = FrontFixedState::new(u0, h0, ny)?;
    let steps = numerics.steps_per_period;
    let dt = period / steps as f64;
    let stride = (steps / numerics.samples_per_period.max(1)).max(1);
    let mut work = StepWork::new(ny);
    let mut bounds = BoundMonitor::new(&state);
    state.dh = state.front_velocity(mu);
    let mut samples = vec![TrajectorySample {
        t: 0.0,
        h: state.h,
        sup_u: state.sup(),
        dh: state.dh,
    }];
    let mut snapshots = VecDeque::with_capacity(numerics.snapshots + 1);

    for p in 0..horizon {
        for j in 0..steps {
            let t0 = (p * steps + j) as f64 * dt;
            let dh_now = state.front_velocity(mu);
            let pieces = substeps(
                dh_now,
                state.h,
                dt,
                ny,
                numerics.cfl,
                numerics.max_halvings,
                t0,
            )?;
            let sub = dt / pieces as f64;
            for q in 0..pieces {
                let t_next = t0 + (q + 1) as f64 * sub;
                let slope = state.front_slope();
                bounds.record_gradient(slope, state.h);
                let dh = -mu / state.h * slope;
                let h_old = state.h;
                let h_new = h_old + sub * dh;
                profile_step(
                    &mut state,
                    d,
                    alpha,
                    sub,
                    h_new,
                    dh,
                    &|_, x| gamma(x, t_next),
                    &mut work,
                );
                bounds.record(&state, h_old);
                if state.min() < -numerics.eps_num {
                    return Err(FbError::NegativeDensity {
                        t: t_next,
                        value: state.min(),
                    });
                }
            }
            state.t = (p * steps + j + 1) as f64 * dt;
            if (j + 1) % stride == 0 {
                samples.push(TrajectorySample {
                    t: state.t,
                    h: state.h,
                    sup_u: state.sup(),
                    dh: state.dh,
                });
            }
        }
        if numerics.snapshots > 0 {
            snapshots.push_back(Snapshot {
                t: state.t,
                h: state.h,
                u: state.u.clone(),
            });
            if snapshots.len() > numerics.snapshots {
                snapshots.pop_front();
            }
        }
    }
    Ok(Trajectory {
        period,
        mu,
        horizon_periods: horizon,
        ny,
        dt,
        samples,
        snapshots: snapshots.into(),
        bounds,
        final_state: state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Final sup norm below which a species counts as vanished.
    pub eps_v: f64,
    /// Mean front speed over the last period below which the front has stalled.
    pub eps_s: f64,
    /// Distance beyond the critical length required for spreading.
    pub spread_margin: f64,
    /// Minimum front advance per period over the last five periods.
    pub delta_advance: f64,
    /// Relative allowance above the critical length for a vanished front.
    pub vanish_margin: f64,
    /// Shortest run that can be classified.
    pub min_periods: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            eps_v: 1e-4,
            eps_s: 1e-6,
            spread_margin: 0.5,
            delta_advance: 1e-3,
            vanish_margin: 0.02,
            min_periods: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Spreading,
    Vanishing,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Spreading => "spreading",
            Self::Vanishing => "vanishing",
            Self::Undetermined => "undetermined",
        })
    }
}

/// Numbers behind a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontEvidence {
    pub front: f64,
    pub critical: f64,
    pub final_sup: f64,
    /// Mean front speed over the last period.
    pub last_period_speed: f64,
    /// Smallest per-period advance over the last five periods.
    pub min_recent_advance: f64,
    pub periods: f64,
}

/// Front evidence from a sampled front history `(t, front)` plus final sup norm.
pub(crate) fn front_evidence(
    history: &[(f64, f64)],
    final_sup: f64,
    period: f64,
    critical: f64,
) -> FrontEvidence {
    let (t_end, front) = *history.last().unwrap();
    let at = |t: f64| -> f64 {
        match history.iter().position(|p| p.0 >= t - 1e-9 * period) {
            Some(i) => history[i].1,
            None => front,
        }
    };
    let periods = t_end / period;
    let last_period_speed = if periods >= 1.0 {
        (front - at(t_end - period)) / period
    } else {
        f64::INFINITY
    };
    let recent = (periods.floor() as usize).min(5);
    let min_recent_advance = (0..recent)
        .map(|m| at(t_end - m as f64 * period) - at(t_end - (m + 1) as f64 * period))
        .fold(f64::INFINITY, f64::min);
    FrontEvidence {
        front,
        critical,
        final_sup,
        last_period_speed,
        min_recent_advance,
        periods,
    }
}

pub(crate) fn verdict_from(e: &FrontEvidence, th: &Thresholds) -> Verdict {
    if e.periods + 1e-9 < th.min_periods as f64 {
        return Verdict::Undetermined;
    }
    if e.final_sup < th.eps_v
        && e.last_period_speed < th.eps_s
        && e.front <= e.critical * (1.0 + th.vanish_margin)
    {
        Verdict::Vanishing
    } else if e.front > e.critical + th.spread_margin && e.min_recent_advance >= th.delta_advance {
        Verdict::Spreading
    } else {
        Verdict::Undetermined
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleClassification {
    pub verdict: Verdict,
    pub evidence: FrontEvidence,
    pub thresholds: Thresholds,
}

pub fn classify_single(
    traj: &Trajectory,
    h_star: f64,
    thresholds: &Thresholds,
) -> SingleClassification {
    let history: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.h)).collect();
    let evidence = front_evidence(&history, traj.end().sup_u, traj.period, h_star);
    SingleClassification {
        verdict: verdict_from(&evidence, thresholds),
        evidence,
        thresholds: *thresholds,
    }
}

/// Least-squares slope of `front(t)` over the second half of the samples, with
/// the RMS fit residual.
pub(crate) fn fit_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let t_end = points.last().map(|p| p.0).unwrap_or(0.0);
    let window: Vec<&(f64, f64)> = points.iter().filter(|p| p.0 >= 0.5 * t_end).collect();
    if window.len() < 20 {
        return Err(FbError::InsufficientData {
            have: window.len(),
            need: 20,
        });
    }
    let n = window.len() as f64;
    let mt = window.iter().map(|p| p.0).sum::<f64>() / n;
    let mh = window.iter().map(|p| p.1).sum::<f64>() / n;
    let stt = window.iter().map(|p| (p.0 - mt).powi(2)).sum::<f64>();
    let sth = window.iter().map(|p| (p.0 - mt) * (p.1 - mh)).sum::<f64>();
    let slope = sth / stt;
    let rms = (window
        .iter()
        .map(|p| (p.1 - mh - slope * (p.0 - mt)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((slope, rms))
}

/// Asymptotic front speed: slope of `h(t)` over the last half of the run.
pub fn speed_estimate(traj: &Trajectory) -> Result<(f64, f64)> {
    let points: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.h)).collect();
    fit_slope(&points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MuSearch {
    pub lo: f64,
    pub hi: f64,
    /// Stop when `(hi − lo)/hi` falls below this.
    pub rel_width: f64,
    pub horizon: usize,
    /// Undetermined runs are repeated with the horizon doubled up to this factor.
    pub max_horizon_factor: usize,
    /// Interior points evaluated per round.
    pub interior: usize,
    pub max_expansions: usize,
}

impl Default for MuSearch {
    fn default() -> Self {
        Self {
            lo: 0.01,
            hi: 10.0,
            rel_width: 0.02,
            horizon: 100,
            max_horizon_factor: 4,
            interior: 3,
            max_expansions: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuBracket {
    pub lo: f64,
    pub hi: f64,
    /// Every evaluation in parameter order within each round.
    pub log: Vec<(f64, Verdict)>,
    /// Every simulation behind the log, sorted by parameter then horizon.
    pub runs: Vec<RunRecord>,
}

/// One simulation inside a threshold search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub param: f64,
    pub horizon: usize,
    pub verdict: Verdict,
    /// Final front of the searched species.
    pub front: f64,
    pub bound_violations: Vec<String>,
}

/// Thread-safe collector of run records, drained in a deterministic order.
#[derive(Default)]
pub(crate) struct RunLog(std::sync::Mutex<Vec<RunRecord>>);

impl RunLog {
    pub(crate) fn push(&self, r: RunRecord) {
        self.0.lock().expect("run log poisoned").push(r);
    }

    pub(crate) fn into_sorted(self) -> Vec<RunRecord> {
        let mut v = self.0.into_inner().expect("run log poisoned");
        v.sort_by(|a, b| a.param.total_cmp(&b.param).then(a.horizon.cmp(&b.horizon)));
        v
    }
}

/// Geometrically spaced interior points of `(lo, hi)`.
pub(crate) fn interior_points(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (1..=m)
        .map(|i| (a + (b - a) * i as f64 / (m + 1) as f64).exp())
        .collect()
}

/// Bracket search on a monotone verdict: `Vanishing` below the threshold and
/// `Spreading` above. Candidates of a round run concurrently; the bracket
/// update reads the results in parameter order.
pub(crate) fn threshold_search(
    eval: &(dyn Fn(f64) -> Result<Verdict> + Sync),
    mut lo: f64,
    mut hi: f64,
    rel_width: f64,
    interior: usize,
    max_expansions: usize,
    log: &mut Vec<(f64, Verdict)>,
) -> Result<(f64, f64)> {
    let ends = [lo, hi]
        .par_iter()
        .map(|p| eval(*p))
        .collect::<Result<Vec<_>>>()?;
    log.push((lo, ends[0]));
    log.push((hi, ends[1]));
    let (mut v_lo, mut v_hi) = (ends[0], ends[1]);
    let mut expansions = 0;
    while (v_lo != Verdict::Vanishing || v_hi != Verdict::Spreading) && expansions < max_expansions
    {
        expansions += 1;
        if v_lo != Verdict::Vanishing {
            lo /= 4.0;
            v_lo = eval(lo)?;
            log.push((lo, v_lo));
        }
        if v_hi != Verdict::Spreading {
            hi *= 4.0;
            v_hi = eval(hi)?;
            log.push((hi, v_hi));
        }
    }
    if v_lo != Verdict::Vanishing || v_hi != Verdict::Spreading {
        let verdict = if v_lo == v_hi {
            v_lo.to_string()
        } else {
            format!("{v_lo} at the low end and {v_hi} at the high end")
        };
        return Err(FbError::NoTransition {
            verdict,
            evaluations: log.iter().map(|(p, v)| (*p, v.to_string())).collect(),
        });
    }
    while (hi - lo) / hi > rel_width {
        let points = interior_points(lo, hi, interior.max(1));
        let verdicts = points
            .par_iter()
            .map(|p| eval(*p))
            .collect::<Result<Vec<_>>>()?;
        log.extend(points.iter().copied().zip(verdicts.iter().copied()));
        let last_vanishing = points
            .iter()
            .zip(&verdicts)
            .filter(|(_, v)| **v == Verdict::Vanishing)
            .map(|(p, _)| *p)
            .fold(lo, f64::max);
        let first_spreading = points
            .iter()
            .zip(&verdicts)
            .filter(|(_, v)| **v == Verdict::Spreading)
            .map(|(p, _)| *p)
            .fold(hi, f64::min);
        if first_spreading < last_vanishing {
            return Err(FbError::OrderingViolation(format!(
                "spreading at {first_spreading} below vanishing at {last_vanishing}"
            )));
        }
        if last_vanishing == lo && first_spreading == hi {
            // Every interior point undetermined: the bracket cannot shrink.
            break;
        }
        lo = last_vanishing;
        hi = first_spreading;
    }
    Ok((lo, hi))
}

/// Bracket on the spreading threshold in `μ` for an initial front below `h_star`.
#[allow(clippy::too_many_arguments)]
pub fn mu_star_single(
    d: f64,
    alpha: f64,
    gamma: &GrowthFn,
    period: f64,
    h0: f64,
    u0: &InitialProfile,
    h_star: f64,
    search: &MuSearch,
    numerics: &FrontNumerics,
    thresholds: &Thresholds,
) -> Result<MuBracket> {
    if !(h0 < h_star) {
        return Err(FbError::Precondition(format!(
            "initial front {h0} is not below the critical length {h_star}; spreading is unconditional"
        )));
    }
    let c1 = u0.sup().max(sup_growth(gamma, period, h0));
    let runs = RunLog::default();
    let eval = |mu: f64| -> Result<Verdict> {
        let mut horizon = search.horizon;
        loop {
            let traj = simulate_single(d, alpha, mu, gamma, period, h0, u0, horizon, numerics)?;
            let verdict = classify_single(&traj, h_star, thresholds).verdict;
            runs.push(RunRecord {
                param: mu,
                horizon,
                verdict,
                front: traj.end().h,
                bound_violations: traj.bounds.violations(c1, numerics.eps_num),
            });
            if verdict != Verdict::Undetermined
                || horizon >= search.horizon * search.max_horizon_factor
            {
                return Ok(verdict);
            }
            horizon *= 2;
        }
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
    Ok(MuBracket {
        lo,
        hi,
        log,
        runs: runs.into_sorted(),
    })
}

/// Sampled `sup γ` over the region a run can reach; growth closures carry no
/// envelope, so the a priori bound is sampled instead.
fn sup_growth(gamma: &GrowthFn, period: f64, h0: f64) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for j in 0..64 {
        let t = period * j as f64 / 64.0;
        for i in 0..=256 {
            m = m.max(gamma(i as f64 * (h0 + 100.0) / 256.0, t));
        }
    }
    m
}
