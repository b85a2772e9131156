//! Positive bounded T-periodic solutions on the half line,
//!
//! ```text
//! P_t = d P_xx − α P_x + P(γ(x,t) − P),   P_x(0,t) = 0,   P(x,0) = P(x,T),
//! ```
//!
//! truncated to `[0, L]` with the far-field carrying orbit of `γ(L,·)` imposed at
//! `x = L`, and the extremal periodic pairs of the competition system obtained by
//! monotone alternating iteration.

use serde::{Deserialize, Serialize};

use crate::coeffs::ProblemSpec;
use crate::eigen::GrowthFn;
use crate::error::{FbError, Result};
use crate::linalg::Tridiag;
use crate::periodic_ode::{periodic_logistic, CarryingLevels, PeriodicOrbit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HalfLineNumerics {
    /// Truncation length `L`.
    pub length: f64,
    /// Target grid spacing; the actual spacing divides `L` evenly.
    pub dx: f64,
    /// Time steps per period.
    pub nt: usize,
    /// Sup-norm change per period that counts as periodic.
    pub tol: f64,
    pub max_periods: usize,
    /// Sup-norm change between alternating sweeps that stops the pair iteration.
    pub pair_tol: f64,
    pub max_sweeps: usize,
}

impl Default for HalfLineNumerics {
    fn default() -> Self {
        Self {
            length: 40.0,
            dx: 0.05,
            nt: 400,
            tol: 1e-8,
            max_periods: 2000,
            pair_tol: 1e-7,
            max_sweeps: 200,
        }
    }
}

impl HalfLineNumerics {
    fn intervals(&self) -> usize {
        (self.length / self.dx).ceil().max(4.0) as usize
    }
}

/// A T-periodic profile sampled at every time step of one period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicProfile {
    pub length: f64,
    pub period: f64,
    /// Grid intervals; nodes are `x_i = i·L/intervals`.
    pub intervals: usize,
    /// Time slices `t_j = j·T/nt`, `j = 0..nt`.
    pub nt: usize,
    /// `values[j * (intervals + 1) + i] = P(x_i, t_j)`.
    pub values: Vec<f64>,
    /// Boundary data at `x = L`, also returned beyond the domain.
    pub far: PeriodicOrbit,
    pub periods: usize,
    /// Sup-norm change over the last period.
    pub last_change: f64,
}

impl PeriodicProfile {
    pub fn dx(&self) -> f64 {
        self.length / self.intervals as f64
    }

    pub fn slice(&self, j: usize) -> &[f64] {
        let w = self.intervals + 1;
        &self.values[j * w..(j + 1) * w]
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        if x >= self.length {
            return self.far.eval(t);
        }
        let x = x.max(0.0);
        let tau = t.rem_euclid(self.period) / self.period * self.nt as f64;
        let j = (tau.floor() as usize).min(self.nt - 1);
        let wt = tau - j as f64;
        let xi = x / self.dx();
        let i = (xi.floor() as usize).min(self.intervals - 1);
        let wx = xi - i as f64;
        let row = |j: usize| {
            let s = self.slice(j % self.nt);
            s[i] * (1.0 - wx) + s[i + 1] * wx
        };
        row(j) * (1.0 - wt) + row(j + 1) * wt
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `self − other` over the shared grid.
    pub fn max_excess_over(&self, other: &PeriodicProfile) -> f64 {
        if self.intervals == other.intervals && self.nt == other.nt {
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            let mut worst = f64::NEG_INFINITY;
            for j in 0..self.nt {
                let t = self.period * j as f64 / self.nt as f64;
                for (i, v) in self.slice(j).iter().enumerate() {
                    let x = i as f64 * self.dx();
                    worst = worst.max(v - other.eval(x, t));
                }
            }
            worst
        }
    }

    pub fn sup_distance(&self, other: &PeriodicProfile) -> f64 {
        self.max_excess_over(other).max(other.max_excess_over(self))
    }
}

fn check_drift(d: f64, alpha: f64, gamma_min: f64) -> Result<()> {
    let bound = 2.0 * (d * gamma_min.max(0.0)).sqrt();
    if alpha >= bound {
        return Err(FbError::HypothesisViolation(format!(
            "advection {alpha} is not below 2·sqrt(d·min growth) = {bound}"
        )));
    }
    Ok(())
}

/// Periodic profile of the scalar problem for growth `gamma`.
///
/// `initial`, when given, seeds the iteration (on any grid); otherwise the state
/// starts at the largest sampled growth value.
pub fn scalar_periodic_profile(
    d: f64,
    alpha: f64,
    gamma: &GrowthFn,
    period: f64,
    numerics: &HalfLineNumerics,
    initial: Option<&dyn Fn(f64) -> f64>,
) -> Result<PeriodicProfile> {
    let n = numerics.intervals();
    let nt = numerics.nt;
    let length = numerics.length;
    let dx = length / n as f64;
    let dt = period / nt as f64;

    // Growth table over one period at the implicit time levels t_{j+1}.
    let mut table = vec![0.0; nt * n];
    let mut gamma_min = f64::INFINITY;
    let mut gamma_max = f64::NEG_INFINITY;
    for j in 0..nt {
        let t = (j + 1) as f64 * dt;
        for i in 0..n {
            let g = gamma(i as f64 * dx, t);
            table[j * n + i] = g;
            gamma_min = gamma_min.min(g);
            gamma_max = gamma_max.max(g);
        }
    }
    let far = periodic_logistic(|t| gamma(length, t), period)?;
    for j in 0..nt {
        gamma_min = gamma_min.min(gamma(length, j as f64 * dt));
    }
    check_drift(d, alpha, gamma_min)?;

    let mut u: Vec<f64> = match initial {
        Some(f) => (0..n).map(|i| f(i as f64 * dx).max(0.0)).collect(),
        None => vec![gamma_max.max(far.max()); n],
    };
    let diff = d * dt / (dx * dx);
    let adv = alpha * dt / (2.0 * dx);
    let mut m = Tridiag::zeros(n);
    for i in 0..n {
        m.sub[i] = -(diff + adv);
        m.sup[i] = -(diff - adv);
    }
    m.sup[0] = -2.0 * diff;

    let mut values = vec![0.0; nt * (n + 1)];
    let mut rhs = vec![0.0; n];
    let mut start = u.clone();
    let mut last_change = f64::INFINITY;
    for p in 1..=numerics.max_periods {
        values[..n].copy_from_slice(&u);
        values[n] = far.eval(0.0);
        for j in 0..nt {
            let t_next = (j + 1) as f64 * dt;
            let g = &table[j * n..(j + 1) * n];
            for i in 0..n {
                m.diag[i] = 1.0 + 2.0 * diff - dt * (g[i] - u[i]);
            }
            rhs.copy_from_slice(&u);
            rhs[n - 1] += (diff - adv) * far.eval(t_next);
            m.factor().solve_in_place(&mut rhs);
            std::mem::swap(&mut u, &mut rhs);
            if j + 1 < nt {
                let row = &mut values[(j + 1) * (n + 1)..(j + 2) * (n + 1)];
                row[..n].copy_from_slice(&u);
                row[n] = far.eval(t_next);
            }
        }
        last_change = u
            .iter()
            .zip(&start)
            .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()));
        if !last_change.is_finite() {
            break;
        }
        if last_change < numerics.tol {
            return Ok(PeriodicProfile {
                length,
                period,
                intervals: n,
                nt,
                values,
                far,
                periods: p,
                last_change,
            });
        }
        start.copy_from_slice(&u);
    }
    Err(FbError::NonConvergence {
        what: "half-line periodic profile",
        iterations: numerics.max_periods,
        last_change,
    })
}

/// Warm-start closure reading a profile at `t = 0`.
fn seed(profile: &PeriodicProfile) -> impl Fn(f64) -> f64 + '_ {
    move |x| profile.eval(x, 0.0)
}

/// Extremal periodic solutions of the competition system. `U₁ ≤ U₂`, `V₁ ≤ V₂`;
/// `(U₁, V₂)` and `(U₂, V₁)` are solution pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalPair {
    pub u1: PeriodicProfile,
    pub u2: PeriodicProfile,
    pub v1: PeriodicProfile,
    pub v2: PeriodicProfile,
    /// Sweeps used by the two alternating iterations.
    pub sweeps: (usize, usize),
}

/// Single-species profiles `P₁` (growth `a`) and `P₂` (growth `b`).
pub fn single_species_profiles(
    spec: &ProblemSpec,
    numerics: &HalfLineNumerics,
) -> Result<(PeriodicProfile, PeriodicProfile)> {
    let (p1, p2) = rayon::join(
        || {
            scalar_periodic_profile(
                spec.d1,
                spec.alpha1,
                &|x, t| spec.a.eval(x, t),
                spec.period,
                numerics,
                None,
            )
        },
        || {
            scalar_periodic_profile(
                spec.d2,
                spec.alpha2,
                &|x, t| spec.b.eval(x, t),
                spec.period,
                numerics,
                None,
            )
        },
    );
    Ok((p1?, p2?))
}

enum Lead {
    U,
    V,
}

/// One alternating iteration. Leading with `U = P₁` drives `U` down to the
/// largest solution component `U₂` and `V` up to `V₁`; leading with `V = P₂`
/// gives `(U₁, V₂)`.
fn alternate(
    spec: &ProblemSpec,
    numerics: &HalfLineNumerics,
    lead: Lead,
    top: &PeriodicProfile,
) -> Result<(PeriodicProfile, PeriodicProfile, usize)> {
    let slack = 100.0 * numerics.tol;
    let solve_u = |v: &PeriodicProfile, warm: &PeriodicProfile| {
        scalar_periodic_profile(
            spec.d1,
            spec.alpha1,
            &|x, t| spec.a.eval(x, t) - spec.k.eval(x, t) * v.eval(x, t),
            spec.period,
            numerics,
            Some(&seed(warm)),
        )
    };
    let solve_v = |u: &PeriodicProfile, warm: &PeriodicProfile| {
        scalar_periodic_profile(
            spec.d2,
            spec.alpha2,
            &|x, t| spec.b.eval(x, t) - spec.h.eval(x, t) * u.eval(x, t),
            spec.period,
            numerics,
            Some(&seed(warm)),
        )
    };
    // `fixed` is the profile held by the leading species, `other` the follower.
    let mut fixed = top.clone();
    let mut other = match lead {
        Lead::U => solve_v(&fixed, &fixed)?,
        Lead::V => solve_u(&fixed, &fixed)?,
    };
    for sweep in 1..=numerics.max_sweeps {
        let next_fixed = match lead {
            Lead::U => solve_u(&other, &fixed)?,
            Lead::V => solve_v(&other, &fixed)?,
        };
        let next_other = match lead {
            Lead::U => solve_v(&next_fixed, &other)?,
            Lead::V => solve_u(&next_fixed, &other)?,
        };
        // The leader decreases and the follower increases.
        let rise = next_fixed.max_excess_over(&fixed);
        let fall = other.max_excess_over(&next_other);
        if rise > slack || fall > slack {
            return Err(FbError::OrderingViolation(format!(
                "alternating sweep {sweep} lost monotonicity (leader rose by {rise:.3e}, follower fell by {fall:.3e})"
            )));
        }
        let change = next_fixed
            .sup_distance(&fixed)
            .max(next_other.sup_distance(&other));
        fixed = next_fixed;
        other = next_other;
        if change < numerics.pair_tol {
            return Ok(match lead {
                Lead::U => (fixed, other, sweep),
                Lead::V => (other, fixed, sweep),
            });
        }
    }
    Err(FbError::NonConvergence {
        what: "extremal pair iteration",
        iterations: numerics.max_sweeps,
        last_change: f64::NAN,
    })
}

pub fn extremal_pair(spec: &ProblemSpec, numerics: &HalfLineNumerics) -> Result<ExtremalPair> {
    let (p1, p2) = single_species_profiles(spec, numerics)?;
    let (from_u, from_v) = rayon::join(
        || alternate(spec, numerics, Lead::U, &p1),
        || alternate(spec, numerics, Lead::V, &p2),
    );
    let (u2, v1, sweeps_u) = from_u?;
    let (u1, v2, sweeps_v) = from_v?;
    let slack = 100.0 * numerics.tol;
    let du = u1.max_excess_over(&u2);
    let dv = v1.max_excess_over(&v2);
    if du > slack || dv > slack {
        return Err(FbError::OrderingViolation(format!(
            "extremal profiles out of order: max(U1 - U2) = {du:.3e}, max(V1 - V2) = {dv:.3e}"
        )));
    }
    Ok(ExtremalPair {
        u1,
        u2,
        v1,
        v2,
        sweeps: (sweeps_u, sweeps_v),
    })
}

/// `Q₁` for growth `a − kV*` and `Q₂` for growth `b − hU*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QProfiles {
    pub q1: PeriodicProfile,
    pub q2: PeriodicProfile,
}

pub fn q_profiles(
    spec: &ProblemSpec,
    levels: &CarryingLevels,
    numerics: &HalfLineNumerics,
) -> Result<QProfiles> {
    let (q1, q2) = rayon::join(
        || {
            scalar_periodic_profile(
                spec.d1,
                spec.alpha1,
                &|x, t| spec.a.eval(x, t) - spec.k.eval(x, t) * levels.v_upper.eval(t),
                spec.period,
                numerics,
                None,
            )
        },
        || {
            scalar_periodic_profile(
                spec.d2,
                spec.alpha2,
                &|x, t| spec.b.eval(x, t) - spec.h.eval(x, t) * levels.u_upper.eval(t),
                spec.period,
                numerics,
                None,
            )
        },
    );
    Ok(QProfiles { q1: q1?, q2: q2? })
}
