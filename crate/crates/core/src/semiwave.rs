//! Periodic semi-waves and the spreading-speed bounds built from them.
//!
//! For a speed function `k(t)` let `W^k` be the positive periodic solution of
//!
//! ```text
//! W_t = d W_xx − k(t) W_x + W(γ(t) − W),   W(0,t) = 0,   W(x,0) = W(x,T).
//! ```
//!
//! The semi-wave speed `k₀` is the fixed point of `k ↦ μ W^k_x(0,·)`, found by a
//! damped iteration on a truncated domain whose far end carries the logistic
//! orbit of `γ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::ProblemSpec;
use crate::error::{FbError, Result};
use crate::linalg::{Tridiag, TrigInterpolant};
use crate::periodic_ode::{periodic_logistic, CarryingLevels, PeriodicOrbit};
use crate::single_fb::{speed_estimate, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemiWaveNumerics {
    /// Domain length; `None` means `40/sqrt(d·min γ)`.
    pub length: Option<f64>,
    pub dx: f64,
    /// Time steps per period; a multiple of `samples`.
    pub nt: usize,
    /// Samples of `k` per period.
    pub samples: usize,
    pub theta: f64,
    /// Target for `sup_t |μ W_x(0,t) − k(t)|`.
    pub tol: f64,
    /// Floor on the per-period change demanded of the inner periodic solve.
    pub inner_tol: f64,
    pub max_outer: usize,
    pub max_periods: usize,
}

impl Default for SemiWaveNumerics {
    fn default() -> Self {
        Self {
            length: None,
            dx: 0.025,
            nt: 256,
            samples: 64,
            theta: 0.5,
            tol: 1e-6,
            inner_tol: 1e-11,
            max_outer: 400,
            max_periods: 20000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiWaveResult {
    pub period: f64,
    /// `k₀` at `t_j = j·T/samples`.
    pub k0: Vec<f64>,
    pub mean_k0: f64,
    pub length: f64,
    pub dx: f64,
    /// `W(x_i, t_j)` at the same times, nodes `x_i = i·dx` including both ends.
    pub profile: Vec<Vec<f64>>,
    pub residual: f64,
    pub iterations: usize,
}

impl SemiWaveResult {
    pub fn k0_at(&self, t: f64) -> f64 {
        TrigInterpolant::new(&self.k0, self.period).eval(t)
    }
}

struct WaveGrid {
    n: usize,
    dx: f64,
    dt: f64,
    nt: usize,
    stride: usize,
    d: f64,
    gamma: Vec<f64>,
    far: PeriodicOrbit,
}

impl WaveGrid {
    /// One period of the linearly implicit scheme for speeds `k_steps` (one per
    /// step). Interior unknowns are nodes `1..n`. Returns `W_x(0,·)` at the
    /// sample times and the slices at those times.
    fn period(&self, w: &mut [f64], k_steps: &[f64], keep: bool) -> (Vec<f64>, Vec<Vec<f64>>) {
        let m = self.n - 1;
        let diff = self.d * self.dt / (self.dx * self.dx);
        let mut a = Tridiag::zeros(m);
        let mut rhs = vec![0.0; m];
        let mut slopes = Vec::with_capacity(self.nt / self.stride);
        let mut slices = Vec::new();
        let slope = |w: &[f64]| (4.0 * w[1] - w[2]) / (2.0 * self.dx);
        for j in 0..self.nt {
            if j % self.stride == 0 {
                slopes.push(slope(w));
                if keep {
                    slices.push(w.to_vec());
                }
            }
            let t_next = (j + 1) as f64 * self.dt;
            let adv = k_steps[j] * self.dt / (2.0 * self.dx);
            let g = self.gamma[j];
            for r in 0..m {
                let i = r + 1;
                a.sub[r] = -(diff + adv);
                a.sup[r] = -(diff - adv);
                a.diag[r] = 1.0 + 2.0 * diff - self.dt * (g - w[i]);
                rhs[r] = w[i];
            }
            let far = self.far.eval(t_next);
            rhs[m - 1] += (diff - adv) * far;
            a.factor().solve_in_place(&mut rhs);
            w[1..self.n].copy_from_slice(&rhs);
            w[self.n] = far;
        }
        (slopes, slices)
    }
}

/// Semi-wave speed for a growth rate depending on time only.
pub fn semiwave_speed(
    d: f64,
    mu: f64,
    gamma: &(dyn Fn(f64) -> f64 + Sync),
    period: f64,
    numerics: &SemiWaveNumerics,
) -> Result<SemiWaveResult> {
    if !(mu > 0.0 && d > 0.0) {
        return Err(FbError::Precondition(format!(
            "semi-wave needs d > 0 and μ > 0 (got d = {d}, μ = {mu})"
        )));
    }
    let samples = numerics.samples.max(4);
    let stride = (numerics.nt / samples).max(1);
    let nt = stride * samples;
    let dt = period / nt as f64;
    let far = periodic_logistic(gamma, period)?;
    let gamma_steps: Vec<f64> = (0..nt).map(|j| gamma((j + 1) as f64 * dt)).collect();
    let gamma_min = gamma_steps.iter().copied().fold(f64::INFINITY, f64::min);
    let gamma_mean = far.mean;
    let length = numerics
        .length
        .unwrap_or_else(|| 40.0 / (d * gamma_min.max(1e-3 * gamma_mean)).sqrt());
    let n = (length / numerics.dx).ceil().max(8.0) as usize;
    let grid = WaveGrid {
        n,
        dx: length / n as f64,
        dt,
        nt,
        stride,
        d,
        gamma: gamma_steps,
        far,
    };

    let decay = (gamma_mean / d).sqrt();
    let mut w: Vec<f64> = (0..=n)
        .map(|i| grid.far.mean * (1.0 - (-(i as f64) * grid.dx * decay).exp()))
        .collect();
    w[n] = grid.far.eval(0.0);
    let k_start = (mu * (gamma_mean.powi(3) / (3.0 * d)).sqrt()).min((d * gamma_mean).sqrt());
    let mut k = vec![k_start; samples];
    let mut residual = f64::INFINITY;

    for outer in 1..=numerics.max_outer {
        let interp = TrigInterpolant::new(&k, period);
        let k_steps: Vec<f64> = (0..nt)
            .map(|j| interp.eval((j as f64 + 0.5) * dt))
            .collect();
        let inner_tol = (1e-3 * residual).clamp(numerics.inner_tol, 1e-6);
        let mut start = w.clone();
        let mut slopes = Vec::new();
        let mut converged = false;
        let mut change = f64::INFINITY;
        for _ in 0..numerics.max_periods {
            let (s, _) = grid.period(&mut w, &k_steps, false);
            slopes = s;
            change = w
                .iter()
                .zip(&start)
                .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()));
            if change < inner_tol {
                converged = true;
                break;
            }
            start.copy_from_slice(&w);
        }
        if !converged {
            return Err(FbError::NonConvergence {
                what: "semi-wave periodic profile",
                iterations: numerics.max_periods,
                last_change: change,
            });
        }
        let target: Vec<f64> = slopes.iter().map(|s| mu * s).collect();
        residual = target
            .iter()
            .zip(&k)
            .fold(0.0, |acc, (f, k)| f64::max(acc, (f - k).abs()));
        if residual < numerics.tol {
            let (_, profile) = grid.period(&mut w, &k_steps, true);
            let mean_k0 = k.iter().sum::<f64>() / k.len() as f64;
            return Ok(SemiWaveResult {
                period,
                k0: k,
                mean_k0,
                length,
                dx: grid.dx,
                profile,
                residual,
                iterations: outer,
            });
        }
        for (kj, fj) in k.iter_mut().zip(&target) {
            *kj = (1.0 - numerics.theta) * *kj + numerics.theta * fj;
        }
        let mean = k.iter().sum::<f64>() / k.len() as f64;
        if !(mean > 1e-8) {
            return Err(FbError::CollapseToZero { k: mean });
        }
    }
    Err(FbError::NonConvergence {
        what: "semi-wave speed fixed point",
        iterations: numerics.max_outer,
        last_change: residual,
    })
}

/// Asymptotic speed bounds for both species.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedBounds {
    /// Mean `k₀(d₁, μ₁, a_∞ − k^∞V*)`.
    pub c1_low: f64,
    /// Mean `k₀(d₁, μ₁, a^∞) + α₁`.
    pub c1_high: f64,
    /// Mean `k₀(d₂, μ₂, b_∞ − h^∞U*)`.
    pub c2_low: f64,
    /// Mean `k₀(d₂, μ₂, b^∞) + α₂`.
    pub c2_high: f64,
}

pub fn speed_bounds(
    spec: &ProblemSpec,
    levels: &CarryingLevels,
    numerics: &SemiWaveNumerics,
) -> Result<SpeedBounds> {
    let period = spec.period;
    let (a, b, k, h) = (&spec.a, &spec.b, &spec.k, &spec.h);
    type TimeFn<'a> = Box<dyn Fn(f64) -> f64 + Sync + 'a>;
    let jobs: Vec<(f64, f64, TimeFn)> = vec![
        (
            spec.d1,
            spec.mu1,
            Box::new(|t| a.far(t) - k.far(t) * levels.v_upper.eval(t)),
        ),
        (spec.d1, spec.mu1, Box::new(|t| a.far(t))),
        (
            spec.d2,
            spec.mu2,
            Box::new(|t| b.far(t) - h.far(t) * levels.u_upper.eval(t)),
        ),
        (spec.d2, spec.mu2, Box::new(|t| b.far(t))),
    ];
    let means = jobs
        .par_iter()
        .map(|(d, mu, g)| semiwave_speed(*d, *mu, g.as_ref(), period, numerics).map(|r| r.mean_k0))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpeedBounds {
        c1_low: means[0],
        c1_high: means[1] + spec.alpha1,
        c2_low: means[2],
        c2_high: means[3] + spec.alpha2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedSandwichReport {
    pub speed: f64,
    pub fit_residual: f64,
    pub c_low: f64,
    pub c_high: f64,
    pub rel_tol: f64,
    pub pass: bool,
}

/// Whether the fitted front speed of a spreading run lies in
/// `[c_low(1 − rel_tol), c_high(1 + rel_tol)]`.
pub fn verify_speed_sandwich(
    traj: &Trajectory,
    bounds: (f64, f64),
    rel_tol: f64,
) -> Result<SpeedSandwichReport> {
    let (speed, fit_residual) = speed_estimate(traj)?;
    let (c_low, c_high) = bounds;
    Ok(SpeedSandwichReport {
        speed,
        fit_residual,
        c_low,
        c_high,
        rel_tol,
        pass: c_low * (1.0 - rel_tol) <= speed && speed <= c_high * (1.0 + rel_tol),
    })
}
