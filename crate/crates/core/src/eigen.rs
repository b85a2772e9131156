//! Principal eigenvalue of the periodic-parabolic problem
//!
//! ```text
//! φ_t = d φ_xx − α φ_x + γ(x,t) φ + λ φ   on (0,l) × [0,T]
//! φ_x(0,t) = φ(l,t) = 0,   φ(x,0) = φ(x,T)
//! ```
//!
//! computed from the one-period solution map Φ of `w_t = d w_xx − α w_x + γ w`:
//! `λ₁ = −ln ρ(Φ) / T`. Critical lengths are the roots of `l ↦ λ₁(l)`.
//!
//! The solver works with `ψ = e^{−αx/(2d)} φ`, which satisfies
//! `ψ_t = d ψ_xx + (γ − α²/(4d)) ψ + λψ` with `ψ_x(0) = −α/(2d) ψ(0)` and has the
//! same eigenvalue. Removing the drift keeps the period map close to symmetric,
//! which matters on long domains where the drift makes it badly non-normal.
//!
//! Time stepping is TR-BDF2 (L-stable, second order), so stiff grid modes are
//! damped instead of flipping sign every step. Before iterating, `γ` is shifted by
//! a continuum estimate of `−λ₁` so the shifted map has spectral radius near one
//! whatever the length.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::ProblemSpec;
use crate::error::{FbError, Result};
use crate::halfline::{ExtremalPair, QProfiles};
use crate::linalg::{Tridiag, TridiagLu};
use crate::periodic_ode::CarryingLevels;

/// A growth coefficient `γ(x, t)`.
pub type GrowthFn<'a> = dyn Fn(f64, f64) -> f64 + Sync + 'a;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenNumerics {
    /// Spatial unknowns; the Dirichlet node at `l` is extra.
    pub nx: usize,
    /// Time steps per period.
    pub nt: usize,
    /// Tolerance on the change of `ln ρ` between iterations.
    pub tol: f64,
    pub max_iter: usize,
    /// Time slices of the eigenfunction kept in the result.
    pub time_samples: usize,
}

impl Default for EigenNumerics {
    fn default() -> Self {
        Self {
            nx: 400,
            nt: 400,
            tol: 1e-10,
            max_iter: 2000,
            time_samples: 65,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub lambda1: f64,
    /// Spectral radius of the unshifted period map; underflows to 0 or overflows for
    /// large `|λ₁|T`, in which case `log_rho` is authoritative.
    pub rho: f64,
    pub log_rho: f64,
    pub nx: usize,
    pub nt: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Nodes `x_i = i·l/nx`, `i = 0..=nx`.
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    /// `phi[j][i] = φ(x_i, t_j)`, normalized to sup = 1.
    pub phi: Vec<Vec<f64>>,
}

/// One TR-BDF2 step for a fixed operator sequence.
struct StepOps {
    explicit: Tridiag,
    stage1: TridiagLu,
    stage2: TridiagLu,
}

struct PeriodMap {
    nx: usize,
    nt: usize,
    dt: f64,
    /// Either one entry reused every step or `nt` entries.
    steps: Vec<StepOps>,
}

const TRBDF2_G: f64 = 2.0 - std::f64::consts::SQRT_2;

impl PeriodMap {
    fn new(
        d: f64,
        alpha: f64,
        gamma: &GrowthFn,
        l: f64,
        period: f64,
        shift: f64,
        nx: usize,
        nt: usize,
    ) -> Self {
        let dx = l / nx as f64;
        let dt = period / nt as f64;
        let xs: Vec<f64> = (0..nx).map(|i| i as f64 * dx).collect();
        let drift = alpha * alpha / (4.0 * d);
        let sample =
            |t: f64| -> Vec<f64> { xs.iter().map(|&x| gamma(x, t) - drift + shift).collect() };

        let g = TRBDF2_G;
        let w = (1.0 - g) / (2.0 - g);
        let level = |n: usize, frac: f64| (n as f64 + frac) * dt;

        let base = sample(0.0);
        let autonomous = (1..=nt).all(|n| {
            [0.0, g, 1.0].iter().all(|&f| {
                sample(level(n - 1, f))
                    .iter()
                    .zip(&base)
                    .all(|(a, b)| (a - b).abs() <= 1e-14 * (1.0 + b.abs()))
            })
        });

        let operator = |gam: &[f64]| -> Tridiag {
            let mut a = Tridiag::zeros(nx);
            let diff = d / (dx * dx);
            for i in 0..nx {
                a.diag[i] = -2.0 * diff + gam[i];
                a.sub[i] = diff;
                a.sup[i] = diff;
            }
            // Ghost node ψ_{-1} = ψ_1 + (α dx/d) ψ_0 from the Robin condition.
            a.sup[0] = 2.0 * diff;
            a.sub[0] = 0.0;
            a.diag[0] += alpha / dx;
            a
        };
        let combine = |a: &Tridiag, c: f64| -> Tridiag {
            let mut m = a.clone();
            m.sub.iter_mut().for_each(|v| *v *= c);
            m.sup.iter_mut().for_each(|v| *v *= c);
            m.diag.iter_mut().for_each(|v| *v = 1.0 + c * *v);
            m
        };
        let build = |t0: f64| -> StepOps {
            let a0 = operator(&sample(t0));
            let ag = operator(&sample(t0 + g * dt));
            let a1 = operator(&sample(t0 + dt));
            StepOps {
                explicit: combine(&a0, 0.5 * g * dt),
                stage1: combine(&ag, -0.5 * g * dt).factor(),
                stage2: combine(&a1, -w * dt).factor(),
            }
        };
        let steps = if autonomous {
            vec![build(0.0)]
        } else {
            (0..nt).map(|n| build(level(n, 0.0))).collect()
        };
        Self { nx, nt, dt, steps }
    }

    fn step_ops(&self, n: usize) -> &StepOps {
        if self.steps.len() == 1 {
            &self.steps[0]
        } else {
            &self.steps[n]
        }
    }

    /// Advance `ncols` node-major columns by one step.
    fn step(&self, n: usize, u: &mut [f64], ncols: usize, stage: &mut [f64]) {
        let ops = self.step_ops(n);
        let g = TRBDF2_G;
        let c_star = 1.0 / (g * (2.0 - g));
        let c_old = (1.0 - g) * (1.0 - g) / (g * (2.0 - g));
        ops.explicit.mul_batch(u, stage, ncols);
        ops.stage1.solve_batch(stage, ncols);
        for (old, s) in u.iter_mut().zip(stage.iter()) {
            *old = c_star * s - c_old * *old;
        }
        ops.stage2.solve_batch(u, ncols);
    }

    fn apply(&self, u: &mut [f64], ncols: usize) {
        let mut stage = vec![0.0; u.len()];
        for n in 0..self.nt {
            self.step(n, u, ncols, &mut stage);
        }
    }

    fn dense(&self) -> DMatrix<f64> {
        let nx = self.nx;
        let mut u = vec![0.0; nx * nx];
        for i in 0..nx {
            u[i * nx + i] = 1.0;
        }
        self.apply(&mut u, nx);
        DMatrix::from_row_slice(nx, nx, &u)
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

struct PowerOutcome {
    log_rho: f64,
    vector: Vec<f64>,
    iterations: usize,
}

/// Power iteration on the shifted map, switching to repeated squaring of the
/// dense map when the spectral gap is small.
fn dominant_mode(map: &PeriodMap, numerics: &EigenNumerics) -> Result<PowerOutcome> {
    let nx = map.nx;
    let mut v: Vec<f64> = (0..nx)
        .map(|i| (std::f64::consts::FRAC_PI_2 * i as f64 / nx as f64).cos())
        .collect();
    let mut prev_log = f64::NAN;
    let mut prev_delta = f64::NAN;
    let mut ratio = f64::NAN;
    let mut last_change = f64::INFINITY;
    let matrix_free_budget = numerics.max_iter.min(80);

    for iter in 1..=matrix_free_budget {
        let before = sup_norm(&v);
        map.apply(&mut v, 1);
        let after = sup_norm(&v);
        if !(after.is_finite() && after > 0.0) {
            break;
        }
        let log_r = (after / before).ln();
        v.iter_mut().for_each(|x| *x /= after);
        if prev_log.is_finite() {
            let delta = (log_r - prev_log).abs();
            last_change = delta;
            if prev_delta.is_finite() && prev_delta > 0.0 {
                ratio = delta / prev_delta;
            }
            let tail = if ratio.is_finite() && ratio < 1.0 {
                delta * ratio / (1.0 - ratio)
            } else {
                f64::INFINITY
            };
            if delta < numerics.tol && (tail < numerics.tol || delta == 0.0) {
                return Ok(PowerOutcome {
                    log_rho: log_r,
                    vector: v,
                    iterations: iter,
                });
            }
            // A slowly contracting iteration is handed to the dense path.
            if iter >= 8 && ratio.is_finite() && ratio > 0.8 {
                break;
            }
            prev_delta = delta;
        }
        prev_log = log_r;
    }

    // Dense path: Φ^(2^k) converges to the rank-one spectral projector.
    let phi = map.dense();
    let q = if ratio.is_finite() && ratio > 0.0 && ratio < 1.0 {
        ratio
    } else {
        0.999
    };
    let squarings = ((1e-16f64.ln() / q.ln()).log2().ceil().max(1.0) as usize).min(40);
    let mut power = phi.clone();
    for _ in 0..squarings {
        power = &power * &power;
        let scale = power.amax();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(FbError::NonConvergence {
                what: "period-map squaring",
                iterations: squarings,
                last_change,
            });
        }
        power /= scale;
    }
    let mut w = DVector::from_iterator(nx, v.iter().map(|x| x.abs().max(1e-300)));
    for _ in 0..3 {
        w = &power * &w;
        let s = w.amax();
        w /= s;
    }
    let image = &phi * &w;
    let rho = image.dot(&w) / w.dot(&w);
    let residual = (&image - &w * rho).amax() / rho.abs();
    if !(rho > 0.0) || residual > 1e-7 {
        return Err(FbError::NonConvergence {
            what: "principal eigenvalue",
            iterations: matrix_free_budget,
            last_change: residual,
        });
    }
    Ok(PowerOutcome {
        log_rho: rho.ln(),
        vector: w.iter().copied().collect(),
        iterations: matrix_free_budget + squarings,
    })
}

/// Principal eigenvalue of `−dψ'' + αψ'` on `(0,l)` with `ψ'(0) = ψ(l) = 0`.
///
/// With `κ = α/(2d)` it is `d(k² + κ²)` where `tan(kl) = k/κ` when `κl ≤ 1`, and
/// `d(κ² − q²)` where `tanh(ql) = q/κ` otherwise. The second branch tends to zero
/// as `l → ∞`: the no-gradient wall at the origin admits inflow `αφ(0)`.
pub fn drift_box_eigenvalue(d: f64, alpha: f64, l: f64) -> f64 {
    let kappa = alpha / (2.0 * d);
    let bisect = |f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    if kappa * l <= 1.0 {
        // g(k) = κ sin(kl) − k cos(kl) is negative near 0 and positive at π/(2l).
        let g = |k: f64| kappa * (k * l).sin() - k * (k * l).cos();
        let k = if kappa == 0.0 {
            std::f64::consts::FRAC_PI_2 / l
        } else {
            bisect(&g, 0.0, std::f64::consts::FRAC_PI_2 / l)
        };
        d * (k * k + kappa * kappa)
    } else {
        // h(q) = q − κ tanh(ql) is negative on (0, q*) and positive on (q*, κ].
        let h = |q: f64| q - kappa * (q * l).tanh();
        let q = bisect(&h, 1e-300, kappa);
        d * (kappa * kappa - q * q)
    }
}

/// Shift for the period map: the constant-coefficient eigenvalue with `γ`
/// replaced by its space-time mean.
fn shift_estimate(d: f64, alpha: f64, gamma: &GrowthFn, l: f64, period: f64) -> f64 {
    let n = 32;
    let mut mean = 0.0;
    for j in 0..n {
        let t = period * j as f64 / n as f64;
        for i in 0..n {
            let x = l * (i as f64 + 0.5) / n as f64;
            mean += gamma(x, t);
        }
    }
    mean /= (n * n) as f64;
    drift_box_eigenvalue(d, alpha, l) - mean
}

pub fn principal_eigenvalue(
    d: f64,
    alpha: f64,
    gamma: &GrowthFn,
    l: f64,
    period: f64,
    numerics: &EigenNumerics,
) -> Result<EigenResult> {
    if !(l > 0.0 && d > 0.0 && period > 0.0) {
        return Err(FbError::Precondition(format!(
            "eigenvalue needs l > 0, d > 0, T > 0 (got l = {l}, d = {d}, T = {period})"
        )));
    }
    if numerics.nx < 4 || numerics.nt < 2 {
        return Err(FbError::Precondition(
            "eigen grid needs nx >= 4 and nt >= 2".into(),
        ));
    }
    let mut shift = shift_estimate(d, alpha, gamma, l, period);
    let mut attempts = 0;
    let (map, outcome) = loop {
        let map = PeriodMap::new(d, alpha, gamma, l, period, shift, numerics.nx, numerics.nt);
        let outcome = dominant_mode(&map, numerics)?;
        attempts += 1;
        if outcome.log_rho.abs() <= 50.0 || attempts >= 4 {
            break (map, outcome);
        }
        shift -= outcome.log_rho / period;
    };
    let lambda_shifted = -outcome.log_rho / period;
    let lambda1 = lambda_shifted + shift;
    let log_rho = -lambda1 * period;

    // Eigenfunction over one period: φ(t) = e^{λ' t} w(t) for the shifted flow w.
    let nx = numerics.nx;
    let samples = numerics.time_samples.clamp(2, numerics.nt + 1);
    let mut keep: Vec<usize> = (0..samples)
        .map(|j| ((j as f64) * numerics.nt as f64 / (samples - 1) as f64).round() as usize)
        .collect();
    keep.dedup();
    let mut w = outcome.vector.clone();
    let mut stage = vec![0.0; nx];
    // φ = e^{αx/(2d)} ψ, offset so the largest factor is one.
    let dx = l / nx as f64;
    let factor: Vec<f64> = (0..nx)
        .map(|i| (alpha * dx * (i as f64 - nx as f64) / (2.0 * d)).exp())
        .collect();
    let mut t = Vec::with_capacity(keep.len());
    let mut phi = Vec::with_capacity(keep.len());
    let mut next = 0;
    for n in 0..=numerics.nt {
        if next < keep.len() && keep[next] == n {
            let tn = n as f64 * map.dt;
            let weight = (lambda_shifted * tn).exp();
            let mut slice: Vec<f64> = w.iter().zip(&factor).map(|(v, f)| v * f * weight).collect();
            slice.push(0.0);
            t.push(tn);
            phi.push(slice);
            next += 1;
        }
        if n < numerics.nt {
            map.step(n, &mut w, 1, &mut stage);
        }
    }
    let top = phi.iter().map(|s| sup_norm(s)).fold(0.0, f64::max);
    phi.iter_mut().flatten().for_each(|v| *v /= top);
    let x = (0..=nx).map(|i| l * i as f64 / nx as f64).collect();

    Ok(EigenResult {
        lambda1,
        rho: log_rho.exp(),
        log_rho,
        nx,
        nt: numerics.nt,
        iterations: outcome.iterations,
        converged: true,
        x,
        t,
        phi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RootSearch {
    /// Lower end of the length bracket; `λ₁` must be positive there.
    pub l_min: f64,
    /// First upper probe; doubled until `λ₁ < 0`.
    pub l_start: f64,
    /// Expansion cap; no root is reported beyond it.
    pub l_cap: f64,
    /// Relative tolerance on the length.
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self {
            l_min: 1e-3,
            l_start: 1.0,
            l_cap: 500.0,
            rel_tol: 1e-6,
            max_evaluations: 80,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalRoot {
    pub length: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub lambda1: f64,
    pub evaluations: usize,
}

/// Root of `l ↦ λ₁(l)`, or `None` when `λ₁` stays nonnegative up to the cap.
///
/// The search runs in `z = 1/l²`, where `λ₁` is close to affine, with the
/// Illinois variant of regula falsi inside a bracket that is always kept.
pub fn critical_length(
    d: f64,
    alpha: f64,
    gamma: &GrowthFn,
    period: f64,
    search: &RootSearch,
    numerics: &EigenNumerics,
) -> Result<Option<CriticalRoot>> {
    let count = std::cell::Cell::new(0usize);
    let lambda = |l: f64| -> Result<f64> {
        count.set(count.get() + 1);
        Ok(principal_eigenvalue(d, alpha, gamma, l, period, numerics)?.lambda1)
    };

    let at_min = lambda(search.l_min)?;
    if at_min <= 0.0 {
        return Err(FbError::BracketFailure {
            l_min: search.l_min,
            lambda1: at_min,
        });
    }
    let (mut lo, mut f_lo) = (search.l_min, at_min);
    let mut hi = search.l_start.max(search.l_min * 2.0).min(search.l_cap);
    let mut f_hi = lambda(hi)?;
    while f_hi > 0.0 {
        if hi >= search.l_cap {
            return Ok(None);
        }
        lo = hi;
        f_lo = f_hi;
        hi = (hi * 2.0).min(search.l_cap);
        f_hi = lambda(hi)?;
    }
    if f_hi == 0.0 {
        return Ok(Some(CriticalRoot {
            length: hi,
            bracket_lo: hi,
            bracket_hi: hi,
            lambda1: 0.0,
            evaluations: count.get(),
        }));
    }

    // In z = 1/l², λ₁ increases with z: z_hi < z_lo.
    let z = |l: f64| 1.0 / (l * l);
    let (mut z_a, mut f_a) = (z(lo), f_lo);
    let (mut z_b, mut f_b) = (z(hi), f_hi);
    let mut side = 0i8;
    let mut best = (hi, f_hi);
    while count.get() < search.max_evaluations {
        let (l_a, l_b) = (1.0 / z_a.sqrt(), 1.0 / z_b.sqrt());
        if (l_b - l_a).abs() <= search.rel_tol * l_a.max(l_b) {
            break;
        }
        let mut zc = (z_a * f_b - z_b * f_a) / (f_b - f_a);
        let inside = zc > z_b.min(z_a) && zc < z_b.max(z_a);
        if !inside {
            zc = 0.5 * (z_a + z_b);
        }
        let lc = 1.0 / zc.sqrt();
        let fc = lambda(lc)?;
        if fc.abs() < best.1.abs() {
            best = (lc, fc);
        }
        if fc == 0.0 {
            z_a = zc;
            z_b = zc;
            break;
        }
        if (fc > 0.0) == (f_a > 0.0) {
            z_a = zc;
            f_a = fc;
            if side == -1 {
                f_b *= 0.5;
            }
            side = -1;
        } else {
            z_b = zc;
            f_b = fc;
            if side == 1 {
                f_a *= 0.5;
            }
            side = 1;
        }
    }
    let (l_a, l_b) = (1.0 / z_a.sqrt(), 1.0 / z_b.sqrt());
    Ok(Some(CriticalRoot {
        length: best.0.clamp(l_a.min(l_b), l_a.max(l_b)),
        bracket_lo: l_a.min(l_b),
        bracket_hi: l_a.max(l_b),
        lambda1: best.1,
        evaluations: count.get(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalLengths {
    /// Root for growth `a` (species 1 alone).
    pub s1_star_low: Option<f64>,
    /// Root for growth `b`.
    pub s2_star_low: Option<f64>,
    /// Root for `a − kV*`.
    pub s1_star_high: Option<f64>,
    /// Root for `b − hU*`.
    pub s2_star_high: Option<f64>,
    /// Root for `a − kV₁`.
    pub s1_double_star: Option<f64>,
    /// Root for `b − hU₁`.
    pub s2_double_star: Option<f64>,
    /// Root for `a − kQ₂`.
    pub s1_tilde: Option<f64>,
    /// Root for `b − hQ₁`.
    pub s2_tilde: Option<f64>,
    /// Single-species threshold for species 1, equal to `s1_star_low`.
    pub h_star: Option<f64>,
}

pub fn all_critical_lengths(
    spec: &ProblemSpec,
    levels: &CarryingLevels,
    pair: &ExtremalPair,
    q: &QProfiles,
    search: &RootSearch,
    numerics: &EigenNumerics,
) -> Result<CriticalLengths> {
    let period = spec.period;
    let (a, b, k, h) = (&spec.a, &spec.b, &spec.k, &spec.h);
    let u_growths: Vec<Box<GrowthFn>> = vec![
        Box::new(|x, t| a.eval(x, t)),
        Box::new(|x, t| a.eval(x, t) - k.eval(x, t) * levels.v_upper.eval(t)),
        Box::new(|x, t| a.eval(x, t) - k.eval(x, t) * pair.v1.eval(x, t)),
        Box::new(|x, t| a.eval(x, t) - k.eval(x, t) * q.q2.eval(x, t)),
    ];
    let v_growths: Vec<Box<GrowthFn>> = vec![
        Box::new(|x, t| b.eval(x, t)),
        Box::new(|x, t| b.eval(x, t) - h.eval(x, t) * levels.u_upper.eval(t)),
        Box::new(|x, t| b.eval(x, t) - h.eval(x, t) * pair.u1.eval(x, t)),
        Box::new(|x, t| b.eval(x, t) - h.eval(x, t) * q.q1.eval(x, t)),
    ];
    let jobs: Vec<(f64, f64, &GrowthFn)> = u_growths
        .iter()
        .map(|g| (spec.d1, spec.alpha1, g.as_ref()))
        .chain(v_growths.iter().map(|g| (spec.d2, spec.alpha2, g.as_ref())))
        .collect();
    let roots = jobs
        .par_iter()
        .map(|(d, alpha, g)| {
            critical_length(*d, *alpha, *g, period, search, numerics).map(|r| r.map(|r| r.length))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalLengths {
        s1_star_low: roots[0],
        s1_star_high: roots[1],
        s1_double_star: roots[2],
        s1_tilde: roots[3],
        s2_star_low: roots[4],
        s2_star_high: roots[5],
        s2_double_star: roots[6],
        s2_tilde: roots[7],
        h_star: roots[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn lambda(d: f64, alpha: f64, g: &GrowthFn, l: f64) -> f64 {
        principal_eigenvalue(d, alpha, g, l, 1.0, &EigenNumerics::default())
            .unwrap()
            .lambda1
    }

    #[test]
    fn neumann_dirichlet_box() {
        let l1 = lambda(1.0, 0.0, &|_, _| 0.0, 1.0);
        assert_relative_eq!(l1, FRAC_PI_2 * FRAC_PI_2, epsilon = 1e-4);
    }

    #[test]
    fn critical_box_has_zero_eigenvalue() {
        assert!(lambda(1.0, 0.0, &|_, _| 1.0, FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn eigenfunction_shape() {
        let r = principal_eigenvalue(
            1.0,
            0.2,
            &|x, t| 1.0 + 0.3 * x * (2.0 * PI * t).cos(),
            2.0,
            1.0,
            &EigenNumerics::default(),
        )
        .unwrap();
        for slice in &r.phi {
            assert_eq!(*slice.last().unwrap(), 0.0);
            assert!(slice[..slice.len() - 1].iter().all(|v| *v > 0.0));
        }
        let first = &r.phi[0];
        let last = r.phi.last().unwrap();
        for (a, b) in first.iter().zip(last) {
            assert!((a - b).abs() < 1e-6);
        }
        assert_relative_eq!(r.rho.ln(), -r.lambda1, epsilon = 1e-12);
    }

    #[test]
    fn tiny_length_does_not_underflow() {
        let l = lambda(1.0, 0.0, &|_, _| 1.0, 1e-3);
        assert_relative_eq!(l, (FRAC_PI_2 / 1e-3).powi(2) - 1.0, max_relative = 1e-4);
    }

    #[test]
    fn critical_length_unit_box() {
        let root = critical_length(
            1.0,
            0.0,
            &|_, _| 1.0,
            1.0,
            &RootSearch::default(),
            &EigenNumerics::default(),
        )
        .unwrap()
        .unwrap();
        assert!((root.length - FRAC_PI_2).abs() < 1e-4);
        assert!(root.bracket_lo <= root.length && root.length <= root.bracket_hi);
    }

    #[test]
    fn nonpositive_growth_has_no_root() {
        let root = critical_length(
            1.0,
            0.0,
            &|_, _| -0.1,
            1.0,
            &RootSearch::default(),
            &EigenNumerics::default(),
        )
        .unwrap();
        assert!(root.is_none());
    }

    #[test]
    fn strong_drift_still_has_a_root() {
        // Inflow through the no-gradient wall drives λ₁ toward −γ for any drift.
        let root = critical_length(
            1.0,
            2.1,
            &|_, _| 1.0,
            1.0,
            &RootSearch::default(),
            &EigenNumerics::default(),
        )
        .unwrap()
        .unwrap();
        let l = root.length;
        assert!((drift_box_eigenvalue(1.0, 2.1, l) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn drift_box_branches_agree_at_switch() {
        let (d, alpha) = (1.0, 0.4);
        let l = 2.0 * d / alpha;
        let below = drift_box_eigenvalue(d, alpha, l * (1.0 - 1e-9));
        let above = drift_box_eigenvalue(d, alpha, l * (1.0 + 1e-9));
        assert!((below - above).abs() < 1e-6);
        assert!((drift_box_eigenvalue(1.0, 0.0, 1.0) - FRAC_PI_2 * FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn large_growth_near_origin_fails_bracket() {
        let search = RootSearch {
            l_min: 1.0,
            ..RootSearch::default()
        };
        let err = critical_length(
            1.0,
            0.0,
            &|_, _| 10.0,
            1.0,
            &search,
            &EigenNumerics::default(),
        )
        .unwrap_err();
        assert!(matches!(err, FbError::BracketFailure { .. }));
    }
}
