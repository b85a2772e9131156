//! Positive T-periodic orbits of the logistic ODE `p' = p(γ(t) − p)`.
//!
//! With `q = 1/p` the equation becomes linear, `q' = −γ q + 1`, so the periodic
//! orbit follows from quadrature: with `G(t) = ∫₀ᵗ γ`,
//! `q(0) = ∫₀ᵀ e^{G(s) − G(T)} ds / (1 − e^{−G(T)})` and
//! `q(t) = e^{−G(t)} q(0) + ∫₀ᵗ e^{G(s) − G(t)} ds`.
//! A positive orbit exists iff `G(T) > 0`.

use serde::Serialize;

use crate::coeffs::ProblemSpec;
use crate::error::{FbError, Result};
use crate::linalg::interp_periodic;

/// Stored samples per period.
pub const ORBIT_SAMPLES: usize = 512;
/// Minimum quadrature panels per period.
const MIN_PANELS: usize = 1024;
/// Panels are refined until `sup|γ|·h` is at most this.
const MAX_PANEL_GROWTH: f64 = 0.1;

const GAUSS_NODES: [f64; 3] = [0.112_701_665_379_258_3, 0.5, 0.887_298_334_620_741_7];
const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub period: f64,
    /// `p(jT/n)` for `j = 0..n`.
    pub samples: Vec<f64>,
    pub mean: f64,
}

impl PeriodicOrbit {
    pub fn constant(value: f64, period: f64) -> Self {
        Self {
            period,
            samples: vec![value; ORBIT_SAMPLES],
            mean: value,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        interp_periodic(&self.samples, self.period, t)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.samples.len();
        (0..n).map(move |j| self.period * j as f64 / n as f64)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn gauss(a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
    let h = b - a;
    GAUSS_NODES
        .iter()
        .zip(GAUSS_WEIGHTS)
        .map(|(c, w)| w * f(a + c * h))
        .sum::<f64>()
        * h
}

/// The unique positive periodic orbit for growth `gamma` of period `period`.
pub fn periodic_logistic(gamma: impl Fn(f64) -> f64, period: f64) -> Result<PeriodicOrbit> {
    let sup = (0..4096)
        .map(|j| gamma(period * j as f64 / 4096.0).abs())
        .fold(0.0, f64::max);
    let per_sample = ((sup * period / MAX_PANEL_GROWTH / ORBIT_SAMPLES as f64).ceil() as usize)
        .max(MIN_PANELS / ORBIT_SAMPLES);
    let panels = per_sample * ORBIT_SAMPLES;
    let h = period / panels as f64;
    // G at panel nodes.
    let mut g_nodes = Vec::with_capacity(panels + 1);
    g_nodes.push(0.0);
    for j in 0..panels {
        let t0 = j as f64 * h;
        let inc = gauss(t0, t0 + h, &gamma);
        g_nodes.push(g_nodes[j] + inc);
    }
    let g_total = g_nodes[panels];
    if !(g_total > 0.0) {
        return Err(FbError::NoPositivePeriodicSolution {
            mean_growth: g_total / period,
        });
    }

    // J_j = ∫₀^{t_j} e^{G(s) − G(t_j)} ds, advanced panel by panel.
    let mut j_nodes = Vec::with_capacity(panels + 1);
    j_nodes.push(0.0);
    for j in 0..panels {
        let t0 = j as f64 * h;
        let g_next = g_nodes[j + 1];
        let mut panel = 0.0;
        for (c, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
            let s = t0 + c * h;
            let g_s = g_nodes[j] + gauss(t0, s, &gamma);
            panel += w * (g_s - g_next).exp();
        }
        panel *= h;
        let decay = (-(g_next - g_nodes[j])).exp();
        j_nodes.push(decay * j_nodes[j] + panel);
    }
    let q0 = j_nodes[panels] / (-(-g_total).exp_m1());

    let stride = per_sample;
    let samples: Vec<f64> = (0..ORBIT_SAMPLES)
        .map(|i| {
            let j = i * stride;
            let q = (-g_nodes[j]).exp() * q0 + j_nodes[j];
            1.0 / q
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / ORBIT_SAMPLES as f64;
    Ok(PeriodicOrbit {
        period,
        samples,
        mean,
    })
}

/// Far-field carrying orbits of the competition system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarryingLevels {
    /// `U*`: orbit for growth `a*(t)`.
    pub u_upper: PeriodicOrbit,
    /// `V*`: orbit for growth `b*(t)`.
    pub v_upper: PeriodicOrbit,
    /// `U_*`: orbit for growth `a_*(t) − k*(t)V*(t)`.
    pub u_lower: PeriodicOrbit,
    /// `V_*`: orbit for growth `b_*(t) − h*(t)U*(t)`.
    pub v_lower: PeriodicOrbit,
}

pub fn carrying_levels(spec: &ProblemSpec) -> Result<CarryingLevels> {
    let period = spec.period;
    let u_upper = periodic_logistic(|t| spec.a.upper(t), period)?;
    let v_upper = periodic_logistic(|t| spec.b.upper(t), period)?;
    let u_lower = periodic_logistic(
        |t| spec.a.lower(t) - spec.k.upper(t) * v_upper.eval(t),
        period,
    )?;
    let v_lower = periodic_logistic(
        |t| spec.b.lower(t) - spec.h.upper(t) * u_upper.eval(t),
        period,
    )?;
    Ok(CarryingLevels {
        u_upper,
        v_upper,
        u_lower,
        v_lower,
    })
}
