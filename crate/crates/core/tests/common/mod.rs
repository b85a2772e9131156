//! Reference computations that share no code with the library solvers.

#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;

/// Speed `c` of the autonomous semi-wave `d q'' − c q' + q(γ − q) = 0`,
/// `q(0) = 0`, `μ q'(0) = c`, `q(∞) = γ`, by shooting with RK4 and bisection.
pub fn shooting_speed(d: f64, gamma: f64, mu: f64) -> f64 {
    #[derive(PartialEq)]
    enum Fate {
        Overshoot,
        TurnsBack,
        Undecided,
    }
    let fate = |c: f64| {
        let rhs = |q: f64, p: f64| (p, (c * p - q * (gamma - q)) / d);
        let (mut q, mut p) = (0.0, c / mu);
        let h = 2e-3;
        let mut x = 0.0;
        while x < 400.0 {
            let (k1q, k1p) = rhs(q, p);
            let (k2q, k2p) = rhs(q + 0.5 * h * k1q, p + 0.5 * h * k1p);
            let (k3q, k3p) = rhs(q + 0.5 * h * k2q, p + 0.5 * h * k2p);
            let (k4q, k4p) = rhs(q + h * k3q, p + h * k3p);
            q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            x += h;
            if q > gamma {
                return Fate::Overshoot;
            }
            if p < 0.0 {
                return Fate::TurnsBack;
            }
        }
        Fate::Undecided
    };
    let (mut lo, mut hi) = (0.0, 2.0 * (d * gamma).sqrt());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match fate(mid) {
            Fate::Overshoot => hi = mid,
            Fate::TurnsBack => lo = mid,
            Fate::Undecided => return mid,
        }
    }
    0.5 * (lo + hi)
}

/// `p(0)` of the periodic logistic orbit from the closed form
/// `1/p(0) = ∫₀ᵀ e^{G(s)} ds / (e^{G(T)} − 1)` with composite Simpson rules.
pub fn logistic_orbit_start(gamma: impl Fn(f64) -> f64, period: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = period / n as f64;
    // G on the Simpson grid, itself by Simpson on doubled sub-panels.
    let mut g = vec![0.0; n + 1];
    for i in 0..n {
        let a = i as f64 * h;
        let m = a + 0.5 * h;
        let b = a + h;
        g[i + 1] = g[i] + h / 6.0 * (gamma(a) + 4.0 * gamma(m) + gamma(b));
    }
    let f: Vec<f64> = g.iter().map(|v| v.exp()).collect();
    let mut integral = f[0] + f[n];
    for i in 1..n {
        integral += if i % 2 == 1 { 4.0 } else { 2.0 } * f[i];
    }
    integral *= h / 3.0;
    (g[n].exp() - 1.0) / integral
}

/// Long-time RK4 integration of `p' = p(γ − p)` from `p = 1` for `periods`
/// periods; returns `p` at the final period boundary.
pub fn logistic_long_time(
    gamma: impl Fn(f64) -> f64,
    period: f64,
    periods: usize,
    steps: usize,
) -> f64 {
    let h = period / steps as f64;
    let f = |t: f64, p: f64| p * (gamma(t) - p);
    let mut p = 1.0;
    for n in 0..periods * steps {
        let t = n as f64 * h;
        let k1 = f(t, p);
        let k2 = f(t + 0.5 * h, p + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, p + 0.5 * h * k2);
        let k4 = f(t + h, p + h * k3);
        p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    p
}

/// Smallest eigenvalue of `−(d ∂xx − α ∂x + γ(x))` with `φ'(0) = φ(l) = 0`
/// from a dense centered-difference matrix.
pub fn dense_elliptic_eigenvalue(
    d: f64,
    alpha: f64,
    gamma: impl Fn(f64) -> f64,
    l: f64,
    n: usize,
) -> f64 {
    let dx = l / n as f64;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let x = i as f64 * dx;
        m[(i, i)] = 2.0 * d / (dx * dx) - gamma(x);
        if i > 0 {
            m[(i, i - 1)] = -d / (dx * dx) - alpha / (2.0 * dx);
        }
        if i + 1 < n {
            m[(i, i + 1)] = -d / (dx * dx) + alpha / (2.0 * dx);
        }
    }
    m[(0, 1)] = -2.0 * d / (dx * dx);
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min)
}

/// Min and max of `f` over a uniform grid of `[0, x_max] × [0, T]`.
pub fn dense_range(
    f: impl Fn(f64, f64) -> f64,
    x_max: f64,
    period: f64,
    nx: usize,
    nt: usize,
) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=nx {
        for j in 0..=nt {
            let v = f(x_max * i as f64 / nx as f64, period * j as f64 / nt as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}
