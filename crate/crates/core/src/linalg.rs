//! Tridiagonal factorizations and small interpolation helpers shared by the
//! finite-difference solvers.

/// A tridiagonal matrix with rows `sub[i]·x[i-1] + diag[i]·x[i] + sup[i]·x[i+1]`.
/// `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiag {
    pub fn zeros(n: usize) -> Self {
        Self {
            sub: vec![0.0; n],
            diag: vec![0.0; n],
            sup: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `out = self · x`
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert!(x.len() == n && out.len() == n);
        if n == 1 {
            out[0] = self.diag[0] * x[0];
            return;
        }
        out[0] = self.diag[0] * x[0] + self.sup[0] * x[1];
        for i in 1..n - 1 {
            out[i] = self.sub[i] * x[i - 1] + self.diag[i] * x[i] + self.sup[i] * x[i + 1];
        }
        out[n - 1] = self.sub[n - 1] * x[n - 2] + self.diag[n - 1] * x[n - 1];
    }

    /// `out = self · x` for `ncols` node-major columns.
    pub fn mul_batch(&self, x: &[f64], out: &mut [f64], ncols: usize) {
        let n = self.len();
        debug_assert!(x.len() == n * ncols && out.len() == n * ncols);
        for i in 0..n {
            let row = &mut out[i * ncols..(i + 1) * ncols];
            let cur = &x[i * ncols..(i + 1) * ncols];
            let d = self.diag[i];
            row.iter_mut().zip(cur).for_each(|(o, v)| *o = d * v);
            if i > 0 {
                let s = self.sub[i];
                let prev = &x[(i - 1) * ncols..i * ncols];
                row.iter_mut().zip(prev).for_each(|(o, v)| *o += s * v);
            }
            if i + 1 < n {
                let s = self.sup[i];
                let next = &x[(i + 1) * ncols..(i + 2) * ncols];
                row.iter_mut().zip(next).for_each(|(o, v)| *o += s * v);
            }
        }
    }

    pub fn factor(&self) -> TridiagLu {
        TridiagLu::new(self)
    }
}

/// Thomas factorization without pivoting; the systems assembled here are
/// diagonally dominant.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagLu {
    sub: Vec<f64>,
    cprime: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl TridiagLu {
    pub fn new(m: &Tridiag) -> Self {
        let n = m.len();
        let mut cprime = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let mut prev_c = 0.0;
        for i in 0..n {
            let sub = if i == 0 { 0.0 } else { m.sub[i] };
            let pivot = m.diag[i] - sub * prev_c;
            inv_pivot[i] = 1.0 / pivot;
            let sup = if i + 1 < n { m.sup[i] } else { 0.0 };
            cprime[i] = sup * inv_pivot[i];
            prev_c = cprime[i];
        }
        let mut sub = m.sub.clone();
        if n > 0 {
            sub[0] = 0.0;
        }
        Self {
            sub,
            cprime,
            inv_pivot,
        }
    }

    pub fn solve_in_place(&self, d: &mut [f64]) {
        let n = self.cprime.len();
        debug_assert_eq!(d.len(), n);
        if n == 0 {
            return;
        }
        d[0] *= self.inv_pivot[0];
        for i in 1..n {
            d[i] = (d[i] - self.sub[i] * d[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            d[i] -= self.cprime[i] * d[i + 1];
        }
    }

    /// Solve for `ncols` right-hand sides stored node-major: entry `(i, c)` at
    /// `d[i * ncols + c]`.
    pub fn solve_batch(&self, d: &mut [f64], ncols: usize) {
        let n = self.cprime.len();
        debug_assert_eq!(d.len(), n * ncols);
        if n == 0 {
            return;
        }
        {
            let p = self.inv_pivot[0];
            d[..ncols].iter_mut().for_each(|v| *v *= p);
        }
        for i in 1..n {
            let (head, tail) = d.split_at_mut(i * ncols);
            let prev = &head[(i - 1) * ncols..];
            let cur = &mut tail[..ncols];
            let s = self.sub[i];
            let p = self.inv_pivot[i];
            for (c, pv) in cur.iter_mut().zip(prev) {
                *c = (*c - s * pv) * p;
            }
        }
        for i in (0..n - 1).rev() {
            let (head, tail) = d.split_at_mut((i + 1) * ncols);
            let cur = &mut head[i * ncols..];
            let next = &tail[..ncols];
            let cp = self.cprime[i];
            for (c, nv) in cur.iter_mut().zip(next) {
                *c -= cp * nv;
            }
        }
    }
}

/// Linear interpolation of samples on a uniform grid over `[0, span]` with `values[0]`
/// at 0 and `values[n-1]` at `span`; clamps outside.
pub fn interp_uniform(values: &[f64], span: f64, x: f64) -> f64 {
    let n = values.len();
    if n == 1 || x <= 0.0 {
        return values[0];
    }
    let pos = x / span * (n - 1) as f64;
    if pos >= (n - 1) as f64 {
        return values[n - 1];
    }
    let i = pos.floor() as usize;
    let w = pos - i as f64;
    values[i] * (1.0 - w) + values[i + 1] * w
}

/// Linear interpolation of `n` samples of a `period`-periodic function taken at
/// `t_j = j·period/n`.
pub fn interp_periodic(values: &[f64], period: f64, t: f64) -> f64 {
    let n = values.len();
    let pos = t.rem_euclid(period) / period * n as f64;
    let i = (pos.floor() as usize).min(n - 1);
    let w = pos - i as f64;
    values[i] * (1.0 - w) + values[(i + 1) % n] * w
}

/// Trigonometric interpolant of `n` uniform samples of a `period`-periodic function.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigInterpolant {
    period: f64,
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    nyquist: f64,
}

impl TrigInterpolant {
    pub fn new(samples: &[f64], period: f64) -> Self {
        let n = samples.len();
        let half = n / 2;
        let mean = samples.iter().sum::<f64>() / n as f64;
        let mut cos = Vec::with_capacity(half);
        let mut sin = Vec::with_capacity(half);
        let harmonics = if n.is_multiple_of(2) {
            half.saturating_sub(1)
        } else {
            half
        };
        for m in 1..=harmonics {
            let (mut c, mut s) = (0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let arg = 2.0 * std::f64::consts::PI * (m * j) as f64 / n as f64;
                c += v * arg.cos();
                s += v * arg.sin();
            }
            cos.push(2.0 * c / n as f64);
            sin.push(2.0 * s / n as f64);
        }
        let nyquist = if n.is_multiple_of(2) && n > 0 {
            samples
                .iter()
                .enumerate()
                .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
                .sum::<f64>()
                / n as f64
        } else {
            0.0
        };
        Self {
            period,
            mean,
            cos,
            sin,
            nyquist,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let theta = 2.0 * std::f64::consts::PI * t / self.period;
        let mut v = self.mean;
        for (m, (c, s)) in self.cos.iter().zip(&self.sin).enumerate() {
            let arg = (m + 1) as f64 * theta;
            v += c * arg.cos() + s * arg.sin();
        }
        let n_half = (self.cos.len() + 1) as f64;
        v + self.nyquist * (n_half * theta).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_matrix(n: usize) -> Tridiag {
        let mut m = Tridiag::zeros(n);
        for i in 0..n {
            m.diag[i] = 4.0 + i as f64 * 0.1;
            m.sub[i] = -1.0 - 0.01 * i as f64;
            m.sup[i] = -0.5;
        }
        m
    }

    #[test]
    fn thomas_round_trip() {
        let m = sample_matrix(17);
        let x: Vec<f64> = (0..17).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut b = vec![0.0; 17];
        m.mul_vec(&x, &mut b);
        m.factor().solve_in_place(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert_relative_eq!(u, v, epsilon = 1e-13);
        }
    }

    #[test]
    fn batch_matches_single() {
        let m = sample_matrix(9);
        let lu = m.factor();
        let ncols = 3;
        let mut batch = vec![0.0; 9 * ncols];
        let mut singles = vec![vec![0.0; 9]; ncols];
        for i in 0..9 {
            for c in 0..ncols {
                let v = (i * 3 + c) as f64 * 0.37 - 1.0;
                batch[i * ncols + c] = v;
                singles[c][i] = v;
            }
        }
        lu.solve_batch(&mut batch, ncols);
        for (c, s) in singles.iter_mut().enumerate() {
            lu.solve_in_place(s);
            for i in 0..9 {
                assert_relative_eq!(batch[i * ncols + c], s[i], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn trig_interpolant_reproduces_harmonics() {
        let n = 64;
        let f = |t: f64| {
            1.0 + 0.3 * (2.0 * std::f64::consts::PI * t).cos()
                - 0.1 * (6.0 * std::f64::consts::PI * t).sin()
        };
        let samples: Vec<f64> = (0..n).map(|j| f(j as f64 / n as f64)).collect();
        let interp = TrigInterpolant::new(&samples, 1.0);
        for t in [0.013, 0.25, 0.5, 0.77, 0.999] {
            assert_relative_eq!(interp.eval(t), f(t), epsilon = 1e-12);
        }
    }
}
