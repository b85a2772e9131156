//! Heterogeneous, time-periodic coefficients built from a closed catalog of
//! separable terms.
//!
//! Every field is a finite sum `Σ S_j(x) · G_j(t)` where the spatial part is a
//! constant or an exponential approach `L + A e^{-r x}` to a far-field limit,
//! and the temporal part is a positive constant or a positive cosine. Because
//! each piece is monotone in `x` and positive in `t`, the envelopes
//! `γ_*(t) ≤ γ(x,t) ≤ γ*(t)` and the far-field limit `γ_∞(t)` are available in
//! closed form.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{FbError, Result};

/// Temporal samples per period used for envelope reports.
pub const ENVELOPE_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Spatial {
    Constant {
        value: f64,
    },
    /// `limit + amplitude · exp(-rate · x)`
    ExpApproach {
        limit: f64,
        amplitude: f64,
        rate: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Temporal {
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    /// `mean + amplitude · cos(2πt/T + phase)`
    Cosine {
        mean: f64,
        amplitude: f64,
        #[serde(default)]
        phase: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub spatial: Spatial,
    pub temporal: Temporal,
}

impl Spatial {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Spatial::Constant { value } => value,
            Spatial::ExpApproach {
                limit,
                amplitude,
                rate,
            } => limit + amplitude * (-rate * x).exp(),
        }
    }

    /// Range of the spatial part over `x ∈ [0, ∞)`.
    pub fn range(&self) -> (f64, f64) {
        match *self {
            Spatial::Constant { value } => (value, value),
            Spatial::ExpApproach {
                limit, amplitude, ..
            } => {
                let at_zero = limit + amplitude;
                (limit.min(at_zero), limit.max(at_zero))
            }
        }
    }

    pub fn far(&self) -> f64 {
        match *self {
            Spatial::Constant { value } => value,
            Spatial::ExpApproach { limit, .. } => limit,
        }
    }
}

impl Temporal {
    pub fn eval(&self, t: f64, period: f64) -> f64 {
        match *self {
            Temporal::Constant { value } => value,
            Temporal::Cosine {
                mean,
                amplitude,
                phase,
            } => mean + amplitude * (2.0 * PI * t / period + phase).cos(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Temporal::Constant { .. })
    }
}

/// The JSON form of a field: the period comes from the enclosing problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub terms: Vec<Term>,
}

/// An immutable T-periodic coefficient `γ(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    terms: Vec<Term>,
    period: f64,
}

/// Sampled envelope functions over one period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelopes {
    pub t: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub far_lower: Vec<f64>,
    pub far_upper: Vec<f64>,
}

impl CoefficientField {
    pub fn new(terms: Vec<Term>, period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(FbError::InvalidField(format!(
                "period must be positive, got {period}"
            )));
        }
        if terms.is_empty() {
            return Err(FbError::InvalidField(
                "a field needs at least one term".into(),
            ));
        }
        for (i, term) in terms.iter().enumerate() {
            match term.spatial {
                Spatial::Constant { value } if !value.is_finite() => {
                    return Err(FbError::InvalidField(format!(
                        "term {i}: non-finite constant"
                    )));
                }
                Spatial::ExpApproach {
                    limit,
                    amplitude,
                    rate,
                } => {
                    if !(limit >= 0.0 && limit.is_finite()) {
                        return Err(FbError::InvalidField(format!(
                            "term {i}: exp_approach limit must be >= 0, got {limit}"
                        )));
                    }
                    if !(rate > 0.0 && rate.is_finite()) || !amplitude.is_finite() {
                        return Err(FbError::InvalidField(format!(
                            "term {i}: exp_approach needs rate > 0 and finite amplitude"
                        )));
                    }
                }
                _ => {}
            }
            match term.temporal {
                Temporal::Constant { value } if !(value > 0.0 && value.is_finite()) => {
                    return Err(FbError::InvalidField(format!(
                        "term {i}: temporal constant must be positive, got {value}"
                    )));
                }
                Temporal::Cosine {
                    mean,
                    amplitude,
                    phase,
                } if (!(mean > 0.0) || !(amplitude.abs() < mean) || !phase.is_finite()) => {
                    return Err(FbError::InvalidField(format!(
                        "term {i}: cosine needs mean > 0 and |amplitude| < mean"
                    )));
                }
                _ => {}
            }
        }
        let field = Self { terms, period };
        if field.is_zero() {
            return Ok(field);
        }
        let min_lower = field
            .sample_times(4 * ENVELOPE_SAMPLES)
            .map(|t| field.lower(t))
            .fold(f64::INFINITY, f64::min);
        if !(min_lower > 0.0) {
            return Err(FbError::InvalidField(format!(
                "field is not positive: lower envelope reaches {min_lower:.6e}"
            )));
        }
        Ok(field)
    }

    pub fn from_spec(spec: &FieldSpec, period: f64) -> Result<Self> {
        Self::new(spec.terms.clone(), period)
    }

    /// Identically zero: every term is a spatial constant 0. Allowed so that
    /// competition can be switched off; growth fields are checked separately.
    pub fn is_zero(&self) -> bool {
        self.terms
            .iter()
            .all(|t| matches!(t.spatial, Spatial::Constant { value } if value == 0.0))
    }

    pub fn constant(value: f64, period: f64) -> Result<Self> {
        Self::new(
            vec![Term {
                spatial: Spatial::Constant { value },
                temporal: Temporal::Constant { value: 1.0 },
            }],
            period,
        )
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            terms: self.terms.clone(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let t = t.rem_euclid(self.period);
        self.terms
            .iter()
            .map(|term| term.spatial.eval(x) * term.temporal.eval(t, self.period))
            .sum()
    }

    /// `γ_*(t)`: infimum over `x ≥ 0`.
    pub fn lower(&self, t: f64) -> f64 {
        let t = t.rem_euclid(self.period);
        self.terms
            .iter()
            .map(|term| term.spatial.range().0 * term.temporal.eval(t, self.period))
            .sum()
    }

    /// `γ*(t)`: supremum over `x ≥ 0`.
    pub fn upper(&self, t: f64) -> f64 {
        let t = t.rem_euclid(self.period);
        self.terms
            .iter()
            .map(|term| term.spatial.range().1 * term.temporal.eval(t, self.period))
            .sum()
    }

    /// Far-field limit `γ_∞(t) = γ^∞(t)`; liminf and limsup agree for this catalog.
    pub fn far(&self, t: f64) -> f64 {
        let t = t.rem_euclid(self.period);
        self.terms
            .iter()
            .map(|term| term.spatial.far() * term.temporal.eval(t, self.period))
            .sum()
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.iter().all(|term| term.temporal.is_constant())
    }

    /// `‖γ‖_∞` over `[0,∞)×[0,T]`.
    pub fn sup_norm(&self) -> f64 {
        self.sample_times(4 * ENVELOPE_SAMPLES)
            .map(|t| self.upper(t).abs().max(self.lower(t).abs()))
            .fold(0.0, f64::max)
    }

    fn sample_times(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        (0..n).map(move |j| self.period * j as f64 / n as f64)
    }

    pub fn envelopes(&self) -> Envelopes {
        let t: Vec<f64> = self.sample_times(ENVELOPE_SAMPLES).collect();
        let far: Vec<f64> = t.iter().map(|&s| self.far(s)).collect();
        Envelopes {
            lower: t.iter().map(|&s| self.lower(s)).collect(),
            upper: t.iter().map(|&s| self.upper(s)).collect(),
            far_lower: far.clone(),
            far_upper: far,
            t,
        }
    }
}

/// Full model parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub d1: f64,
    pub d2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub period: f64,
    pub a: CoefficientField,
    pub b: CoefficientField,
    pub k: CoefficientField,
    pub h: CoefficientField,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("d1", self.d1),
            ("d2", self.d2),
            ("mu1", self.mu1),
            ("mu2", self.mu2),
            ("period", self.period),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(FbError::Precondition(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        for (name, value) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(FbError::Precondition(format!(
                    "{name} must be >= 0, got {value}"
                )));
            }
        }
        for (name, field) in [("a", &self.a), ("b", &self.b)] {
            if field.is_zero() {
                return Err(FbError::Precondition(format!(
                    "growth field {name} must be positive"
                )));
            }
        }
        for (name, field) in [
            ("a", &self.a),
            ("b", &self.b),
            ("k", &self.k),
            ("h", &self.h),
        ] {
            if (field.period() - self.period).abs() > 1e-12 * self.period {
                return Err(FbError::Precondition(format!(
                    "field {name} has period {} but the problem period is {}",
                    field.period(),
                    self.period
                )));
            }
        }
        Ok(())
    }

    /// Species 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            d1: self.d2,
            d2: self.d1,
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            mu1: self.mu2,
            mu2: self.mu1,
            period: self.period,
            a: self.b.clone(),
            b: self.a.clone(),
            k: self.h.clone(),
            h: self.k.clone(),
        }
    }
}

/// Per-hypothesis outcome with its slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    /// `min_t a_*(t) − k*(t)V*(t)`
    pub h2_slack_u: f64,
    /// `min_t b_*(t) − h*(t)U*(t)`
    pub h2_slack_v: f64,
    /// `2√(d₁ min[a_* − k*V*]) − α₁`
    pub h3_margin_u: f64,
    /// `2√(d₂ min[b_* − h*U*]) − α₂`
    pub h3_margin_v: f64,
    pub h2_pass: bool,
    pub h3_pass: bool,
}

impl HypothesisReport {
    pub fn pass(&self) -> bool {
        self.h2_pass && self.h3_pass
    }
}

/// Weak-competition and small-advection checks evaluated on the envelope samples.
pub fn check_hypotheses(spec: &ProblemSpec) -> Result<HypothesisReport> {
    spec.validate()?;
    let u_star = crate::periodic_ode::periodic_logistic(|t| spec.a.upper(t), spec.period)?;
    let v_star = crate::periodic_ode::periodic_logistic(|t| spec.b.upper(t), spec.period)?;
    let n = ENVELOPE_SAMPLES;
    let mut slack_u = f64::INFINITY;
    let mut slack_v = f64::INFINITY;
    for j in 0..n {
        let t = spec.period * j as f64 / n as f64;
        slack_u = slack_u.min(spec.a.lower(t) - spec.k.upper(t) * v_star.eval(t));
        slack_v = slack_v.min(spec.b.lower(t) - spec.h.upper(t) * u_star.eval(t));
    }
    let margin = |d: f64, slack: f64, alpha: f64| 2.0 * (d * slack.max(0.0)).sqrt() - alpha;
    let h3_margin_u = margin(spec.d1, slack_u, spec.alpha1);
    let h3_margin_v = margin(spec.d2, slack_v, spec.alpha2);
    let h2_pass = slack_u > 0.0 && slack_v > 0.0;
    Ok(HypothesisReport {
        h2_slack_u: slack_u,
        h2_slack_v: slack_v,
        h3_margin_u,
        h3_margin_v,
        h2_pass,
        h3_pass: h2_pass && h3_margin_u > 0.0 && h3_margin_v > 0.0,
    })
}
