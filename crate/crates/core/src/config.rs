//! Run configuration: one JSON document with a required `problem` block and
//! optional blocks for initial data, numerics, verdict thresholds and the
//! parameters of individual commands. Missing blocks take their defaults, and
//! the resolved document is echoed into every output.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::{CoefficientField, FieldSpec, ProblemSpec};
use crate::eigen::{EigenNumerics, RootSearch};
use crate::halfline::HalfLineNumerics;
use crate::semiwave::SemiWaveNumerics;
use crate::single_fb::{FrontNumerics, InitialProfile, MuSearch, Thresholds};
use crate::system_fb::{Adversary, HabitatSearch, Species, SystemInit};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invalid value at {pointer}: {message}")]
    Validation { pointer: String, message: String },
}

impl ConfigError {
    pub fn pointer(&self) -> Option<&str> {
        match self {
            Self::Io { .. } => None,
            Self::Schema { pointer, .. } | Self::Validation { pointer, .. } => Some(pointer),
        }
    }
}

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// A coefficient given either as a plain number or as a list of terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldInput {
    Constant(f64),
    Terms(FieldSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub d1: f64,
    pub d2: f64,
    #[serde(default)]
    pub alpha1: f64,
    #[serde(default)]
    pub alpha2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub period: f64,
    pub a: FieldInput,
    pub b: FieldInput,
    pub k: FieldInput,
    pub h: FieldInput,
}

impl ProblemConfig {
    pub fn build(&self) -> Result<ProblemSpec, ConfigError> {
        let positive = [
            ("d1", self.d1),
            ("d2", self.d2),
            ("mu1", self.mu1),
            ("mu2", self.mu2),
            ("period", self.period),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(
                    format!("/problem/{name}"),
                    format!("must be positive, got {v}"),
                ));
            }
        }
        for (name, v) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(
                    format!("/problem/{name}"),
                    format!("must be >= 0, got {v}"),
                ));
            }
        }
        let field = |name: &str, f: &FieldInput| {
            match f {
                FieldInput::Constant(v) => CoefficientField::constant(*v, self.period),
                FieldInput::Terms(spec) => CoefficientField::from_spec(spec, self.period),
            }
            .map_err(|e| invalid(format!("/problem/{name}"), e.to_string()))
        };
        let growth = |name: &str, f: &FieldInput| {
            let field = field(name, f)?;
            if field.is_zero() {
                return Err(invalid(
                    format!("/problem/{name}"),
                    "growth field must be positive",
                ));
            }
            Ok(field)
        };
        Ok(ProblemSpec {
            d1: self.d1,
            d2: self.d2,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            mu1: self.mu1,
            mu2: self.mu2,
            period: self.period,
            a: growth("a", &self.a)?,
            b: growth("b", &self.b)?,
            k: field("k", &self.k)?,
            h: field("h", &self.h)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitConfig {
    pub s1_0: f64,
    pub s2_0: f64,
    pub u0: InitialProfile,
    pub v0: InitialProfile,
}

impl Default for InitConfig {
    fn default() -> Self {
        Self {
            s1_0: 1.0,
            s2_0: 1.0,
            u0: InitialProfile::CosineBump { amplitude: 0.5 },
            v0: InitialProfile::CosineBump { amplitude: 0.5 },
        }
    }
}

impl InitConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("s1_0", self.s1_0), ("s2_0", self.s2_0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(
                    format!("/init/{name}"),
                    format!("must be positive, got {v}"),
                ));
            }
        }
        for (name, p) in [("u0", &self.u0), ("v0", &self.v0)] {
            p.validate()
                .map_err(|e| invalid(format!("/init/{name}"), e.to_string()))?;
        }
        Ok(())
    }

    pub fn system(&self) -> SystemInit {
        SystemInit {
            s1_0: self.s1_0,
            s2_0: self.s2_0,
            u0: self.u0.clone(),
            v0: self.v0.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub horizon_periods: usize,
    pub eigen: EigenNumerics,
    pub root: RootSearch,
    pub halfline: HalfLineNumerics,
    pub semiwave: SemiWaveNumerics,
    pub front: FrontNumerics,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            horizon_periods: 40,
            eigen: EigenNumerics::default(),
            root: RootSearch::default(),
            halfline: HalfLineNumerics::default(),
            semiwave: SemiWaveNumerics::default(),
            front: FrontNumerics::default(),
        }
    }
}

impl NumericsConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        let counts = [
            ("horizon_periods", self.horizon_periods, 1),
            ("eigen/nx", self.eigen.nx, 4),
            ("eigen/nt", self.eigen.nt, 2),
            ("halfline/nt", self.halfline.nt, 2),
            ("semiwave/samples", self.semiwave.samples, 4),
            ("front/ny", self.front.ny, 4),
            ("front/steps_per_period", self.front.steps_per_period, 1),
        ];
        for (name, v, min) in counts {
            if v < min {
                return Err(invalid(
                    format!("/numerics/{name}"),
                    format!("must be at least {min}, got {v}"),
                ));
            }
        }
        let spans = [
            ("halfline/length", self.halfline.length),
            ("halfline/dx", self.halfline.dx),
            ("semiwave/dx", self.semiwave.dx),
            ("eigen/tol", self.eigen.tol),
            ("front/cfl", self.front.cfl),
        ];
        for (name, v) in spans {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(
                    format!("/numerics/{name}"),
                    format!("must be positive, got {v}"),
                ));
            }
        }
        if !self.semiwave.nt.is_multiple_of(self.semiwave.samples) {
            return Err(invalid(
                "/numerics/semiwave/nt",
                format!("must be a multiple of samples ({})", self.semiwave.samples),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenCommand {
    pub species: Species,
    pub length: f64,
}

impl Default for EigenCommand {
    fn default() -> Self {
        Self {
            species: Species::U,
            length: std::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MuThresholdCommand {
    pub species: Species,
    pub search: MuSearch,
}

impl Default for MuThresholdCommand {
    fn default() -> Self {
        Self {
            species: Species::U,
            search: MuSearch::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinHabitatCommand {
    pub species: Species,
    pub adversary: Adversary,
    pub search: HabitatSearch,
    /// Spreading margin used by the search verdicts in place of the global one;
    /// the searched front moves slowly by construction.
    pub spread_margin: f64,
}

impl Default for MinHabitatCommand {
    fn default() -> Self {
        Self {
            species: Species::U,
            adversary: Adversary::default(),
            search: HabitatSearch::default(),
            spread_margin: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareCommand {
    /// `(μ₁, μ₂)` of the run expected to favour `u`.
    pub mu_a: [f64; 2],
    pub mu_b: [f64; 2],
    /// Ordering slack per grid interval: `eps = eps_per_interval · ny`.
    pub eps_per_interval: f64,
}

impl Default for CompareCommand {
    fn default() -> Self {
        Self {
            mu_a: [1.0, 1.0],
            mu_b: [0.5, 1.0],
            eps_per_interval: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SandwichCommand {
    pub window: f64,
    pub periods: usize,
    pub eps: f64,
}

impl Default for SandwichCommand {
    fn default() -> Self {
        Self {
            window: 5.0,
            periods: 5,
            eps: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    #[serde(default)]
    pub init: InitConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub eigen: EigenCommand,
    #[serde(default)]
    pub mu_threshold: MuThresholdCommand,
    #[serde(default)]
    pub min_habitat: MinHabitatCommand,
    #[serde(default)]
    pub compare: CompareCommand,
    #[serde(default)]
    pub sandwich: SandwichCommand,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::Schema {
                pointer: to_pointer(&path),
                message: e.into_inner().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.problem.build()?;
        self.init.validate()?;
        self.numerics.validate()?;
        if !(self.eigen.length > 0.0 && self.eigen.length.is_finite()) {
            return Err(invalid("/eigen/length", "must be positive"));
        }
        let s = &self.mu_threshold.search;
        if !(s.lo > 0.0 && s.hi > s.lo) {
            return Err(invalid("/mu_threshold/search", "needs 0 < lo < hi"));
        }
        Ok(())
    }

    pub fn spec(&self) -> ProblemSpec {
        self.problem.build().expect("validated at parse time")
    }
}

/// `serde_path_to_error` prints paths like `problem.a.terms[0].spatial`.
fn to_pointer(path: &str) -> String {
    if path == "." || path.is_empty() {
        return "/".into();
    }
    let mut out = String::new();
    for seg in path.split('.') {
        let mut rest = seg;
        while let Some(open) = rest.find('[') {
            if open > 0 {
                out.push('/');
                out.push_str(&rest[..open]);
            }
            let close = rest[open..].find(']').map_or(rest.len(), |c| open + c);
            out.push('/');
            out.push_str(&rest[open + 1..close]);
            rest = &rest[(close + 1).min(rest.len())..];
        }
        if !rest.is_empty() {
            out.push('/');
            out.push_str(rest);
        }
    }
    out
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    RunConfig::from_json(&text)
}
