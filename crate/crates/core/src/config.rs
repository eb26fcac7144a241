//! Run configuration of the `llab` command line.
//!
//! A configuration is a JSON object; reals are decimal strings (plain
//! numbers are accepted), rationals are `"p/q"` strings and unknown keys are
//! rejected. Every field has a default, so `{}` is a valid configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bundle::{BundleParams, BundlePoint, LiouvilleSpec};
use crate::error::{Error, Result};
use crate::rational::{opt_q, q, q_str, real_str, Q};
use crate::reeb::EllipsoidSpec;

/// Environment variable naming a default configuration file.
pub const CONFIG_ENV: &str = "LLAB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Finite-difference pullback checks on sampled points.
    #[serde(with = "real_str", default = "defaults::pullback")]
    pub pullback: f64,
    /// Pullback checks of maps that are exact up to rounding (the ellipsoid chart).
    #[serde(with = "real_str", default = "defaults::chart")]
    pub chart: f64,
    /// Per-step relative tolerance of the flow integrator.
    #[serde(with = "real_str", default = "defaults::integrator")]
    pub integrator: f64,
    /// Root finding for rescaled times.
    #[serde(with = "real_str", default = "defaults::root_find")]
    pub root_find: f64,
    /// Pullback checks through integrated flows.
    #[serde(with = "real_str", default = "defaults::flow")]
    pub flow: f64,
    /// Pullback checks through the conjugation map.
    #[serde(with = "real_str", default = "defaults::conjugation")]
    pub conjugation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pullback: defaults::pullback(),
            chart: defaults::chart(),
            integrator: defaults::integrator(),
            root_find: defaults::root_find(),
            flow: defaults::flow(),
            conjugation: defaults::conjugation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Ellipsoid `(a₊, a₋)`.
    #[serde(default = "defaults::spec")]
    pub spec: EllipsoidSpec,
    #[serde(default = "defaults::bundle")]
    pub bundle: BundleParams,
    #[serde(default)]
    pub liouville: LiouvilleSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Grid points per coordinate for grid-based checks.
    #[serde(default = "defaults::grid")]
    pub grid: usize,
    /// Number of random samples for sampling-based checks.
    #[serde(default = "defaults::samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Finite-difference step.
    #[serde(with = "real_str", default = "defaults::step")]
    pub step: f64,
    /// `ε` of the conic classification; `(a₊ − 4a₋)/10` when absent.
    #[serde(default, with = "opt_q", skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Q>,
    /// Blow-up weight `λ`.
    #[serde(with = "q_str", default = "defaults::lambda")]
    pub lambda: Q,
    /// Deformation parameter `t` of the blown-up form.
    #[serde(with = "q_str", default = "defaults::t")]
    pub t: Q,
    /// Start point and time of `flow`.
    #[serde(default = "defaults::start")]
    pub start: BundlePoint,
    #[serde(with = "real_str", default = "defaults::time")]
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults form a valid configuration")
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("schema: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// The file named by `explicit`, else by `LLAB_CONFIG`, else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("pullback", t.pullback),
            ("chart", t.chart),
            ("integrator", t.integrator),
            ("root_find", t.root_find),
            ("flow", t.flow),
            ("conjugation", t.conjugation),
            ("step", self.step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be a positive real, got {v}")));
            }
        }
        if self.grid < 2 {
            return Err(Error::Config(format!("grid must be at least 2, got {}", self.grid)));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !self.time.is_finite() {
            return Err(Error::Config("time must be finite".into()));
        }
        self.bundle.validate()
    }
}

mod defaults {
    use super::*;

    pub fn pullback() -> f64 {
        1e-6
    }
    pub fn chart() -> f64 {
        1e-8
    }
    pub fn integrator() -> f64 {
        crate::flow::DEFAULT_TOL
    }
    pub fn root_find() -> f64 {
        1e-10
    }
    pub fn flow() -> f64 {
        1e-5
    }
    pub fn conjugation() -> f64 {
        1e-4
    }
    pub fn grid() -> usize {
        32
    }
    pub fn samples() -> usize {
        1000
    }
    pub fn step() -> f64 {
        1e-4
    }
    pub fn spec() -> EllipsoidSpec {
        EllipsoidSpec { a_plus: q(17, 10), a_minus: q(41, 100) }
    }
    pub fn bundle() -> BundleParams {
        BundleParams::disc(1, q(1, 2)).expect("valid default bundle")
    }
    pub fn lambda() -> Q {
        q(1, 2)
    }
    pub fn t() -> Q {
        q(1, 1)
    }
    pub fn start() -> BundlePoint {
        BundlePoint::new(0.1, 0.0, 0.25, 0.0)
    }
    pub fn time() -> f64 {
        3.0
    }
}
