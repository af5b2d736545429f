//! JSON run configuration shared by the command-line tool and examples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ere::{make_symmetric_model, make_symmetric_model_2d, Channel2D, Channel3D, Family, Table, TwoChannelModel};
use crate::error::{invalid, Result};
use crate::torus::{linear_grid, log_grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        match self.spacing {
            Spacing::Log => log_grid(self.min, self.max, self.count),
            Spacing::Linear => linear_grid(self.min, self.max, self.count),
        }
    }
}

/// Pole query: a scattering length with either a family λ or an effective
/// range r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSpec {
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: u8,
    pub a0: f64,
    pub a1: f64,
    /// Effective ranges for 3D models without a family tag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    pub p_grid: GridSpec,
    #[serde(default = "default_c1")]
    pub c1: f64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    /// Monte Carlo samples per point for entanglement-power estimates; 0
    /// disables them.
    #[serde(default)]
    pub ep_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<PoleSpec>,
}

fn default_c1() -> f64 {
    1.0
}

/// Tolerances used when the config does not set them.
pub const DEFAULT_TOLERANCES: [(&str, f64); 7] = [
    ("symmetry", 1e-10),
    ("ep", 1e-10),
    ("eom", 1e-8),
    ("overdetermination", 1e-6),
    ("wigner", 1e-9),
    ("poles", 1e-12),
    ("mc_sigma", 5.0),
];

impl RunConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(invalid("dimension", format!("must be 2 or 3, got {}", self.dimension)));
        }
        if !self.a0.is_finite() || !self.a1.is_finite() {
            return Err(invalid("a", "scattering lengths must be finite"));
        }
        if !(self.p_grid.min > 0.0) {
            return Err(invalid("p_grid.min", format!("must be positive, got {}", self.p_grid.min)));
        }
        if self.p_grid.count < 2 {
            return Err(invalid("p_grid.count", format!("need at least 2 points, got {}", self.p_grid.count)));
        }
        if !(self.p_grid.max > self.p_grid.min) || !self.p_grid.max.is_finite() {
            return Err(invalid("p_grid.max", "must be finite and exceed p_grid.min"));
        }
        if self.c1 == 0.0 || !self.c1.is_finite() {
            return Err(invalid("c1", "must be finite and non-zero"));
        }
        for (k, v) in &self.tolerances {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(invalid("tolerances", format!("{k} must be positive and finite, got {v}")));
            }
        }
        if self.dimension == 2 && (self.r0.is_some() || self.r1.is_some()) {
            return Err(invalid("r0/r1", "effective ranges only apply to 3D models"));
        }
        if self.family.is_some() && (self.r0.is_some() || self.r1.is_some()) {
            return Err(invalid("r0/r1", "a family tag fixes the ranges; drop r0/r1"));
        }
        if let Some(ps) = self.poles {
            if ps.lambda.is_some() == ps.r.is_some() {
                return Err(invalid("poles", "give exactly one of lambda or r"));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances
            .get(key)
            .copied()
            .unwrap_or_else(|| DEFAULT_TOLERANCES.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).unwrap_or(1e-10))
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        self.p_grid.build()
    }

    pub fn model(&self) -> Result<TwoChannelModel> {
        self.validate()?;
        match (self.dimension, self.family) {
            (3, Some(f)) => make_symmetric_model(f.table, f.row, self.a0, self.a1, f.lambda),
            (3, None) => Ok(TwoChannelModel::three_d(
                Channel3D::new(self.a0, self.r0.unwrap_or(0.0)),
                Channel3D::new(self.a1, self.r1.unwrap_or(0.0)),
            )),
            (_, Some(Family { table: Table::TwoD, .. })) => make_symmetric_model_2d(self.a0, self.a1),
            (_, Some(f)) => Err(invalid("family", format!("table {} is three-dimensional", f.table))),
            (_, None) => Ok(TwoChannelModel::two_d(
                Channel2D::scattering_length(self.a0)?,
                Channel2D::scattering_length(self.a1)?,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PURPLE: &str = r#"{
        "dimension": 3, "a0": 1.0, "a1": 5.0,
        "family": {"table": "T1", "row": 4},
        "p_grid": {"min": 0.001, "max": 1000.0, "count": 50, "spacing": "log"}
    }"#;

    #[test]
    fn parse_and_defaults() {
        let c = RunConfig::from_json(PURPLE).unwrap();
        assert_eq!(c.c1, 1.0);
        assert_eq!(c.seed, 0);
        assert_eq!(c.family.unwrap().lambda, 1.0);
        assert_eq!(c.tolerance("eom"), 1e-8);
        assert_eq!(c.grid().unwrap().len(), 50);
        assert_eq!(c.model().unwrap().family.unwrap().row, 4);
    }

    #[test]
    fn round_trip() {
        let mut c = RunConfig::from_json(PURPLE).unwrap();
        c.tolerances.insert("symmetry".into(), 1e-11);
        c.poles = Some(PoleSpec { a: -1.0, lambda: Some(0.25), r: None });
        c.seed = 42;
        let back = RunConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn validation_errors() {
        let bad = |patch: &dyn Fn(&mut RunConfig)| {
            let mut c = RunConfig::from_json(PURPLE).unwrap();
            patch(&mut c);
            c.validate().is_err()
        };
        assert!(bad(&|c| c.p_grid.min = 0.0));
        assert!(bad(&|c| c.p_grid.count = 1));
        assert!(bad(&|c| c.dimension = 4));
        assert!(bad(&|c| {
            c.tolerances.insert("eom".into(), -1.0);
        }));
        assert!(bad(&|c| c.r0 = Some(1.0)));
        assert!(RunConfig::from_json(r#"{"dimension": 3}"#).is_err());
        assert!(RunConfig::from_json(&PURPLE.replace("\"a0\"", "\"bogus\": 1, \"a0\"")).is_err());
    }

    #[test]
    fn sign_constraint_surfaces() {
        let c = RunConfig::from_json(&PURPLE.replace("\"a0\": 1.0", "\"a0\": -1.0")).unwrap();
        assert!(c.model().is_err());
    }
}
