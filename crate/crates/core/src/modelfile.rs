//! JSON model files.
//!
//! ```json
//! {
//!   "components": [
//!     {"name": "pathloss", "distribution": {"family": "exponential", "moments": {"mean": 1, "variance": 1}}},
//!     {"name": "multipath", "distribution": {"family": "rayleigh", "parameters": {"scale": 2}}}
//!   ],
//!   "structure": {"series": ["pathloss", "multipath"]},
//!   "grid": {"t_max": 5, "steps": 500},
//!   "deadlines": [0.5, 1, 2],
//!   "retransmissions": 1
//! }
//! ```
//!
//! A distribution gives either `parameters` or `moments`, never both.
//! Parameter names per family: `rate`; `mu`, `sigma`; `scale`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::lifedist::{Kind, LifeDistribution, Moments, Params};
use crate::numerics::{Grid, GridSpec};
use crate::rbd::{validate, Component, RbdNode, SystemModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub components: Vec<ComponentEntry>,
    pub structure: RbdNode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadlines: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retransmissions: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub name: String,
    pub distribution: DistributionEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionEntry {
    pub family: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Moments>,
}

/// A model file resolved into a validated model plus its analysis options.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedModel {
    pub model: SystemModel,
    pub grid: Option<Grid>,
    pub deadlines: Option<Vec<f64>>,
    pub retransmissions: Option<usize>,
}

fn param_names(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Exponential => &["rate"],
        Kind::LogNormal => &["mu", "sigma"],
        Kind::Rayleigh => &["scale"],
    }
}

impl DistributionEntry {
    pub fn from_distribution(d: &LifeDistribution) -> Self {
        let parameters: BTreeMap<String, f64> = match d.params() {
            Params::Exponential { rate } => [("rate", rate)].into_iter(),
            Params::Rayleigh { scale } => [("scale", scale)].into_iter(),
            Params::LogNormal { mu, sigma } => {
                return Self {
                    family: Kind::LogNormal,
                    parameters: Some([("mu".to_string(), mu), ("sigma".to_string(), sigma)].into()),
                    moments: None,
                }
            }
        }
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self { family: d.kind(), parameters: Some(parameters), moments: None }
    }

    fn resolve(&self, component: &str) -> std::result::Result<LifeDistribution, String> {
        let ctx = |msg: String| format!("component \"{component}\": {msg}");
        match (&self.parameters, &self.moments) {
            (Some(_), Some(_)) => Err(ctx("distribution gives both parameters and moments".into())),
            (None, None) => Err(ctx("distribution needs parameters or moments".into())),
            (None, Some(m)) => LifeDistribution::from_moments(self.family, *m).map_err(|e| ctx(e.to_string())),
            (Some(p), None) => {
                let expected = param_names(self.family);
                let unexpected: Vec<&str> =
                    p.keys().map(String::as_str).filter(|k| !expected.contains(k)).collect();
                if !unexpected.is_empty() {
                    return Err(ctx(format!(
                        "unexpected {} parameter(s) {:?}; expected {:?}",
                        self.family, unexpected, expected
                    )));
                }
                let get = |k: &str| p.get(k).copied().ok_or_else(|| ctx(format!("missing parameter \"{k}\"")));
                let params = match self.family {
                    Kind::Exponential => Params::Exponential { rate: get("rate")? },
                    Kind::LogNormal => Params::LogNormal { mu: get("mu")?, sigma: get("sigma")? },
                    Kind::Rayleigh => Params::Rayleigh { scale: get("scale")? },
                };
                LifeDistribution::new(params).map_err(|e| ctx(e.to_string()))
            }
        }
    }
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical form of an in-memory model, distributions in parameter form.
    pub fn from_loaded(m: &LoadedModel) -> Self {
        Self {
            components: m
                .model
                .components()
                .iter()
                .map(|c| ComponentEntry {
                    name: c.name.clone(),
                    distribution: DistributionEntry::from_distribution(&c.dist),
                })
                .collect(),
            structure: m.model.structure().clone(),
            grid: m.grid.as_ref().map(Grid::spec),
            deadlines: m.deadlines.clone(),
            retransmissions: m.retransmissions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file serializes")
    }

    /// Resolves distributions and validates the structure, collecting every
    /// problem before failing.
    pub fn resolve(&self) -> Result<LoadedModel> {
        let mut violations = Vec::new();
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            match c.distribution.resolve(&c.name) {
                Ok(d) => components.push(Component::new(c.name.clone(), d)),
                Err(msg) => {
                    violations.push(Violation::Definition(msg));
                    // placeholder keeps name-level checks meaningful
                    components.push(Component::new(
                        c.name.clone(),
                        LifeDistribution::exponential(1.0).expect("valid"),
                    ));
                }
            }
        }
        violations.extend(validate(&components, &self.structure));

        let grid = match self.grid {
            Some(spec) => match Grid::try_from(spec) {
                Ok(g) => Some(g),
                Err(e) => {
                    violations.push(Violation::Definition(e.to_string()));
                    None
                }
            },
            None => None,
        };
        if let Some(ds) = &self.deadlines {
            for d in ds {
                if !(d.is_finite() && *d >= 0.0) {
                    violations.push(Violation::Definition(format!("deadline must be non-negative, got {d}")));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        Ok(LoadedModel {
            model: SystemModel::new(components, self.structure.clone())?,
            grid,
            deadlines: self.deadlines.clone(),
            retransmissions: self.retransmissions,
        })
    }
}

/// Parses and resolves a model file in one step.
pub fn load_str(text: &str) -> Result<LoadedModel> {
    ModelFile::parse(text)?.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_ONE: &str = r#"{
      "components": [
        {"name": "pathloss", "distribution": {"family": "exponential", "moments": {"mean": 1, "variance": 1}}},
        {"name": "shadowing", "distribution": {"family": "lognormal",
            "moments": {"mean": 20.085536923187668, "variance": 21623.03700131398}}},
        {"name": "multipath", "distribution": {"family": "rayleigh",
            "moments": {"mean": 2.5066282746310002, "variance": 1.7168146928204138}}}
      ],
      "structure": {"series": ["pathloss", "shadowing", "multipath"]},
      "retransmissions": 1
    }"#;

    #[test]
    fn moments_form_resolves_to_canonical_parameters() {
        let m = load_str(TABLE_ONE).unwrap();
        let p: Vec<Params> = m.model.components().iter().map(|c| c.dist.params()).collect();
        let Params::LogNormal { mu, sigma } = p[1] else { panic!() };
        assert!((mu - 1.0).abs() < 1e-9 && (sigma - 2.0).abs() < 1e-9);
        let Params::Rayleigh { scale } = p[2] else { panic!() };
        assert!((scale - 2.0).abs() < 1e-12);
        assert_eq!(p[0], Params::Exponential { rate: 1.0 });
        assert_eq!(m.retransmissions, Some(1));
        assert_eq!(m.grid, None);
    }

    #[test]
    fn export_round_trip() {
        let m = load_str(TABLE_ONE).unwrap();
        let text = ModelFile::from_loaded(&m).to_json();
        let back = load_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(ModelFile::from_loaded(&back).to_json(), text);
    }

    #[test]
    fn parameters_and_moments_conflict() {
        let text = r#"{"components":[{"name":"a","distribution":{"family":"exponential",
            "parameters":{"rate":1},"moments":{"mean":1,"variance":1}}}],"structure":"a"}"#;
        let Err(Error::InvalidModel(v)) = load_str(text) else { panic!() };
        assert!(v[0].to_string().contains("both parameters and moments"));
    }

    #[test]
    fn collects_all_violations() {
        let text = r#"{"components":[
            {"name":"a","distribution":{"family":"rayleigh","parameters":{"scale":-1}}},
            {"name":"b","distribution":{"family":"lognormal","parameters":{"mu":0}}},
            {"name":"c","distribution":{"family":"exponential","parameters":{"rate":1,"shape":2}}}],
            "structure":{"series":["a","b","c","doppler"]},
            "grid":{"t_max":0,"steps":10},
            "deadlines":[-1]}"#;
        let Err(Error::InvalidModel(v)) = load_str(text) else { panic!() };
        let all: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert_eq!(all.len(), 6, "{all:#?}");
        assert!(all.iter().any(|s| s.contains("scale must be positive")));
        assert!(all.iter().any(|s| s.contains("missing parameter \"sigma\"")));
        assert!(all.iter().any(|s| s.contains("unexpected exponential parameter")));
        assert!(all.iter().any(|s| s.contains("unknown component \"doppler\"")));
        assert!(all.iter().any(|s| s.contains("t_max")));
        assert!(all.iter().any(|s| s.contains("deadline")));
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(load_str("{"), Err(Error::Parse(_))));
        assert!(matches!(load_str(r#"{"components":[],"structure":"a","extra":1}"#), Err(Error::Parse(_))));
    }
}
