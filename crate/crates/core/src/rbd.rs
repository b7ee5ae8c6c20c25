//! Reliability block diagrams of independent components.
//!
//! A [`SystemModel`] pairs a list of named components with a series/parallel
//! tree. Each component must appear exactly once in the tree: the product
//! formulas below assume statistically independent blocks, and a repeated
//! block would silently violate that.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::lifedist::LifeDistribution;
use crate::numerics;

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub name: String,
    pub dist: LifeDistribution,
}

impl Component {
    pub fn new(name: impl Into<String>, dist: LifeDistribution) -> Self {
        Self { name: name.into(), dist }
    }
}

/// Block-diagram structure referencing components by name.
///
/// Serializes as a bare string for a leaf, `{"series": [...]}` or
/// `{"parallel": [...]}` for groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RbdNode {
    Leaf(String),
    Group(Group),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Series(Vec<RbdNode>),
    Parallel(Vec<RbdNode>),
}

impl RbdNode {
    pub fn leaf(name: impl Into<String>) -> Self {
        RbdNode::Leaf(name.into())
    }

    pub fn series(children: Vec<RbdNode>) -> Self {
        RbdNode::Group(Group::Series(children))
    }

    pub fn parallel(children: Vec<RbdNode>) -> Self {
        RbdNode::Group(Group::Parallel(children))
    }

    fn collect_violations(&self, known: &HashSet<&str>, seen: &mut HashSet<String>, out: &mut Vec<Violation>) {
        match self {
            RbdNode::Leaf(name) => {
                if !known.contains(name.as_str()) {
                    out.push(Violation::UnknownComponent(name.clone()));
                } else if !seen.insert(name.clone()) {
                    out.push(Violation::DuplicateReference(name.clone()));
                }
            }
            RbdNode::Group(Group::Series(children)) => {
                if children.is_empty() {
                    out.push(Violation::EmptySeries);
                }
                for c in children {
                    c.collect_violations(known, seen, out);
                }
            }
            RbdNode::Group(Group::Parallel(children)) => {
                if children.len() < 2 {
                    out.push(Violation::ParallelTooSmall { children: children.len() });
                }
                for c in children {
                    c.collect_violations(known, seen, out);
                }
            }
        }
    }

    fn rename(&self, f: &impl Fn(&str) -> String) -> RbdNode {
        match self {
            RbdNode::Leaf(n) => RbdNode::Leaf(f(n)),
            RbdNode::Group(Group::Series(c)) => RbdNode::series(c.iter().map(|x| x.rename(f)).collect()),
            RbdNode::Group(Group::Parallel(c)) => RbdNode::parallel(c.iter().map(|x| x.rename(f)).collect()),
        }
    }
}

/// Binary state of a transmission at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateVariable {
    Failed = 0,
    Operational = 1,
}

impl StateVariable {
    pub fn value(self) -> u8 {
        self as u8
    }

    /// State at `t` of an item whose time to failure is `ttf`.
    pub fn at(ttf: f64, t: f64) -> Self {
        if ttf > t {
            StateVariable::Operational
        } else {
            StateVariable::Failed
        }
    }
}

/// Index-resolved form of [`RbdNode`].
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Compiled {
    Leaf(usize),
    Series(Vec<Compiled>),
    Parallel(Vec<Compiled>),
}

impl Compiled {
    fn build(node: &RbdNode, index: &HashMap<&str, usize>) -> Self {
        match node {
            RbdNode::Leaf(n) => Compiled::Leaf(index[n.as_str()]),
            RbdNode::Group(Group::Series(c)) => Compiled::Series(c.iter().map(|x| Self::build(x, index)).collect()),
            RbdNode::Group(Group::Parallel(c)) => {
                Compiled::Parallel(c.iter().map(|x| Self::build(x, index)).collect())
            }
        }
    }

    fn has_parallel(&self) -> bool {
        match self {
            Compiled::Leaf(_) => false,
            Compiled::Series(c) => c.iter().any(Compiled::has_parallel),
            Compiled::Parallel(_) => true,
        }
    }

    /// Survival algebra: product over series, complement product over parallel.
    pub(crate) fn reliability(&self, leaf: &impl Fn(usize) -> f64) -> f64 {
        match self {
            Compiled::Leaf(i) => leaf(*i),
            Compiled::Series(c) => c.iter().map(|x| x.reliability(leaf)).product(),
            Compiled::Parallel(c) => 1.0 - c.iter().map(|x| 1.0 - x.reliability(leaf)).product::<f64>(),
        }
    }

    /// Structure function on lifetimes: min over series, max over parallel.
    pub(crate) fn lifetime(&self, times: &[f64]) -> f64 {
        match self {
            Compiled::Leaf(i) => times[*i],
            Compiled::Series(c) => c.iter().map(|x| x.lifetime(times)).fold(f64::INFINITY, f64::min),
            Compiled::Parallel(c) => c.iter().map(|x| x.lifetime(times)).fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Collects every invariant violation of a candidate model.
pub fn validate(components: &[Component], structure: &RbdNode) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut known = HashSet::new();
    for c in components {
        if c.name.trim().is_empty() {
            out.push(Violation::EmptyComponentName);
        } else if !known.insert(c.name.as_str()) {
            out.push(Violation::DuplicateComponentName(c.name.clone()));
        }
    }
    let mut seen = HashSet::new();
    structure.collect_violations(&known, &mut seen, &mut out);
    let mut reported = HashSet::new();
    for c in components {
        if known.contains(c.name.as_str()) && !seen.contains(&c.name) && reported.insert(&c.name) {
            out.push(Violation::UnusedComponent(c.name.clone()));
        }
    }
    out
}

/// A validated block diagram. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    components: Vec<Component>,
    structure: RbdNode,
    compiled: Compiled,
}

impl SystemModel {
    /// Validates and builds a model; on failure returns every violation found.
    pub fn new(components: Vec<Component>, structure: RbdNode) -> Result<Self> {
        let violations = validate(&components, &structure);
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        let index: HashMap<&str, usize> = components.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
        let compiled = Compiled::build(&structure, &index);
        Ok(Self { components, structure, compiled })
    }

    /// Series connection of all components in declaration order.
    pub fn series(components: Vec<Component>) -> Result<Self> {
        let structure = RbdNode::series(components.iter().map(|c| RbdNode::leaf(&c.name)).collect());
        Self::new(components, structure)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn structure(&self) -> &RbdNode {
        &self.structure
    }

    pub(crate) fn compiled(&self) -> &Compiled {
        &self.compiled
    }

    pub fn component_index(&self, name: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownComponent(name.to_string()))
    }

    /// True when the tree has no parallel group anywhere, so system hazard is
    /// the sum of component hazards.
    pub fn is_pure_series(&self) -> bool {
        !self.compiled.has_parallel()
    }

    /// `R_w(t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.survival_unchecked(t))
    }

    pub(crate) fn survival_unchecked(&self, t: f64) -> f64 {
        self.compiled.reliability(&|i| self.components[i].dist.survival_unchecked(t))
    }

    /// System survival with component `pinned` forced to survival `value`.
    pub(crate) fn survival_pinned(&self, t: f64, pinned: usize, value: f64) -> f64 {
        self.compiled.reliability(&|i| {
            if i == pinned {
                value
            } else {
                self.components[i].dist.survival_unchecked(t)
            }
        })
    }

    /// `Σ λᵢ(t)` over all components.
    pub fn component_hazard_sum(&self, t: f64) -> Result<f64> {
        self.components.iter().map(|c| c.dist.hazard(t)).sum()
    }

    /// Density of the system time to failure, `f_w = -dR_w/dt`.
    ///
    /// Pure series structures use `R_w · Σ λᵢ`; anything with a parallel
    /// group falls back to a finite difference of `R_w`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        if let Compiled::Leaf(i) = self.compiled {
            return self.components[i].dist.pdf(t);
        }
        let f = if self.is_pure_series() {
            self.survival_unchecked(t) * self.component_hazard_sum(t)?
        } else {
            -numerics::derivative(|s| self.survival_unchecked(s), t)
        };
        Ok(if f.abs() < 1e-12 { 0.0 } else { f.max(0.0) })
    }

    /// System hazard `f_w / R_w`.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let r = self.survival(t)?;
        if r <= 1e-12 {
            return Err(Error::HazardUndefined { t });
        }
        Ok(self.pdf(t)? / r)
    }

    /// System hazard computed purely from a finite difference of `R_w`,
    /// regardless of structure. Used to cross-check the analytic path.
    pub fn hazard_numeric(&self, t: f64) -> Result<f64> {
        let r = self.survival(t)?;
        if r <= 1e-12 {
            return Err(Error::HazardUndefined { t });
        }
        Ok(-numerics::derivative(|s| self.survival_unchecked(s), t) / r)
    }

    /// Probability that the transmission fails before `deadline`.
    pub fn failure_before(&self, deadline: f64) -> Result<f64> {
        Ok(1.0 - self.survival(deadline)?)
    }

    /// System lifetime given one lifetime per component (declaration order).
    pub fn system_lifetime(&self, component_times: &[f64]) -> f64 {
        assert_eq!(component_times.len(), self.components.len(), "one lifetime per component");
        self.compiled.lifetime(component_times)
    }

    /// Parallel composition of `copies` independent replicas of this model.
    ///
    /// Components of replica `k` (1-based) are renamed `<name>.tx<k>`.
    pub fn with_retransmission(&self, copies: usize) -> Result<SystemModel> {
        if copies < 2 {
            return Err(Error::InvalidParameter(format!("retransmission needs at least 2 copies, got {copies}")));
        }
        let mut components = Vec::with_capacity(self.components.len() * copies);
        let mut branches = Vec::with_capacity(copies);
        for k in 1..=copies {
            let suffix = |n: &str| format!("{n}.tx{k}");
            components.extend(self.components.iter().map(|c| Component::new(suffix(&c.name), c.dist)));
            branches.push(self.structure.rename(&suffix));
        }
        SystemModel::new(components, RbdNode::parallel(branches))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table_one() -> SystemModel {
        SystemModel::series(vec![
            Component::new("pathloss", LifeDistribution::exponential(1.0).unwrap()),
            Component::new("shadowing", LifeDistribution::lognormal(1.0, 2.0).unwrap()),
            Component::new("multipath", LifeDistribution::rayleigh(2.0).unwrap()),
        ])
        .unwrap()
    }

    // 30-digit reference values for the three-component series system.
    const R_AT_1: f64 = 0.224_484_994_138_285_7;
    const HAZ_AT_1: f64 = 1.504_580_216_918_516_7;
    const PDF_AT_1: f64 = 0.337_755_681_175_533_86;
    const HAZ_AT_2: f64 = 1.675_711_281_829_819_7;

    #[test]
    fn baseline_validates() {
        let m = table_one();
        assert_eq!(m.components().len(), 3);
        assert!(m.is_pure_series());
    }

    #[test]
    fn unknown_leaf_reported() {
        let comps = vec![Component::new("a", LifeDistribution::exponential(1.0).unwrap())];
        let err = SystemModel::new(comps, RbdNode::series(vec![RbdNode::leaf("a"), RbdNode::leaf("doppler")]))
            .unwrap_err();
        let Error::InvalidModel(v) = err else { panic!() };
        assert_eq!(v, vec![Violation::UnknownComponent("doppler".into())]);
        assert!(v[0].to_string().contains("unknown component"));
    }

    #[test]
    fn duplicate_reference_reported() {
        let comps = vec![
            Component::new("a", LifeDistribution::exponential(1.0).unwrap()),
            Component::new("b", LifeDistribution::exponential(1.0).unwrap()),
        ];
        let s = RbdNode::series(vec![RbdNode::leaf("a"), RbdNode::leaf("a"), RbdNode::leaf("b")]);
        let Error::InvalidModel(v) = SystemModel::new(comps, s).unwrap_err() else { panic!() };
        assert_eq!(v, vec![Violation::DuplicateReference("a".into())]);
        assert!(v[0].to_string().contains("duplicate reference"));
    }

    #[test]
    fn all_violations_listed() {
        let d = LifeDistribution::exponential(1.0).unwrap();
        let comps = vec![
            Component::new("a", d),
            Component::new("a", d),
            Component::new("  ", d),
            Component::new("c", d),
        ];
        let s = RbdNode::series(vec![
            RbdNode::parallel(vec![RbdNode::leaf("a")]),
            RbdNode::series(vec![]),
            RbdNode::leaf("x"),
        ]);
        let Error::InvalidModel(v) = SystemModel::new(comps, s).unwrap_err() else { panic!() };
        assert!(v.contains(&Violation::DuplicateComponentName("a".into())));
        assert!(v.contains(&Violation::EmptyComponentName));
        assert!(v.contains(&Violation::ParallelTooSmall { children: 1 }));
        assert!(v.contains(&Violation::EmptySeries));
        assert!(v.contains(&Violation::UnknownComponent("x".into())));
        assert!(v.contains(&Violation::UnusedComponent("c".into())));
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn structure_json_shape() {
        let s: RbdNode = serde_json::from_str(r#"{"parallel":[{"series":["a","b"]},"c"]}"#).unwrap();
        assert_eq!(
            s,
            RbdNode::parallel(vec![RbdNode::series(vec![RbdNode::leaf("a"), RbdNode::leaf("b")]), RbdNode::leaf("c")])
        );
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"parallel":[{"series":["a","b"]},"c"]}"#);
    }

    #[test]
    fn series_survival_examples() {
        let m = table_one();
        assert_eq!(m.survival(0.0).unwrap(), 1.0);
        assert_relative_eq!(m.survival(1.0).unwrap(), R_AT_1, max_relative = 1e-12);
        assert!(m.survival(-1.0).is_err());
    }

    #[test]
    fn parallel_of_two_series() {
        let m = table_one().with_retransmission(2).unwrap();
        assert_eq!(m.components().len(), 6);
        assert!(!m.is_pure_series());
        assert_relative_eq!(m.survival(1.0).unwrap(), 0.398_576_475_683_305_24, max_relative = 1e-12);
        assert_eq!(m.components()[0].name, "pathloss.tx1");
        assert_eq!(m.components()[5].name, "multipath.tx2");
    }

    #[test]
    fn pdf_examples() {
        let m = table_one();
        assert_relative_eq!(m.pdf(1.0).unwrap(), PDF_AT_1, max_relative = 1e-12);

        let d = LifeDistribution::lognormal(0.3, 0.7).unwrap();
        let single = SystemModel::series(vec![Component::new("x", d)]).unwrap();
        let leaf = SystemModel::new(vec![Component::new("x", d)], RbdNode::leaf("x")).unwrap();
        for t in [0.1, 1.0, 3.3] {
            assert_relative_eq!(single.pdf(t).unwrap(), d.pdf(t).unwrap(), max_relative = 1e-14);
            assert_eq!(leaf.pdf(t).unwrap(), d.pdf(t).unwrap());
        }

        let r = SystemModel::series(vec![Component::new("m", LifeDistribution::rayleigh(2.0).unwrap())]).unwrap();
        assert_eq!(r.pdf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn hazard_examples() {
        let m = table_one();
        assert_relative_eq!(m.hazard(1.0).unwrap(), HAZ_AT_1, max_relative = 1e-12);
        assert_relative_eq!(m.hazard(2.0).unwrap(), HAZ_AT_2, max_relative = 1e-12);
        let e = SystemModel::series(vec![Component::new("e", LifeDistribution::exponential(1.0).unwrap())]).unwrap();
        for t in [0.0, 0.5, 3.0, 20.0] {
            assert_relative_eq!(e.hazard(t).unwrap(), 1.0, max_relative = 1e-12);
        }
        assert!(matches!(m.hazard(40.0), Err(Error::HazardUndefined { .. })));
    }

    #[test]
    fn failure_before_examples() {
        let m = table_one();
        assert_eq!(m.failure_before(0.0).unwrap(), 0.0);
        assert_relative_eq!(m.failure_before(1.0).unwrap(), 0.775_515_005_861_714_3, max_relative = 1e-12);
        assert!((m.failure_before(60.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn retransmission_algebra() {
        let m = table_one();
        let r2 = m.with_retransmission(2).unwrap();
        let r3 = m.with_retransmission(3).unwrap();
        for i in 0..=100 {
            let t = i as f64 * 0.05;
            let r = m.survival(t).unwrap();
            assert!((r2.survival(t).unwrap() - (1.0 - (1.0 - r).powi(2))).abs() < 1e-12);
            assert!((r3.survival(t).unwrap() - (1.0 - (1.0 - r).powi(3))).abs() < 1e-12);
        }
        assert!(m.with_retransmission(1).is_err());
    }

    #[test]
    fn lifetime_folding() {
        let d = LifeDistribution::exponential(1.0).unwrap();
        let comps = |names: &[&str]| names.iter().map(|n| Component::new(*n, d)).collect::<Vec<_>>();

        let s = SystemModel::series(comps(&["a", "b", "c"])).unwrap();
        assert_eq!(s.system_lifetime(&[2.0, 0.5, 1.5]), 0.5);

        let p = SystemModel::new(comps(&["a", "b"]), RbdNode::parallel(vec![RbdNode::leaf("a"), RbdNode::leaf("b")]))
            .unwrap();
        assert_eq!(p.system_lifetime(&[2.0, 0.5]), 2.0);

        let nested = SystemModel::new(
            comps(&["a", "b", "c", "d"]),
            RbdNode::parallel(vec![
                RbdNode::series(vec![RbdNode::leaf("a"), RbdNode::leaf("b")]),
                RbdNode::series(vec![RbdNode::leaf("c"), RbdNode::leaf("d")]),
            ]),
        )
        .unwrap();
        assert_eq!(nested.system_lifetime(&[1.0, 3.0, 2.0, 0.5]), 1.0);
        assert_eq!(StateVariable::at(1.0, 0.5).value(), 1);
        assert_eq!(StateVariable::at(1.0, 1.0).value(), 0);
    }

    #[test]
    fn analytic_and_numeric_hazard_agree() {
        let m = table_one();
        for i in 0..=500 {
            let t = i as f64 * 0.01;
            let a = m.hazard(t).unwrap();
            let n = m.hazard_numeric(t).unwrap();
            assert!(((a - n) / a).abs() < 1e-6, "t={t}: {a} vs {n}");
        }
    }
}
