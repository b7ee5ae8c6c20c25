//! Reliability analysis of wireless transmissions modelled as block diagrams
//! of fading components.
//!
//! Life distributions for pathloss (exponential), shadowing (log-normal) and
//! multipath fading (Rayleigh) are combined in series/parallel
//! [`SystemModel`]s. From a model the crate computes system survival, hazard
//! and failure density, mean transmission time to failure, failure-before-
//! deadline probabilities and Birnbaum / improvement importance. A Monte Carlo
//! structure-function simulator ([`mcsim`]) cross-checks the analytic results.
//!
//! With the default `parallel` feature, grid sweeps and simulation chunks run
//! on rayon; without it everything runs on the calling thread. Results are
//! identical either way.

pub mod curve;
pub mod error;
pub mod lifedist;
pub mod mcsim;
pub mod metrics;
pub mod modelfile;
pub mod numerics;
mod par;
pub mod rbd;

pub use curve::{CurveKind, CurveSet, SurvivalCurve};
pub use error::{Error, Result, Violation};
pub use lifedist::{Kind, LifeDistribution, Moments, Params};
pub use mcsim::{McConfig, McResult};
pub use metrics::{AnalysisReport, DeadlineFailure, ImportanceRow};
pub use numerics::{Grid, QuadratureResult};
pub use rbd::{Component, RbdNode, StateVariable, SystemModel};

/// The three-component fading link used throughout the examples: exponential
/// pathloss (rate 1), log-normal shadowing (mu 1, sigma 2) and Rayleigh
/// multipath (scale 2) in series.
pub fn fading_link() -> SystemModel {
    SystemModel::series(vec![
        Component::new("pathloss", LifeDistribution::exponential(1.0).expect("valid")),
        Component::new("shadowing", LifeDistribution::lognormal(1.0, 2.0).expect("valid")),
        Component::new("multipath", LifeDistribution::rayleigh(2.0).expect("valid")),
    ])
    .expect("valid model")
}
