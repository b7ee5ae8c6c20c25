use std::fmt;

use thiserror::Error;

/// A single structural problem found while validating a [`SystemModel`](crate::rbd::SystemModel).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownComponent(String),
    DuplicateReference(String),
    DuplicateComponentName(String),
    EmptyComponentName,
    EmptySeries,
    ParallelTooSmall { children: usize },
    UnusedComponent(String),
    /// Model-file level problem (bad family, conflicting parameter forms, ...).
    Definition(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownComponent(n) => write!(f, "unknown component \"{n}\""),
            Violation::DuplicateReference(n) => write!(f, "duplicate reference to \"{n}\""),
            Violation::DuplicateComponentName(n) => write!(f, "duplicate component name \"{n}\""),
            Violation::EmptyComponentName => write!(f, "component name is empty"),
            Violation::EmptySeries => write!(f, "series group has no children"),
            Violation::ParallelTooSmall { children } => {
                write!(f, "parallel group needs at least 2 children, found {children}")
            }
            Violation::UnusedComponent(n) => {
                write!(f, "component \"{n}\" is declared but never referenced")
            }
            Violation::Definition(msg) => f.write_str(msg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("hazard undefined at t = {t}: survival underflowed")]
    HazardUndefined { t: f64 },

    #[error("no distribution matches the given moments: {0}")]
    NoSolution(String),

    #[error("quadrature failed to converge (partial value {partial}, error estimate {est_error})")]
    QuadratureFailure { partial: f64, est_error: f64 },

    #[error("invalid model:{}", list(.0))]
    InvalidModel(Vec<Violation>),

    #[error("unknown component \"{0}\"")]
    UnknownComponent(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("malformed model file: {0}")]
    Parse(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| format!("\n  - {x}")).collect()
}

pub type Result<T> = std::result::Result<T, Error>;
