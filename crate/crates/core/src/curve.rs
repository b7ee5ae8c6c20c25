use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Survival,
    Hazard,
    Pdf,
}

/// A function of time sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalCurve {
    pub kind: CurveKind,
    grid: Grid,
    values: Vec<f64>,
}

impl SurvivalCurve {
    pub fn new(kind: CurveKind, grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "curve has {} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { kind, grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }
}

/// Survival, hazard and density of one system on a shared grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSet {
    grid: Grid,
    pub survival: Vec<f64>,
    pub hazard: Vec<f64>,
    pub pdf: Vec<f64>,
}

impl CurveSet {
    pub(crate) fn new(grid: Grid, survival: Vec<f64>, hazard: Vec<f64>, pdf: Vec<f64>) -> Self {
        debug_assert!(survival.len() == grid.len() && hazard.len() == grid.len() && pdf.len() == grid.len());
        Self { grid, survival, hazard, pdf }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn curve(&self, kind: CurveKind) -> SurvivalCurve {
        let values = match kind {
            CurveKind::Survival => &self.survival,
            CurveKind::Hazard => &self.hazard,
            CurveKind::Pdf => &self.pdf,
        };
        SurvivalCurve { kind, grid: self.grid.clone(), values: values.clone() }
    }

    /// Rows of `(t, survival, hazard, pdf)`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.grid.len()).map(|i| (self.grid.points()[i], self.survival[i], self.hazard[i], self.pdf[i]))
    }
}
