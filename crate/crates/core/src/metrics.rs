//! System-level analytics: mean time to failure, importance measures,
//! failure-before-deadline tables and sampled curves.
//!
//! Importance measures pin one component's survival to a constant inside the
//! structure recursion. With independent components this gives
//! `p_i(t) = R_w | R_i = 1` and `q_i(t) = R_w | R_i = 0` exactly.

use serde::Serialize;

use crate::curve::CurveSet;
use crate::error::Result;
use crate::numerics::{self, Grid, QuadratureResult};
use crate::par;
use crate::rbd::SystemModel;

/// Report times used for ranked importance summaries.
pub const DEFAULT_REPORT_TIMES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const DEFAULT_DEADLINES: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEFAULT_GRID_TMAX: f64 = 5.0;
pub const DEFAULT_GRID_STEPS: usize = 500;

pub fn default_grid() -> Grid {
    Grid::new(DEFAULT_GRID_TMAX, DEFAULT_GRID_STEPS).expect("default grid is valid")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceRow {
    pub component_name: String,
    pub t: f64,
    pub birnbaum: f64,
    pub improvement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeadlineFailure {
    pub deadline: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub mean_tttf: f64,
    pub mean_tttf_error: f64,
    pub deadline_failures: Vec<DeadlineFailure>,
    pub importance: Vec<ImportanceRow>,
    pub curves: CurveSet,
}

/// Mean time to failure, `∫₀^∞ R_w(t) dt`.
pub fn mean_tttf(model: &SystemModel) -> Result<QuadratureResult> {
    numerics::integrate_survival(|t| model.survival_unchecked(t))
}

fn check_t(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(crate::Error::NegativeTime(t))
    }
}

/// System survival at `t` with `component`'s survival forced to `value`.
///
/// `value = 1` gives `p_i(t)`, `value = 0` gives `q_i(t)`.
pub fn pinned_survival(model: &SystemModel, component: &str, t: f64, value: f64) -> Result<f64> {
    let i = model.component_index(component)?;
    check_t(t)?;
    Ok(model.survival_pinned(t, i, value))
}

/// Birnbaum importance `p_i(t) - q_i(t)`.
pub fn birnbaum(model: &SystemModel, component: &str, t: f64) -> Result<f64> {
    let i = model.component_index(component)?;
    check_t(t)?;
    Ok(model.survival_pinned(t, i, 1.0) - model.survival_pinned(t, i, 0.0))
}

/// Improvement potential `p_i(t) - R_w(t)`.
pub fn improvement(model: &SystemModel, component: &str, t: f64) -> Result<f64> {
    let i = model.component_index(component)?;
    check_t(t)?;
    Ok(model.survival_pinned(t, i, 1.0) - model.survival_unchecked(t))
}

fn rows_at(model: &SystemModel, t: f64) -> Vec<ImportanceRow> {
    let base = model.survival_unchecked(t);
    let mut rows: Vec<ImportanceRow> = model
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = model.survival_pinned(t, i, 1.0);
            let q = model.survival_pinned(t, i, 0.0);
            ImportanceRow { component_name: c.name.clone(), t, birnbaum: p - q, improvement: p - base }
        })
        .collect();
    // stable: ties keep declaration order
    rows.sort_by(|a, b| b.birnbaum.total_cmp(&a.birnbaum));
    rows
}

/// Both importance measures for every component at every time in `times`.
///
/// Rows are ordered by time, then by descending Birnbaum importance.
pub fn importance_at(model: &SystemModel, times: &[f64]) -> Result<Vec<ImportanceRow>> {
    for &t in times {
        check_t(t)?;
    }
    Ok(par::map(times, |&t| rows_at(model, t)).into_iter().flatten().collect())
}

pub fn importance_ranking(model: &SystemModel, grid: &Grid) -> Vec<ImportanceRow> {
    par::map(grid.points(), |&t| rows_at(model, t)).into_iter().flatten().collect()
}

/// `R_w`, `λ_w` and `f_w` on `grid`.
pub fn curves(model: &SystemModel, grid: &Grid) -> Result<CurveSet> {
    let rows = par::try_map(grid.points(), |&t| -> Result<(f64, f64, f64)> {
        let r = model.survival(t)?;
        let f = model.pdf(t)?;
        let h = model.hazard(t)?;
        Ok((r, h, f))
    })?;
    let (mut s, mut h, mut f) = (Vec::with_capacity(rows.len()), Vec::new(), Vec::new());
    for (r, hz, pd) in rows {
        s.push(r);
        h.push(hz);
        f.push(pd);
    }
    Ok(CurveSet::new(grid.clone(), s, h, f))
}

pub fn deadline_failures(model: &SystemModel, deadlines: &[f64]) -> Result<Vec<DeadlineFailure>> {
    deadlines
        .iter()
        .map(|&d| Ok(DeadlineFailure { deadline: d, probability: model.failure_before(d)? }))
        .collect()
}

/// Full analytic report for one model.
pub fn analyze(model: &SystemModel, grid: &Grid, deadlines: &[f64]) -> Result<AnalysisReport> {
    let q = mean_tttf(model)?;
    Ok(AnalysisReport {
        mean_tttf: q.value,
        mean_tttf_error: q.est_error,
        deadline_failures: deadline_failures(model, deadlines)?,
        importance: importance_ranking(model, grid),
        curves: curves(model, grid)?,
    })
}
