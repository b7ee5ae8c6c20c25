//! Quadrature, differentiation and evaluation grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Survival level below which the integration range is truncated.
pub const TAIL_CUTOFF: f64 = 1e-9;
/// Absolute tolerance on the successive-refinement difference.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Maximum bisection depth for any subinterval.
pub const MAX_REFINEMENT_LEVELS: u32 = 24;

const INITIAL_PANELS: usize = 8;
// 2^64: no proper survival function stays above the cutoff this long.
const MAX_TRUNCATION: f64 = 18_446_744_073_709_551_616.0;

/// Uniform time grid `0, t_max/steps, ..., t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    t_max: f64,
    steps: usize,
    points: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_max: f64,
    pub steps: usize,
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Self> {
        Grid::new(s.t_max, s.steps)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        g.spec()
    }
}

impl Grid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid(format!("t_max must be positive and finite, got {t_max}")));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!("steps must be at least 2, got {steps}")));
        }
        let dt = t_max / steps as f64;
        let mut points: Vec<f64> = (0..steps).map(|i| i as f64 * dt).collect();
        points.push(t_max);
        Ok(Self { t_max, steps, points })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec { t_max: self.t_max, steps: self.steps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub est_error: f64,
    pub truncation_point: f64,
}

#[derive(Default)]
struct Accum {
    value: f64,
    diff: f64,
    // |delta| summed over intervals that hit the depth limit unconverged
    unresolved: f64,
}

#[inline]
fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    acc: &mut Accum,
) {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        if depth == 0 && delta.abs() > 15.0 * tol {
            acc.unresolved += delta.abs();
        }
        acc.value += left + right + delta / 15.0;
        acc.diff += delta.abs();
        return;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
    refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

/// `∫₀^∞ f(t) dt` for a survival-shaped integrand (`f(0) = 1`, non-increasing).
///
/// The range is cut at the first `T = 2^k ≥ 1` with `f(T) < 1e-9`; `[0, T]` is
/// integrated by adaptive Simpson bisection. The returned error estimate is
/// the accumulated refinement difference plus the tail bound `f(T)·T`.
/// Intervals may bottom out at the depth limit (log-normal survival is not
/// smooth at 0); that is only an error once their combined difference
/// exceeds the overall tolerance.
pub fn integrate_survival<F: Fn(f64) -> f64>(f: F) -> Result<QuadratureResult> {
    let f0 = f(0.0);
    if (f0 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("survival integrand must equal 1 at t = 0, got {f0}")));
    }

    let mut t_star = 1.0;
    let mut f_star = f(t_star);
    while f_star.is_nan() || f_star >= TAIL_CUTOFF {
        t_star *= 2.0;
        if t_star > MAX_TRUNCATION || f_star.is_nan() {
            return Err(Error::QuadratureFailure { partial: f64::NAN, est_error: f64::INFINITY });
        }
        f_star = f(t_star);
    }

    let mut acc = Accum::default();
    let width = t_star / INITIAL_PANELS as f64;
    let tol = QUADRATURE_TOL / INITIAL_PANELS as f64;
    let mut fa = f0;
    for i in 0..INITIAL_PANELS {
        let a = i as f64 * width;
        let b = if i + 1 == INITIAL_PANELS { t_star } else { a + width };
        let fb = if i + 1 == INITIAL_PANELS { f_star } else { f(b) };
        let fm = f(0.5 * (a + b));
        let whole = simpson(b - a, fa, fm, fb);
        refine(&f, a, b, fa, fm, fb, whole, tol, MAX_REFINEMENT_LEVELS, &mut acc);
        fa = fb;
    }

    let est_error = acc.diff + f_star * t_star;
    if acc.unresolved > QUADRATURE_TOL {
        return Err(Error::QuadratureFailure { partial: acc.value, est_error });
    }
    Ok(QuadratureResult { value: acc.value, est_error, truncation_point: t_star })
}

/// Step used by [`derivative`] at time `t`.
pub fn derivative_step(t: f64) -> f64 {
    f64::max(1e-6, 1e-6 * t)
}

/// Finite-difference derivative: central where `t ≥ h`, forward otherwise.
pub fn derivative<F: Fn(f64) -> f64>(f: F, t: f64) -> f64 {
    let h = derivative_step(t);
    if t < h {
        (f(t + h) - f(t)) / h
    } else {
        (f(t + h) - f(t - h)) / (2.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifedist::LifeDistribution;
    use std::f64::consts::PI;

    #[test]
    fn grid_shape() {
        let g = Grid::new(5.0, 500).unwrap();
        assert_eq!(g.len(), 501);
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(*g.points().last().unwrap(), 5.0);
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
        let g = Grid::new(0.3, 7).unwrap();
        assert_eq!(*g.points().last().unwrap(), 0.3);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid::new(0.0, 10).is_err());
        assert!(Grid::new(-1.0, 10).is_err());
        assert!(Grid::new(f64::NAN, 10).is_err());
        assert!(Grid::new(1.0, 1).is_err());
    }

    #[test]
    fn grid_serde_validates() {
        let g: Grid = serde_json::from_str(r#"{"t_max":2.0,"steps":4}"#).unwrap();
        assert_eq!(g.points(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(serde_json::from_str::<Grid>(r#"{"t_max":2.0,"steps":1}"#).is_err());
    }

    #[test]
    fn unit_exponential_mean() {
        let d = LifeDistribution::exponential(1.0).unwrap();
        let q = integrate_survival(|t| d.survival(t).unwrap()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6, "{q:?}");
        assert!(q.truncation_point > 0.0);
        assert!(q.est_error.is_finite());
    }

    #[test]
    fn rayleigh_mean() {
        let d = LifeDistribution::rayleigh(2.0).unwrap();
        let q = integrate_survival(|t| d.survival(t).unwrap()).unwrap();
        assert!((q.value - 2.0 * (PI / 2.0).sqrt()).abs() < 1e-6, "{q:?}");
    }

    #[test]
    fn exponential_rates_within_error() {
        for rate in [0.1, 1.0, 10.0] {
            let d = LifeDistribution::exponential(rate).unwrap();
            let q = integrate_survival(|t| d.survival(t).unwrap()).unwrap();
            assert!((q.value - 1.0 / rate).abs() <= q.est_error, "rate {rate}: {q:?}");
        }
    }

    #[test]
    fn lognormal_heavy_tail_mean() {
        let d = LifeDistribution::lognormal(0.0, 1.0).unwrap();
        let q = integrate_survival(|t| d.survival(t).unwrap()).unwrap();
        let want = 0.5f64.exp();
        assert!((q.value - want).abs() <= q.est_error + 1e-7, "{q:?}");
    }

    #[test]
    fn lognormal_wide_sigma_converges() {
        // the first subinterval at 0 never meets its halved tolerance here
        for (mu, sigma) in [(0.7154107544500431, 1.499135560745585), (1.0, 2.0), (-1.0, 1.5)] {
            let d = LifeDistribution::lognormal(mu, sigma).unwrap();
            let q = integrate_survival(|t| d.survival(t).unwrap()).unwrap();
            let want = (mu + 0.5 * sigma * sigma).exp();
            assert!((q.value - want).abs() <= q.est_error, "{mu} {sigma}: {q:?}");
        }
    }

    #[test]
    fn unresolvable_integrand_fails() {
        let f = |t: f64| match t {
            t if t < 0.04 => 0.5 + 0.5 * (1e15 * t * t).cos(),
            t if t < 1.0 => 1.0,
            _ => 0.0,
        };
        assert!(matches!(integrate_survival(f), Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn rejects_non_survival_integrand() {
        assert!(integrate_survival(|_| 0.5).is_err());
        // never decays
        assert!(matches!(integrate_survival(|_| 1.0), Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn quadrature_is_deterministic() {
        let d = LifeDistribution::lognormal(1.0, 2.0).unwrap();
        let f = |t: f64| d.survival(t).unwrap() * (-t).exp();
        let a = integrate_survival(f).unwrap();
        let b = integrate_survival(f).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.est_error.to_bits(), b.est_error.to_bits());
    }

    #[test]
    fn derivative_examples() {
        assert!((derivative(|t| t * t, 3.0) - 6.0).abs() < 1e-4);
        let d = LifeDistribution::exponential(1.0).unwrap();
        let g = derivative(|t| d.survival(t).unwrap(), 1.0);
        assert!((g + (-1.0f64).exp()).abs() < 1e-5);
        assert!(derivative(|_| 4.2, 2.0).abs() < 1e-9);
        assert!(derivative(|_| 4.2, 0.0).abs() < 1e-9);
    }

    #[test]
    fn forward_difference_at_origin() {
        assert!((derivative(|t| 3.0 * t + 1.0, 0.0) - 3.0).abs() < 1e-8);
    }
}
