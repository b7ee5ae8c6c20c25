//! Parametric life distributions for fading components.
//!
//! Three families are supported, one per attenuation phenomenon:
//!
//! | family      | parameters          | survival `R(t)`                    |
//! |-------------|---------------------|------------------------------------|
//! | exponential | `rate`              | `exp(-rate t)`                     |
//! | log-normal  | `mu`, `sigma`       | `Φc((ln t - mu) / sigma)`          |
//! | Rayleigh    | `scale`             | `exp(-t² / (2 scale²))`            |
//!
//! Survival is always the primary quantity; the CDF is derived as `1 - R(t)`
//! so the two sum to one exactly.

pub mod normal;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the moment-consistency checks in [`LifeDistribution::from_moments`].
pub const MOMENT_CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exponential,
    #[serde(rename = "lognormal")]
    LogNormal,
    Rayleigh,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Exponential, Kind::LogNormal, Kind::Rayleigh];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Exponential => "exponential",
            Kind::LogNormal => "lognormal",
            Kind::Rayleigh => "rayleigh",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Family parameters. Construct a [`LifeDistribution`] from these to get
/// validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Exponential { rate: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Rayleigh { scale: f64 },
}

/// Mean and variance of a life distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Life distribution of a single component's time to failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifeDistribution {
    params: Params,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// Maps 64 random bits to a uniform draw in `[0, 1)` using the top 53 bits.
#[inline]
pub fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl LifeDistribution {
    pub fn new(params: Params) -> Result<Self> {
        match params {
            Params::Exponential { rate } => positive("rate", rate)?,
            Params::LogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::InvalidParameter(format!("mu must be finite, got {mu}")));
                }
                positive("sigma", sigma)?
            }
            Params::Rayleigh { scale } => positive("scale", scale)?,
        }
        Ok(Self { params })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Params::Exponential { rate })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Params::LogNormal { mu, sigma })
    }

    pub fn rayleigh(scale: f64) -> Result<Self> {
        Self::new(Params::Rayleigh { scale })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn kind(&self) -> Kind {
        match self.params {
            Params::Exponential { .. } => Kind::Exponential,
            Params::LogNormal { .. } => Kind::LogNormal,
            Params::Rayleigh { .. } => Kind::Rayleigh,
        }
    }

    /// Probability density `f(t)`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.pdf_unchecked(t))
    }

    /// Cumulative failure probability `F(t) = 1 - R(t)`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(1.0 - self.survival(t)?)
    }

    /// Survival (reliability) function `R(t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.survival_unchecked(t))
    }

    /// Hazard rate `λ(t) = f(t) / R(t)`.
    ///
    /// Fails with [`Error::HazardUndefined`] once the survival underflows to zero.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let r = self.survival_unchecked(t);
        if r <= 0.0 {
            return Err(Error::HazardUndefined { t });
        }
        Ok(match self.params {
            Params::Exponential { rate } => rate,
            Params::Rayleigh { scale } => t / (scale * scale),
            Params::LogNormal { .. } => self.pdf_unchecked(t) / r,
        })
    }

    pub(crate) fn pdf_unchecked(&self, t: f64) -> f64 {
        match self.params {
            Params::Exponential { rate } => rate * (-rate * t).exp(),
            Params::LogNormal { mu, sigma } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let z = (t.ln() - mu) / sigma;
                normal::pdf(z) / (t * sigma)
            }
            Params::Rayleigh { scale } => {
                let s2 = scale * scale;
                t / s2 * (-0.5 * t * t / s2).exp()
            }
        }
    }

    pub(crate) fn survival_unchecked(&self, t: f64) -> f64 {
        match self.params {
            Params::Exponential { rate } => (-rate * t).exp(),
            Params::LogNormal { mu, sigma } => {
                if t <= 0.0 {
                    return 1.0;
                }
                normal::sf((t.ln() - mu) / sigma)
            }
            Params::Rayleigh { scale } => (-0.5 * (t / scale).powi(2)).exp(),
        }
    }

    pub fn moments(&self) -> Moments {
        match self.params {
            Params::Exponential { rate } => Moments {
                mean: 1.0 / rate,
                variance: 1.0 / (rate * rate),
            },
            Params::LogNormal { mu, sigma } => {
                let s2 = sigma * sigma;
                Moments {
                    mean: (mu + 0.5 * s2).exp(),
                    variance: s2.exp_m1() * (2.0 * mu + s2).exp(),
                }
            }
            Params::Rayleigh { scale } => Moments {
                mean: scale * FRAC_PI_2.sqrt(),
                variance: 0.5 * (4.0 - PI) * scale * scale,
            },
        }
    }

    /// Builds the distribution of `kind` whose mean and variance are `m`.
    ///
    /// Exponential and Rayleigh are one-parameter families, so their
    /// coefficient of variation is fixed; moments that disagree with it are
    /// rejected rather than silently projected.
    pub fn from_moments(kind: Kind, m: Moments) -> Result<Self> {
        if !(m.mean.is_finite() && m.mean > 0.0) {
            return Err(Error::NoSolution(format!("mean must be positive and finite, got {}", m.mean)));
        }
        if !(m.variance.is_finite() && m.variance > 0.0) {
            return Err(Error::NoSolution(format!(
                "variance must be positive and finite, got {}",
                m.variance
            )));
        }
        let cv2 = m.variance / (m.mean * m.mean);
        match kind {
            Kind::Exponential => {
                if (cv2 - 1.0).abs() > MOMENT_CONSISTENCY_TOL {
                    return Err(Error::NoSolution(format!(
                        "exponential requires variance = mean^2 (variance/mean^2 = {cv2})"
                    )));
                }
                Self::exponential(1.0 / m.mean)
            }
            Kind::LogNormal => {
                let s2 = cv2.ln_1p();
                Self::lognormal(m.mean.ln() - 0.5 * s2, s2.sqrt())
            }
            Kind::Rayleigh => {
                let want = (4.0 - PI) / PI;
                if (cv2 - want).abs() > MOMENT_CONSISTENCY_TOL {
                    return Err(Error::NoSolution(format!(
                        "rayleigh requires variance/mean^2 = (4-pi)/pi = {want} (got {cv2})"
                    )));
                }
                Self::rayleigh(m.mean / FRAC_PI_2.sqrt())
            }
        }
    }

    /// Inverse CDF at `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match self.params {
            Params::Exponential { rate } => -(-u).ln_1p() / rate,
            Params::LogNormal { mu, sigma } => {
                if u <= 0.0 {
                    0.0
                } else {
                    (mu + sigma * normal::quantile(u)).exp()
                }
            }
            Params::Rayleigh { scale } => scale * (-2.0 * (-u).ln_1p()).sqrt(),
        }
    }

    /// Draws one time to failure by inverse-transform sampling. Consumes
    /// exactly one `u64` from `rng`.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(unit_interval(rng.next_u64()))
    }
}

impl fmt::Display for LifeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.params {
            Params::Exponential { rate } => write!(f, "Exponential(rate={rate})"),
            Params::LogNormal { mu, sigma } => write!(f, "LogNormal(mu={mu}, sigma={sigma})"),
            Params::Rayleigh { scale } => write!(f, "Rayleigh(scale={scale})"),
        }
    }
}
