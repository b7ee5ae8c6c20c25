//! Monte Carlo structure-function simulation.
//!
//! Each trial draws one lifetime per component and folds them through the
//! block diagram (min over series, max over parallel). This is independent of
//! the survival algebra in [`crate::rbd`] and serves as its oracle.
//!
//! # Stream derivation
//!
//! Draws come from a counter-based SplitMix64 stream. The `u64` for trial `s`
//! (0-based, global across chunks) and component `j` (declaration order) of a
//! model with `n` components is
//!
//! ```text
//! key  = mix64(seed)
//! d    = s * n + j
//! bits = mix64(key + (d + 1) * 0x9E3779B97F4A7C15)    (wrapping arithmetic)
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer. Trial `s` of chunk `c` is
//! `s = c * chunk_size + offset`, so the draws do not depend on how trials are
//! grouped into chunks or on which thread runs them.

use rand::RngCore;
use serde::Serialize;

use crate::curve::{CurveKind, SurvivalCurve};
use crate::error::{Error, Result};
use crate::numerics::Grid;
use crate::par;
use crate::rbd::SystemModel;

pub const DEFAULT_CHUNK_SIZE: usize = 65_536;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based generator positioned anywhere in a seeded stream in O(1).
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self::at(seed, 0)
    }

    /// Generator whose next output is draw number `position` of `seed`'s stream.
    pub fn at(seed: u64, position: u64) -> Self {
        Self { key: mix64(seed), counter: position }
    }

    pub fn position(&self) -> u64 {
        self.counter
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let b = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&b[..chunk.len()]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

impl McConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, chunk_size: DEFAULT_CHUNK_SIZE }
    }

    pub fn with_chunk_size(self, chunk_size: usize) -> Self {
        Self { chunk_size, ..self }
    }

    fn check(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidConfig("chunk_size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McResult {
    pub mean_tttf: f64,
    pub std_error: f64,
    pub empirical_survival: SurvivalCurve,
    pub n_samples: usize,
}

impl McResult {
    /// With fewer than two samples the standard error carries no information.
    pub fn is_degenerate(&self) -> bool {
        self.n_samples < 2
    }
}

/// One system lifetime: one draw per component in declaration order, folded
/// through the structure.
pub fn sample_system_tttf<R: RngCore + ?Sized>(model: &SystemModel, rng: &mut R) -> f64 {
    let times: Vec<f64> = model.components().iter().map(|c| c.dist.sample(rng)).collect();
    model.system_lifetime(&times)
}

fn simulate_chunk(model: &SystemModel, seed: u64, start: usize, end: usize) -> Vec<f64> {
    let n = model.components().len();
    let mut rng = CounterRng::at(seed, (start as u64).wrapping_mul(n as u64));
    let mut buf = vec![0.0; n];
    (start..end)
        .map(|_| {
            for (slot, c) in buf.iter_mut().zip(model.components()) {
                *slot = c.dist.sample(&mut rng);
            }
            model.compiled().lifetime(&buf)
        })
        .collect()
}

/// Draws `cfg.n_samples` system lifetimes, in trial order.
pub fn sample_lifetimes(model: &SystemModel, cfg: &McConfig) -> Result<Vec<f64>> {
    cfg.check()?;
    let chunks = chunk_bounds(cfg);
    let parts = par::map(&chunks, |&(a, b)| simulate_chunk(model, cfg.seed, a, b));
    Ok(parts.concat())
}

fn sample_lifetimes_sequential(model: &SystemModel, cfg: &McConfig) -> Result<Vec<f64>> {
    cfg.check()?;
    Ok(chunk_bounds(cfg)
        .into_iter()
        .flat_map(|(a, b)| simulate_chunk(model, cfg.seed, a, b))
        .collect())
}

fn chunk_bounds(cfg: &McConfig) -> Vec<(usize, usize)> {
    (0..cfg.n_samples)
        .step_by(cfg.chunk_size)
        .map(|a| (a, (a + cfg.chunk_size).min(cfg.n_samples)))
        .collect()
}

fn summarize(mut times: Vec<f64>, grid: &Grid) -> Result<McResult> {
    let n = times.len();
    // Neumaier summation in trial order
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &x in &times {
        let s = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - s) + x } else { (x - s) + sum };
        sum = s;
    }
    let mean = (sum + comp) / n as f64;
    let std_error = if n > 1 {
        let ss: f64 = times.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };

    times.sort_unstable_by(f64::total_cmp);
    let values = grid
        .points()
        .iter()
        .map(|&t| (n - times.partition_point(|&x| x <= t)) as f64 / n as f64)
        .collect();
    Ok(McResult {
        mean_tttf: mean,
        std_error,
        empirical_survival: SurvivalCurve::new(CurveKind::Survival, grid.clone(), values)?,
        n_samples: n,
    })
}

/// Runs the simulation, across threads when the `parallel` feature is on.
/// The result is bit-identical to [`run_sequential`] for the same inputs.
pub fn run(model: &SystemModel, cfg: &McConfig, grid: &Grid) -> Result<McResult> {
    summarize(sample_lifetimes(model, cfg)?, grid)
}

pub fn run_sequential(model: &SystemModel, cfg: &McConfig, grid: &Grid) -> Result<McResult> {
    summarize(sample_lifetimes_sequential(model, cfg)?, grid)
}
