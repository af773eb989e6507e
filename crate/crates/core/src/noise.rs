//! Per-step random field fluctuations `Φ_t = Φ + ε x_t` and ensembles of
//! noisy trajectories.
//!
//! Trajectory `j` of an ensemble draws its `x_t` from a ChaCha8 generator
//! seeded with the master seed and switched to stream `j`, so each
//! trajectory is reproducible on its own and independent of thread
//! scheduling.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::walk::{return_probability, step_with_field, WalkParams, WalkState};

/// Support of the per-step variable `x_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseDistribution {
    /// Uniform on `[-1, 1]`.
    Symmetric,
    /// Uniform on `[0, 1]`.
    Positive,
}

/// Unit of `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseScale {
    /// `Φ_t = Φ + ε x_t`.
    Radians,
    /// `Φ_t/(2π) = Φ/(2π) + ε x_t`, i.e. `Φ_t = Φ + 2π ε x_t`.
    Turns,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseConfig {
    pub epsilon: f64,
    pub distribution: NoiseDistribution,
    pub scale: NoiseScale,
    pub seed: u64,
    pub ensemble_size: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            epsilon: 0.0,
            distribution: NoiseDistribution::Symmetric,
            scale: NoiseScale::Radians,
            seed: 0,
            ensemble_size: 100,
        }
    }
}

impl NoiseConfig {
    pub fn new(epsilon: f64, seed: u64) -> Result<Self> {
        NoiseConfig { epsilon, seed, ..Default::default() }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be finite and >= 0, got {}", self.epsilon)));
        }
        if self.ensemble_size == 0 {
            return Err(Error::InvalidParameter("ensemble size must be at least 1".into()));
        }
        Ok(self)
    }

    /// Largest possible `|Φ_t - Φ|` in radians.
    pub fn amplitude_radians(&self) -> f64 {
        match self.scale {
            NoiseScale::Radians => self.epsilon,
            NoiseScale::Turns => 2.0 * PI * self.epsilon,
        }
    }

    pub fn trajectory_rng(&self, trajectory: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trajectory);
        rng
    }

    /// Fields `Φ_1, ..., Φ_steps` of one trajectory.
    pub fn field_sequence(&self, field: f64, steps: u64, trajectory: u64) -> Vec<f64> {
        let mut rng = self.trajectory_rng(trajectory);
        let lo = match self.distribution {
            NoiseDistribution::Symmetric => -1.0,
            NoiseDistribution::Positive => 0.0,
        };
        let amp = self.amplitude_radians();
        (0..steps).map(|_| field + amp * rng.gen_range(lo..=1.0)).collect()
    }
}

/// Runs steps `1..=t` with a freshly drawn field per step (trajectory 0).
pub fn noisy_evolve(state: &WalkState, t: u64, params: &WalkParams, noise: &NoiseConfig) -> WalkState {
    noisy_evolve_trajectory(state, t, params, noise, 0)
}

pub fn noisy_evolve_trajectory(
    state: &WalkState,
    t: u64,
    params: &WalkParams,
    noise: &NoiseConfig,
    trajectory: u64,
) -> WalkState {
    let fields = noise.field_sequence(params.field(), t, trajectory);
    evolve_with_fields(state, params, &fields)
}

/// Applies `W(t)` for `t = 1..=fields.len()` with `fields[t-1]` as field.
pub fn evolve_with_fields(state: &WalkState, params: &WalkParams, fields: &[f64]) -> WalkState {
    fields
        .iter()
        .enumerate()
        .fold(state.clone(), |s, (i, &f)| step_with_field(&s, i as u64 + 1, params, f))
}

/// Worst-case bound on the noisy revival deviation for field `2πn/m`:
/// `m(2m+1)ε` (odd `m`, time `2m`) or `(m/2)(m+1)ε` (even `m`, time `m`),
/// plus the clean remainder scale `ᾱ^m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseBound {
    pub leading: f64,
    pub remainder: f64,
}

impl NoiseBound {
    pub fn total(&self) -> f64 {
        self.leading + self.remainder
    }

    /// A bound of 2 or more says nothing about `‖U ∓ 1‖`.
    pub fn is_vacuous(&self) -> bool {
        self.leading >= 2.0
    }
}

/// `epsilon` is the amplitude in radians.
pub fn noise_bound(m: u64, epsilon: f64, alpha_tilde_sup: f64) -> NoiseBound {
    let mf = m as f64;
    let leading = if m % 2 == 1 { mf * (2.0 * mf + 1.0) * epsilon } else { mf / 2.0 * (mf + 1.0) * epsilon };
    NoiseBound { leading, remainder: alpha_tilde_sup.powi(m as i32) }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReturnSample {
    pub t: u64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `p(t)` of trajectory 0.
    pub single: f64,
}

/// Return probabilities `p(t) = P(x = 0)` for `t = 0..=t_max`, summarized
/// over `noise.ensemble_size` trajectories.
pub fn return_series(
    params: &WalkParams,
    noise: &NoiseConfig,
    t_max: u64,
    initial: &WalkState,
) -> Result<Vec<ReturnSample>> {
    let noise = noise.validated()?;
    let trajectories: Vec<Vec<f64>> = (0..noise.ensemble_size as u64)
        .into_par_iter()
        .map(|j| {
            let fields = noise.field_sequence(params.field(), t_max, j);
            let mut s = initial.clone();
            let mut out = Vec::with_capacity(t_max as usize + 1);
            out.push(return_probability(&s));
            for (i, &f) in fields.iter().enumerate() {
                s = step_with_field(&s, i as u64 + 1, params, f);
                out.push(return_probability(&s));
            }
            out
        })
        .collect();
    let n = trajectories.len() as f64;
    Ok((0..=t_max as usize)
        .map(|t| {
            let column = trajectories.iter().map(|tr| tr[t]);
            let mean = column.clone().sum::<f64>() / n;
            let min = column.clone().fold(f64::INFINITY, f64::min);
            let max = column.fold(f64::NEG_INFINITY, f64::max);
            ReturnSample { t: t as u64, mean, min, max, single: trajectories[0][t] }
        })
        .collect())
}
