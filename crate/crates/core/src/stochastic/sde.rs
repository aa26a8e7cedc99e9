//! Euler–Maruyama integration with additive complex white noise,
//!
//! ```text
//! a ← a + f(a, t) dt + √(2Γ₁(n_th + ½) dt) (ξ₁ + iξ₂)/√2
//! ```
//!
//! which gives the linear, unpumped resonator the stationary occupation
//! ⟨|a|²⟩ = n_th + ½.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{readout_stream, trajectory_stream};
use crate::error::{Error, Result};
use crate::rwa::{eom_rhs, RwaModel};

/// Upper bound on Γ₁·dt.
pub const MAX_STEP_DAMPING: f64 = 0.1;
/// Amplitude beyond which a trajectory is reported as diverged.
const RUNAWAY_AMPLITUDE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Thermal occupation of the bath.
    pub n_th: f64,
    pub seed: u64,
    /// Gaussian readout noise per quadrature, in output units.
    pub measurement_sigma: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            n_th: 0.0,
            seed: 0,
            measurement_sigma: 0.0,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.n_th >= 0.0 && self.n_th.is_finite()) {
            return Err(Error::invalid("n_th", "must be finite and non-negative"));
        }
        if !(self.measurement_sigma >= 0.0 && self.measurement_sigma.is_finite()) {
            return Err(Error::invalid("measurement_sigma", "must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Standard deviation of each quadrature of the noise increment over `dt`.
pub fn noise_amplitude(model: &RwaModel, noise: &NoiseConfig, dt: f64) -> f64 {
    (model.gamma1 * (noise.n_th + 0.5) * dt).sqrt()
}

fn check_step(model: &RwaModel, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let product = dt * model.gamma1;
    if product >= MAX_STEP_DAMPING {
        return Err(Error::StepTooLarge { product });
    }
    Ok(())
}

#[inline]
fn step_unchecked<R: Rng + ?Sized>(a: C64, t: f64, dt: f64, sigma: f64, model: &RwaModel, rng: &mut R) -> C64 {
    let drift = eom_rhs(a, t, model) * dt;
    if sigma == 0.0 {
        return a + drift;
    }
    let xi_re: f64 = rng.sample(StandardNormal);
    let xi_im: f64 = rng.sample(StandardNormal);
    a + drift + C64::new(xi_re, xi_im) * sigma
}

/// One Euler–Maruyama step from time `t`.
pub fn sde_step<R: Rng + ?Sized>(
    a: C64,
    t: f64,
    dt: f64,
    model: &RwaModel,
    noise: &NoiseConfig,
    rng: &mut R,
) -> Result<C64> {
    check_step(model, dt)?;
    Ok(step_unchecked(a, t, dt, noise_amplitude(model, noise, dt), model, rng))
}

/// Initial condition of each trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kick {
    /// Start at the origin and let the noise do the rest.
    None,
    /// Start on a circle of the given radius at a uniformly random phase.
    Ring { radius: f64 },
    /// Start at one of the listed points, chosen uniformly.
    Choice { points: Vec<C64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_traj: usize,
    pub t_total: f64,
    pub dt: f64,
    /// Samples before this time are discarded.
    pub t_transient: f64,
    /// Keep every `stride`-th step after the transient.
    pub stride: usize,
    pub kick: Kick,
}

impl EnsembleConfig {
    pub fn validate(&self, model: &RwaModel) -> Result<()> {
        check_step(model, self.dt)?;
        if !(self.t_total > 0.0 && self.t_total.is_finite()) {
            return Err(Error::invalid("t_total", "must be positive"));
        }
        if !(self.t_transient >= 0.0 && self.t_transient < self.t_total) {
            return Err(Error::invalid("t_transient", "must lie in [0, t_total)"));
        }
        if self.stride == 0 {
            return Err(Error::invalid("stride", "must be at least 1"));
        }
        if let Kick::Choice { points } = &self.kick {
            if points.is_empty() {
                return Err(Error::invalid("kick", "choice kick needs at least one point"));
            }
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_total / self.dt).round() as usize
    }

    pub fn first_sample_step(&self) -> usize {
        (self.t_transient / self.dt).ceil() as usize
    }
}

/// Post-transient samples of every trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    /// Time of the first sample.
    pub t_first: f64,
    /// Spacing between consecutive samples of one trajectory.
    pub sample_interval: f64,
    pub trajectories: Vec<Vec<C64>>,
}

impl Ensemble {
    pub fn samples(&self) -> impl Iterator<Item = C64> + '_ {
        self.trajectories.iter().flat_map(|t| t.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.trajectories.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn run_trajectory(index: usize, model: &RwaModel, noise: &NoiseConfig, cfg: &EnsembleConfig) -> Result<Vec<C64>> {
    let mut rng = trajectory_stream(noise.seed, index as u64);
    let mut a = match &cfg.kick {
        Kick::None => C64::new(0.0, 0.0),
        Kick::Ring { radius } => C64::from_polar(*radius, rng.gen_range(0.0..std::f64::consts::TAU)),
        Kick::Choice { points } => points[rng.gen_range(0..points.len())],
    };
    let sigma = noise_amplitude(model, noise, cfg.dt);
    let n_steps = cfg.n_steps();
    let first = cfg.first_sample_step();
    let mut samples = Vec::with_capacity((n_steps.saturating_sub(first)) / cfg.stride + 1);
    for k in 0..=n_steps {
        if k >= first && (k - first) % cfg.stride == 0 {
            samples.push(a);
        }
        if k == n_steps {
            break;
        }
        let t = k as f64 * cfg.dt;
        a = step_unchecked(a, t, cfg.dt, sigma, model, &mut rng);
        if !(a.norm_sqr() < RUNAWAY_AMPLITUDE * RUNAWAY_AMPLITUDE) {
            return Err(Error::TrajectoryDiverged {
                trajectory: index,
                t: t + cfg.dt,
            });
        }
    }
    Ok(samples)
}

/// Runs `n_traj` independent trajectories in parallel. Trajectory `k` draws
/// from its own substream, so output is identical for any thread count.
pub fn simulate_ensemble(model: &RwaModel, noise: &NoiseConfig, cfg: &EnsembleConfig) -> Result<Ensemble> {
    model.validate()?;
    noise.validate()?;
    cfg.validate(model)?;
    let trajectories = (0..cfg.n_traj)
        .into_par_iter()
        .map(|k| run_trajectory(k, model, noise, cfg))
        .collect::<Result<Vec<_>>>()?;
    let first = cfg.first_sample_step();
    Ok(Ensemble {
        t_first: first as f64 * cfg.dt,
        sample_interval: cfg.stride as f64 * cfg.dt,
        trajectories,
    })
}

/// Output quadratures I + iQ = g√(2Γ₁)·a + σ_m(η₁ + iη₂).
pub fn sample_output_quadratures<R: Rng + ?Sized>(
    a: C64,
    model: &RwaModel,
    noise: &NoiseConfig,
    gain: f64,
    rng: &mut R,
) -> (f64, f64) {
    let mut out = a * (gain * (2.0 * model.gamma1).sqrt());
    if noise.measurement_sigma > 0.0 {
        let eta_re: f64 = rng.sample(StandardNormal);
        let eta_im: f64 = rng.sample(StandardNormal);
        out += C64::new(eta_re, eta_im) * noise.measurement_sigma;
    }
    (out.re, out.im)
}

/// Reads out every ensemble sample, each trajectory with its own readout
/// substream.
pub fn ensemble_quadratures(
    ensemble: &Ensemble,
    model: &RwaModel,
    noise: &NoiseConfig,
    gain: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(gain > 0.0) {
        return Err(Error::invalid("gain", "must be positive"));
    }
    Ok(ensemble
        .trajectories
        .par_iter()
        .enumerate()
        .map(|(k, traj)| {
            let mut rng = readout_stream(noise.seed, k as u64);
            traj.iter()
                .map(|a| sample_output_quadratures(*a, model, noise, gain, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}
