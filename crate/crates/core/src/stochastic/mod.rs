//! Langevin simulation of the slow-amplitude equation and the IQ-plane
//! statistics built from it.

mod histogram;
mod rng;
mod sde;
mod switching;

pub use histogram::{auto_extent, merge_histograms, Histogram2D, DEFAULT_BINS};
pub use rng::{readout_stream, trajectory_stream, StreamRng};
pub use sde::{
    ensemble_quadratures, noise_amplitude, sample_output_quadratures, sde_step, simulate_ensemble,
    Ensemble, EnsembleConfig, Kick, NoiseConfig, MAX_STEP_DAMPING,
};
pub use switching::{label_samples, switching_statistics, StateLabel, SwitchingStats};
