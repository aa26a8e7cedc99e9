//! With the pump, Kerr term and detuning switched off the mode is a damped
//! oscillator in a thermal bath; the stationary occupation must be
//! n_th + 1/2. Run with `--release`.

use subharmonic::rwa::RwaModel;
use subharmonic::stochastic::{simulate_ensemble, EnsembleConfig, Kick, NoiseConfig};
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let m = RwaModel::new(2, 0.0, 1.0, 0.0, C64::new(0.0, 0.0))?;
    for n_th in [0.0, 0.5, 2.0] {
        let noise = NoiseConfig { n_th, seed: 9, measurement_sigma: 0.0 };
        let cfg = EnsembleConfig { n_traj: 500, t_total: 505.0, dt: 0.01, t_transient: 5.0, stride: 100, kick: Kick::None };
        let ens = simulate_ensemble(&m, &noise, &cfg)?;
        let mean = ens.samples().map(|a| a.norm_sqr()).sum::<f64>() / ens.len() as f64;
        println!("n_th = {n_th}: <|a|^2> = {mean:.4} (expected {}), {} samples", n_th + 0.5, ens.len());
    }
    Ok(())
}
