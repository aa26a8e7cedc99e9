//! Near the existence boundary of the n = 3 triplet the ground state stays
//! stable; noise drives switching between it and the triplet. Prints the
//! clusters, transition counts and mean dwell times. Run with `--release`.

use subharmonic::analysis::detect_clusters;
use subharmonic::dynamics::find_fixed_points;
use subharmonic::rwa::RwaModel;
use subharmonic::stochastic::{
    auto_extent, ensemble_quadratures, simulate_ensemble, switching_statistics, EnsembleConfig, Histogram2D, Kick,
    NoiseConfig, SwitchingStats,
};
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    // Saddle at r = 1, stable triplet at r = 5.
    let m = RwaModel::new(3, 0.0, 1.0, 0.2, C64::new(26f64.sqrt() / 5.0, 0.0))?;
    let set = find_fixed_points(&m)?;
    let states: Vec<C64> = set.stable().map(|p| p.position()).collect();
    let noise = NoiseConfig { n_th: 0.0, seed: 7, measurement_sigma: 0.0 };
    let cfg = EnsembleConfig {
        n_traj: 2000,
        t_total: 20.0,
        dt: 1e-3,
        t_transient: 2.0,
        stride: 10,
        kick: Kick::Choice { points: states.clone() },
    };
    let ens = simulate_ensemble(&m, &noise, &cfg)?;
    let iq = ensemble_quadratures(&ens, &m, &noise, 1.0)?;
    let h = Histogram2D::from_samples(iq, auto_extent(&set, &m, &noise, 1.0), 101)?;
    let report = detect_clusters(&h, 0.2)?;
    println!("{} clusters, central spot {}", report.clusters.len(), report.central_present);

    let mut stats = SwitchingStats::new(states.len());
    for traj in &ens.trajectories {
        stats.merge(&switching_statistics(traj, ens.sample_interval, &states, 5.0 / 3.0));
    }
    for (k, s) in states.iter().enumerate() {
        let d = &stats.dwell_times[k];
        let mean = d.iter().sum::<f64>() / d.len().max(1) as f64;
        println!("state {k} at r = {:.2}: to {:?}, mean dwell {mean:.3}", s.norm(), stats.transitions[k]);
    }
    println!("every state entered and left: {}", stats.all_states_switch());
    Ok(())
}
