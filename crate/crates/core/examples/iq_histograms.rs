//! IQ histograms of noisy ensembles far above the existence boundary for
//! n = 2..5, with detected clusters and the multiplet symmetry metric.
//! Run with `--release`.

use subharmonic::analysis::{detect_clusters, multiplet_symmetry_metric};
use subharmonic::dynamics::find_fixed_points;
use subharmonic::rwa::RwaModel;
use subharmonic::stochastic::{
    auto_extent, ensemble_quadratures, simulate_ensemble, EnsembleConfig, Histogram2D, Kick, NoiseConfig,
};
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let noise = NoiseConfig { n_th: 0.0, seed: 1, measurement_sigma: 0.0 };
    // Order 4 and 5 start on the multiplet: from the origin most
    // trajectories stay in the ground state.
    let cases = [
        (RwaModel::new(2, 0.0, 1.0, 0.2, C64::new(3.0, 0.0))?, false, 2e-3),
        (RwaModel::new(3, 0.0, 1.0, 0.15, C64::new(1.5, 0.0))?, false, 1e-3),
        (RwaModel::new(4, -1.0, 1.0, 0.028571, C64::new(0.027785, 0.0))?, true, 4e-4),
        (RwaModel::new(5, -6.1723, 1.0, 0.021098, C64::new(3.0393e-4, 0.0))?, true, 2.5e-4),
    ];
    for (m, seeded, dt) in cases {
        let set = find_fixed_points(&m)?;
        let top = set
            .stable_families()
            .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
            .ok_or(subharmonic::Error::NoStableState)?;
        let kick = if seeded {
            Kick::Choice { points: top.members.iter().map(|p| p.position()).collect() }
        } else {
            Kick::None
        };
        let cfg = EnsembleConfig { n_traj: 2000, t_total: 12.0, dt, t_transient: 8.0, stride: (0.4 / dt) as usize, kick };
        let ens = simulate_ensemble(&m, &noise, &cfg)?;
        let iq = ensemble_quadratures(&ens, &m, &noise, 1.0)?;
        let h = Histogram2D::from_samples(iq, auto_extent(&set, &m, &noise, 1.0), 101)?;
        let report = detect_clusters(&h, 0.2)?;
        println!("n = {}: {} clusters, central spot {}", m.order, report.clusters.len(), report.central_present);
        for c in &report.clusters {
            println!("  r = {:7.3}  angle = {:6.3}  weight = {:.3}", c.radius(), c.angle(), c.weight);
        }
        match multiplet_symmetry_metric(&report, m.order) {
            Ok(s) => println!(
                "  spacing error {:.2} deg, radius spread {:.4}, weight spread {:.3}",
                s.spacing_error.to_degrees(),
                s.radius_spread,
                s.weight_spread
            ),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
