//! A weak probe at the oscillation frequency breaks the threefold symmetry
//! and locks the phase; a detuned probe smears each state into a crescent.
//! Run with `--release`.

use subharmonic::analysis::{probe_response_scan, ClusterOptions, ProbeScanConfig};
use subharmonic::dynamics::find_fixed_points;
use subharmonic::rwa::RwaModel;
use subharmonic::stochastic::{auto_extent, EnsembleConfig, Kick, NoiseConfig};
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let noise = NoiseConfig { n_th: 0.0, seed: 3, measurement_sigma: 0.0 };

    let m = RwaModel::new(3, 0.0, 1.0, 0.15, C64::new(1.5, 0.0))?;
    let set = find_fixed_points(&m)?;
    let cfg = EnsembleConfig { n_traj: 1000, t_total: 12.0, dt: 1e-3, t_transient: 8.0, stride: 100, kick: Kick::None };
    let scan = ProbeScanConfig {
        amplitudes: vec![0.0, 0.2, 0.4, 0.8, 1.6, 3.2],
        detuning: 0.0,
        phase: 1.0,
        gain: 1.0,
        extent: auto_extent(&set, &m, &noise, 1.0),
        bins: 101,
        clusters: ClusterOptions::default(),
    };
    println!("on resonance");
    for p in probe_response_scan(&m, &noise, &cfg, &scan)?.points {
        let occ: Vec<String> = p.occupancies.iter().map(|o| format!("{o:.3}")).collect();
        println!("  |zeta| = {:.1}: occupancies [{}], asymmetry {:.3}, clusters {}", p.amplitude, occ.join(", "), p.asymmetry, p.report.clusters.len());
    }

    let m = RwaModel::new(3, 0.0, 1.0, 0.2, C64::new(1.02, 0.0))?;
    let set = find_fixed_points(&m)?;
    let radius = set.families.iter().map(|f| f.amplitude).fold(0.0, f64::max);
    let cfg = EnsembleConfig { t_total: 20.0, kick: Kick::Ring { radius }, ..cfg };
    let scan = ProbeScanConfig {
        amplitudes: vec![0.0, 1.0, 2.0, 3.0, 4.0],
        detuning: 2.0,
        phase: 0.0,
        extent: auto_extent(&set, &m, &noise, 1.0),
        ..scan
    };
    println!("detuned by 2 Gamma1");
    for p in probe_response_scan(&m, &noise, &cfg, &scan)?.points {
        let ext: Vec<String> = p.angular_extents.iter().map(|e| format!("{e:.3}")).collect();
        println!("  |zeta| = {:.1}: angular extent [{}]", p.amplitude, ext.join(", "));
    }
    Ok(())
}
