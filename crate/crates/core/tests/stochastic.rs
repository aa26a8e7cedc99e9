use subharmonic::analysis::detect_clusters;
use subharmonic::dynamics::{find_fixed_points, integrate_final};
use subharmonic::rwa::RwaModel;
use subharmonic::stochastic::{
    auto_extent, ensemble_quadratures, sde_step, simulate_ensemble, switching_statistics, trajectory_stream,
    EnsembleConfig, Histogram2D, Kick, NoiseConfig, SwitchingStats,
};
use subharmonic::C64;

fn noise(n_th: f64, seed: u64) -> NoiseConfig {
    NoiseConfig {
        n_th,
        seed,
        measurement_sigma: 0.0,
    }
}

fn from_origin(n_traj: usize, t_total: f64, dt: f64, stride: usize) -> EnsembleConfig {
    EnsembleConfig {
        n_traj,
        t_total,
        dt,
        t_transient: t_total / 2.0,
        stride,
        kick: Kick::None,
    }
}

#[test]
fn free_mode_relaxes_to_isotropic_gaussian() {
    let m = RwaModel::new(2, 0.0, 2.0, 0.0, C64::new(0.0, 0.0)).unwrap();
    let nz = noise(0.3, 1);
    let ens = simulate_ensemble(&m, &nz, &from_origin(400, 100.0, 5e-3, 100)).unwrap();
    let n = ens.len() as f64;
    let (mut re, mut im, mut re2, mut im2, mut cross) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for a in ens.samples() {
        re += a.re;
        im += a.im;
        re2 += a.re * a.re;
        im2 += a.im * a.im;
        cross += a.re * a.im;
    }
    let var = (nz.n_th + 0.5) / 2.0;
    // About 40 000 weakly correlated samples.
    let se = var * (2.0 / n).sqrt() * 3.0;
    assert!((re / n).abs() < 0.02 && (im / n).abs() < 0.02);
    assert!((re2 / n - var).abs() < 3.0 * se, "{}", re2 / n);
    assert!((im2 / n - var).abs() < 3.0 * se, "{}", im2 / n);
    assert!((cross / n).abs() < 3.0 * se);
}

#[test]
fn below_threshold_stays_at_the_origin() {
    let m = RwaModel::new(2, 0.0, 1.0, 0.3, C64::new(0.5, 0.0)).unwrap();
    let nz = noise(0.0, 2);
    let ens = simulate_ensemble(&m, &nz, &from_origin(300, 10.0, 2e-3, 50)).unwrap();
    let mean_sq = ens.samples().map(|a| a.norm_sqr()).sum::<f64>() / ens.len() as f64;
    // Squeezed vacuum: below threshold ⟨|a|²⟩ stays of order one half.
    assert!(mean_sq < 2.0, "{mean_sq}");
    let iq = ensemble_quadratures(&ens, &m, &nz, 1.0).unwrap();
    let h = Histogram2D::from_samples(iq, 4.0, 41).unwrap();
    let report = detect_clusters(&h, 0.2).unwrap();
    assert_eq!(report.clusters.len(), 1);
    assert!(report.central_present);
}

#[test]
fn above_threshold_splits_into_a_doublet() {
    let m = RwaModel::new(2, 0.0, 1.0, 0.2, C64::new(3.0, 0.0)).unwrap();
    let nz = noise(0.0, 3);
    let ens = simulate_ensemble(&m, &nz, &from_origin(1000, 10.0, 2e-3, 250)).unwrap();
    let set = find_fixed_points(&m).unwrap();
    let iq = ensemble_quadratures(&ens, &m, &nz, 1.0).unwrap();
    let h = Histogram2D::from_samples(iq, auto_extent(&set, &m, &nz, 1.0), 101).unwrap();
    let report = detect_clusters(&h, 0.2).unwrap();
    assert_eq!(report.clusters.len(), 2);
    assert!(!report.central_present);
    let (a, b) = (&report.clusters[0], &report.clusters[1]);
    // Antipodal within two bins.
    assert!(f64::hypot(a.centroid.0 + b.centroid.0, a.centroid.1 + b.centroid.1) < 2.0 * h.bin_width());
}

#[test]
fn euler_converges_at_first_order_without_noise() {
    let m = RwaModel::lossless(3, 0.4, 0.8, C64::new(0.3, 0.2)).unwrap();
    let a0 = C64::new(0.7, -0.2);
    let t = 2.0;
    let exact = integrate_final(a0, &m, t, 1e-12).unwrap();
    let quiet = noise(0.0, 0);
    let error = |steps: usize| {
        let dt = t / steps as f64;
        let mut rng = trajectory_stream(0, 0);
        let mut a = a0;
        for k in 0..steps {
            a = sde_step(a, k as f64 * dt, dt, &m, &quiet, &mut rng).unwrap();
        }
        (a - exact).norm()
    };
    let errs: Vec<f64> = [1000, 2000, 4000, 8000].iter().map(|&s| error(s)).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 2.0).abs() < 0.1, "{errs:?}");
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let m = RwaModel::new(3, 0.0, 1.0, 0.6, C64::new(3.0, 0.0)).unwrap();
    let nz = NoiseConfig {
        measurement_sigma: 0.2,
        ..noise(0.5, 17)
    };
    let cfg = from_origin(24, 2.0, 1e-3, 20);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let ens = simulate_ensemble(&m, &nz, &cfg).unwrap();
            let iq = ensemble_quadratures(&ens, &m, &nz, 1.0).unwrap();
            (ens, iq)
        })
    };
    let (e1, q1) = run(1);
    let (e4, q4) = run(4);
    assert_eq!(e1, e4);
    assert_eq!(q1, q4);
}

#[test]
fn symmetric_doublet_switches_both_ways_equally() {
    // Weakly pumped n = 2 doublet close to the origin, so noise drives
    // frequent switching.
    let m = RwaModel::new(2, 0.0, 1.0, 1.0, C64::new(2.0, 0.0)).unwrap();
    let set = find_fixed_points(&m).unwrap();
    let states: Vec<C64> = set.stable().map(|p| p.position()).collect();
    assert_eq!(states.len(), 2);
    let nz = noise(1.0, 4);
    let cfg = EnsembleConfig {
        n_traj: 200,
        t_total: 60.0,
        dt: 2e-3,
        t_transient: 5.0,
        stride: 5,
        kick: Kick::Choice { points: states.clone() },
    };
    let ens = simulate_ensemble(&m, &nz, &cfg).unwrap();
    let capture = (states[0] - states[1]).norm() / 3.0;
    let mut stats = SwitchingStats::new(2);
    for traj in &ens.trajectories {
        stats.merge(&switching_statistics(traj, ens.sample_interval, &states, capture));
    }
    let (up, down) = (stats.transitions[0][1] as f64, stats.transitions[1][0] as f64);
    assert!(up + down > 100.0, "{:?}", stats.transitions);
    assert!((up - down).abs() <= 3.0 * (up + down).sqrt(), "{:?}", stats.transitions);
    let mean = |k: usize| stats.dwell_times[k].iter().sum::<f64>() / stats.dwell_times[k].len() as f64;
    assert!((mean(0) / mean(1) - 1.0).abs() < 0.25, "{} {}", mean(0), mean(1));
}
