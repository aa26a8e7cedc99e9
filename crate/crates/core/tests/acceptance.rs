//! Acceptance checks, one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; the process exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subharmonic::analysis::{
    detect_clusters, multiplet_symmetry_metric, probe_response_scan, ClusterOptions, ProbeScanConfig,
};
use subharmonic::device::{spectral_residual, spectral_root};
use subharmonic::dynamics::{eigenvalues, find_fixed_points, jacobian, threshold_n2, Stepper};
use subharmonic::rwa::{hamiltonian_value, RwaModel};
use subharmonic::stochastic::{
    auto_extent, ensemble_quadratures, simulate_ensemble, switching_statistics, EnsembleConfig, Histogram2D,
    Kick, NoiseConfig, SwitchingStats,
};
use subharmonic::C64;

const SPECTRAL_RESIDUAL: f64 = 1e-12;
const SPECTRAL_LIMIT_REL: f64 = 1e-4;
const SPECTRAL_MODES: usize = 10;
const MULTIPLET_TOL: f64 = 1e-9;
const THRESHOLD_REL: f64 = 1e-6;
const CONSERVATION_REL: f64 = 1e-8;
const CONSERVATION_STEPS: u64 = 1_000_000;
const CONSERVATION_TOL: f64 = 1e-13;
const SPACING_TOL_DEG: f64 = 5.0;
const RADIUS_SPREAD: f64 = 0.05;
const SIGMAS: f64 = 3.0;
const CALIBRATION_REL: f64 = 0.05;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit, || {
        format!("{what} took {:.2} s, limit {limit} s", elapsed.as_secs_f64())
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for gamma in [0.01, 0.05, 0.1] {
        for mode in 1..=SPECTRAL_MODES {
            let kd = spectral_root(gamma, mode).map_err(|e| e.to_string())?;
            let r = spectral_residual(kd, gamma);
            worst = worst.max(r);
            check(r < SPECTRAL_RESIDUAL, || format!("gamma {gamma} mode {mode}: residual {r:e}"))?;
        }
    }
    let mut worst_limit: f64 = 0.0;
    for mode in 1..=SPECTRAL_MODES {
        let kd = spectral_root(1e-6, mode).map_err(|e| e.to_string())?;
        let limit = (2 * mode - 1) as f64 * FRAC_PI_2;
        let rel = (kd - limit).abs() / limit;
        worst_limit = worst_limit.max(rel);
        check(rel < SPECTRAL_LIMIT_REL, || format!("mode {mode}: {rel:e} from the open-end limit"))?;
    }
    within(start.elapsed(), 1.0, "spectrum")?;
    Ok(format!("max residual {worst:.1e}, max limit deviation {worst_limit:.1e}"))
}

/// Order-4 model with stationary amplitudes r² = s1 (saddle) and s2
/// (stable), Γ₁ = 1.
fn order4(s1: f64, s2: f64) -> RwaModel {
    let c = 2.0 / (s1 * s2);
    let delta = -(c * s1 * s2 - 1.0f64).sqrt();
    let alpha = c * (s1 + s2) / (2.0 * delta.abs());
    let eps = (alpha * alpha - c).sqrt();
    RwaModel::new(4, delta, 1.0, alpha, C64::new(eps, 0.0)).unwrap()
}

/// Order-5 model with stationary amplitudes r² = s1, s2, s3, Γ₁ = 1.
fn order5(s1: f64, s2: f64, s3: f64) -> RwaModel {
    let sum = s1 + s2 + s3;
    let pairs = s1 * s2 + s1 * s3 + s2 * s3;
    let prod = s1 * s2 * s3;
    let eps = 1.0 / (prod - pairs * pairs / (4.0 * sum)).sqrt();
    let alpha = eps * sum.sqrt();
    let delta = -eps * pairs / (2.0 * sum.sqrt());
    RwaModel::new(5, delta, 1.0, alpha, C64::new(eps, 0.0)).unwrap()
}

fn multiplet_models() -> Vec<RwaModel> {
    let base = vec![
        RwaModel::new(2, 0.0, 1.0, 0.2, C64::new(3.0, 0.0)).unwrap(),
        RwaModel::new(2, -1.5, 0.4, 1.0, C64::new(0.8, 0.0)).unwrap(),
        RwaModel::new(3, 0.0, 1.0, 0.15, C64::new(1.5, 0.0)).unwrap(),
        RwaModel::new(3, 0.7, 0.3, 0.5, C64::new(2.0, 0.0)).unwrap(),
        order4(36.0, 1225.0),
        order4(1.0, 9.0),
        order5(256.0, 400.0, 4000.0),
        order5(1.0, 2.0, 6.0),
    ];
    let mut models = Vec::new();
    for m in base {
        for phase in [0.0, 1.1, -2.6] {
            let eps = C64::from_polar(m.epsilon.norm(), phase);
            models.push(m.with_epsilon(eps));
        }
    }
    models
}

fn criterion_2() -> Outcome {
    let mut worst_gap: f64 = 0.0;
    let mut worst_sin: f64 = 0.0;
    let mut families = 0;
    for m in multiplet_models() {
        let start = Instant::now();
        let set = find_fixed_points(&m).map_err(|e| e.to_string())?;
        within(start.elapsed(), 1.0, "fixed points")?;
        let n = m.order as usize;
        check(!set.families.is_empty(), || format!("order {n}: no nontrivial family"))?;
        for fam in &set.families {
            families += 1;
            check(fam.members.len() == n, || format!("order {n}: family of {}", fam.members.len()))?;
            let mut phases: Vec<f64> = fam.members.iter().map(|p| p.phase).collect();
            phases.sort_by(f64::total_cmp);
            for k in 0..n {
                let gap = if k + 1 < n { phases[k + 1] - phases[k] } else { phases[0] + TAU - phases[n - 1] };
                let err = (gap - TAU / n as f64).abs();
                worst_gap = worst_gap.max(err);
                check(err < MULTIPLET_TOL, || format!("order {n}: gap error {err:e}"))?;
            }
            for p in &fam.members {
                let lhs = (n as f64 * p.phase - m.epsilon.arg()).sin();
                let rhs = m.gamma1 / (m.epsilon.norm() * p.amplitude.powi(n as i32 - 2));
                let err = (lhs - rhs).abs();
                worst_sin = worst_sin.max(err);
                check(err < MULTIPLET_TOL, || format!("order {n}: phase relation off by {err:e}"))?;
            }
        }
    }
    Ok(format!("{families} families, max gap error {worst_gap:.1e}, max phase-relation error {worst_sin:.1e}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let delta = -2.0 + 4.0 * i as f64 / 9.0;
        for j in 0..10 {
            let gamma1 = 0.1 + 1.9 * j as f64 / 9.0;
            let th = threshold_n2(gamma1, delta).map_err(|e| e.to_string())?;
            let exact = (delta * delta + gamma1 * gamma1).sqrt();
            let rel = (th - exact).abs() / exact;
            worst = worst.max(rel);
            check(rel < THRESHOLD_REL, || format!("delta {delta}, gamma {gamma1}: {rel:e}"))?;
        }
    }
    within(start.elapsed(), 5.0, "threshold grid")?;
    Ok(format!("max relative deviation {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for n in 3..=5 {
        for gamma1 in [0.3, 1.0, 2.5] {
            for delta in [-1.0, 0.0, 0.5] {
                for eps in [0.0, 0.1, 1.0, 10.0, 1e4] {
                    let m = RwaModel::new(n, delta, gamma1, 0.7, C64::from_polar(eps, 0.4)).unwrap();
                    for ev in eigenvalues(&jacobian(C64::new(0.0, 0.0), &m)) {
                        check(ev.re == -gamma1, || format!("order {n}, eps {eps}: Re λ = {}", ev.re))?;
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} models, Re λ = -Γ₁ exactly"))
}

/// Random lossless model with a start point whose energy shell is provably
/// bounded: H ≥ g(r) = -|δ|r² + αr⁴/2 - (2/n)|ε|rⁿ, so if g exceeds H(a₀)
/// somewhere beyond |a₀| the orbit never crosses that radius.
fn bounded_lossless(n: u32, rng: &mut ChaCha8Rng) -> (RwaModel, C64) {
    loop {
        let delta = rng.gen_range(-1.0..1.0);
        let alpha = rng.gen_range(0.5..1.5);
        let eps = C64::from_polar(rng.gen_range(0.05..0.5), rng.gen_range(0.0..TAU));
        let m = RwaModel::lossless(n, delta, alpha, eps).unwrap();
        let a0 = C64::from_polar(rng.gen_range(0.2..1.2), rng.gen_range(0.0..TAU));
        let h0 = hamiltonian_value(a0, &m);
        let g = |r: f64| -delta.abs() * r * r + 0.5 * alpha * r.powi(4) - 2.0 / n as f64 * eps.norm() * r.powi(n as i32);
        let r0 = a0.norm();
        if (1..=400).any(|k| g(r0 + 0.01 * k as f64) > h0) {
            return (m, a0);
        }
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for n in 2..=5 {
        for _ in 0..3 {
            let (m, a0) = bounded_lossless(n, &mut rng);
            let h0 = hamiltonian_value(a0, &m);
            let mut stepper = Stepper::new(&m, a0, 0.0, CONSERVATION_TOL).map_err(|e| e.to_string())?;
            while stepper.accepted_steps() < CONSERVATION_STEPS {
                stepper.step(f64::INFINITY).map_err(|e| e.to_string())?;
            }
            let drift = (hamiltonian_value(stepper.state(), &m) - h0).abs() / h0.abs();
            worst = worst.max(drift);
            check(drift < CONSERVATION_REL, || format!("order {n}: relative drift {drift:e}"))?;
            runs += 1;
        }
    }
    within(start.elapsed(), 30.0, "conservation runs")?;
    Ok(format!("{runs} runs of {CONSERVATION_STEPS} steps, max relative drift {worst:.1e}"))
}

fn largest_stable(m: &RwaModel) -> Vec<C64> {
    let set = find_fixed_points(m).unwrap();
    let fam = set.stable_families().max_by(|a, b| a.amplitude.total_cmp(&b.amplitude)).unwrap();
    fam.members.iter().map(|p| p.position()).collect()
}

fn quiet() -> NoiseConfig {
    NoiseConfig {
        n_th: 0.0,
        seed: 11,
        measurement_sigma: 0.0,
    }
}

fn histogram_of(ens: &subharmonic::stochastic::Ensemble, m: &RwaModel, noise: &NoiseConfig) -> Result<Histogram2D, String> {
    let set = find_fixed_points(m).map_err(|e| e.to_string())?;
    let iq = ensemble_quadratures(ens, m, noise, 1.0).map_err(|e| e.to_string())?;
    Histogram2D::from_samples(iq, auto_extent(&set, m, noise, 1.0), 101).map_err(|e| e.to_string())
}

fn criterion_6() -> Outcome {
    const N_TRAJ: usize = 10_000;
    let cases = [
        (RwaModel::new(2, 0.0, 1.0, 0.2, C64::new(3.0, 0.0)).unwrap(), false, 2e-3),
        (RwaModel::new(3, 0.0, 1.0, 0.15, C64::new(1.5, 0.0)).unwrap(), false, 1e-3),
        (order4(36.0, 1225.0), true, 4e-4),
        (order5(256.0, 400.0, 4000.0), true, 2.5e-4),
    ];
    let mut summary = Vec::new();
    for (m, seeded, dt) in cases {
        let n = m.order as usize;
        let states = largest_stable(&m);
        let kick = if seeded { Kick::Choice { points: states.clone() } } else { Kick::None };
        let noise = quiet();
        let cfg = EnsembleConfig {
            n_traj: N_TRAJ,
            t_total: 12.0,
            dt,
            t_transient: 8.0,
            stride: (0.4 / dt).round() as usize,
            kick,
        };
        let ens = simulate_ensemble(&m, &noise, &cfg).map_err(|e| e.to_string())?;
        let report = detect_clusters(&histogram_of(&ens, &m, &noise)?, 0.2).map_err(|e| e.to_string())?;
        check(report.clusters.len() == n && !report.central_present, || {
            format!("order {n}: {} clusters, central {}", report.clusters.len(), report.central_present)
        })?;
        let metric = multiplet_symmetry_metric(&report, m.order).map_err(|e| e.to_string())?;
        check(metric.spacing_error.to_degrees() <= SPACING_TOL_DEG, || {
            format!("order {n}: spacing error {:.2} deg", metric.spacing_error.to_degrees())
        })?;
        check(metric.radius_spread < RADIUS_SPREAD, || format!("order {n}: radius spread {:.3}", metric.radius_spread))?;

        // Occupancy from the final state of each trajectory.
        let mut counts = vec![0u64; n];
        for traj in &ens.trajectories {
            let a = *traj.last().unwrap();
            let (k, d) = states
                .iter()
                .enumerate()
                .map(|(k, s)| (k, (a - s).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if d < a.norm() {
                counts[k] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        let p = 1.0 / n as f64;
        let expected = total as f64 * p;
        let tol = SIGMAS * (total as f64 * p * (1.0 - p)).sqrt();
        for &c in &counts {
            check((c as f64 - expected).abs() <= tol, || {
                format!("order {n}: occupancies {counts:?}, tolerance ±{tol:.0}")
            })?;
        }
        summary.push(format!(
            "n={n}: spacing {:.2}°, spread {:.3}, occupancy {counts:?}",
            metric.spacing_error.to_degrees(),
            metric.radius_spread
        ));
    }
    Ok(summary.join("; "))
}

fn criterion_7() -> Outcome {
    // Stationary amplitudes r² = 1 (saddle) and 25 (stable) at δ = 0.
    let (s1, s2) = (1.0, 25.0);
    let alpha = 1.0 / f64::sqrt(s1 * s2);
    let eps = f64::sqrt(s1 + s2) * alpha;
    let m = RwaModel::new(3, 0.0, 1.0, alpha, C64::new(eps, 0.0)).unwrap();
    let set = find_fixed_points(&m).map_err(|e| e.to_string())?;
    check(set.origin_stable(), || "origin is not stable".into())?;
    let mut states = vec![C64::new(0.0, 0.0)];
    states.extend(largest_stable(&m));
    let noise = NoiseConfig { seed: 7, ..quiet() };
    let cfg = EnsembleConfig {
        n_traj: 2000,
        t_total: 20.0,
        dt: 1e-3,
        t_transient: 2.0,
        stride: 10,
        kick: Kick::Choice { points: states.clone() },
    };
    let ens = simulate_ensemble(&m, &noise, &cfg).map_err(|e| e.to_string())?;
    let report = detect_clusters(&histogram_of(&ens, &m, &noise)?, 0.2).map_err(|e| e.to_string())?;
    check(report.clusters.len() == 4 && report.central_present, || {
        format!("{} clusters, central {}", report.clusters.len(), report.central_present)
    })?;
    let capture = f64::sqrt(s2) / 3.0;
    let mut stats = SwitchingStats::new(states.len());
    for traj in &ens.trajectories {
        stats.merge(&switching_statistics(traj, ens.sample_interval, &states, capture));
    }
    check(stats.total_transitions() > 0 && stats.all_states_switch(), || {
        format!("transitions {:?}", stats.transitions)
    })?;
    Ok(format!("4 clusters with central spot, transitions {:?}", stats.transitions))
}

fn criterion_8() -> Outcome {
    const N_TRAJ: usize = 2000;
    let noise = NoiseConfig { seed: 3, ..quiet() };
    let opts = ClusterOptions::default();

    let m = RwaModel::new(3, 0.0, 1.0, 0.15, C64::new(1.5, 0.0)).unwrap();
    let set = find_fixed_points(&m).map_err(|e| e.to_string())?;
    let cfg = EnsembleConfig { n_traj: N_TRAJ, t_total: 12.0, dt: 1e-3, t_transient: 8.0, stride: 100, kick: Kick::None };
    let scan = ProbeScanConfig {
        amplitudes: vec![0.0, 0.2, 0.4, 0.8, 1.6, 3.2],
        detuning: 0.0,
        phase: 1.0,
        gain: 1.0,
        extent: auto_extent(&set, &m, &noise, 1.0),
        bins: 101,
        clusters: opts,
    };
    let locked = probe_response_scan(&m, &noise, &cfg, &scan).map_err(|e| e.to_string())?;
    let asym: Vec<f64> = locked.points.iter().map(|p| p.asymmetry).collect();
    let tol = SIGMAS / (N_TRAJ as f64).sqrt();
    check(asym.windows(2).all(|w| w[1] >= w[0] - tol), || format!("asymmetry {asym:?}"))?;
    let last = locked.points.last().unwrap();
    let top = last.occupancies.iter().copied().fold(0.0, f64::max);
    check(last.report.non_central().count() == 1 && top > 0.9, || {
        format!("final clusters {}, occupancies {:?}", last.report.clusters.len(), last.occupancies)
    })?;

    let m = RwaModel::new(3, 0.0, 1.0, 0.2, C64::new(1.02, 0.0)).unwrap();
    let set = find_fixed_points(&m).map_err(|e| e.to_string())?;
    let radius = largest_stable(&m)[0].norm();
    let cfg = EnsembleConfig {
        t_total: 20.0,
        kick: Kick::Ring { radius },
        ..cfg
    };
    let scan = ProbeScanConfig {
        amplitudes: vec![0.0, 1.0, 2.0, 3.0, 4.0],
        detuning: 2.0,
        phase: 0.0,
        extent: auto_extent(&set, &m, &noise, 1.0),
        ..scan
    };
    let detuned = probe_response_scan(&m, &noise, &cfg, &scan).map_err(|e| e.to_string())?;
    // Circular standard deviation s from N trajectories has standard error
    // about s/√(2N); each trajectory counts once.
    let se = |p: &subharmonic::analysis::ProbePoint, k: usize| {
        p.angular_extents[k] / (2.0 * p.occupancies[k] * N_TRAJ as f64).sqrt()
    };
    for k in 0..3 {
        for w in detuned.points.windows(2) {
            let (a, b) = (w[0].angular_extents[k], w[1].angular_extents[k]);
            let tol = SIGMAS * f64::hypot(se(&w[0], k), se(&w[1], k));
            check(b >= a - tol, || format!("member {k}: extent fell from {a:.4} to {b:.4}"))?;
        }
        let (first, last) = (&detuned.points[0], detuned.points.last().unwrap());
        let tol = SIGMAS * f64::hypot(se(first, k), se(last, k));
        check(last.angular_extents[k] > first.angular_extents[k] + tol, || {
            format!("member {k}: no net growth of the angular extent")
        })?;
    }
    let ext: Vec<String> = detuned.points.iter().map(|p| format!("{:.3}", p.mean_angular_extent())).collect();
    Ok(format!(
        "asymmetry {:.3} -> {:.3}, final top occupancy {top:.3}; detuned mean extent [{}]",
        asym[0],
        asym[asym.len() - 1],
        ext.join(", ")
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let m = RwaModel::new(3, 0.0, 1.0, 0.0, C64::new(0.0, 0.0)).unwrap();
    let mut parts = Vec::new();
    for n_th in [0.0, 1.5] {
        let noise = NoiseConfig { n_th, seed: 9, measurement_sigma: 0.0 };
        // Γ₁dt = 0.01; one sample per relaxation time, 1000 per trajectory.
        let cfg = EnsembleConfig {
            n_traj: 1000,
            t_total: 5.0 + 999.0,
            dt: 0.01,
            t_transient: 5.0,
            stride: 100,
            kick: Kick::None,
        };
        let ens = simulate_ensemble(&m, &noise, &cfg).map_err(|e| e.to_string())?;
        check(ens.len() == 1_000_000, || format!("{} samples", ens.len()))?;
        let mean = ens.samples().map(|a| a.norm_sqr()).sum::<f64>() / ens.len() as f64;
        let expected = n_th + 0.5;
        let rel = (mean - expected).abs() / expected;
        check(rel < CALIBRATION_REL, || format!("n_th {n_th}: <|a|^2> = {mean:.4}, expected {expected}"))?;
        parts.push(format!("n_th {n_th}: {mean:.4} vs {expected}"));
    }
    within(start.elapsed(), 60.0, "calibration")?;
    Ok(parts.join("; "))
}

fn run_cli(out: &Path, extra: &[&str]) -> Result<(), String> {
    let mut args = vec!["subharmonic".to_string()];
    args.extend(extra.iter().map(|s| s.to_string()));
    args.push("--out".into());
    args.push(out.display().to_string());
    let status = subharmonic::cli::run_from(&args);
    check(status == 0, || format!("{extra:?} exited with {status}"))
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_10() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let small = [
        "--set", "simulation.n_traj=40",
        "--set", "simulation.t_total_us=1",
        "--set", "simulation.t_transient_us=0.5",
        "--set", "output.samples_csv=true",
        "--set", "basins.resolution=15",
        "--set", "sweep.epsilon_points=6",
        "--set", "sweep.detuning_points=5",
        "--set", "probe_scan.amplitudes_mhz=[0.0, 0.5, 1.0]",
        "--seed", "4242",
    ];
    let commands = ["spectrum", "coeffs", "fixed-points", "basins", "simulate", "histogram", "sweep", "probe-scan"];
    let mut compared = 0;
    for cmd in commands {
        let (a, b, c) = (tmp.path().join(cmd).join("a"), tmp.path().join(cmd).join("b"), tmp.path().join(cmd).join("c"));
        for dir in [&a, &b] {
            if cmd == "histogram" {
                run_cli(dir, &[&["simulate"], &small[..]].concat())?;
            }
            run_cli(dir, &[&[cmd], &small[..]].concat())?;
        }
        // Rerun from the manifest alone.
        let manifest = a.join("manifest.toml").display().to_string();
        if cmd == "histogram" {
            run_cli(&c, &["simulate", "--config", &manifest])?;
        }
        run_cli(&c, &[cmd, "--config", &manifest])?;
        let (fa, fb, fc) = (dir_bytes(&a), dir_bytes(&b), dir_bytes(&c));
        check(fa == fb, || format!("{cmd}: reruns differ"))?;
        check(fa == fc, || format!("{cmd}: manifest rerun differs"))?;
        compared += fa.len();
    }
    Ok(format!("{} commands, {compared} files byte-identical", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("spectral solver", criterion_1),
        ("fixed-point multiplets", criterion_2),
        ("n=2 threshold", criterion_3),
        ("origin stability n>=3", criterion_4),
        ("lossless conservation", criterion_5),
        ("histogram multiplets", criterion_6),
        ("multistability histogram", criterion_7),
        ("probe phenomenology", criterion_8),
        ("linear-noise calibration", criterion_9),
        ("reproducibility", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({t:.1} s): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({t:.1} s): {why}", k + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
