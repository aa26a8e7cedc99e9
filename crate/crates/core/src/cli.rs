//! The `subharmonic` command: loads a run configuration, dispatches to the
//! library and writes CSV and grid files plus `manifest.toml`, the fully
//! resolved configuration. Rerunning with `--config <out>/manifest.toml`
//! reproduces every output byte for byte.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{detect_clusters_with, probe_response_scan, sweep_pump_detuning, ProbeScanConfig};
use crate::config::{mhz, RunConfig};
use crate::device::static_phase;
use crate::dynamics::{basin_sample, find_fixed_points, FixedPointSet};
use crate::error::{Error, Result};
use crate::io::{
    basin_grid, cluster_rows, dwell_rows, fixed_point_rows, mode_rows, probe_rows, read_rows, sweep_grid,
    sweep_rows, transition_rows, write_rows, CoefficientRow, SampleRow,
};
use crate::rwa::{duffing_coefficient, pump_coefficient, RwaModel};
use crate::stochastic::{
    auto_extent, ensemble_quadratures, label_samples, simulate_ensemble, switching_statistics, Ensemble,
    Histogram2D, SwitchingStats,
};
use crate::C64;

#[derive(Debug, Parser)]
#[command(name = "subharmonic", version, about = "Subharmonic response of flux-pumped SQUID resonators")]
pub struct Cli {
    /// Run configuration (TOML). Defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one configuration value, e.g. `--set pump.order=4`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed, overriding `run.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Mode spectrum: modes.csv.
    Spectrum,
    /// Device-derived coefficients: coefficients.csv.
    Coeffs,
    /// Stationary states and their stability: fixed_points.csv.
    FixedPoints,
    /// Basins of attraction: basins.txt and attractors.csv.
    Basins,
    /// Langevin ensemble: histogram, clusters and switching statistics.
    Simulate,
    /// Re-bin a sample dump into a histogram and detect clusters.
    Histogram {
        /// Sample CSV to read; defaults to samples.csv in the output directory.
        #[arg(long)]
        samples: Option<PathBuf>,
    },
    /// Stability diagram over pump amplitude and detuning.
    Sweep,
    /// Cluster occupancies and shapes versus probe amplitude.
    ProbeScan,
    /// Print a configuration file with every default.
    ConfigTemplate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Coeffs => "coeffs",
            Command::FixedPoints => "fixed-points",
            Command::Basins => "basins",
            Command::Simulate => "simulate",
            Command::Histogram { .. } => "histogram",
            Command::Sweep => "sweep",
            Command::ProbeScan => "probe-scan",
            Command::ConfigTemplate => "config-template",
        }
    }
}

/// Parses arguments, runs, prints a diagnostic on failure and returns the
/// process exit status.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::{ContextKind, ErrorKind};
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return 0;
                }
                ErrorKind::InvalidSubcommand => {
                    let name = e
                        .get(ContextKind::InvalidSubcommand)
                        .map(|v| v.to_string())
                        .unwrap_or_default();
                    eprintln!("error: {}", Error::CommandUnknown(name));
                    return 2;
                }
                _ => {
                    let _ = e.print();
                    return 2;
                }
            }
        }
    };
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut overrides = cli.overrides.clone();
    if let Some(seed) = cli.seed {
        overrides.push(format!("run.seed={seed}"));
    }
    match &cli.config {
        Some(path) => RunConfig::load(path, &overrides),
        None => RunConfig::from_toml_with_overrides("", &overrides),
    }
}

/// Runs one command and returns the files it wrote.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    if let Command::ConfigTemplate = cli.command {
        print!("{}", RunConfig::template());
        return Ok(Vec::new());
    }
    let cfg = resolve_config(cli)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;

    let mut files = match &cli.command {
        Command::Spectrum => spectrum(&cfg, &out)?,
        Command::Coeffs => coeffs(&cfg, &out)?,
        Command::FixedPoints => fixed_points(&cfg, &out)?,
        Command::Basins => basins(&cfg, &out)?,
        Command::Simulate => simulate(&cfg, &out)?,
        Command::Histogram { samples } => {
            let path = samples.clone().unwrap_or_else(|| out.join("samples.csv"));
            histogram(&cfg, &out, &path)?
        }
        Command::Sweep => sweep(&cfg, &out)?,
        Command::ProbeScan => probe_scan(&cfg, &out)?,
        Command::ConfigTemplate => unreachable!(),
    };
    let manifest = out.join("manifest.toml");
    let text = format!("# subharmonic {}\n{}", cli.command.name(), cfg.to_toml_string());
    std::fs::write(&manifest, text).map_err(|e| Error::io(&manifest, e))?;
    files.push(manifest);
    Ok(files)
}

fn spectrum(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let spectrum = cfg.spectrum()?;
    let path = out.join("modes.csv");
    write_rows(&path, mode_rows(&spectrum))?;
    Ok(vec![path])
}

fn coeffs(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let params = cfg.device_params()?;
    let spectrum = cfg.spectrum()?;
    let pump = cfg.pump_config();
    if pump.beyond_linear_regime() {
        eprintln!("warning: delta_f0 = {} is beyond the linear pump regime", pump.delta_f0);
    }
    let hm = cfg.higher_mode_config();
    let eps = pump_coefficient(&params, &spectrum, &pump, hm.as_ref(), cfg.model.flux_factor)?;
    let alpha = duffing_coefficient(&params, &spectrum);
    let to_mhz = |w: f64| w / std::f64::consts::TAU / 1e6;
    let row = |q: &str, re: f64, im: f64, unit: &str| CoefficientRow {
        quantity: q.into(),
        re,
        im,
        unit: unit.into(),
    };
    let mut rows = vec![
        row("gamma", spectrum.gamma, 0.0, "1"),
        row("static_phase", static_phase(&params)?, 0.0, "rad"),
        row("beta1", spectrum.fundamental().beta, 0.0, "1"),
        row("f1", to_mhz(spectrum.fundamental().omega), 0.0, "MHz"),
        row("alpha", to_mhz(alpha), 0.0, "MHz"),
        row(&format!("epsilon{}", pump.order), to_mhz(eps.re), to_mhz(eps.im), "MHz"),
        row("delta", cfg.pump.detuning_mhz, 0.0, "MHz"),
        row("gamma1", cfg.model.gamma1_mhz, 0.0, "MHz"),
    ];
    rows.extend(
        spectrum
            .modes
            .iter()
            .skip(1)
            .map(|m| row(&format!("beta{}", m.index), m.beta, 0.0, "1")),
    );
    let path = out.join("coefficients.csv");
    write_rows(&path, rows)?;
    Ok(vec![path])
}

fn fixed_points(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let model = cfg.model()?;
    let set = find_fixed_points(&model)?;
    let path = out.join("fixed_points.csv");
    write_rows(&path, fixed_point_rows(&set))?;
    Ok(vec![path])
}

#[derive(serde::Serialize)]
struct AttractorRow {
    index: usize,
    re: f64,
    im: f64,
    share: f64,
}

fn basins(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let model = cfg.model()?.without_probe();
    let grid = cfg.basin_grid(&model)?;
    let basins = basin_sample(&model, grid)?;
    let shares = basins.shares();
    let grid_path = out.join("basins.txt");
    basin_grid(&basins).write(&grid_path)?;
    let attr_path = out.join("attractors.csv");
    write_rows(
        &attr_path,
        basins.attractors.iter().enumerate().map(|(k, a)| AttractorRow {
            index: k,
            re: a.re,
            im: a.im,
            share: shares[k],
        }),
    )?;
    Ok(vec![grid_path, attr_path])
}

/// Stable states of the unprobed model, the origin first when it is stable.
fn stable_states(model: &RwaModel) -> Result<(FixedPointSet, Vec<C64>)> {
    let set = find_fixed_points(&model.without_probe())?;
    let states = set.stable().map(|p| p.position()).collect();
    Ok((set, states))
}

/// Capture radius for state labelling: a third of the closest spacing of
/// two stable states, or of the largest amplitude when only one exists.
fn capture_radius(states: &[C64], fallback: f64) -> f64 {
    let mut d = f64::INFINITY;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            d = d.min((a - b).norm());
        }
    }
    if d.is_finite() {
        d / 3.0
    } else {
        fallback.max(1.0) / 3.0
    }
}

fn histogram_extent(cfg: &RunConfig, set: &FixedPointSet, model: &RwaModel) -> f64 {
    if cfg.simulation.histogram_extent > 0.0 {
        cfg.simulation.histogram_extent
    } else {
        auto_extent(set, model, &cfg.noise_config(), cfg.simulation.gain)
    }
}

fn switching(ensemble: &Ensemble, states: &[C64], radius: f64) -> SwitchingStats {
    let mut total = SwitchingStats::new(states.len());
    for traj in &ensemble.trajectories {
        total.merge(&switching_statistics(traj, ensemble.sample_interval, states, radius));
    }
    total
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let model = cfg.model()?;
    let noise = cfg.noise_config();
    let ens_cfg = cfg.ensemble_config(&model)?;
    let (set, states) = stable_states(&model)?;
    let ensemble = simulate_ensemble(&model, &noise, &ens_cfg)?;
    let iq = ensemble_quadratures(&ensemble, &model, &noise, cfg.simulation.gain)?;

    let mut files = Vec::new();
    let extent = histogram_extent(cfg, &set, &model);
    let hist = Histogram2D::from_samples(iq.iter().copied(), extent, cfg.simulation.histogram_bins)?;
    let hist_path = out.join("histogram.txt");
    hist.write(&hist_path)?;
    files.push(hist_path);

    match detect_clusters_with(&hist, &cfg.analysis.options()) {
        Ok(report) => {
            let path = out.join("clusters.csv");
            write_rows(&path, cluster_rows(&report))?;
            files.push(path);
        }
        Err(Error::NoClusters) => eprintln!("note: no clusters above threshold"),
        Err(e) => return Err(e),
    }

    let r_max = set.all().map(|p| p.amplitude).fold(0.0, f64::max);
    let radius = capture_radius(&states, r_max);
    let stats = switching(&ensemble, &states, radius);
    let tpath = out.join("transitions.csv");
    write_rows(&tpath, transition_rows(&stats))?;
    let dpath = out.join("dwell_times.csv");
    write_rows(&dpath, dwell_rows(&stats))?;
    files.extend([tpath, dpath]);

    if cfg.output.samples_csv {
        let path = out.join("samples.csv");
        let mut rows = Vec::with_capacity(iq.len());
        let mut k = 0;
        for traj in &ensemble.trajectories {
            for (j, label) in label_samples(traj, &states, radius).into_iter().enumerate() {
                let t = ensemble.t_first + j as f64 * ensemble.sample_interval;
                rows.push(SampleRow::new(t, iq[k], label));
                k += 1;
            }
        }
        write_rows(&path, rows)?;
        files.push(path);
    }
    Ok(files)
}

fn histogram(cfg: &RunConfig, out: &Path, samples: &Path) -> Result<Vec<PathBuf>> {
    let rows: Vec<SampleRow> = read_rows(samples)?;
    let extent = if cfg.simulation.histogram_extent > 0.0 {
        cfg.simulation.histogram_extent
    } else {
        let model = cfg.model()?;
        let (set, _) = stable_states(&model)?;
        histogram_extent(cfg, &set, &model)
    };
    let hist = Histogram2D::from_samples(rows.iter().map(|r| (r.i, r.q)), extent, cfg.simulation.histogram_bins)?;
    let hist_path = out.join("histogram.txt");
    hist.write(&hist_path)?;
    let report = detect_clusters_with(&hist, &cfg.analysis.options())?;
    let cpath = out.join("clusters.csv");
    write_rows(&cpath, cluster_rows(&report))?;
    Ok(vec![hist_path, cpath])
}

fn sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let model = cfg.model()?.without_probe();
    let (eps, deltas) = cfg.sweep_grids();
    let diagram = sweep_pump_detuning(&model, &eps, &deltas)?;
    let csv_path = out.join("sweep.csv");
    write_rows(&csv_path, sweep_rows(&diagram))?;
    let grid_path = out.join("sweep_regions.txt");
    sweep_grid(&diagram).write(&grid_path)?;
    Ok(vec![csv_path, grid_path])
}

fn probe_scan(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let model = cfg.model()?.without_probe();
    let noise = cfg.noise_config();
    let ens_cfg = cfg.ensemble_config(&model)?;
    let set = find_fixed_points(&model)?;
    let scan = ProbeScanConfig {
        amplitudes: cfg.probe_scan.amplitudes_mhz.iter().map(|&a| mhz(a)).collect(),
        detuning: mhz(cfg.probe_scan.detuning_mhz),
        phase: cfg.probe_scan.phase,
        gain: cfg.simulation.gain,
        extent: histogram_extent(cfg, &set, &model),
        bins: cfg.simulation.histogram_bins,
        clusters: cfg.analysis.options(),
    };
    let result = probe_response_scan(&model, &noise, &ens_cfg, &scan)?;
    let path = out.join("probe_scan.csv");
    write_rows(&path, probe_rows(&result))?;
    Ok(vec![path])
}
