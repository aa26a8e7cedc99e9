//! Run configuration: a TOML document with one table per concern.
//!
//! Frequencies are entered in GHz (device) or MHz (rates of the reduced
//! model) and converted on load. Simulated time is in microseconds, so model
//! rates are carried in rad/µs.

use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::analysis::ClusterOptions;
use crate::device::{frequency_scale_for_fundamental, solve_spectrum, DeviceParams, ModeSpectrum};
use crate::dynamics::{find_fixed_points, GridSpec};
use crate::error::{Error, Result};
use crate::rwa::{FluxFactor, HigherModeConfig, ProbeConfig, PumpConfig, RwaModel};
use crate::stochastic::{EnsembleConfig, Kick, NoiseConfig, DEFAULT_BINS};

/// MHz to rad/µs.
pub fn mhz(x: f64) -> f64 {
    TAU * x
}

/// GHz to rad/s.
pub fn ghz(x: f64) -> f64 {
    TAU * x * 1e9
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub device: DeviceSection,
    pub pump: PumpSection,
    pub model: ModelSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub higher_mode: Option<HigherModeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSection>,
    pub noise: NoiseSection,
    pub simulation: SimulationSection,
    pub analysis: AnalysisSection,
    pub basins: BasinsSection,
    pub sweep: SweepSection,
    pub probe_scan: ProbeScanSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceSection {
    pub e_plus_ghz: f64,
    pub e_minus_ghz: f64,
    pub z0_ohm: f64,
    pub el_cav_ghz: f64,
    /// F = 2πΦ_dc/Φ₀, radians.
    pub static_flux: f64,
    pub n_modes: usize,
    /// Fundamental mode frequency, fixes the length scale of the line.
    pub f1_ghz: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        // γ = 0.05 at F = 0.6, as in DeviceParams::representative.
        let static_flux: f64 = 0.6;
        DeviceSection {
            e_plus_ghz: 400.0,
            e_minus_ghz: 20.0,
            z0_ohm: 50.0,
            el_cav_ghz: 0.05 * 2.0 * 400.0 * (static_flux / 2.0).cos(),
            static_flux,
            n_modes: 3,
            f1_ghz: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpSection {
    pub order: u32,
    pub delta_f0: f64,
    pub pump_phase: f64,
    pub detuning_mhz: f64,
}

impl Default for PumpSection {
    fn default() -> Self {
        PumpSection {
            order: 3,
            delta_f0: 0.05,
            pump_phase: 0.0,
            detuning_mhz: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSource {
    /// α and ε from the device and pump sections.
    Device,
    /// α and ε entered directly below.
    #[default]
    Direct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub source: ModelSource,
    pub flux_factor: FluxFactor,
    pub gamma1_mhz: f64,
    pub alpha_mhz: f64,
    pub epsilon_re_mhz: f64,
    pub epsilon_im_mhz: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            source: ModelSource::Direct,
            flux_factor: FluxFactor::Cosine,
            gamma1_mhz: 1.0,
            alpha_mhz: 0.6,
            epsilon_re_mhz: 3.0,
            epsilon_im_mhz: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HigherModeKind {
    #[default]
    Amplitude,
    Driven,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HigherModeSection {
    pub kind: HigherModeKind,
    pub re: f64,
    pub im: f64,
    pub drive_mhz: f64,
    pub detuning_mhz: f64,
    pub damping_mhz: f64,
}

impl HigherModeSection {
    pub fn to_config(&self) -> HigherModeConfig {
        match self.kind {
            HigherModeKind::Amplitude => HigherModeConfig::Amplitude {
                re: self.re,
                im: self.im,
            },
            HigherModeKind::Driven => HigherModeConfig::Driven {
                drive_amplitude: self.drive_mhz,
                detuning: self.detuning_mhz,
                damping: self.damping_mhz,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeSection {
    pub amplitude_re_mhz: f64,
    pub amplitude_im_mhz: f64,
    pub detuning_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub n_th: f64,
    pub measurement_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KickKind {
    /// Start at the origin.
    #[default]
    None,
    /// Start on a circle of `kick_radius` at a random phase.
    Ring,
    /// Start on a randomly chosen member of the largest stable multiplet.
    Stable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub n_traj: usize,
    pub dt_us: f64,
    pub t_total_us: f64,
    pub t_transient_us: f64,
    pub stride: usize,
    pub kick: KickKind,
    pub kick_radius: f64,
    /// Output gain g in I + iQ = g√(2Γ₁)a.
    pub gain: f64,
    /// Histogram half-width; 0 picks it from the fixed points.
    pub histogram_extent: f64,
    pub histogram_bins: usize,
}

impl Default for SimulationSection {
    fn default() -> Self {
        SimulationSection {
            n_traj: 200,
            dt_us: 2e-4,
            t_total_us: 4.0,
            t_transient_us: 2.0,
            stride: 10,
            kick: KickKind::None,
            kick_radius: 0.0,
            gain: 1.0,
            histogram_extent: 0.0,
            histogram_bins: DEFAULT_BINS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub threshold_fraction: f64,
    pub min_bins: usize,
    /// In output units; 0 uses a tenth of the histogram extent.
    pub central_radius: f64,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            threshold_fraction: 0.2,
            min_bins: 4,
            central_radius: 0.0,
        }
    }
}

impl AnalysisSection {
    pub fn options(&self) -> ClusterOptions {
        ClusterOptions {
            threshold_fraction: self.threshold_fraction,
            min_bins: self.min_bins,
            central_radius: (self.central_radius > 0.0).then_some(self.central_radius),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasinsSection {
    /// Half-width of the initial-condition grid in amplitude units; 0 picks
    /// 1.5× the largest fixed-point amplitude.
    pub extent: f64,
    pub resolution: usize,
}

impl Default for BasinsSection {
    fn default() -> Self {
        BasinsSection {
            extent: 0.0,
            resolution: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub epsilon_min_mhz: f64,
    pub epsilon_max_mhz: f64,
    pub epsilon_points: usize,
    pub detuning_min_mhz: f64,
    pub detuning_max_mhz: f64,
    pub detuning_points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            epsilon_min_mhz: 0.0,
            epsilon_max_mhz: 4.0,
            epsilon_points: 41,
            detuning_min_mhz: -4.0,
            detuning_max_mhz: 4.0,
            detuning_points: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeScanSection {
    pub amplitudes_mhz: Vec<f64>,
    pub detuning_mhz: f64,
    pub phase: f64,
}

impl Default for ProbeScanSection {
    fn default() -> Self {
        ProbeScanSection {
            amplitudes_mhz: vec![0.0, 0.1, 0.2, 0.4, 0.8],
            detuning_mhz: 0.0,
            phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    /// Also dump every sample as (t, I, Q, state_label).
    pub samples_csv: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            samples_csv: false,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn bad(e: Error) -> Error {
    match e {
        Error::InvalidParameter { field, reason } => Error::ConfigInvalid(format!("{field}: {reason}")),
        other => other,
    }
}

fn toml_err(e: impl std::fmt::Display) -> Error {
    Error::ConfigInvalid(e.to_string().trim().to_string())
}

/// Applies `key=value` with a dotted key. The value is read as a TOML value
/// and falls back to a bare string.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::ConfigInvalid(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::ConfigInvalid(format!("malformed key `{key}`")));
    }
    let mut cur = table;
    for part in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::ConfigInvalid(format!("`{part}` in `{key}` is not a section")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(toml_err)?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: RunConfig = table.try_into().map_err(toml_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Commented template with every default.
    pub fn template() -> String {
        let cfg = RunConfig {
            higher_mode: Some(HigherModeSection::default()),
            probe: Some(ProbeSection::default()),
            ..RunConfig::default()
        };
        let body = cfg.to_toml_string();
        format!(
            "# subharmonic run configuration\n\
             # Device energies in GHz (E/h), model rates in MHz (rate/2π), times in µs.\n\
             # model.source = \"device\" derives α and ε from [device] and [pump];\n\
             # \"direct\" takes alpha_mhz and epsilon_*_mhz as given.\n\
             # [higher_mode] and [probe] are optional; delete them to disable.\n\
             # simulation.kick: \"none\", \"ring\" or \"stable\".\n\n{body}"
        )
    }

    /// Checks every section that any command may use.
    pub fn validate(&self) -> Result<()> {
        self.device_params().map_err(bad)?;
        self.pump_config().validate().map_err(bad)?;
        if let Some(hm) = &self.higher_mode {
            hm.to_config().validate().map_err(bad)?;
        }
        if !(self.model.gamma1_mhz > 0.0 && self.model.gamma1_mhz.is_finite()) {
            return Err(Error::ConfigInvalid("model.gamma1_mhz: must be positive".into()));
        }
        if !(self.device.f1_ghz > 0.0) {
            return Err(Error::ConfigInvalid("device.f1_ghz: must be positive".into()));
        }
        self.noise_config().validate().map_err(bad)?;
        let s = &self.simulation;
        if s.n_traj == 0 {
            return Err(Error::ConfigInvalid("simulation.n_traj: must be at least 1".into()));
        }
        if !(s.gain > 0.0) {
            return Err(Error::ConfigInvalid("simulation.gain: must be positive".into()));
        }
        if s.histogram_bins == 0 {
            return Err(Error::ConfigInvalid("simulation.histogram_bins: must be at least 1".into()));
        }
        if !(s.histogram_extent >= 0.0) {
            return Err(Error::ConfigInvalid("simulation.histogram_extent: must be non-negative".into()));
        }
        if s.kick == KickKind::Ring && !(s.kick_radius > 0.0) {
            return Err(Error::ConfigInvalid("simulation.kick_radius: ring kick needs a positive radius".into()));
        }
        if s.stride == 0 {
            return Err(Error::ConfigInvalid("simulation.stride: must be at least 1".into()));
        }
        if !(s.dt_us > 0.0 && s.t_total_us > 0.0 && s.t_transient_us >= 0.0 && s.t_transient_us < s.t_total_us) {
            return Err(Error::ConfigInvalid(
                "simulation: need dt_us > 0 and 0 <= t_transient_us < t_total_us".into(),
            ));
        }
        let a = &self.analysis;
        if !(a.threshold_fraction > 0.0 && a.threshold_fraction < 1.0) {
            return Err(Error::ConfigInvalid("analysis.threshold_fraction: must lie in (0, 1)".into()));
        }
        if self.basins.resolution == 0 {
            return Err(Error::ConfigInvalid("basins.resolution: must be at least 1".into()));
        }
        if self.sweep.epsilon_points == 0 || self.sweep.detuning_points == 0 {
            return Err(Error::ConfigInvalid("sweep: grids must be non-empty".into()));
        }
        let amps = &self.probe_scan.amplitudes_mhz;
        if amps.is_empty() || amps.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::ConfigInvalid(
                "probe_scan.amplitudes_mhz: need a non-empty increasing list".into(),
            ));
        }
        Ok(())
    }

    pub fn device_params(&self) -> Result<DeviceParams> {
        let d = &self.device;
        DeviceParams::new(
            ghz(d.e_plus_ghz),
            ghz(d.e_minus_ghz),
            d.z0_ohm,
            ghz(d.el_cav_ghz),
            d.static_flux,
            d.n_modes,
        )
    }

    pub fn spectrum(&self) -> Result<ModeSpectrum> {
        let params = self.device_params()?;
        let scale = frequency_scale_for_fundamental(&params, ghz(self.device.f1_ghz))?;
        solve_spectrum(&params, scale)
    }

    /// Pump settings in rad/s.
    pub fn pump_config(&self) -> PumpConfig {
        PumpConfig {
            order: self.pump.order,
            delta_f0: self.pump.delta_f0,
            pump_phase: self.pump.pump_phase,
            delta: mhz(self.pump.detuning_mhz) * 1e6,
        }
    }

    pub fn higher_mode_config(&self) -> Option<HigherModeConfig> {
        self.higher_mode.as_ref().map(HigherModeSection::to_config)
    }

    /// Reduced model in rad/µs, probe attached if configured.
    pub fn model(&self) -> Result<RwaModel> {
        let gamma1 = mhz(self.model.gamma1_mhz);
        let model = match self.model.source {
            ModelSource::Direct => RwaModel::new(
                self.pump.order,
                mhz(self.pump.detuning_mhz),
                gamma1,
                mhz(self.model.alpha_mhz),
                C64::new(mhz(self.model.epsilon_re_mhz), mhz(self.model.epsilon_im_mhz)),
            )?,
            ModelSource::Device => {
                let params = self.device_params()?;
                let spectrum = self.spectrum()?;
                let hm = self.higher_mode_config();
                RwaModel::from_device(
                    &params,
                    &spectrum,
                    &self.pump_config(),
                    hm.as_ref(),
                    gamma1 * 1e6,
                    self.model.flux_factor,
                )?
                .rescaled(1e-6)
            }
        };
        Ok(match &self.probe {
            Some(p) => model.with_probe(ProbeConfig {
                amplitude: C64::new(mhz(p.amplitude_re_mhz), mhz(p.amplitude_im_mhz)),
                detuning: mhz(p.detuning_mhz),
            }),
            None => model,
        })
    }

    pub fn noise_config(&self) -> NoiseConfig {
        NoiseConfig {
            n_th: self.noise.n_th,
            seed: self.run.seed,
            measurement_sigma: self.noise.measurement_sigma,
        }
    }

    pub fn ensemble_config(&self, model: &RwaModel) -> Result<EnsembleConfig> {
        let s = &self.simulation;
        let kick = match s.kick {
            KickKind::None => Kick::None,
            KickKind::Ring => Kick::Ring { radius: s.kick_radius },
            KickKind::Stable => {
                let set = find_fixed_points(&model.without_probe())?;
                let family = set
                    .stable_families()
                    .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
                    .ok_or(Error::NoStableState)?;
                Kick::Choice {
                    points: family.members.iter().map(|p| p.position()).collect(),
                }
            }
        };
        Ok(EnsembleConfig {
            n_traj: s.n_traj,
            t_total: s.t_total_us,
            dt: s.dt_us,
            t_transient: s.t_transient_us,
            stride: s.stride,
            kick,
        })
    }

    pub fn basin_grid(&self, model: &RwaModel) -> Result<GridSpec> {
        let extent = if self.basins.extent > 0.0 {
            self.basins.extent
        } else {
            let set = find_fixed_points(&model.without_probe())?;
            let r = set.all().map(|p| p.amplitude).fold(0.0, f64::max);
            if r > 0.0 {
                1.5 * r
            } else {
                1.0
            }
        };
        Ok(GridSpec {
            extent,
            resolution: self.basins.resolution,
        })
    }

    /// Pump amplitudes |ε| and detunings δ of the sweep, rad/µs.
    pub fn sweep_grids(&self) -> (Vec<f64>, Vec<f64>) {
        let s = &self.sweep;
        (
            linspace(mhz(s.epsilon_min_mhz), mhz(s.epsilon_max_mhz), s.epsilon_points),
            linspace(mhz(s.detuning_min_mhz), mhz(s.detuning_max_mhz), s.detuning_points),
        )
    }
}
