use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::clusters::{circular_std, detect_clusters_with, ClusterOptions, ClusterReport};
use crate::dynamics::find_fixed_points;
use crate::error::{Error, Result};
use crate::rwa::{ProbeConfig, RwaModel};
use crate::stochastic::{
    ensemble_quadratures, simulate_ensemble, Ensemble, EnsembleConfig, Histogram2D, NoiseConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeScanConfig {
    /// Probe strengths |ζ|, increasing.
    pub amplitudes: Vec<f64>,
    pub detuning: f64,
    /// Phase of ζ.
    pub phase: f64,
    pub gain: f64,
    pub extent: f64,
    pub bins: usize,
    pub clusters: ClusterOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub amplitude: f64,
    /// Fraction of samples nearest to each member of the unprobed multiplet.
    pub occupancies: Vec<f64>,
    /// 1 − min/max of the occupancies.
    pub asymmetry: f64,
    /// Circular standard deviation of the sample azimuths nearest to each
    /// multiplet member.
    pub angular_extents: Vec<f64>,
    pub report: ClusterReport,
}

impl ProbePoint {
    pub fn mean_angular_extent(&self) -> f64 {
        self.angular_extents.iter().sum::<f64>() / self.angular_extents.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeScan {
    /// Members of the largest stable multiplet of the unprobed model.
    pub reference: Vec<C64>,
    pub points: Vec<ProbePoint>,
}

/// Fraction of samples whose nearest reference state is each entry of
/// `targets`, and the azimuthal spread of those samples. `others` take part in
/// the nearest-state assignment but are not reported.
pub fn nearest_state_occupancy(ensemble: &Ensemble, targets: &[C64], others: &[C64]) -> (Vec<f64>, Vec<f64>) {
    let mut counts = vec![0u64; targets.len()];
    let mut angles: Vec<Vec<f64>> = vec![Vec::new(); targets.len()];
    let mut total = 0u64;
    for a in ensemble.samples() {
        total += 1;
        let best_target = targets
            .iter()
            .enumerate()
            .map(|(k, s)| (k, (a - s).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        let other_d = others.iter().map(|s| (a - s).norm()).fold(f64::INFINITY, f64::min);
        if let Some((k, d)) = best_target {
            if d <= other_d {
                counts[k] += 1;
                angles[k].push(a.arg());
            }
        }
    }
    let occ = counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect();
    let spread = angles.iter().map(|v| circular_std(v.iter().map(|&p| (p, 1.0)))).collect();
    (occ, spread)
}

/// Runs one ensemble per probe amplitude with the same seed, so successive
/// points differ only through the probe.
pub fn probe_response_scan(
    model: &RwaModel,
    noise: &NoiseConfig,
    ensemble: &EnsembleConfig,
    scan: &ProbeScanConfig,
) -> Result<ProbeScan> {
    if scan.amplitudes.is_empty() {
        return Err(Error::invalid("amplitudes", "need at least one probe amplitude"));
    }
    if scan.amplitudes.windows(2).any(|w| w[1] < w[0]) || scan.amplitudes[0] < 0.0 {
        return Err(Error::invalid("amplitudes", "must be non-negative and increasing"));
    }
    let bare = model.without_probe();
    let fps = find_fixed_points(&bare)?;
    let family = fps
        .stable_families()
        .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
        .ok_or(Error::NoStableState)?;
    let reference: Vec<C64> = family.members.iter().map(|p| p.position()).collect();
    let others: Vec<C64> = fps
        .stable()
        .map(|p| p.position())
        .filter(|p| !reference.contains(p))
        .collect();

    let mut points = Vec::with_capacity(scan.amplitudes.len());
    for &amp in &scan.amplitudes {
        let probed = bare.with_probe(ProbeConfig {
            amplitude: C64::from_polar(amp, scan.phase),
            detuning: scan.detuning,
        });
        let ens = simulate_ensemble(&probed, noise, ensemble)?;
        let (occupancies, angular_extents) = nearest_state_occupancy(&ens, &reference, &others);
        let hi = occupancies.iter().copied().fold(0.0, f64::max);
        let lo = occupancies.iter().copied().fold(f64::INFINITY, f64::min);
        let asymmetry = if hi > 0.0 { 1.0 - lo / hi } else { 0.0 };
        let iq = ensemble_quadratures(&ens, &probed, noise, scan.gain)?;
        let hist = Histogram2D::from_samples(iq, scan.extent, scan.bins)?;
        let report = detect_clusters_with(&hist, &scan.clusters)?;
        points.push(ProbePoint {
            amplitude: amp,
            occupancies,
            asymmetry,
            angular_extents,
            report,
        });
    }
    Ok(ProbeScan { reference, points })
}
