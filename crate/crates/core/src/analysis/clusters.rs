use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::Histogram2D;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterOptions {
    /// Bins at or above this fraction of the peak count belong to a cluster.
    pub threshold_fraction: f64,
    /// Components with fewer bins are treated as speckle.
    pub min_bins: usize,
    /// A cluster whose centroid lies within this distance of the origin is
    /// central. `None` uses a tenth of the histogram extent.
    pub central_radius: Option<f64>,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            threshold_fraction: 0.2,
            min_bins: 4,
            central_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub centroid: (f64, f64),
    /// Counts in the cluster over the histogram total.
    pub weight: f64,
    /// Count-weighted rms distance of the bins from the centroid.
    pub rms_radius: f64,
    /// Count-weighted circular standard deviation of the bin azimuths.
    pub angular_extent: f64,
    pub bins: usize,
    pub counts: u64,
}

impl Cluster {
    pub fn radius(&self) -> f64 {
        self.centroid.0.hypot(self.centroid.1)
    }

    pub fn angle(&self) -> f64 {
        self.centroid.1.atan2(self.centroid.0).rem_euclid(TAU)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    /// Ordered by descending weight.
    pub clusters: Vec<Cluster>,
    pub central_present: bool,
    pub central_radius: f64,
    /// Gaps between angularly adjacent non-central centroids, ascending.
    pub angular_spacings: Vec<f64>,
}

impl ClusterReport {
    pub fn is_central(&self, c: &Cluster) -> bool {
        c.radius() < self.central_radius
    }

    pub fn non_central(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.iter().filter(|c| !self.is_central(c))
    }

    pub fn central(&self) -> Option<&Cluster> {
        self.clusters.iter().find(|c| self.is_central(c))
    }
}

/// Circular standard deviation √(−2 ln R) of weighted angles.
pub fn circular_std(angles_weights: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let (mut s, mut c, mut w) = (0.0, 0.0, 0.0);
    for (phi, wt) in angles_weights {
        s += wt * phi.sin();
        c += wt * phi.cos();
        w += wt;
    }
    if w == 0.0 {
        return 0.0;
    }
    let r = (s.hypot(c) / w).min(1.0);
    (-2.0 * r.ln()).max(0.0).sqrt()
}

pub fn detect_clusters(h: &Histogram2D, threshold_fraction: f64) -> Result<ClusterReport> {
    detect_clusters_with(
        h,
        &ClusterOptions {
            threshold_fraction,
            ..Default::default()
        },
    )
}

pub fn detect_clusters_with(h: &Histogram2D, opts: &ClusterOptions) -> Result<ClusterReport> {
    if !(opts.threshold_fraction > 0.0 && opts.threshold_fraction < 1.0) {
        return Err(Error::invalid("threshold_fraction", "must lie in (0, 1)"));
    }
    if h.total == 0 {
        return Err(Error::NoClusters);
    }
    let b = h.bins;
    let cut = opts.threshold_fraction * h.max_count() as f64;
    let above: Vec<bool> = h.counts.iter().map(|&c| c > 0 && c as f64 >= cut).collect();
    let mut visited = vec![false; b * b];
    let mut clusters = Vec::new();
    let mut stack = Vec::new();

    for start in 0..b * b {
        if !above[start] || visited[start] {
            continue;
        }
        visited[start] = true;
        stack.push(start);
        let mut members = Vec::new();
        while let Some(idx) = stack.pop() {
            members.push(idx);
            let (ix, iy) = ((idx % b) as isize, (idx / b) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (ix + dx, iy + dy);
                    if nx < 0 || ny < 0 || nx >= b as isize || ny >= b as isize {
                        continue;
                    }
                    let n = ny as usize * b + nx as usize;
                    if above[n] && !visited[n] {
                        visited[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        if members.len() < opts.min_bins {
            continue;
        }
        clusters.push(summarise(h, &members));
    }
    if clusters.is_empty() {
        return Err(Error::NoClusters);
    }
    clusters.sort_by(|a, b| b.counts.cmp(&a.counts).then(a.angle().total_cmp(&b.angle())));

    let central_radius = opts.central_radius.unwrap_or(0.1 * h.extent);
    let mut report = ClusterReport {
        clusters,
        central_present: false,
        central_radius,
        angular_spacings: Vec::new(),
    };
    report.central_present = report.central().is_some();
    let mut angles: Vec<f64> = report.non_central().map(Cluster::angle).collect();
    angles.sort_by(f64::total_cmp);
    report.angular_spacings = adjacent_gaps(&angles);
    Ok(report)
}

fn summarise(h: &Histogram2D, members: &[usize]) -> Cluster {
    let b = h.bins;
    let xy = |idx: usize| (h.bin_centre(idx % b), h.bin_centre(idx / b));
    let mut counts = 0u64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &idx in members {
        let w = h.counts[idx] as f64;
        let (x, y) = xy(idx);
        counts += h.counts[idx];
        sx += w * x;
        sy += w * y;
    }
    let wsum = counts as f64;
    let centroid = (sx / wsum, sy / wsum);
    let mut ms = 0.0;
    for &idx in members {
        let (x, y) = xy(idx);
        ms += h.counts[idx] as f64 * ((x - centroid.0).powi(2) + (y - centroid.1).powi(2));
    }
    let angular_extent = circular_std(members.iter().map(|&idx| {
        let (x, y) = xy(idx);
        (y.atan2(x), h.counts[idx] as f64)
    }));
    Cluster {
        centroid,
        weight: wsum / h.total as f64,
        rms_radius: (ms / wsum).sqrt(),
        angular_extent,
        bins: members.len(),
        counts,
    }
}

fn adjacent_gaps(sorted_angles: &[f64]) -> Vec<f64> {
    if sorted_angles.is_empty() {
        return Vec::new();
    }
    let k = sorted_angles.len();
    let mut gaps: Vec<f64> = (0..k)
        .map(|i| {
            if i + 1 < k {
                sorted_angles[i + 1] - sorted_angles[i]
            } else {
                sorted_angles[0] + TAU - sorted_angles[k - 1]
            }
        })
        .collect();
    gaps.sort_by(f64::total_cmp);
    gaps
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryMetric {
    /// Largest deviation of an adjacent angular gap from 2π/n, radians.
    pub spacing_error: f64,
    /// (max − min) / mean of the centroid radii.
    pub radius_spread: f64,
    /// (max − min) / mean of the cluster weights.
    pub weight_spread: f64,
}

pub fn multiplet_symmetry_metric(report: &ClusterReport, n: u32) -> Result<SymmetryMetric> {
    let outer: Vec<&Cluster> = report.non_central().collect();
    if outer.len() != n as usize || n == 0 {
        return Err(Error::WrongMultiplicity {
            expected: n as usize,
            found: outer.len(),
        });
    }
    let ideal = TAU / n as f64;
    let spacing_error = report
        .angular_spacings
        .iter()
        .map(|g| (g - ideal).abs())
        .fold(0.0, f64::max);
    let spread = |v: Vec<f64>| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(*x), h.max(*x)));
        (hi - lo) / mean
    };
    Ok(SymmetryMetric {
        spacing_error,
        radius_spread: spread(outer.iter().map(|c| c.radius()).collect()),
        weight_spread: spread(outer.iter().map(|c| c.weight).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deterministic Gaussian blobs written straight into the bins.
    fn blobs(centres: &[(f64, f64)], sigma: f64, extent: f64, bins: usize) -> Histogram2D {
        let mut h = Histogram2D::new(extent, bins).unwrap();
        for iy in 0..bins {
            for ix in 0..bins {
                let (x, y) = (h.bin_centre(ix), h.bin_centre(iy));
                let v: f64 = centres
                    .iter()
                    .map(|(cx, cy)| (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * sigma * sigma)).exp())
                    .sum();
                let c = (1000.0 * v).round() as u64;
                h.counts[iy * bins + ix] = c;
                h.total += c;
            }
        }
        h
    }

    #[test]
    fn single_blob_at_origin() {
        let h = blobs(&[(0.0, 0.0)], 0.1, 1.0, 41);
        let r = detect_clusters(&h, 0.2).unwrap();
        assert_eq!(r.clusters.len(), 1);
        assert!(r.central_present);
        assert!(r.angular_spacings.is_empty());
    }

    #[test]
    fn synthetic_quadruplet() {
        let centres: Vec<(f64, f64)> = (0..4).map(|k| {
            let phi = 0.3 + k as f64 * TAU / 4.0;
            (0.6 * phi.cos(), 0.6 * phi.sin())
        }).collect();
        let h = blobs(&centres, 0.08, 1.0, 101);
        let r = detect_clusters(&h, 0.2).unwrap();
        assert_eq!(r.clusters.len(), 4);
        assert!(!r.central_present);
        for g in &r.angular_spacings {
            assert!((g - TAU / 4.0).abs() < 0.02);
        }
        let half_bin = 0.5 * h.bin_width();
        for (cx, cy) in &centres {
            let near = r.clusters.iter().any(|c| (c.centroid.0 - cx).abs() < half_bin && (c.centroid.1 - cy).abs() < half_bin);
            assert!(near);
        }
        let m = multiplet_symmetry_metric(&r, 4).unwrap();
        assert!(m.spacing_error < 0.02 && m.radius_spread < 0.02 && m.weight_spread < 0.02);
    }

    #[test]
    fn deleted_member_is_wrong_multiplicity() {
        let centres = [(0.6, 0.0), (-0.3, 0.52)];
        let r = detect_clusters(&blobs(&centres, 0.08, 1.0, 101), 0.2).unwrap();
        assert!(matches!(
            multiplet_symmetry_metric(&r, 3),
            Err(Error::WrongMultiplicity { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn speckle_is_ignored() {
        let mut h = blobs(&[(0.5, 0.0)], 0.08, 1.0, 101);
        let peak = h.max_count();
        h.counts[3] = peak;
        h.total += peak;
        assert_eq!(detect_clusters(&h, 0.2).unwrap().clusters.len(), 1);
    }

    #[test]
    fn empty_histogram_has_no_clusters() {
        let h = Histogram2D::new(1.0, 11).unwrap();
        assert!(matches!(detect_clusters(&h, 0.2), Err(Error::NoClusters)));
    }

    #[test]
    fn circular_std_limits() {
        assert_eq!(circular_std([(1.0, 1.0), (1.0, 2.0)]), 0.0);
        let spread = circular_std([(-0.1, 1.0), (0.1, 1.0)]);
        assert!((spread - 0.1).abs() < 1e-3);
    }
}
