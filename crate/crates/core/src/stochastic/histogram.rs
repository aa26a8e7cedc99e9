//! Two-dimensional IQ histograms.
//!
//! Bin `(ix, iy)` covers `[-X + ix·w, -X + (ix+1)·w)` in I and the same in Q,
//! with `w = 2X / bins`. Counts are stored row-major with Q as the row index.
//!
//! The text format is one header line `extent bins total discards` followed by
//! `bins` rows of `bins` space-separated counts, lowest Q first.

use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::FixedPointSet;
use crate::error::{Error, Result};
use crate::rwa::RwaModel;

use super::NoiseConfig;

pub const DEFAULT_BINS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2D {
    pub extent: f64,
    pub bins: usize,
    pub counts: Vec<u64>,
    pub total: u64,
    pub discards: u64,
}

impl Histogram2D {
    pub fn new(extent: f64, bins: usize) -> Result<Self> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::invalid("extent", "must be positive and finite"));
        }
        if bins == 0 {
            return Err(Error::invalid("bins", "must be at least 1"));
        }
        Ok(Histogram2D {
            extent,
            bins,
            counts: vec![0; bins * bins],
            total: 0,
            discards: 0,
        })
    }

    pub fn from_samples(samples: impl IntoIterator<Item = (f64, f64)>, extent: f64, bins: usize) -> Result<Self> {
        let mut h = Histogram2D::new(extent, bins)?;
        h.accumulate(samples);
        Ok(h)
    }

    pub fn bin_width(&self) -> f64 {
        2.0 * self.extent / self.bins as f64
    }

    /// Centre of bin `index` along either axis.
    pub fn bin_centre(&self, index: usize) -> f64 {
        -self.extent + (index as f64 + 0.5) * self.bin_width()
    }

    pub fn bin_index(&self, x: f64) -> Option<usize> {
        let u = (x + self.extent) / self.bin_width();
        if u >= 0.0 && u < self.bins as f64 {
            Some((u as usize).min(self.bins - 1))
        } else {
            None
        }
    }

    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.bins + ix]
    }

    pub fn add(&mut self, i: f64, q: f64) {
        match (self.bin_index(i), self.bin_index(q)) {
            (Some(ix), Some(iy)) => {
                self.counts[iy * self.bins + ix] += 1;
                self.total += 1;
            }
            _ => self.discards += 1,
        }
    }

    pub fn accumulate(&mut self, samples: impl IntoIterator<Item = (f64, f64)>) {
        for (i, q) in samples {
            self.add(i, q);
        }
    }

    pub fn same_geometry(&self, other: &Histogram2D) -> bool {
        self.bins == other.bins && self.extent.to_bits() == other.extent.to_bits()
    }

    pub fn merge(&mut self, other: &Histogram2D) -> Result<()> {
        if !self.same_geometry(other) {
            return Err(Error::IncompatibleHistograms);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
        self.discards += other.discards;
        Ok(())
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.bins * self.bins * 2 + 64);
        let _ = writeln!(s, "{} {} {} {}", self.extent, self.bins, self.total, self.discards);
        for row in self.counts.chunks(self.bins) {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("missing header")?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(format!("header has {} fields, expected 4", fields.len()));
        }
        let extent: f64 = fields[0].parse().map_err(|e| format!("extent: {e}"))?;
        let bins: usize = fields[1].parse().map_err(|e| format!("bins: {e}"))?;
        let total: u64 = fields[2].parse().map_err(|e| format!("total: {e}"))?;
        let discards: u64 = fields[3].parse().map_err(|e| format!("discards: {e}"))?;
        let mut h = Histogram2D::new(extent, bins).map_err(|e| e.to_string())?;
        let mut rows = 0;
        for (iy, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            if iy >= bins {
                return Err("more rows than bins".into());
            }
            let row: Vec<u64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| format!("row {iy}: {e}"))?;
            if row.len() != bins {
                return Err(format!("row {iy} has {} counts, expected {bins}", row.len()));
            }
            h.counts[iy * bins..(iy + 1) * bins].copy_from_slice(&row);
            rows += 1;
        }
        if rows != bins {
            return Err(format!("found {rows} rows, expected {bins}"));
        }
        if h.counts.iter().sum::<u64>() != total {
            return Err("counts do not sum to total".into());
        }
        h.total = total;
        h.discards = discards;
        Ok(h)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Histogram2D::from_text(&text).map_err(|reason| Error::Format {
            path: path.to_path_buf(),
            reason,
        })
    }
}

pub fn merge_histograms(h1: &Histogram2D, h2: &Histogram2D) -> Result<Histogram2D> {
    let mut out = h1.clone();
    out.merge(h2)?;
    Ok(out)
}

/// Extent covering the stable fixed points in output units with a 1.5× margin.
/// Never smaller than five standard deviations of the vacuum noise, so
/// sub-threshold runs still get a sensible window.
pub fn auto_extent(fixed_points: &FixedPointSet, model: &RwaModel, noise: &NoiseConfig, gain: f64) -> f64 {
    let scale = gain * (2.0 * model.gamma1).sqrt();
    let r_max = fixed_points.stable().map(|p| p.amplitude).fold(0.0, f64::max);
    let noise_width = 5.0 * (scale * scale * (noise.n_th + 0.5) / 2.0 + noise.measurement_sigma.powi(2)).sqrt();
    (1.5 * scale * r_max).max(noise_width)
}
