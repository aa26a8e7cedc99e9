//! CSV and integer-grid files written by the command line and read back by
//! the tests. Floats are written in shortest round-trip form, so reading a
//! file reproduces the values bit for bit.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::{ClusterReport, ProbeScan, Region, StabilityDiagram};
use crate::device::ModeSpectrum;
use crate::dynamics::{BasinGrid, BasinLabel, FixedPointSet};
use crate::error::{Error, Result};
use crate::stochastic::{StateLabel, SwitchingStats};

fn format_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: e.to_string(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        format_err(path, e)
    }
}

pub fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| csv_err(path, e))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub n: usize,
    pub kd: f64,
    pub omega: f64,
    pub beta: f64,
}

pub fn mode_rows(spectrum: &ModeSpectrum) -> Vec<ModeRow> {
    spectrum
        .modes
        .iter()
        .map(|m| ModeRow {
            n: m.index,
            kd: m.kd,
            omega: m.omega,
            beta: m.beta,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub quantity: String,
    pub re: f64,
    pub im: f64,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRow {
    /// 0 for the origin, then families by increasing amplitude.
    pub family: usize,
    pub member: usize,
    pub amplitude: f64,
    pub phase: f64,
    pub re: f64,
    pub im: f64,
    pub stability: String,
    pub residual: f64,
}

pub fn fixed_point_rows(set: &FixedPointSet) -> Vec<FixedPointRow> {
    let row = |family, member, p: &crate::dynamics::FixedPoint| FixedPointRow {
        family,
        member,
        amplitude: p.amplitude,
        phase: p.phase,
        re: p.position().re,
        im: p.position().im,
        stability: p.stability.as_str().to_string(),
        residual: p.residual,
    };
    let mut rows = vec![row(0, 0, &set.origin)];
    for (f, fam) in set.families.iter().enumerate() {
        for (m, p) in fam.members.iter().enumerate() {
            rows.push(row(f + 1, m, p));
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    /// Nearest stable state, -1 in transit.
    pub state_label: i64,
}

impl SampleRow {
    pub fn new(t: f64, iq: (f64, f64), label: StateLabel) -> Self {
        SampleRow {
            t,
            i: iq.0,
            q: iq.1,
            state_label: label.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub index: usize,
    pub centroid_i: f64,
    pub centroid_q: f64,
    pub weight: f64,
    pub rms_radius: f64,
    pub angular_extent: f64,
    pub bins: usize,
    pub counts: u64,
    pub central: bool,
}

pub fn cluster_rows(report: &ClusterReport) -> Vec<ClusterRow> {
    report
        .clusters
        .iter()
        .enumerate()
        .map(|(k, c)| ClusterRow {
            index: k,
            centroid_i: c.centroid.0,
            centroid_q: c.centroid.1,
            weight: c.weight,
            rms_radius: c.rms_radius,
            angular_extent: c.angular_extent,
            bins: c.bins,
            counts: c.counts,
            central: report.is_central(c),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub delta: f64,
    pub origin_stable: bool,
    pub excited_stable: usize,
    pub region: u8,
}

pub fn sweep_rows(diagram: &StabilityDiagram) -> Vec<SweepRow> {
    diagram
        .cells
        .iter()
        .map(|c| SweepRow {
            epsilon: c.epsilon,
            delta: c.delta,
            origin_stable: c.origin_stable,
            excited_stable: c.excited_stable,
            region: c.region.code(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow {
    pub from: usize,
    pub to: usize,
    pub count: u64,
}

pub fn transition_rows(stats: &SwitchingStats) -> Vec<TransitionRow> {
    let mut rows = Vec::new();
    for (i, row) in stats.transitions.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if i != j {
                rows.push(TransitionRow { from: i, to: j, count });
            }
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwellRow {
    pub state: usize,
    pub dwell_time: f64,
}

pub fn dwell_rows(stats: &SwitchingStats) -> Vec<DwellRow> {
    stats
        .dwell_times
        .iter()
        .enumerate()
        .flat_map(|(k, d)| d.iter().map(move |&t| DwellRow { state: k, dwell_time: t }))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub amplitude: f64,
    pub member: usize,
    pub occupancy: f64,
    pub angular_extent: f64,
    pub asymmetry: f64,
    pub clusters: usize,
}

pub fn probe_rows(scan: &ProbeScan) -> Vec<ProbeRow> {
    let mut rows = Vec::new();
    for p in &scan.points {
        for (k, (&occ, &ext)) in p.occupancies.iter().zip(&p.angular_extents).enumerate() {
            rows.push(ProbeRow {
                amplitude: p.amplitude,
                member: k,
                occupancy: occ,
                angular_extent: ext,
                asymmetry: p.asymmetry,
                clusters: p.report.clusters.len(),
            });
        }
    }
    rows
}

/// Integer grid: a whitespace-separated header line, then one line of
/// codes per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeGrid {
    pub header: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

impl CodeGrid {
    pub fn to_text(&self) -> String {
        let mut s = self.header.join(" ");
        s.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or("missing header")?
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let rows = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|v| v.parse::<i64>().map_err(|e| e.to_string()))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CodeGrid { header, rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        CodeGrid::from_text(&text).map_err(|e| format_err(path, e))
    }
}

/// Region codes with header `n_epsilon n_delta epsilon_min epsilon_max
/// delta_min delta_max`; row i is pump amplitude i.
pub fn sweep_grid(diagram: &StabilityDiagram) -> CodeGrid {
    let (e, d) = (&diagram.epsilons, &diagram.deltas);
    CodeGrid {
        header: vec![
            e.len().to_string(),
            d.len().to_string(),
            e[0].to_string(),
            e[e.len() - 1].to_string(),
            d[0].to_string(),
            d[d.len() - 1].to_string(),
        ],
        rows: e
            .iter()
            .enumerate()
            .map(|(i, _)| (0..d.len()).map(|j| diagram.cell(i, j).region.code() as i64).collect())
            .collect(),
    }
}

pub fn region_of(code: i64) -> Option<Region> {
    u8::try_from(code).ok().and_then(Region::from_code)
}

/// Attractor index per initial condition, -1 where unresolved. Header
/// `extent resolution`; row iy is the imaginary-part index.
pub fn basin_grid(basins: &BasinGrid) -> CodeGrid {
    let n = basins.grid.resolution;
    CodeGrid {
        header: vec![basins.grid.extent.to_string(), n.to_string()],
        rows: (0..n)
            .map(|iy| {
                (0..n)
                    .map(|ix| match basins.label(ix, iy) {
                        BasinLabel::Attractor(k) => k as i64,
                        BasinLabel::Unresolved => -1,
                    })
                    .collect()
            })
            .collect(),
    }
}
