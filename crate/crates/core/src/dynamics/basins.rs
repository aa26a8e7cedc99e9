//! Basins of attraction on a square grid of initial conditions.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fixed_points::find_fixed_points;
use super::integrator::Stepper;
use crate::error::{Error, Result};
use crate::rwa::RwaModel;

/// Distance at which a trajectory is considered captured.
pub const CAPTURE_DISTANCE: f64 = 1e-4;
/// Integration cap in units of 1/Γ₁.
pub const TIME_CAP_DECAYS: f64 = 50.0;
const TOLERANCE: f64 = 1e-8;

/// Square grid [−extent, extent]² sampled at `resolution` points per axis
/// (cell centres).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub extent: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub fn coordinate(&self, index: usize) -> f64 {
        let width = 2.0 * self.extent / self.resolution as f64;
        -self.extent + (index as f64 + 0.5) * width
    }

    pub fn point(&self, ix: usize, iy: usize) -> C64 {
        C64::new(self.coordinate(ix), self.coordinate(iy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasinLabel {
    /// Index into [`BasinGrid::attractors`].
    Attractor(usize),
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinGrid {
    pub grid: GridSpec,
    pub attractors: Vec<C64>,
    /// Row-major, `labels[iy * resolution + ix]`.
    pub labels: Vec<BasinLabel>,
}

impl BasinGrid {
    pub fn label(&self, ix: usize, iy: usize) -> BasinLabel {
        self.labels[iy * self.grid.resolution + ix]
    }

    /// Fraction of cells per attractor, followed by the unresolved fraction.
    pub fn shares(&self) -> Vec<f64> {
        let mut counts = vec![0usize; self.attractors.len() + 1];
        for label in &self.labels {
            match label {
                BasinLabel::Attractor(k) => counts[*k] += 1,
                BasinLabel::Unresolved => counts[self.attractors.len()] += 1,
            }
        }
        let total = self.labels.len().max(1) as f64;
        counts.into_iter().map(|c| c as f64 / total).collect()
    }
}

fn settle(a0: C64, model: &RwaModel, attractors: &[C64], t_cap: f64) -> BasinLabel {
    let capture = |a: C64| attractors.iter().position(|p| (a - p).norm() < CAPTURE_DISTANCE);
    if let Some(k) = capture(a0) {
        return BasinLabel::Attractor(k);
    }
    let Ok(mut stepper) = Stepper::new(model, a0, 0.0, TOLERANCE) else {
        return BasinLabel::Unresolved;
    };
    while stepper.time() < t_cap {
        if stepper.step(t_cap).is_err() {
            return BasinLabel::Unresolved;
        }
        if let Some(k) = capture(stepper.state()) {
            return BasinLabel::Attractor(k);
        }
    }
    BasinLabel::Unresolved
}

/// Integrates from every grid point until it comes within
/// [`CAPTURE_DISTANCE`] of a stable fixed point or 50/Γ₁ elapses.
pub fn basin_sample(model: &RwaModel, grid: GridSpec) -> Result<BasinGrid> {
    if !(grid.extent > 0.0) || grid.resolution == 0 {
        return Err(Error::invalid("grid", "extent and resolution must be positive"));
    }
    let set = find_fixed_points(model)?;
    let attractors: Vec<C64> = set.stable().map(|p| p.position()).collect();
    if attractors.is_empty() {
        return Err(Error::NoStableState);
    }
    let t_cap = TIME_CAP_DECAYS / model.gamma1;
    let res = grid.resolution;
    let labels = (0..res * res)
        .into_par_iter()
        .map(|k| settle(grid.point(k % res, k / res), model, &attractors, t_cap))
        .collect();
    Ok(BasinGrid {
        grid,
        attractors,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpumped_basin_is_all_origin() {
        let m = RwaModel::new(3, 0.5, 0.5, 0.2, C64::new(0.0, 0.0)).unwrap();
        let b = basin_sample(&m, GridSpec { extent: 2.0, resolution: 7 }).unwrap();
        assert_eq!(b.attractors, vec![C64::new(0.0, 0.0)]);
        assert!(b.labels.iter().all(|l| *l == BasinLabel::Attractor(0)));
    }

    #[test]
    fn n2_above_threshold_has_two_attractors_only() {
        let m = RwaModel::new(2, -1.0, 0.1, 1.0, C64::new(1.5, 0.0)).unwrap();
        let b = basin_sample(&m, GridSpec { extent: 2.0, resolution: 8 }).unwrap();
        assert_eq!(b.attractors.len(), 2);
        let shares = b.shares();
        assert!(shares[0] > 0.2 && shares[1] > 0.2);
        assert!(shares[0] + shares[1] > 0.99);
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec { extent: 1.0, resolution: 4 };
        assert_eq!(g.coordinate(0), -0.75);
        assert_eq!(g.coordinate(3), 0.75);
    }
}
