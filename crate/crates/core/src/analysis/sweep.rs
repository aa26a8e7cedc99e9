use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{find_fixed_points, Stability};
use crate::error::{Error, Result};
use crate::rwa::RwaModel;

/// Stable-state content of one parameter cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    GroundOnly,
    Coexistence,
    ExcitedOnly,
    /// No stable state at all, e.g. runaway for n = 5.
    Unbounded,
}

impl Region {
    pub fn code(self) -> u8 {
        match self {
            Region::GroundOnly => 0,
            Region::Coexistence => 1,
            Region::ExcitedOnly => 2,
            Region::Unbounded => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => Region::GroundOnly,
            1 => Region::Coexistence,
            2 => Region::ExcitedOnly,
            3 => Region::Unbounded,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCell {
    pub epsilon: f64,
    pub delta: f64,
    pub origin_stable: bool,
    /// Stable nontrivial fixed points, all families together.
    pub excited_stable: usize,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityDiagram {
    pub epsilons: Vec<f64>,
    pub deltas: Vec<f64>,
    /// Row-major, one row per pump amplitude.
    pub cells: Vec<StabilityCell>,
}

impl StabilityDiagram {
    pub fn cell(&self, i_eps: usize, i_delta: usize) -> &StabilityCell {
        &self.cells[i_eps * self.deltas.len() + i_delta]
    }
}

/// Classifies every (|ε|, δ) cell of `base`, keeping its other parameters and
/// the phase of its pump coefficient.
pub fn sweep_pump_detuning(base: &RwaModel, epsilons: &[f64], deltas: &[f64]) -> Result<StabilityDiagram> {
    if epsilons.is_empty() || deltas.is_empty() {
        return Err(Error::invalid("grid", "pump and detuning grids must be non-empty"));
    }
    let phase = if base.epsilon.norm() > 0.0 { base.epsilon.arg() } else { 0.0 };
    let bare = base.without_probe();
    let cells = (0..epsilons.len() * deltas.len())
        .into_par_iter()
        .map(|idx| {
            let (eps, delta) = (epsilons[idx / deltas.len()], deltas[idx % deltas.len()]);
            let model = bare.with_epsilon(C64::from_polar(eps, phase)).with_delta(delta);
            let set = find_fixed_points(&model)?;
            let origin_stable = set.origin.stability == Stability::Stable;
            let excited_stable = set
                .families
                .iter()
                .flat_map(|f| f.members.iter())
                .filter(|p| p.stability == Stability::Stable)
                .count();
            let region = match (origin_stable, excited_stable > 0) {
                (true, false) => Region::GroundOnly,
                (true, true) => Region::Coexistence,
                (false, true) => Region::ExcitedOnly,
                (false, false) => Region::Unbounded,
            };
            Ok(StabilityCell {
                epsilon: eps,
                delta,
                origin_stable,
                excited_stable,
                region,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityDiagram {
        epsilons: epsilons.to_vec(),
        deltas: deltas.to_vec(),
        cells,
    })
}
