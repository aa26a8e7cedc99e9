//! Deterministic analysis of the slow-amplitude equation.

mod basins;
mod fixed_points;
mod integrator;

pub use basins::{basin_sample, BasinGrid, BasinLabel, GridSpec};
pub use fixed_points::{
    amplitude_equation, amplitude_roots, classify, eigenvalues, find_fixed_points, jacobian,
    origin_growth_rate, scan_limit, threshold_n2, Family, FixedPoint, FixedPointSet, Stability,
    DEDUP_DISTANCE, STABILITY_MARGIN,
};
pub use integrator::{integrate, integrate_final, integrate_until, Stepper, Trajectory};
