//! Subharmonic oscillation in flux-pumped, SQUID-terminated superconducting
//! resonators.
//!
//! Modulating the flux through the SQUID at n times the fundamental mode
//! frequency excites self-sustained oscillations at the fundamental with an
//! n-fold degenerate phase. The crate goes from device parameters to the
//! observable IQ-plane picture:
//!
//! - [`device`]: SQUID inductance, static phase, mode spectrum and couplings.
//! - [`rwa`]: coefficients of the slow-amplitude equation and its right-hand side.
//! - [`dynamics`]: adaptive integration, fixed points, linear stability, basins.
//! - [`stochastic`]: Langevin ensembles, output quadratures, histograms, switching.
//! - [`analysis`]: cluster detection, multiplet symmetry, probe scans, stability maps.
//! - [`config`] and [`cli`]: the run configuration and the `subharmonic` command.
//!
//! The runnable programs under `examples/` walk through each capability.

// Negated float comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod rwa;
pub mod stochastic;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
