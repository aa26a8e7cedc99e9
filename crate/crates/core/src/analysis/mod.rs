//! Qualitative signatures extracted from simulated data: clusters in IQ
//! histograms, multiplet symmetry, probe response and stability diagrams.

mod clusters;
mod probe;
mod sweep;

pub use clusters::{
    circular_std, detect_clusters, detect_clusters_with, multiplet_symmetry_metric, Cluster, ClusterOptions,
    ClusterReport, SymmetryMetric,
};
pub use probe::{nearest_state_occupancy, probe_response_scan, ProbePoint, ProbeScan, ProbeScanConfig};
pub use sweep::{sweep_pump_detuning, Region, StabilityCell, StabilityDiagram};
