//! Shared fixtures for the benchmark suite.

use slotmix::{build_disk_graph, sample_points, RadioConfig, TopologyGraph};

/// A connected-by-construction dense disk instance.
pub fn disk_instance(n: usize, d: usize, r: f64, seed: u64) -> TopologyGraph {
    let pts = sample_points(n, d, seed).expect("valid sampling parameters");
    build_disk_graph(&pts, r).expect("valid radius")
}

pub fn radio(alpha: f64, beta: f64) -> RadioConfig {
    RadioConfig::new(alpha, beta).expect("valid radio parameters")
}
