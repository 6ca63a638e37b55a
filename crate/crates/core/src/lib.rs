//! Simulation library for gossip-style averaging over wireless networks on
//! the unit torus.
//!
//! The crate is organised as a pipeline:
//!
//! * [`geometry`]: points on the d-dimensional unit torus, the wrap-around
//!   metric, and axis-aligned tilings.
//! * [`topology`]: disk graphs, long-range augmented graphs, and their
//!   cluster-limited variants over a [`geometry::PointSet`].
//! * [`spectral`]: the lazy natural random walk on a graph, its stationary
//!   distribution, second eigenvalue, mixing times, and conductance.
//! * [`mac`]: an SIR interference model with TDMA schedules that realise
//!   every directed link of a graph, plus lower bounds on schedule length.
//! * [`harness`]: experiment configs, scaling sweeps, CSV export, and
//!   log-log slope fits.
//!
//! All randomness flows from explicit `u64` seeds through a fixed counter
//! RNG, so every artifact (point sets, graphs, schedules, sweep tables) is
//! reproducible bit for bit.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod mac;
pub mod spectral;
mod textio;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::{partner_tiles, sample_points, torus_distance, PointSet, Tiling, TorusPoint};
pub use harness::{
    audit_records, export_records, fit_loglog, fit_slope, mixing_proxy, parse_records, plot_script,
    rate_tradeoff, records_to_csv, run_sweep, slot_mixing_time, EpsilonPolicy, ExperimentConfig,
    KindSpec, MixingMode, RadiusGrid, RowSpec, ScalingRecord, SlopeFit, DEFAULT_OUT_DIR,
    EMPIRICAL_N_LIMIT, OUT_DIR_ENV,
};
pub use mac::{
    greedy_schedule, guard_zone_lower_bound, lattice_schedule, min_theta_search,
    required_link_length, sir, slot_outcome, validate_schedule, RadioConfig, SlotAssignment,
    TransmissionSchedule, ValidationReport, DEFAULT_GUARD_DELTA,
};
pub use spectral::{
    cheeger_bounds, conductance_bruteforce, conductance_halfspace, consensus_iterate,
    empirical_mixing_time, second_eigenvalue, second_eigenvalue_dense, second_eigenvalue_iterative,
    sinclair_bounds, spectral_gap, stationary_distribution, tv_distance, Distribution,
    HalfspaceCut, SpectralReport, StartPolicy, StateVector, WalkMatrix, DEFAULT_EIGEN_TOL,
};
pub use topology::{
    build_cluster_graph, build_disk_graph, build_longrange_graph, critical_radius, degree_stats,
    is_connected, DegreeStats, GraphKind, TopologyGraph,
};
