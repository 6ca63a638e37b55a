//! Parity lattice TDMA protocol: tile the torus with side `theta * l`
//! (rounded to an even tile count per axis), cycle through the 2^d
//! coordinate-parity classes, and within a class let each active tile
//! transmit its occupants one per slot in lockstep. Also the matching
//! guard-zone lower bound on any feasible schedule length.

use super::validate::validate_schedule;
use super::{RadioConfig, SlotAssignment, TransmissionSchedule};
use crate::error::{Error, Result};
use crate::geometry::{torus_distance_sq, Tiling};
use crate::textio::fmt_real;
use crate::topology::{GraphKind, TopologyGraph};
use std::f64::consts::SQRT_2;

pub const DEFAULT_GUARD_DELTA: f64 = 0.1;

const THETA_LO_CENTS: usize = 102;
const THETA_CAP_CENTS: usize = 6400;

/// Longest link length the schedule must support: the construction
/// radius for disk graphs, and the long-range edge cap `s / sqrt(2)`
/// (never shorter than `r`) for the long-range variants.
pub fn required_link_length(g: &TopologyGraph) -> f64 {
    match *g.kind() {
        GraphKind::Disk { r } => r,
        GraphKind::LongRange { r, s, .. } => r.max(s / SQRT_2),
        GraphKind::Cluster { r, gamma, .. } => r.max(r.powf(gamma) / SQRT_2),
    }
}

/// Tiling used by the lattice protocol at separation parameter `theta`:
/// the finest even tile count whose side is at least `theta * l`. The
/// even count keeps coordinate parity meaningful across the wraparound.
fn lattice_tiling(d: usize, x: f64) -> Result<Tiling> {
    let half_count = (1.0 / (2.0 * x)).floor() as usize;
    debug_assert!(half_count >= 1);
    Tiling::with_tiles_per_axis(d, 2 * half_count)
}

pub fn lattice_schedule(
    g: &TopologyGraph,
    radio: &RadioConfig,
    theta: f64,
) -> Result<TransmissionSchedule> {
    radio.require_exceeds_dimension(g.dimension())?;
    if !theta.is_finite() || theta <= 1.0 {
        return Err(Error::invalid(format!(
            "separation parameter {theta} must exceed 1"
        )));
    }
    let ell = required_link_length(g);
    let x = theta * ell;
    if x > 0.5 {
        return Err(Error::invalid(format!(
            "tile side {x} exceeds 1/2; parity classes degenerate under wraparound"
        )));
    }
    let d = g.dimension();
    let tiling = lattice_tiling(d, x)?;
    let mut occupants: Vec<Vec<usize>> = vec![Vec::new(); tiling.tile_count()];
    let pts = g.points();
    for v in 0..g.n() {
        let tile = tiling.tile_of(pts.point(v))?;
        occupants[tiling.linear_index(&tile)].push(v);
    }
    let mut slots = Vec::new();
    for phase in 0..(1usize << d) {
        let active: Vec<&Vec<usize>> = (0..tiling.tile_count())
            .filter(|&t| {
                tiling
                    .axis_indices(t)
                    .iter()
                    .enumerate()
                    .all(|(axis, &c)| c % 2 == (phase >> axis) & 1)
            })
            .map(|t| &occupants[t])
            .collect();
        let depth = active.iter().map(|o| o.len()).max().unwrap_or(0);
        for q in 0..depth {
            let txs: Vec<usize> = active.iter().filter_map(|o| o.get(q).copied()).collect();
            slots.push(SlotAssignment::new(txs)?);
        }
    }
    TransmissionSchedule::new(
        g.n(),
        *radio,
        "lattice",
        vec![
            ("theta".into(), fmt_real(theta)),
            ("side".into(), fmt_real(tiling.side())),
        ],
        slots,
    )
}

/// Smallest `theta` on the 0.01 grid in (1.01, 64] whose lattice schedule
/// validates, by boundary bisection. The result is feasible and, unless
/// it sits at the grid's lower end, `theta - 0.01` is infeasible.
pub fn min_theta_search(g: &TopologyGraph, radio: &RadioConfig) -> Result<f64> {
    radio.require_exceeds_dimension(g.dimension())?;
    let ell = required_link_length(g);
    let side_cap = ((0.5 / ell) * 100.0 + 1e-9).floor() as usize;
    let k_hi = side_cap.min(THETA_CAP_CENTS);
    if k_hi < THETA_LO_CENTS {
        return Err(Error::SearchFailure(format!(
            "link length {ell} leaves no admissible tile side at theta > 1.01"
        )));
    }
    let feasible = |k: usize| -> Result<bool> {
        let sched = lattice_schedule(g, radio, k as f64 / 100.0)?;
        Ok(validate_schedule(g, &sched)?.feasible)
    };
    if feasible(THETA_LO_CENTS)? {
        return Ok(THETA_LO_CENTS as f64 / 100.0);
    }
    if !feasible(k_hi)? {
        return Err(Error::SearchFailure(format!(
            "no feasible theta at resolution 0.01 up to {}",
            k_hi as f64 / 100.0
        )));
    }
    let (mut lo, mut hi) = (THETA_LO_CENTS, k_hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi as f64 / 100.0)
}

/// Lower bound on the length of any feasible schedule: every point in
/// the guard ball of radius `l (1 - delta2) beta^(1/alpha)` around the
/// worst receiver must transmit in a distinct slot. The count includes
/// the center, so the bound is at least 1.
pub fn guard_zone_lower_bound(
    g: &TopologyGraph,
    radio: &RadioConfig,
    delta2: f64,
) -> Result<usize> {
    radio.require_exceeds_dimension(g.dimension())?;
    if !delta2.is_finite() || delta2 <= 0.0 || delta2 >= 1.0 {
        return Err(Error::invalid(format!(
            "guard slack {delta2} must lie in (0, 1)"
        )));
    }
    let ell = required_link_length(g);
    let r_min = ell * (1.0 - delta2) * radio.beta().powf(1.0 / radio.alpha());
    let r_sq = r_min * r_min;
    let pts = g.points();
    let n = g.n();
    let mut best = 0usize;
    for j in 0..n {
        let cj = pts.point(j).coords();
        let count = (0..n)
            .filter(|&k| torus_distance_sq(pts.point(k).coords(), cj) <= r_sq)
            .count();
        best = best.max(count);
    }
    Ok(best)
}

/// Worst normalized interference seen by any intended receiver across a
/// schedule: `max I * l^alpha * (theta - 1)^alpha`. Test instrumentation
/// for the lattice separation guarantee.
#[cfg(test)]
pub(crate) fn lattice_interference_coefficient(
    g: &TopologyGraph,
    sched: &TransmissionSchedule,
    theta: f64,
) -> f64 {
    let alpha = sched.radio().alpha();
    let ell = required_link_length(g);
    let pts = g.points();
    let mut worst: f64 = 0.0;
    for slot in sched.slots() {
        for &tx in slot.transmitters() {
            for &rx in g.neighbors(tx) {
                if slot.contains(rx) {
                    continue;
                }
                let i: f64 = slot
                    .transmitters()
                    .iter()
                    .filter(|&&k| k != tx)
                    .map(|&k| {
                        super::path_loss(
                            torus_distance_sq(pts.point(k).coords(), pts.point(rx).coords()),
                            alpha,
                        )
                    })
                    .sum();
                worst = worst.max(i * ell.powf(alpha) * (theta - 1.0).powf(alpha));
            }
        }
    }
    worst
}
