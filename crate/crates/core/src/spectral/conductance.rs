//! Conductance of the lazy walk. Under `p_ij = 1/(2 d_i)` every directed
//! edge carries probability flow exactly `1/(2 D)` with `D` the degree sum,
//! so cut values reduce to integer arithmetic:
//! `Q(S, S~)/pi(S) = cut(S) / (2 degsum(S))`.

use super::WalkMatrix;
use crate::error::{Error, Result};
use crate::geometry::torus_distance_sq;

const BRUTEFORCE_LIMIT: usize = 22;

/// Exact conductance: minimum of `cut/(2 degsum)` over all nonempty `S`
/// with `pi(S) <= 1/2`, found by Gray-code enumeration of all subsets.
/// Returns the minimum and one minimising subset.
pub fn conductance_bruteforce(w: &WalkMatrix) -> Result<(f64, Vec<usize>)> {
    let g = w.graph();
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("conductance needs at least two vertices"));
    }
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::SizeLimit {
            n,
            max: BRUTEFORCE_LIMIT,
        });
    }
    let degs: Vec<u64> = (0..n).map(|i| g.degree(i) as u64).collect();
    let total: u64 = degs.iter().sum();

    let mut mask = 0u32;
    let mut degsum = 0u64;
    let mut cut = 0i64;
    let mut best_cut = 0u64;
    let mut best_degsum = 0u64;
    let mut best_mask = 0u32;

    for i in 1u32..(1 << n) {
        let v = i.trailing_zeros() as usize;
        let in_neighbors = g
            .neighbors(v)
            .iter()
            .filter(|&&u| mask & (1 << u) != 0)
            .count() as i64;
        let delta = degs[v] as i64 - 2 * in_neighbors;
        if mask & (1 << v) == 0 {
            mask |= 1 << v;
            degsum += degs[v];
            cut += delta;
        } else {
            mask &= !(1 << v);
            degsum -= degs[v];
            cut -= delta;
        }
        debug_assert!(cut >= 0);
        if 2 * degsum <= total
            && (best_degsum == 0 || (cut as u64) * best_degsum < best_cut * degsum)
        {
            best_cut = cut as u64;
            best_degsum = degsum;
            best_mask = mask;
        }
    }
    debug_assert!(best_degsum > 0);

    let subset: Vec<usize> = (0..n).filter(|&v| best_mask & (1 << v) != 0).collect();
    Ok((best_cut as f64 / (2.0 * best_degsum as f64), subset))
}

/// The cut induced by a coordinate halfspace, with its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceCut {
    pub axis: usize,
    /// `Q / min(mass, 1 - mass)`; an upper bound on the conductance.
    /// Zero when no edge crosses.
    pub value: f64,
    /// Probability flow `Q(S, S~)` across the cut.
    pub q: f64,
    /// Stationary mass `pi(S)` of `S = {x[axis] < 1/2}`.
    pub mass: f64,
    /// Crossing edges no longer than the construction radius.
    pub short_crossings: usize,
    /// Crossing edges longer than the construction radius.
    pub long_crossings: usize,
}

/// Evaluate the halfspace cut `S = {points with coordinate[axis] < 1/2}`.
pub fn conductance_halfspace(w: &WalkMatrix, axis: usize) -> Result<HalfspaceCut> {
    let g = w.graph();
    let pts = g.points();
    if axis >= pts.dimension() {
        return Err(Error::invalid(format!(
            "axis {axis} outside 0..{}",
            pts.dimension()
        )));
    }
    let n = g.n();
    let r = g.kind().radius();
    let in_s: Vec<bool> = (0..n).map(|i| pts.point(i).coords()[axis] < 0.5).collect();
    let mut degsum_s = 0u64;
    let mut total = 0u64;
    let mut cut = 0u64;
    let mut short_crossings = 0usize;
    let mut long_crossings = 0usize;
    for i in 0..n {
        let d = g.degree(i) as u64;
        total += d;
        if in_s[i] {
            degsum_s += d;
        }
        for &j in g.neighbors(i) {
            if i < j && in_s[i] != in_s[j] {
                cut += 1;
                let len_sq = torus_distance_sq(pts.point(i).coords(), pts.point(j).coords());
                if len_sq <= r * r {
                    short_crossings += 1;
                } else {
                    long_crossings += 1;
                }
            }
        }
    }
    let mass = if total > 0 {
        degsum_s as f64 / total as f64
    } else {
        0.0
    };
    let q = if total > 0 {
        cut as f64 / (2.0 * total as f64)
    } else {
        0.0
    };
    let value = if cut == 0 {
        0.0
    } else {
        q / mass.min(1.0 - mass)
    };
    Ok(HalfspaceCut {
        axis,
        value,
        q,
        mass,
        short_crossings,
        long_crossings,
    })
}

/// Two-sided spectral gap estimate from a conductance value:
/// `h^2/2 <= 1 - mu2 <= 2h`.
pub fn cheeger_bounds(h: f64) -> Result<(f64, f64)> {
    if !h.is_finite() || !(0.0..=1.0).contains(&h) {
        return Err(Error::invalid(format!(
            "conductance {h} must lie in [0, 1]"
        )));
    }
    Ok((0.5 * h * h, 2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::spectral::{spectral_gap, WalkMatrix};
    use approx::assert_relative_eq;

    /// Independent oracle: recompute cut and degree sum from scratch for
    /// every subset encoded by a counter, no incremental updates.
    fn naive_conductance(w: &WalkMatrix) -> f64 {
        let g = w.graph();
        let n = g.n();
        let total: u64 = (0..n).map(|i| g.degree(i) as u64).sum();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) {
            let degsum: u64 = (0..n)
                .filter(|&v| mask & (1 << v) != 0)
                .map(|v| g.degree(v) as u64)
                .sum();
            if 2 * degsum > total {
                continue;
            }
            let mut cut = 0u64;
            for (u, v) in g.edges() {
                if (mask & (1 << u) != 0) != (mask & (1 << v) != 0) {
                    cut += 1;
                }
            }
            best = best.min(cut as f64 / (2.0 * degsum as f64));
        }
        best
    }

    #[test]
    fn two_clique_conductance_is_one_half() {
        let g = complete(2);
        let w = WalkMatrix::new(&g).unwrap();
        let (h, subset) = conductance_bruteforce(&w).unwrap();
        assert_eq!(h, 0.5);
        assert_eq!(subset.len(), 1);
    }

    #[test]
    fn complete_four_prefers_the_balanced_cut() {
        let g = complete(4);
        let w = WalkMatrix::new(&g).unwrap();
        let (h, subset) = conductance_bruteforce(&w).unwrap();
        assert_relative_eq!(h, 1.0 / 3.0, max_relative = 1e-12);
        assert_eq!(subset.len(), 2);
    }

    #[test]
    fn ring_of_four_cuts_two_edges() {
        let g = ring(4);
        let w = WalkMatrix::new(&g).unwrap();
        let (h, _) = conductance_bruteforce(&w).unwrap();
        assert_eq!(h, 0.25);
    }

    #[test]
    fn disconnected_graphs_have_zero_conductance() {
        use crate::geometry::{PointSet, TorusPoint};
        use crate::topology::build_disk_graph;
        let pts = PointSet::new(
            1,
            0,
            vec![
                TorusPoint::new(vec![0.0]).unwrap(),
                TorusPoint::new(vec![0.02]).unwrap(),
                TorusPoint::new(vec![0.5]).unwrap(),
                TorusPoint::new(vec![0.52]).unwrap(),
            ],
        )
        .unwrap();
        let g = build_disk_graph(&pts, 0.05).unwrap();
        let w = WalkMatrix::new(&g).unwrap();
        let (h, _) = conductance_bruteforce(&w).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn bruteforce_rejects_oversized_instances() {
        let g = connected_disk(23, 1, 0.4, 0);
        let w = WalkMatrix::new(&g).unwrap();
        assert!(matches!(
            conductance_bruteforce(&w),
            Err(Error::SizeLimit { n: 23, max: 22 })
        ));
    }

    #[test]
    fn gray_code_enumeration_matches_the_naive_oracle() {
        for seed in 0..8 {
            let n = 6 + (seed as usize % 7);
            let g = connected_disk(n, 1 + (seed as usize % 2), 0.35, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let (h, subset) = conductance_bruteforce(&w).unwrap();
            assert_eq!(h, naive_conductance(&w), "seed {seed}");
            let degsum: u64 = subset.iter().map(|&v| g.degree(v) as u64).sum();
            let total: u64 = (0..n).map(|i| g.degree(i) as u64).sum();
            assert!(2 * degsum <= total);
            let mut cut = 0u64;
            for (u, v) in g.edges() {
                if subset.contains(&u) != subset.contains(&v) {
                    cut += 1;
                }
            }
            assert_eq!(h, cut as f64 / (2.0 * degsum as f64));
        }
    }

    #[test]
    fn halfspace_cut_on_four_spaced_points() {
        use crate::geometry::{PointSet, TorusPoint};
        use crate::topology::build_disk_graph;
        let pts = PointSet::new(
            1,
            0,
            vec![
                TorusPoint::new(vec![0.0]).unwrap(),
                TorusPoint::new(vec![0.25]).unwrap(),
                TorusPoint::new(vec![0.5]).unwrap(),
                TorusPoint::new(vec![0.75]).unwrap(),
            ],
        )
        .unwrap();
        let g = build_disk_graph(&pts, 0.3).unwrap();
        let w = WalkMatrix::new(&g).unwrap();
        let cut = conductance_halfspace(&w, 0).unwrap();
        assert_eq!(cut.short_crossings, 2);
        assert_eq!(cut.long_crossings, 0);
        assert_relative_eq!(cut.q, 2.0 / 16.0, max_relative = 1e-12);
        assert_relative_eq!(cut.mass, 0.5, max_relative = 1e-12);
        assert_relative_eq!(cut.value, 0.25, max_relative = 1e-12);

        let (h, _) = conductance_bruteforce(&w).unwrap();
        assert_eq!(h, 0.25);
    }

    #[test]
    fn one_sided_point_clouds_have_empty_cuts() {
        use crate::geometry::{PointSet, TorusPoint};
        use crate::topology::build_disk_graph;
        let pts = PointSet::new(
            1,
            0,
            (0..5)
                .map(|i| TorusPoint::new(vec![0.1 + 0.05 * i as f64]).unwrap())
                .collect(),
        )
        .unwrap();
        let g = build_disk_graph(&pts, 0.06).unwrap();
        let w = WalkMatrix::new(&g).unwrap();
        let cut = conductance_halfspace(&w, 0).unwrap();
        assert_eq!(cut.value, 0.0);
        assert_eq!(cut.short_crossings + cut.long_crossings, 0);
        assert!(conductance_halfspace(&w, 1).is_err());
    }

    #[test]
    fn halfspace_upper_bounds_the_bruteforce_minimum() {
        for seed in 0..12 {
            let d = 1 + (seed as usize % 2);
            let g = connected_disk(10 + (seed as usize % 5), d, 0.35, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let (h, _) = conductance_bruteforce(&w).unwrap();
            for axis in 0..d {
                let cut = conductance_halfspace(&w, axis).unwrap();
                if cut.value > 0.0 {
                    assert!(
                        h <= cut.value + 1e-12,
                        "seed {seed} axis {axis}: {h} > {}",
                        cut.value
                    );
                }
            }
        }
    }

    #[test]
    fn cheeger_bounds_match_hand_computation() {
        assert_eq!(cheeger_bounds(0.5).unwrap(), (0.125, 1.0));
        assert_eq!(cheeger_bounds(0.0).unwrap(), (0.0, 0.0));
        assert!(cheeger_bounds(1.5).is_err());
        assert!(cheeger_bounds(-0.1).is_err());
        assert!(cheeger_bounds(f64::NAN).is_err());
    }

    #[test]
    fn cheeger_sandwich_holds_on_random_instances() {
        for seed in 0..10 {
            let d = 1 + (seed as usize % 2);
            let g = connected_disk(8 + (seed as usize % 8), d, 0.35, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let (h, _) = conductance_bruteforce(&w).unwrap();
            let gap = spectral_gap(&w).unwrap();
            let (lo, hi) = cheeger_bounds(h).unwrap();
            assert!(
                lo <= gap + 1e-9 && gap <= hi + 1e-9,
                "seed {seed}: {lo} <= {gap} <= {hi}"
            );
        }
    }
}
