//! The lazy natural random walk on a topology graph and everything derived
//! from it: stationary distribution, consensus iteration, TV distances,
//! eigenvalues, conductance, and mixing times.
//!
//! The walk holds with probability 1/2 and otherwise moves to a uniformly
//! random neighbor: `p_ii = 1/2`, `p_ij = 1/(2 d_i)` for `j` adjacent to
//! `i`. The operator is never materialised; both actions stream over the
//! adjacency lists.

mod conductance;
mod eigen;
mod mixing;
mod report;

pub use conductance::{
    cheeger_bounds, conductance_bruteforce, conductance_halfspace, HalfspaceCut,
};
pub use eigen::{
    second_eigenvalue, second_eigenvalue_dense, second_eigenvalue_iterative, sinclair_bounds,
    spectral_gap, DEFAULT_EIGEN_TOL,
};
pub use mixing::{empirical_mixing_time, StartPolicy};
pub use report::SpectralReport;

use crate::error::{Error, Result};
use crate::topology::{is_connected, TopologyGraph};

/// Sensor observations, one real per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    values: Vec<f64>,
}

impl StateVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("state vector must be non-empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("state vector entries must be finite"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// A probability distribution over vertices: nonnegative, sums to 1
/// within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("distribution must be non-empty"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("distribution weights must be nonnegative"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "distribution sums to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("distribution must be non-empty"));
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
        })
    }

    /// Point mass on vertex `i`.
    pub fn delta(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::invalid(format!("vertex {i} outside 0..{n}")));
        }
        let mut weights = vec![0.0; n];
        weights[i] = 1.0;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub(crate) fn from_raw(weights: Vec<f64>) -> Self {
        Self { weights }
    }
}

/// Total variation distance `(1/2) sum |a_i - b_i|`.
pub fn tv_distance(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(tv_distance_raw(a.weights(), b.weights()))
}

pub(crate) fn tv_distance_raw(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Read-only view of the lazy natural random walk on a graph.
///
/// Construction fails on isolated vertices (the move step is undefined
/// there); the single-vertex graph is the identity walk.
#[derive(Debug, Clone)]
pub struct WalkMatrix<'g> {
    g: &'g TopologyGraph,
    inv_two_deg: Vec<f64>,
}

impl<'g> WalkMatrix<'g> {
    pub fn new(g: &'g TopologyGraph) -> Result<Self> {
        let n = g.n();
        let mut inv_two_deg = Vec::with_capacity(n);
        for i in 0..n {
            let d = g.degree(i);
            if d == 0 {
                if n == 1 {
                    inv_two_deg.push(0.0);
                    continue;
                }
                return Err(Error::DegenerateVertex(i));
            }
            inv_two_deg.push(1.0 / (2.0 * d as f64));
        }
        Ok(Self { g, inv_two_deg })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn graph(&self) -> &'g TopologyGraph {
        self.g
    }

    /// Row action: `out_i = z_i/2 + (1/(2 d_i)) sum_j z_j`.
    pub(crate) fn apply_state_raw(&self, x: &[f64], out: &mut [f64]) {
        if self.n() == 1 {
            out[0] = x[0];
            return;
        }
        for i in 0..x.len() {
            let mut acc = 0.0;
            for &j in self.g.neighbors(i) {
                acc += x[j];
            }
            out[i] = 0.5 * x[i] + self.inv_two_deg[i] * acc;
        }
    }

    /// Column action on distributions: `out_i = v_i/2 + sum_j v_j/(2 d_j)`.
    pub(crate) fn apply_distribution_raw(&self, x: &[f64], out: &mut [f64]) {
        if self.n() == 1 {
            out[0] = x[0];
            return;
        }
        for i in 0..x.len() {
            let mut acc = 0.0;
            for &j in self.g.neighbors(i) {
                acc += x[j] * self.inv_two_deg[j];
            }
            out[i] = 0.5 * x[i] + acc;
        }
    }

    pub fn apply_state(&self, z: &StateVector) -> Result<StateVector> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: z.len(),
            });
        }
        let mut out = vec![0.0; z.len()];
        self.apply_state_raw(z.values(), &mut out);
        StateVector::new(out)
    }

    pub fn apply_distribution(&self, v: &Distribution) -> Result<Distribution> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: v.len(),
            });
        }
        let mut out = vec![0.0; v.len()];
        self.apply_distribution_raw(v.weights(), &mut out);
        Ok(Distribution::from_raw(out))
    }
}

/// Degree-proportional stationary distribution `pi_i = d_i / sum_j d_j`.
pub fn stationary_distribution(g: &TopologyGraph) -> Result<Distribution> {
    if !is_connected(g) {
        return Err(Error::NotConnected);
    }
    if g.n() == 1 {
        return Ok(Distribution::from_raw(vec![1.0]));
    }
    let total: usize = (0..g.n()).map(|i| g.degree(i)).sum();
    Ok(Distribution::from_raw(
        (0..g.n())
            .map(|i| g.degree(i) as f64 / total as f64)
            .collect(),
    ))
}

/// `k` synchronous averaging steps from `z0`.
pub fn consensus_iterate(w: &WalkMatrix, z0: &StateVector, k: usize) -> Result<StateVector> {
    if z0.len() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: z0.len(),
        });
    }
    if !is_connected(w.graph()) {
        return Err(Error::NotConnected);
    }
    let mut cur = z0.values().to_vec();
    let mut next = vec![0.0; cur.len()];
    for _ in 0..k {
        w.apply_state_raw(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    StateVector::new(cur)
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::geometry::{PointSet, TorusPoint};
    use crate::topology::{build_disk_graph, TopologyGraph};
    use nalgebra::DMatrix;

    /// Ring of `n` equally spaced points on the circle.
    pub fn ring(n: usize) -> TopologyGraph {
        let pts: Vec<TorusPoint> = (0..n)
            .map(|i| TorusPoint::new(vec![i as f64 / n as f64]).unwrap())
            .collect();
        let ps = PointSet::new(1, 0, pts).unwrap();
        build_disk_graph(&ps, (1.0 / n as f64) + 1e-9).unwrap()
    }

    /// Complete graph on `n` vertices clustered inside a small ball.
    pub fn complete(n: usize) -> TopologyGraph {
        let pts: Vec<TorusPoint> = (0..n)
            .map(|i| TorusPoint::new(vec![0.4 + 0.0001 * i as f64]).unwrap())
            .collect();
        let ps = PointSet::new(1, 0, pts).unwrap();
        build_disk_graph(&ps, 0.5).unwrap()
    }

    /// Path of `n` vertices spaced by `0.1` (no wrap edge for n <= 5).
    pub fn path(n: usize) -> TopologyGraph {
        assert!(n <= 5);
        let pts: Vec<TorusPoint> = (0..n)
            .map(|i| TorusPoint::new(vec![0.1 * i as f64]).unwrap())
            .collect();
        let ps = PointSet::new(1, 0, pts).unwrap();
        build_disk_graph(&ps, 0.1 + 1e-9).unwrap()
    }

    /// Star: vertex 0 adjacent to `leaves` others, leaves mutually far.
    pub fn star(leaves: usize) -> TopologyGraph {
        assert!((2..=3).contains(&leaves));
        let mut coords = vec![vec![0.5, 0.5]];
        let offsets = [[0.08, 0.0], [0.0, 0.08], [-0.08, 0.0]];
        for o in offsets.iter().take(leaves) {
            coords.push(vec![0.5 + o[0], 0.5 + o[1]]);
        }
        let pts: Vec<TorusPoint> = coords
            .into_iter()
            .map(|c| TorusPoint::new(c).unwrap())
            .collect();
        let ps = PointSet::new(2, 0, pts).unwrap();
        build_disk_graph(&ps, 0.09).unwrap()
    }

    /// Dense row-stochastic matrix of the lazy walk, for oracle tests.
    pub fn dense_walk(g: &TopologyGraph) -> DMatrix<f64> {
        let n = g.n();
        let mut p = DMatrix::zeros(n, n);
        for i in 0..n {
            p[(i, i)] = if n == 1 { 1.0 } else { 0.5 };
            let d = g.degree(i) as f64;
            for &j in g.neighbors(i) {
                p[(i, j)] = 1.0 / (2.0 * d);
            }
        }
        p
    }

    /// Connected random disk graph for property tests, retrying seeds.
    pub fn connected_disk(n: usize, d: usize, r: f64, seed: u64) -> TopologyGraph {
        use crate::geometry::sample_points;
        use crate::topology::is_connected;
        for attempt in 0..200 {
            let ps = sample_points(n, d, seed.wrapping_add(attempt * 7919)).unwrap();
            let g = build_disk_graph(&ps, r).unwrap();
            if is_connected(&g) {
                return g;
            }
        }
        panic!("no connected instance found for n={n}, d={d}, r={r}");
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn dist(w: &[f64]) -> Distribution {
        Distribution::new(w.to_vec()).unwrap()
    }

    fn state(v: &[f64]) -> StateVector {
        StateVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_clique_splits_a_point_mass_evenly() {
        let g = complete(2);
        let w = WalkMatrix::new(&g).unwrap();
        let out = w.apply_distribution(&dist(&[1.0, 0.0])).unwrap();
        assert_eq!(out.weights(), &[0.5, 0.5]);
        let out = w.apply_state(&state(&[1.0, 0.0])).unwrap();
        assert_eq!(out.values(), &[0.5, 0.5]);
    }

    #[test]
    fn triangle_point_mass_spreads_by_half_and_quarters() {
        let g = complete(3);
        let w = WalkMatrix::new(&g).unwrap();
        let out = w.apply_distribution(&dist(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(out.weights(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn uniform_is_fixed_on_regular_graphs() {
        for g in [ring(6), complete(5)] {
            let w = WalkMatrix::new(&g).unwrap();
            let u = Distribution::uniform(g.n()).unwrap();
            let out = w.apply_distribution(&u).unwrap();
            for (a, b) in out.weights().iter().zip(u.weights()) {
                assert_relative_eq!(a, b, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn star_distinguishes_row_and_column_actions() {
        let g = star(3);
        let w = WalkMatrix::new(&g).unwrap();
        let column = w.apply_distribution(&dist(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        for (a, b) in column
            .weights()
            .iter()
            .zip([0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0])
        {
            assert_relative_eq!(*a, b, max_relative = 1e-14);
        }
        let row = w.apply_state(&state(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(row.values(), &[0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn isolated_vertices_are_rejected() {
        use crate::geometry::{PointSet, TorusPoint};
        use crate::topology::build_disk_graph;
        let pts = PointSet::new(
            1,
            0,
            vec![
                TorusPoint::new(vec![0.0]).unwrap(),
                TorusPoint::new(vec![0.05]).unwrap(),
                TorusPoint::new(vec![0.5]).unwrap(),
            ],
        )
        .unwrap();
        let g = build_disk_graph(&pts, 0.1).unwrap();
        let err = WalkMatrix::new(&g).unwrap_err();
        assert!(matches!(err, Error::DegenerateVertex(2)));
    }

    #[test]
    fn single_vertex_walk_is_the_identity() {
        use crate::geometry::{PointSet, TorusPoint};
        use crate::topology::build_disk_graph;
        let pts = PointSet::new(1, 0, vec![TorusPoint::new(vec![0.3]).unwrap()]).unwrap();
        let g = build_disk_graph(&pts, 0.1).unwrap();
        let w = WalkMatrix::new(&g).unwrap();
        let out = w.apply_distribution(&dist(&[1.0])).unwrap();
        assert_eq!(out.weights(), &[1.0]);
    }

    #[test]
    fn walk_rows_are_stochastic() {
        for seed in 0..5 {
            let g = connected_disk(40, 2, 0.25, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let ones = state(&vec![1.0; g.n()]);
            let out = w.apply_state(&ones).unwrap();
            for &v in out.values() {
                assert_relative_eq!(v, 1.0, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn walk_entries_match_their_closed_form() {
        let g = connected_disk(25, 2, 0.3, 3);
        let w = WalkMatrix::new(&g).unwrap();
        for i in 0..g.n() {
            let row = w
                .apply_distribution(&Distribution::delta(g.n(), i).unwrap())
                .unwrap();
            let d = g.degree(i) as f64;
            for j in 0..g.n() {
                let expected = if j == i {
                    0.5
                } else if g.neighbors(i).binary_search(&j).is_ok() {
                    1.0 / (2.0 * d)
                } else {
                    0.0
                };
                assert_eq!(row.weights()[j], expected, "p[{i}][{j}]");
            }
        }
    }

    #[test]
    fn reversibility_holds_as_an_exact_rational_identity() {
        let g = connected_disk(18, 1, 0.2, 1);
        let w = WalkMatrix::new(&g).unwrap();
        let total: usize = (0..g.n()).map(|i| g.degree(i)).sum();
        for i in 0..g.n() {
            let row = w
                .apply_distribution(&Distribution::delta(g.n(), i).unwrap())
                .unwrap();
            for &j in g.neighbors(i) {
                assert_eq!(row.weights()[j], 1.0 / (2.0 * g.degree(i) as f64));
                let flow = g.degree(i) as f64 / total as f64 * row.weights()[j];
                assert_relative_eq!(flow, 1.0 / (2.0 * total as f64), max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn tv_distance_matches_hand_computation() {
        assert_eq!(
            tv_distance(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(),
            0.5
        );
        let a = dist(&[0.3, 0.3, 0.4]);
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(
            tv_distance(&dist(&[1.0, 0.0, 0.0]), &dist(&[0.0, 0.0, 1.0])).unwrap(),
            1.0
        );
        assert!(tv_distance(&dist(&[1.0]), &dist(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn stationary_distribution_matches_degree_formula() {
        let star = star(3);
        let pi = stationary_distribution(&star).unwrap();
        for (a, b) in pi
            .weights()
            .iter()
            .zip([0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0])
        {
            assert_relative_eq!(*a, b, max_relative = 1e-14);
        }

        let path3 = path(3);
        let pi = stationary_distribution(&path3).unwrap();
        for (a, b) in pi.weights().iter().zip([0.25, 0.5, 0.25]) {
            assert_relative_eq!(*a, b, max_relative = 1e-14);
        }

        let reg = ring(8);
        let pi = stationary_distribution(&reg).unwrap();
        for &v in pi.weights() {
            assert_relative_eq!(v, 0.125, max_relative = 1e-14);
        }
    }

    #[test]
    fn stationary_distribution_is_a_fixed_point() {
        for seed in 0..5 {
            let g = connected_disk(30, 2, 0.25, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let pi = stationary_distribution(&g).unwrap();
            let out = w.apply_distribution(&pi).unwrap();
            for (a, b) in out.weights().iter().zip(pi.weights()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stationary_distribution_requires_connectivity() {
        use crate::geometry::{PointSet, TorusPoint};
        use crate::topology::build_disk_graph;
        let pts = PointSet::new(
            1,
            0,
            vec![
                TorusPoint::new(vec![0.0]).unwrap(),
                TorusPoint::new(vec![0.05]).unwrap(),
                TorusPoint::new(vec![0.5]).unwrap(),
                TorusPoint::new(vec![0.55]).unwrap(),
            ],
        )
        .unwrap();
        let g = build_disk_graph(&pts, 0.1).unwrap();
        assert!(matches!(
            stationary_distribution(&g),
            Err(Error::NotConnected)
        ));
    }

    #[test]
    fn consensus_reaches_the_exact_average_on_a_clique() {
        let g = complete(2);
        let w = WalkMatrix::new(&g).unwrap();
        let z0 = state(&[4.0, 0.0]);
        assert_eq!(consensus_iterate(&w, &z0, 0).unwrap(), z0);
        let z1 = consensus_iterate(&w, &z0, 1).unwrap();
        assert_eq!(z1.values(), &[2.0, 2.0]);
    }

    #[test]
    fn consensus_on_the_ring_approaches_the_mean() {
        let g = ring(4);
        let w = WalkMatrix::new(&g).unwrap();
        let z0 = state(&[1.0, 0.0, 0.0, 0.0]);
        let z = consensus_iterate(&w, &z0, 200).unwrap();
        for &v in z.values() {
            assert!((v - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn consensus_matches_dense_matrix_powers() {
        use nalgebra::DVector;
        let g = connected_disk(20, 2, 0.3, 7);
        let w = WalkMatrix::new(&g).unwrap();
        let p = dense_walk(&g);
        let z0: Vec<f64> = (0..g.n()).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut oracle = DVector::from_vec(z0.clone());
        for _ in 0..17 {
            oracle = &p * oracle;
        }
        let ours = consensus_iterate(&w, &state(&z0), 17).unwrap();
        for (a, b) in ours.values().iter().zip(oracle.iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn distribution_validation_rejects_bad_weights() {
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.5, 0.4]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Distribution::new(vec![0.5, 0.5]).is_ok());
        assert!(Distribution::delta(3, 5).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn mean_is_preserved_on_regular_graphs(
            n in 3usize..24,
            k in 0usize..40,
            scale in 0.1f64..10.0,
        ) {
            let g = ring(n);
            let w = WalkMatrix::new(&g).unwrap();
            let z0: Vec<f64> = (0..n).map(|i| scale * ((i * i) as f64 * 0.11).cos()).collect();
            let z0 = state(&z0);
            let zk = consensus_iterate(&w, &z0, k).unwrap();
            prop_assert!((zk.mean() - z0.mean()).abs() <= 1e-10 * z0.mean().abs().max(1.0));
        }

        #[test]
        fn distributions_stay_distributions_under_the_walk(
            n in 2usize..30,
            seed in 0u64..500,
            start in 0usize..30,
        ) {
            let g = connected_disk(n, 1, 0.3, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let mut v = Distribution::delta(n, start % n).unwrap();
            for _ in 0..15 {
                v = w.apply_distribution(&v).unwrap();
            }
            let sum: f64 = v.weights().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(v.weights().iter().all(|&x| x >= 0.0));
        }
    }
}
