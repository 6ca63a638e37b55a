//! Empirical mixing time: evolve vertex-delta distributions under the walk
//! and report the first step at which the worst total-variation distance to
//! the stationary distribution drops to `eps`. Convexity makes delta starts
//! realise the supremum over all initial distributions.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{stationary_distribution, tv_distance_raw, WalkMatrix};
use crate::error::{Error, Result};

/// Which delta starts to track.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPolicy {
    /// Every vertex; exact worst case.
    AllDeltas,
    /// A seeded sample of distinct vertices; a lower bound on the worst
    /// case, for instances too large to track fully.
    Sampled { count: usize, seed: u64 },
}

const STEP_CAP: usize = 200_000;

/// Smallest `k` with `max_start tv(P^k delta, pi) <= eps`.
pub fn empirical_mixing_time(w: &WalkMatrix, eps: f64, policy: StartPolicy) -> Result<usize> {
    if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 {
        return Err(Error::invalid(format!("eps {eps} must lie in (0, 1)")));
    }
    let n = w.n();
    let pi = stationary_distribution(w.graph())?;
    let pi = pi.weights().to_vec();
    if n == 1 {
        return Ok(0);
    }

    let starts: Vec<usize> = match policy {
        StartPolicy::AllDeltas => (0..n).collect(),
        StartPolicy::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::invalid("sampled start policy needs count >= 1"));
            }
            let mut idx: Vec<usize> = (0..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            idx.shuffle(&mut rng);
            idx.truncate(count.min(n));
            idx
        }
    };

    // Per-start TV decay is monotone, so a start that has reached eps can
    // be retired; the answer is the step at which the last one retires.
    let mut active: Vec<Vec<f64>> = Vec::new();
    for &s in &starts {
        let mut v = vec![0.0; n];
        v[s] = 1.0;
        if tv_distance_raw(&v, &pi) > eps {
            active.push(v);
        }
    }
    if active.is_empty() {
        return Ok(0);
    }

    let mut next = vec![0.0; n];
    let mut last_worst = 1.0f64;
    for step in 1..=STEP_CAP {
        let mut worst = 0.0f64;
        active.retain_mut(|v| {
            w.apply_distribution_raw(v, &mut next);
            std::mem::swap(v, &mut next);
            let tv = tv_distance_raw(v, &pi);
            if tv > eps {
                worst = worst.max(tv);
                true
            } else {
                false
            }
        });
        if active.is_empty() {
            return Ok(step);
        }
        last_worst = worst;
    }
    Err(Error::BudgetExhausted {
        budget: STEP_CAP,
        last_distance: last_worst,
    })
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::geometry::{PointSet, TorusPoint};
    use crate::spectral::{tv_distance, Distribution};
    use crate::topology::build_disk_graph;
    use nalgebra::DMatrix;

    fn oracle_mixing_time(p: &DMatrix<f64>, pi: &[f64], eps: f64) -> usize {
        let n = pi.len();
        let mut pk = DMatrix::<f64>::identity(n, n);
        for k in 0..10_000 {
            // Row i of pk is the distribution after k steps from delta_i.
            let worst = (0..n)
                .map(|i| 0.5 * (0..n).map(|j| (pk[(i, j)] - pi[j]).abs()).sum::<f64>())
                .fold(0.0f64, f64::max);
            if worst <= eps {
                return k;
            }
            pk = &pk * p;
        }
        panic!("oracle did not converge");
    }

    #[test]
    fn two_clique_mixes_in_one_step() {
        let g = complete(2);
        let w = WalkMatrix::new(&g).unwrap();
        assert_eq!(
            empirical_mixing_time(&w, 0.01, StartPolicy::AllDeltas).unwrap(),
            1
        );
    }

    #[test]
    fn single_vertex_is_already_mixed() {
        let pts = PointSet::new(1, 0, vec![TorusPoint::new(vec![0.5]).unwrap()]).unwrap();
        let g = build_disk_graph(&pts, 0.1).unwrap();
        let w = WalkMatrix::new(&g).unwrap();
        assert_eq!(
            empirical_mixing_time(&w, 0.01, StartPolicy::AllDeltas).unwrap(),
            0
        );
    }

    #[test]
    fn ring_of_eight_matches_the_dense_power_oracle() {
        let g = ring(8);
        let w = WalkMatrix::new(&g).unwrap();
        let pi = vec![0.125; 8];
        let oracle = oracle_mixing_time(&dense_walk(&g), &pi, 0.01);
        assert_eq!(
            empirical_mixing_time(&w, 0.01, StartPolicy::AllDeltas).unwrap(),
            oracle
        );
    }

    #[test]
    fn random_instances_match_the_dense_power_oracle() {
        for seed in 0..6 {
            let g = connected_disk(14 + 3 * seed as usize, 2, 0.3, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let pi = crate::spectral::stationary_distribution(&g).unwrap();
            for eps in [0.05, 0.01] {
                let oracle = oracle_mixing_time(&dense_walk(&g), pi.weights(), eps);
                assert_eq!(
                    empirical_mixing_time(&w, eps, StartPolicy::AllDeltas).unwrap(),
                    oracle,
                    "seed {seed}, eps {eps}"
                );
            }
        }
    }

    #[test]
    fn sampled_starts_never_exceed_the_full_policy() {
        for seed in 0..4 {
            let g = connected_disk(40, 2, 0.25, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let full = empirical_mixing_time(&w, 0.01, StartPolicy::AllDeltas).unwrap();
            let sampled = empirical_mixing_time(
                &w,
                0.01,
                StartPolicy::Sampled {
                    count: 10,
                    seed: 99,
                },
            )
            .unwrap();
            assert!(sampled <= full, "seed {seed}: {sampled} > {full}");
        }
    }

    #[test]
    fn mixing_time_validates_inputs() {
        let g = complete(3);
        let w = WalkMatrix::new(&g).unwrap();
        for eps in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(empirical_mixing_time(&w, eps, StartPolicy::AllDeltas).is_err());
        }
        assert!(
            empirical_mixing_time(&w, 0.01, StartPolicy::Sampled { count: 0, seed: 1 }).is_err()
        );
    }

    #[test]
    fn tv_decay_is_monotone_along_the_walk() {
        for seed in 0..4 {
            let g = connected_disk(25, 1, 0.25, seed);
            let w = WalkMatrix::new(&g).unwrap();
            let pi = crate::spectral::stationary_distribution(&g).unwrap();
            let mut v = Distribution::delta(g.n(), (seed as usize * 5) % g.n()).unwrap();
            let mut prev = tv_distance(&v, &pi).unwrap();
            for _ in 0..60 {
                v = w.apply_distribution(&v).unwrap();
                let cur = tv_distance(&v, &pi).unwrap();
                assert!(cur <= prev + 1e-12);
                prev = cur;
            }
        }
    }
}
