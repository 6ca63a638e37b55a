//! Closed-form quantities assembled from sweep measurements.

use crate::error::{Error, Result};

/// Slot-denominated mixing time: the walk mixing time times the
/// schedule length that realizes one averaging round.
pub fn slot_mixing_time(tmix: f64, schedule_len: usize) -> Result<f64> {
    if !tmix.is_finite() || tmix < 0.0 {
        return Err(Error::invalid(format!(
            "mixing time {tmix} must be finite and nonnegative"
        )));
    }
    Ok(tmix * schedule_len as f64)
}

/// Spectral upper-bound proxy for the mixing time at accuracy
/// `epsilon = n^(-delta)`: `ln(n^(1 + delta)) / gap`.
pub fn mixing_proxy(gap: f64, n: f64, delta: f64) -> Result<f64> {
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::invalid(format!(
            "spectral gap {gap} must lie in (0, 1]"
        )));
    }
    if !n.is_finite() || n <= 1.0 {
        return Err(Error::invalid(format!("size {n} must exceed 1")));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::invalid(format!("delta {delta} must be positive")));
    }
    Ok((1.0 + delta) * n.ln() / gap)
}

/// Normalized cost of sweeping the communication radius as
/// `r = R * r_c`: `exp(R * d / alpha) / R`.
pub fn rate_tradeoff(radius_multiple: f64, dimension: usize, alpha: f64) -> Result<f64> {
    if !radius_multiple.is_finite() || radius_multiple <= 0.0 {
        return Err(Error::invalid(format!(
            "radius multiple {radius_multiple} must be positive"
        )));
    }
    if dimension == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if !alpha.is_finite() || alpha <= dimension as f64 {
        return Err(Error::invalid(format!(
            "alpha {alpha} must exceed dimension {dimension}"
        )));
    }
    Ok((radius_multiple * dimension as f64 / alpha).exp() / radius_multiple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_points;
    use crate::spectral::{
        empirical_mixing_time, second_eigenvalue, StartPolicy, WalkMatrix, DEFAULT_EIGEN_TOL,
    };
    use crate::topology::build_disk_graph;

    #[test]
    fn slot_mixing_time_is_the_product() {
        assert_eq!(slot_mixing_time(3.0, 3).unwrap(), 9.0);
        assert_eq!(slot_mixing_time(0.0, 17).unwrap(), 0.0);
        assert_eq!(slot_mixing_time(2.5, 4).unwrap(), 10.0);
        assert!(slot_mixing_time(-1.0, 3).is_err());
        assert!(slot_mixing_time(f64::NAN, 3).is_err());
    }

    #[test]
    fn proxy_matches_the_closed_form() {
        let e2 = std::f64::consts::E.powi(2);
        let got = mixing_proxy(1.0, e2, 1.0).unwrap();
        assert!((got - 4.0).abs() < 1e-12);
    }

    #[test]
    fn halving_the_gap_doubles_the_proxy() {
        let full = mixing_proxy(0.2, 500.0, 1.0).unwrap();
        let half = mixing_proxy(0.1, 500.0, 1.0).unwrap();
        assert!((half - 2.0 * full).abs() < 1e-9 * full);
    }

    #[test]
    fn proxy_rejects_degenerate_gaps() {
        assert!(mixing_proxy(0.0, 10.0, 1.0).is_err());
        assert!(mixing_proxy(1.5, 10.0, 1.0).is_err());
        assert!(mixing_proxy(-0.1, 10.0, 1.0).is_err());
        assert!(mixing_proxy(0.5, 1.0, 1.0).is_err());
        assert!(mixing_proxy(0.5, 10.0, 0.0).is_err());
    }

    #[test]
    fn proxy_dominates_the_empirical_mixing_time() {
        for seed in [2, 5, 9] {
            let pts = sample_points(60, 2, seed).unwrap();
            let g = build_disk_graph(&pts, 0.35).unwrap();
            let w = WalkMatrix::new(&g).unwrap();
            let mu2 = second_eigenvalue(&w, DEFAULT_EIGEN_TOL).unwrap();
            let eps = 1.0 / 60.0;
            let emp = empirical_mixing_time(&w, eps, StartPolicy::AllDeltas).unwrap();
            let proxy = mixing_proxy(1.0 - mu2, 60.0, 1.0).unwrap();
            assert!(
                proxy >= emp as f64,
                "seed {seed}: proxy {proxy} < empirical {emp}"
            );
        }
    }

    #[test]
    fn tradeoff_matches_pinned_values() {
        let at_one = rate_tradeoff(1.0, 1, 2.0).unwrap();
        assert!((at_one - (0.5f64).exp()).abs() < 1e-12);
        let tiny = rate_tradeoff(1e-12, 1, 2.0).unwrap();
        assert!(tiny > 1e11);
    }

    #[test]
    fn tradeoff_is_minimized_at_twice_the_connectivity_radius() {
        let mut best = (f64::INFINITY, 0.0);
        let mut k = 50;
        while k <= 500 {
            let x = k as f64 / 100.0;
            let v = rate_tradeoff(x, 1, 2.0).unwrap();
            if v < best.0 {
                best = (v, x);
            }
            k += 1;
        }
        assert!((best.1 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tradeoff_rejects_bad_parameters() {
        assert!(rate_tradeoff(0.0, 1, 2.0).is_err());
        assert!(rate_tradeoff(-1.0, 1, 2.0).is_err());
        assert!(rate_tradeoff(1.0, 2, 2.0).is_err());
        assert!(rate_tradeoff(1.0, 0, 2.0).is_err());
    }
}
