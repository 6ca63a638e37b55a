//! One-row spectral summary of a single instance, emitted as CSV by the
//! CLI. Column order is fixed:
//! `seed,n,d,r,gamma,kind,mu2,gap,h_halfspace,h_bruteforce,Tmix_emp,sinclair_lo,sinclair_hi`
//! with `gamma`, `h_bruteforce`, and `Tmix_emp` left blank when absent.

use super::conductance::{conductance_bruteforce, conductance_halfspace};
use super::eigen::{second_eigenvalue, sinclair_bounds, DEFAULT_EIGEN_TOL};
use super::mixing::{empirical_mixing_time, StartPolicy};
use super::WalkMatrix;
use crate::error::{Error, Result};
use crate::textio::fmt_real;
use crate::topology::{is_connected, GraphKind, TopologyGraph};

const BRUTEFORCE_N: usize = 22;
const ALL_DELTAS_N: usize = 300;
const SAMPLED_STARTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub r: f64,
    pub gamma: Option<f64>,
    pub kind: String,
    pub mu2: f64,
    pub gap: f64,
    pub h_halfspace: f64,
    pub h_bruteforce: Option<f64>,
    pub tmix_emp: Option<usize>,
    pub sinclair_lo: f64,
    pub sinclair_hi: f64,
}

impl SpectralReport {
    /// Full analysis of one connected instance. `empirical` controls
    /// whether the measured mixing time is included; the start policy
    /// downgrades to sampled deltas on large instances.
    pub fn compute(g: &TopologyGraph, eps: f64, empirical: bool) -> Result<Self> {
        if g.n() < 2 {
            return Err(Error::invalid(
                "spectral report needs at least two vertices",
            ));
        }
        if !is_connected(g) {
            return Err(Error::NotConnected);
        }
        let w = WalkMatrix::new(g)?;
        let mu2 = second_eigenvalue(&w, DEFAULT_EIGEN_TOL)?;
        let gap = 1.0 - mu2;
        let h_halfspace = conductance_halfspace(&w, 0)?.value;
        let h_bruteforce = if g.n() <= BRUTEFORCE_N {
            Some(conductance_bruteforce(&w)?.0)
        } else {
            None
        };
        let tmix_emp = if empirical {
            let policy = if g.n() <= ALL_DELTAS_N {
                StartPolicy::AllDeltas
            } else {
                StartPolicy::Sampled {
                    count: SAMPLED_STARTS,
                    seed: 0,
                }
            };
            Some(empirical_mixing_time(&w, eps, policy)?)
        } else {
            None
        };
        let (sinclair_lo, sinclair_hi) = sinclair_bounds(mu2.clamp(0.0, 1.0 - 1e-15), g.n(), eps)?;
        let gamma = match *g.kind() {
            GraphKind::Disk { .. } => None,
            GraphKind::LongRange { gamma, .. } | GraphKind::Cluster { gamma, .. } => Some(gamma),
        };
        Ok(Self {
            seed: g.points().seed(),
            n: g.n(),
            d: g.dimension(),
            r: g.kind().radius(),
            gamma,
            kind: g.kind().label().to_string(),
            mu2,
            gap,
            h_halfspace,
            h_bruteforce,
            tmix_emp,
            sinclair_lo,
            sinclair_hi,
        })
    }

    pub fn csv_header() -> &'static str {
        "seed,n,d,r,gamma,kind,mu2,gap,h_halfspace,h_bruteforce,Tmix_emp,sinclair_lo,sinclair_hi"
    }

    pub fn to_csv_row(&self) -> String {
        let gamma = self.gamma.map(fmt_real).unwrap_or_default();
        let h_bf = self.h_bruteforce.map(fmt_real).unwrap_or_default();
        let tmix = self.tmix_emp.map(|t| t.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.n,
            self.d,
            fmt_real(self.r),
            gamma,
            self.kind,
            fmt_real(self.mu2),
            fmt_real(self.gap),
            fmt_real(self.h_halfspace),
            h_bf,
            tmix,
            fmt_real(self.sinclair_lo),
            fmt_real(self.sinclair_hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ring_report_carries_the_known_quantities() {
        let g = ring(4);
        let rep = SpectralReport::compute(&g, 0.01, true).unwrap();
        assert_relative_eq!(rep.mu2, 0.5, max_relative = 1e-10);
        assert_relative_eq!(rep.gap, 0.5, max_relative = 1e-10);
        assert_relative_eq!(rep.h_bruteforce.unwrap(), 0.25, max_relative = 1e-12);
        assert!(rep.h_halfspace >= rep.h_bruteforce.unwrap() - 1e-12);
        assert!(rep.tmix_emp.is_some());
        assert_eq!(rep.kind, "disk");
        assert_eq!(rep.gamma, None);
        assert!(rep.sinclair_lo <= rep.tmix_emp.unwrap() as f64);
        assert!(rep.tmix_emp.unwrap() as f64 <= rep.sinclair_hi);
    }

    #[test]
    fn large_reports_skip_bruteforce_and_mixing_on_request() {
        let g = connected_disk(40, 2, 0.25, 1);
        let rep = SpectralReport::compute(&g, 0.01, false).unwrap();
        assert_eq!(rep.h_bruteforce, None);
        assert_eq!(rep.tmix_emp, None);
        let row = rep.to_csv_row();
        assert_eq!(row.split(',').count(), 13);
        assert_eq!(
            SpectralReport::csv_header().split(',').count(),
            row.split(',').count()
        );
    }

    #[test]
    fn longrange_reports_carry_gamma() {
        use crate::geometry::sample_points;
        use crate::topology::build_longrange_graph;
        let pts = sample_points(150, 2, 7).unwrap();
        let g = build_longrange_graph(&pts, 0.2, 0.5, 0.25).unwrap();
        let rep = SpectralReport::compute(&g, 0.01, false).unwrap();
        assert_eq!(rep.kind, "longrange");
        assert_eq!(rep.gamma, Some(0.5));
        assert!(rep.gap > 0.0);
    }

    #[test]
    fn disconnected_instances_are_rejected() {
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
        assert!(matches!(
            SpectralReport::compute(&g, 0.01, false),
            Err(Error::NotConnected)
        ));
    }
}
