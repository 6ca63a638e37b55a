//! Experiment orchestration: sweep configuration, per-row measurement
//! records with CSV export, slot-mixing assembly formulas, and log-log
//! slope fitting.

mod fit;
mod formulas;
mod sweep;

pub use fit::{fit_loglog, fit_slope, SlopeFit};
pub use formulas::{mixing_proxy, rate_tradeoff, slot_mixing_time};
pub use sweep::{
    audit_records, export_records, parse_records, plot_script, records_to_csv, run_sweep,
    ScalingRecord,
};

use crate::error::{Error, Result};
use crate::textio::{parse_real, parse_u64, parse_usize};
use crate::topology::critical_radius;
use std::collections::BTreeMap;

/// Environment variable that overrides the configured output directory.
/// The only environment-driven setting.
pub const OUT_DIR_ENV: &str = "SLOTMIX_OUT";

pub const DEFAULT_OUT_DIR: &str = "results";

/// Graph family swept over, with the cluster budget when applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindSpec {
    Disk,
    LongRange,
    Cluster { rho: usize },
}

impl KindSpec {
    pub fn label(&self) -> &'static str {
        match self {
            KindSpec::Disk => "disk",
            KindSpec::LongRange => "longrange",
            KindSpec::Cluster { .. } => "cluster",
        }
    }
}

/// Accuracy-target policy for the mixing tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// `epsilon = n^(-delta)`.
    Polynomial { delta: f64 },
    /// `epsilon = exp(-delta_prime * n)`.
    Exponential { delta_prime: f64 },
}

impl EpsilonPolicy {
    pub fn epsilon(&self, n: usize) -> f64 {
        match *self {
            EpsilonPolicy::Polynomial { delta } => (n as f64).powf(-delta),
            EpsilonPolicy::Exponential { delta_prime } => (-delta_prime * n as f64).exp(),
        }
    }
}

/// How per-row mixing times are obtained. `Auto` measures the empirical
/// time up to `EMPIRICAL_N_LIMIT` vertices and uses the spectral proxy
/// beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingMode {
    Auto,
    Empirical,
    Proxy,
}

pub const EMPIRICAL_N_LIMIT: usize = 300;

impl MixingMode {
    /// The mode actually applied at size `n`.
    pub fn resolve(&self, n: usize) -> MixingMode {
        match self {
            MixingMode::Auto => {
                if n <= EMPIRICAL_N_LIMIT {
                    MixingMode::Empirical
                } else {
                    MixingMode::Proxy
                }
            }
            other => *other,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MixingMode::Auto => "auto",
            MixingMode::Empirical => "empirical",
            MixingMode::Proxy => "proxy",
        }
    }
}

/// Radius grid: absolute values, or multiples of the connectivity
/// radius resolved per network size.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiusGrid {
    Absolute(Vec<f64>),
    Multiples(Vec<f64>),
}

/// A full sweep description, parsed from flat key-value text.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dimension: usize,
    pub n_values: Vec<usize>,
    pub radii: RadiusGrid,
    pub kind: KindSpec,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub alpha: f64,
    pub betas: Vec<f64>,
    pub epsilon: EpsilonPolicy,
    pub seeds: Vec<u64>,
    pub mixing: MixingMode,
    pub out: String,
    /// Smallest ratio `r / r_c(n, d)` over the grid; must exceed 1.
    pub supercritical_margin: f64,
}

/// One fully resolved sweep coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSpec {
    pub n: usize,
    pub r: f64,
    pub beta: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Parse the flat `key = value` grammar: one binding per line,
    /// `#` comments, commas separating list entries.
    pub fn from_text(text: &str) -> Result<Self> {
        let map = parse_bindings(text)?;
        let known = [
            "dimension",
            "n",
            "r",
            "r_multiple",
            "kind",
            "gamma",
            "eta",
            "rho",
            "alpha",
            "beta",
            "delta",
            "epsilon_policy",
            "seeds",
            "mixing",
            "out",
        ];
        for key in map.keys() {
            if !known.contains(&key.as_str()) {
                return Err(Error::Parse(format!("unknown config key {key:?}")));
            }
        }
        let get = |key: &str| -> Result<&str> {
            map.get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::Parse(format!("missing config key {key:?}")))
        };

        let dimension = parse_usize(get("dimension")?, "dimension")?;
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let n_values = parse_list(get("n")?, |t| parse_usize(t, "n entry"))?;
        if n_values.is_empty() {
            return Err(Error::invalid("n list must not be empty"));
        }
        for &n in &n_values {
            if n < 2 {
                return Err(Error::invalid(format!("n entry {n} must be at least 2")));
            }
        }

        let radii = match (map.get("r"), map.get("r_multiple")) {
            (Some(_), Some(_)) => return Err(Error::invalid("specify r or r_multiple, not both")),
            (Some(v), None) => RadiusGrid::Absolute(parse_list(v, |t| parse_real(t, "r entry"))?),
            (None, Some(v)) => {
                RadiusGrid::Multiples(parse_list(v, |t| parse_real(t, "r_multiple entry"))?)
            }
            (None, None) => return Err(Error::Parse("missing config key \"r\"".into())),
        };
        match &radii {
            RadiusGrid::Absolute(v) | RadiusGrid::Multiples(v) if v.is_empty() => {
                return Err(Error::invalid("radius list must not be empty"))
            }
            _ => {}
        }

        let kind = match get("kind")? {
            "disk" => KindSpec::Disk,
            "longrange" => KindSpec::LongRange,
            "cluster" => KindSpec::Cluster {
                rho: parse_usize(get("rho")?, "rho")?,
            },
            other => {
                return Err(Error::Parse(format!(
                    "kind {other:?} is not disk, longrange, or cluster"
                )))
            }
        };
        if matches!(kind, KindSpec::Disk) && map.contains_key("rho") {
            return Err(Error::invalid("rho only applies to the cluster kind"));
        }
        if matches!(kind, KindSpec::LongRange) && map.contains_key("rho") {
            return Err(Error::invalid("rho only applies to the cluster kind"));
        }

        let gamma = map
            .get("gamma")
            .map(|v| parse_real(v, "gamma"))
            .transpose()?;
        let eta = map.get("eta").map(|v| parse_real(v, "eta")).transpose()?;
        match kind {
            KindSpec::Disk => {
                if gamma.is_some() || eta.is_some() {
                    return Err(Error::invalid(
                        "gamma and eta only apply to longrange or cluster kinds",
                    ));
                }
            }
            _ => {
                let g = gamma.ok_or_else(|| Error::Parse("missing config key \"gamma\"".into()))?;
                if !(0.0 < g && g < 1.0) {
                    return Err(Error::invalid(format!("gamma {g} must lie in (0, 1)")));
                }
                let e = eta.ok_or_else(|| Error::Parse("missing config key \"eta\"".into()))?;
                if !e.is_finite() || e <= 0.0 {
                    return Err(Error::invalid(format!("eta {e} must be positive")));
                }
            }
        }

        let alpha = parse_real(get("alpha")?, "alpha")?;
        if !alpha.is_finite() || alpha <= dimension as f64 {
            return Err(Error::invalid(format!(
                "alpha {alpha} must exceed dimension {dimension}"
            )));
        }
        let betas = parse_list(get("beta")?, |t| parse_real(t, "beta entry"))?;
        if betas.is_empty() {
            return Err(Error::invalid("beta list must not be empty"));
        }
        for &b in &betas {
            if !b.is_finite() || b <= 0.0 {
                return Err(Error::invalid(format!("beta entry {b} must be positive")));
            }
        }

        let delta = map
            .get("delta")
            .map(|v| parse_real(v, "delta"))
            .transpose()?
            .unwrap_or(1.0);
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::invalid(format!("delta {delta} must be positive")));
        }
        let epsilon = match map.get("epsilon_policy").map(String::as_str) {
            None | Some("polynomial") => EpsilonPolicy::Polynomial { delta },
            Some("exponential") => EpsilonPolicy::Exponential { delta_prime: delta },
            Some(other) => {
                return Err(Error::Parse(format!(
                    "epsilon_policy {other:?} is not polynomial or exponential"
                )))
            }
        };

        let seeds = parse_list(get("seeds")?, |t| parse_u64(t, "seed entry"))?;
        let mixing = match map.get("mixing").map(String::as_str) {
            None | Some("auto") => MixingMode::Auto,
            Some("empirical") => MixingMode::Empirical,
            Some("proxy") => MixingMode::Proxy,
            Some(other) => {
                return Err(Error::Parse(format!(
                    "mixing {other:?} is not auto, empirical, or proxy"
                )))
            }
        };
        let out = map
            .get("out")
            .cloned()
            .unwrap_or_else(|| DEFAULT_OUT_DIR.to_string());

        let mut config = Self {
            dimension,
            n_values,
            radii,
            kind,
            gamma,
            eta,
            alpha,
            betas,
            epsilon,
            seeds,
            mixing,
            out,
            supercritical_margin: f64::INFINITY,
        };
        config.supercritical_margin = config.check_radii()?;
        Ok(config)
    }

    /// Validate every resolved radius: supercritical (ratio to `r_c`
    /// above 1) and buildable (at most 1/2). Returns the smallest ratio.
    fn check_radii(&self) -> Result<f64> {
        let mut margin = f64::INFINITY;
        for &n in &self.n_values {
            let rc = critical_radius(n, self.dimension)?;
            for r in self.radii_for(n)? {
                if r > 0.5 {
                    return Err(Error::invalid(format!(
                        "radius {r} at n={n} exceeds the torus limit 1/2"
                    )));
                }
                let ratio = r / rc;
                if ratio <= 1.0 {
                    return Err(Error::invalid(format!(
                        "radius {r} at n={n} is not supercritical (r_c = {rc})"
                    )));
                }
                margin = margin.min(ratio);
            }
        }
        Ok(margin)
    }

    /// The absolute radii swept at size `n`.
    pub fn radii_for(&self, n: usize) -> Result<Vec<f64>> {
        match &self.radii {
            RadiusGrid::Absolute(values) => Ok(values.clone()),
            RadiusGrid::Multiples(mults) => {
                let rc = critical_radius(n, self.dimension)?;
                Ok(mults.iter().map(|m| m * rc).collect())
            }
        }
    }

    /// Every sweep coordinate, ordered n, then r, then beta, then seed.
    pub fn rows(&self) -> Result<Vec<RowSpec>> {
        let mut rows = Vec::new();
        for &n in &self.n_values {
            for r in self.radii_for(n)? {
                for &beta in &self.betas {
                    for &seed in &self.seeds {
                        rows.push(RowSpec { n, r, beta, seed });
                    }
                }
            }
        }
        Ok(rows)
    }

    /// Output directory after the environment override.
    pub fn effective_out(&self) -> String {
        std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| self.out.clone())
    }
}

fn parse_bindings(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", lineno + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("duplicate config key {key:?}")));
        }
    }
    Ok(map)
}

fn parse_list<T>(value: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|tok| parse(tok.trim())).collect()
}
