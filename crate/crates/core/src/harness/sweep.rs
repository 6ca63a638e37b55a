//! Sweep execution over resolved configurations, measurement records,
//! and their CSV serialization.

use super::formulas::{mixing_proxy, slot_mixing_time};
use super::{EpsilonPolicy, ExperimentConfig, KindSpec, MixingMode, RowSpec, EMPIRICAL_N_LIMIT};
use crate::error::{Error, Result};
use crate::geometry::sample_points;
use crate::mac::{
    greedy_schedule, guard_zone_lower_bound, lattice_schedule, min_theta_search, RadioConfig,
    DEFAULT_GUARD_DELTA,
};
use crate::spectral::{
    conductance_halfspace, empirical_mixing_time, second_eigenvalue, StartPolicy, WalkMatrix,
    DEFAULT_EIGEN_TOL,
};
use crate::textio::{fmt_real, parse_real, parse_u64, parse_usize};
use crate::topology::{build_cluster_graph, build_disk_graph, build_longrange_graph, is_connected};
use rayon::prelude::*;
use std::path::Path;

const SAMPLED_STARTS: usize = 64;

/// One measured sweep coordinate. Measurement fields are `None` when
/// the corresponding stage failed; `status` holds `"ok"` or the
/// failure description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRecord {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub kind: String,
    pub r: f64,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub rho: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub mixing: String,
    pub gap: Option<f64>,
    pub h_halfspace: Option<f64>,
    pub tmix: Option<f64>,
    pub theta_star: Option<f64>,
    pub lattice_len: Option<usize>,
    pub greedy_len: Option<usize>,
    pub guard_lb: Option<usize>,
    pub slot_mixing_time: Option<f64>,
    pub status: String,
}

const COLUMNS: [&str; 21] = [
    "seed",
    "n",
    "d",
    "kind",
    "r",
    "gamma",
    "eta",
    "rho",
    "alpha",
    "beta",
    "epsilon",
    "mixing",
    "gap",
    "h_halfspace",
    "tmix",
    "theta_star",
    "lattice_len",
    "greedy_len",
    "guard_lb",
    "slot_mixing_time",
    "status",
];

impl ScalingRecord {
    pub fn csv_header() -> String {
        COLUMNS.join(",")
    }

    pub fn to_csv_row(&self) -> String {
        let real = |v: &Option<f64>| v.map(fmt_real).unwrap_or_default();
        let count = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.seed.to_string(),
            self.n.to_string(),
            self.d.to_string(),
            self.kind.clone(),
            fmt_real(self.r),
            real(&self.gamma),
            real(&self.eta),
            count(&self.rho),
            fmt_real(self.alpha),
            fmt_real(self.beta),
            fmt_real(self.epsilon),
            self.mixing.clone(),
            real(&self.gap),
            real(&self.h_halfspace),
            real(&self.tmix),
            real(&self.theta_star),
            count(&self.lattice_len),
            count(&self.greedy_len),
            count(&self.guard_lb),
            real(&self.slot_mixing_time),
            self.status.clone(),
        ]
        .join(",")
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != COLUMNS.len() {
            return Err(Error::Parse(format!(
                "record row has {} fields, expected {}",
                cells.len(),
                COLUMNS.len()
            )));
        }
        let opt_real = |tok: &str, what: &str| -> Result<Option<f64>> {
            if tok.is_empty() {
                Ok(None)
            } else {
                parse_real(tok, what).map(Some)
            }
        };
        let opt_count = |tok: &str, what: &str| -> Result<Option<usize>> {
            if tok.is_empty() {
                Ok(None)
            } else {
                parse_usize(tok, what).map(Some)
            }
        };
        Ok(Self {
            seed: parse_u64(cells[0], "seed")?,
            n: parse_usize(cells[1], "n")?,
            d: parse_usize(cells[2], "d")?,
            kind: cells[3].to_string(),
            r: parse_real(cells[4], "r")?,
            gamma: opt_real(cells[5], "gamma")?,
            eta: opt_real(cells[6], "eta")?,
            rho: opt_count(cells[7], "rho")?,
            alpha: parse_real(cells[8], "alpha")?,
            beta: parse_real(cells[9], "beta")?,
            epsilon: parse_real(cells[10], "epsilon")?,
            mixing: cells[11].to_string(),
            gap: opt_real(cells[12], "gap")?,
            h_halfspace: opt_real(cells[13], "h_halfspace")?,
            tmix: opt_real(cells[14], "tmix")?,
            theta_star: opt_real(cells[15], "theta_star")?,
            lattice_len: opt_count(cells[16], "lattice_len")?,
            greedy_len: opt_count(cells[17], "greedy_len")?,
            guard_lb: opt_count(cells[18], "guard_lb")?,
            slot_mixing_time: opt_real(cells[19], "slot_mixing_time")?,
            status: cells[20].to_string(),
        })
    }

    /// Numeric view of a field for fitting; `None` when unmeasured.
    pub fn numeric_field(&self, name: &str) -> Result<Option<f64>> {
        let v = match name {
            "seed" => Some(self.seed as f64),
            "n" => Some(self.n as f64),
            "d" => Some(self.d as f64),
            "r" => Some(self.r),
            "gamma" => self.gamma,
            "eta" => self.eta,
            "rho" => self.rho.map(|x| x as f64),
            "alpha" => Some(self.alpha),
            "beta" => Some(self.beta),
            "epsilon" => Some(self.epsilon),
            "gap" => self.gap,
            "h_halfspace" => self.h_halfspace,
            "tmix" => self.tmix,
            "theta_star" => self.theta_star,
            "lattice_len" => self.lattice_len.map(|x| x as f64),
            "greedy_len" => self.greedy_len.map(|x| x as f64),
            "guard_lb" => self.guard_lb.map(|x| x as f64),
            "slot_mixing_time" => self.slot_mixing_time,
            _ => {
                return Err(Error::invalid(format!(
                    "unknown numeric record field {name:?}"
                )))
            }
        };
        Ok(v)
    }

    /// Compact rendering of any field, for group labels.
    pub fn display_field(&self, name: &str) -> Result<String> {
        match name {
            "kind" => Ok(self.kind.clone()),
            "mixing" => Ok(self.mixing.clone()),
            "status" => Ok(self.status.clone()),
            _ => Ok(self
                .numeric_field(name)?
                .map(|v| format!("{v}"))
                .unwrap_or_default()),
        }
    }

    fn pending(cfg: &ExperimentConfig, spec: &RowSpec) -> Self {
        let rho = match cfg.kind {
            KindSpec::Cluster { rho } => Some(rho),
            _ => None,
        };
        Self {
            seed: spec.seed,
            n: spec.n,
            d: cfg.dimension,
            kind: cfg.kind.label().to_string(),
            r: spec.r,
            gamma: cfg.gamma,
            eta: cfg.eta,
            rho,
            alpha: cfg.alpha,
            beta: spec.beta,
            epsilon: cfg.epsilon.epsilon(spec.n),
            mixing: cfg.mixing.resolve(spec.n).label().to_string(),
            gap: None,
            h_halfspace: None,
            tmix: None,
            theta_star: None,
            lattice_len: None,
            greedy_len: None,
            guard_lb: None,
            slot_mixing_time: None,
            status: String::new(),
        }
    }
}

/// Measure every row of the sweep. Rows run independently; a failing
/// row is recorded with its error and never aborts the sweep. The
/// returned order matches `cfg.rows()`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ScalingRecord>> {
    let rows = cfg.rows()?;
    Ok(rows
        .par_iter()
        .map(|spec| {
            let mut rec = ScalingRecord::pending(cfg, spec);
            rec.status = match measure_into(cfg, spec, &mut rec) {
                Ok(()) => "ok".to_string(),
                Err(e) => sanitize(&e.to_string()),
            };
            rec
        })
        .collect())
}

fn measure_into(cfg: &ExperimentConfig, spec: &RowSpec, rec: &mut ScalingRecord) -> Result<()> {
    let pts = sample_points(spec.n, cfg.dimension, spec.seed)?;
    let g = match cfg.kind {
        KindSpec::Disk => build_disk_graph(&pts, spec.r)?,
        KindSpec::LongRange => {
            build_longrange_graph(&pts, spec.r, cfg.gamma.unwrap(), cfg.eta.unwrap())?
        }
        KindSpec::Cluster { rho } => {
            build_cluster_graph(&pts, spec.r, cfg.gamma.unwrap(), cfg.eta.unwrap(), rho)?
        }
    };
    if !is_connected(&g) {
        return Err(Error::NotConnected);
    }

    let w = WalkMatrix::new(&g)?;
    let mu2 = second_eigenvalue(&w, DEFAULT_EIGEN_TOL)?;
    let gap = 1.0 - mu2;
    rec.gap = Some(gap);
    rec.h_halfspace = Some(conductance_halfspace(&w, 0)?.value);

    let tmix = match cfg.mixing.resolve(spec.n) {
        MixingMode::Empirical => {
            let policy = if spec.n <= EMPIRICAL_N_LIMIT {
                StartPolicy::AllDeltas
            } else {
                StartPolicy::Sampled {
                    count: SAMPLED_STARTS,
                    seed: 0,
                }
            };
            empirical_mixing_time(&w, rec.epsilon, policy)? as f64
        }
        MixingMode::Proxy => match cfg.epsilon {
            EpsilonPolicy::Polynomial { delta } => mixing_proxy(gap, spec.n as f64, delta)?,
            EpsilonPolicy::Exponential { delta_prime } => {
                if !(gap > 0.0 && gap <= 1.0) {
                    return Err(Error::invalid(format!(
                        "spectral gap {gap} must lie in (0, 1]"
                    )));
                }
                let nf = spec.n as f64;
                (nf.ln() + delta_prime * nf) / gap
            }
        },
        MixingMode::Auto => unreachable!("resolve never returns Auto"),
    };
    rec.tmix = Some(tmix);

    let radio = RadioConfig::new(cfg.alpha, spec.beta)?;
    let theta = min_theta_search(&g, &radio)?;
    rec.theta_star = Some(theta);
    let lattice = lattice_schedule(&g, &radio, theta)?;
    rec.lattice_len = Some(lattice.len());
    rec.slot_mixing_time = Some(slot_mixing_time(tmix, lattice.len())?);
    rec.greedy_len = Some(greedy_schedule(&g, &radio, spec.seed)?.len());
    rec.guard_lb = Some(guard_zone_lower_bound(&g, &radio, DEFAULT_GUARD_DELTA)?);
    Ok(())
}

fn sanitize(msg: &str) -> String {
    msg.replace(['\n', '\r'], "; ").replace(',', ";")
}

/// Records as CSV text: fixed header, one row per record, reals at
/// full round-trip precision. Identical inputs give identical bytes.
pub fn records_to_csv(records: &[ScalingRecord]) -> String {
    let mut out = ScalingRecord::csv_header();
    out.push('\n');
    for rec in records {
        out.push_str(&rec.to_csv_row());
        out.push('\n');
    }
    out
}

/// Parse CSV text produced by `records_to_csv`.
pub fn parse_records(text: &str) -> Result<Vec<ScalingRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty records file".into()))?;
    if header != ScalingRecord::csv_header() {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(ScalingRecord::from_csv_row)
        .collect()
}

/// Write records as CSV at `path`, with creation metadata in a
/// `.meta` sidecar so the CSV itself stays reproducible.
pub fn export_records(records: &[ScalingRecord], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, records_to_csv(records))?;
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".meta");
    std::fs::write(
        sidecar,
        format!("created_unix = {stamp}\nrows = {}\n", records.len()),
    )?;
    Ok(())
}

/// Gnuplot companion script plotting the headline scaling curves from
/// an exported CSV.
pub fn plot_script(csv_file: &str) -> String {
    format!(
        "set datafile separator \",\"\n\
         set logscale xy\n\
         set key top left\n\
         set xlabel \"r\"\n\
         set terminal pngcairo size 900,600\n\
         set output \"gap_vs_r.png\"\n\
         plot \"{csv_file}\" using 5:13 with points title \"spectral gap\"\n\
         set output \"schedule_vs_r.png\"\n\
         plot \"{csv_file}\" using 5:17 with points title \"lattice slots\", \
         \"{csv_file}\" using 5:18 with points title \"greedy slots\"\n\
         set output \"slot_mixing_vs_r.png\"\n\
         plot \"{csv_file}\" using 5:20 with points title \"slot mixing time\"\n"
    )
}

/// Cross-field consistency checks over finished records. Returns one
/// description per violated invariant; an empty list is a clean audit.
pub fn audit_records(records: &[ScalingRecord]) -> Vec<String> {
    let mut violations = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        if let (Some(guard), Some(lattice)) = (rec.guard_lb, rec.lattice_len) {
            if guard > lattice {
                violations.push(format!(
                    "row {i}: guard-zone lower bound {guard} exceeds lattice length {lattice}"
                ));
            }
        }
        if let (Some(tmix), Some(lattice), Some(slot)) =
            (rec.tmix, rec.lattice_len, rec.slot_mixing_time)
        {
            if slot != tmix * lattice as f64 {
                violations.push(format!(
                    "row {i}: slot mixing time {slot} is not tmix {tmix} times lattice length {lattice}"
                ));
            }
        }
        if let (Some(gap), Some(h)) = (rec.gap, rec.h_halfspace) {
            if gap > 2.0 * h + 1e-9 {
                violations.push(format!(
                    "row {i}: gap {gap} exceeds twice the halfspace conductance {h}"
                ));
            }
        }
        if !(rec.epsilon > 0.0 && rec.epsilon < 1.0) {
            violations.push(format!("row {i}: epsilon {} outside (0, 1)", rec.epsilon));
        }
    }
    violations
}
