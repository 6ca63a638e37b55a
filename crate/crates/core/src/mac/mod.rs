//! Physical-interference MAC layer: SIR evaluation under power-law path
//! loss, slot-level link outcomes, TDMA schedules with a text format, and
//! schedule constructors (parity lattice protocol, greedy baseline) plus
//! a guard-zone lower bound on schedule length.

mod greedy;
mod lattice;
mod validate;

pub use greedy::greedy_schedule;
pub use lattice::{
    guard_zone_lower_bound, lattice_schedule, min_theta_search, required_link_length,
    DEFAULT_GUARD_DELTA,
};
pub use validate::{validate_schedule, ValidationReport};

use crate::error::{Error, Result};
use crate::geometry::{torus_distance_sq, PointSet};
use crate::textio::{fmt_real, parse_real, parse_usize};
use crate::topology::TopologyGraph;

/// Radio parameters: path-loss exponent and SIR threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    alpha: f64,
    beta: f64,
}

impl RadioConfig {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::invalid(format!(
                "path-loss exponent {alpha} must be finite and positive"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::invalid(format!(
                "SIR threshold {beta} must be finite and positive"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Path loss decays too slowly for interference sums to converge
    /// unless `alpha` exceeds the ambient dimension.
    pub(crate) fn require_exceeds_dimension(&self, d: usize) -> Result<()> {
        if self.alpha <= d as f64 {
            return Err(Error::invalid(format!(
                "path-loss exponent {} must exceed dimension {d}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// The set of concurrent transmitters in one slot, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotAssignment {
    transmitters: Vec<usize>,
}

impl SlotAssignment {
    pub fn new(mut transmitters: Vec<usize>) -> Result<Self> {
        transmitters.sort_unstable();
        if transmitters.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(
                "a vertex may transmit at most once per slot",
            ));
        }
        Ok(Self { transmitters })
    }

    pub fn transmitters(&self) -> &[usize] {
        &self.transmitters
    }

    pub fn len(&self) -> usize {
        self.transmitters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transmitters.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.transmitters.binary_search(&v).is_ok()
    }
}

/// An ordered list of transmission slots for a graph of `n` vertices,
/// tagged with the radio parameters and the constructing protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionSchedule {
    n: usize,
    radio: RadioConfig,
    protocol: String,
    params: Vec<(String, String)>,
    slots: Vec<SlotAssignment>,
}

impl TransmissionSchedule {
    pub fn new(
        n: usize,
        radio: RadioConfig,
        protocol: impl Into<String>,
        params: Vec<(String, String)>,
        slots: Vec<SlotAssignment>,
    ) -> Result<Self> {
        let protocol = protocol.into();
        if protocol.is_empty() || protocol.contains(|c: char| c.is_whitespace() || c == '=') {
            return Err(Error::invalid(format!(
                "protocol name {protocol:?} must be a single bare token"
            )));
        }
        for (key, value) in &params {
            if key.is_empty()
                || value.is_empty()
                || key.contains(|c: char| c.is_whitespace() || c == '=')
                || value.contains(char::is_whitespace)
            {
                return Err(Error::invalid(format!(
                    "parameter {key:?}={value:?} must be bare tokens"
                )));
            }
        }
        for slot in &slots {
            if slot.is_empty() {
                return Err(Error::invalid("schedule slots must be nonempty"));
            }
            if let Some(&max) = slot.transmitters().last() {
                if max >= n {
                    return Err(Error::invalid(format!("transmitter {max} outside 0..{n}")));
                }
            }
        }
        Ok(Self {
            n,
            radio,
            protocol,
            params,
            slots,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radio(&self) -> &RadioConfig {
        &self.radio
    }

    pub fn protocol(&self) -> &str {
        &self.protocol
    }

    pub fn params(&self) -> &[(String, String)] {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn slots(&self) -> &[SlotAssignment] {
        &self.slots
    }

    /// Number of slots.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Header line `n alpha beta protocol params`, then one line per slot
    /// listing its transmitter indices.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}",
            self.n,
            fmt_real(self.radio.alpha),
            fmt_real(self.radio.beta),
            self.protocol
        );
        for (key, value) in &self.params {
            out.push_str(&format!(" {key}={value}"));
        }
        out.push('\n');
        for slot in &self.slots {
            let line: Vec<String> = slot.transmitters().iter().map(|t| t.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty schedule text".into()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() < 4 {
            return Err(Error::Parse(format!(
                "schedule header needs `n alpha beta protocol`, got {header:?}"
            )));
        }
        let n = parse_usize(tokens[0], "vertex count")?;
        let alpha = parse_real(tokens[1], "path-loss exponent")?;
        let beta = parse_real(tokens[2], "SIR threshold")?;
        let radio = RadioConfig::new(alpha, beta)?;
        let protocol = tokens[3].to_string();
        let mut params = Vec::new();
        for token in &tokens[4..] {
            let (key, value) = token.split_once('=').ok_or_else(|| {
                Error::Parse(format!("parameter token {token:?} is not key=value"))
            })?;
            params.push((key.to_string(), value.to_string()));
        }
        let mut slots = Vec::new();
        let mut blank_seen = false;
        for line in lines {
            if line.trim().is_empty() {
                blank_seen = true;
                continue;
            }
            if blank_seen {
                return Err(Error::Parse("blank line inside slot list".into()));
            }
            let transmitters: Result<Vec<usize>> = line
                .split_whitespace()
                .map(|tok| parse_usize(tok, "transmitter index"))
                .collect();
            slots.push(SlotAssignment::new(transmitters?)?);
        }
        Self::new(n, radio, protocol, params, slots)
    }
}

/// Received power over a squared torus distance: `dist^(-alpha)`.
/// Integer half-exponents take the cheap `powi` path.
pub(crate) fn path_loss(dist_sq: f64, alpha: f64) -> f64 {
    let half = 0.5 * alpha;
    if half.fract() == 0.0 && half <= 32.0 {
        dist_sq.powi(-(half as i32))
    } else {
        dist_sq.powf(-half)
    }
}

/// Shared SIR kernel: signal from `tx` at `rx` over summed interference
/// from `others`. Assumes indices are in range and `tx` is excluded from
/// `others` by the caller.
fn sir_over(
    pts: &PointSet,
    alpha: f64,
    tx: usize,
    rx: usize,
    others: impl IntoIterator<Item = usize>,
) -> Result<f64> {
    let rx_coords = pts.point(rx).coords();
    let signal_sq = torus_distance_sq(pts.point(tx).coords(), rx_coords);
    if signal_sq == 0.0 {
        return Err(Error::invalid(format!(
            "transmitter {tx} and receiver {rx} are coincident"
        )));
    }
    let mut interference = 0.0;
    let mut any = false;
    for k in others {
        let dist_sq = torus_distance_sq(pts.point(k).coords(), rx_coords);
        if dist_sq == 0.0 {
            return Ok(0.0);
        }
        interference += path_loss(dist_sq, alpha);
        any = true;
    }
    if !any {
        return Ok(f64::INFINITY);
    }
    Ok(path_loss(signal_sq, alpha) / interference)
}

/// Signal-to-interference ratio at `rx` for a transmission from `tx`
/// while `others` transmit concurrently. No noise term: an empty
/// interferer set yields positive infinity, an interferer coincident
/// with the receiver yields zero.
pub fn sir(pts: &PointSet, tx: usize, rx: usize, others: &[usize], alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::invalid(format!(
            "path-loss exponent {alpha} must be finite and positive"
        )));
    }
    let n = pts.len();
    for &v in [tx, rx].iter().chain(others) {
        if v >= n {
            return Err(Error::invalid(format!("vertex {v} outside 0..{n}")));
        }
    }
    if tx == rx {
        return Err(Error::invalid("transmitter cannot be its own receiver"));
    }
    if others.contains(&tx) {
        return Err(Error::invalid(format!(
            "transmitter {tx} listed among its own interferers"
        )));
    }
    sir_over(pts, alpha, tx, rx, others.iter().copied())
}

/// Directed links established in one slot: `(i, j)` is included iff `j`
/// is a graph neighbor of transmitter `i`, `j` is not itself transmitting,
/// and the SIR of the transmission at `j` meets the threshold.
pub fn slot_outcome(
    g: &TopologyGraph,
    slot: &SlotAssignment,
    radio: &RadioConfig,
) -> Result<Vec<(usize, usize)>> {
    radio.require_exceeds_dimension(g.dimension())?;
    let n = g.n();
    if let Some(&max) = slot.transmitters().last() {
        if max >= n {
            return Err(Error::invalid(format!("transmitter {max} outside 0..{n}")));
        }
    }
    let pts = g.points();
    let txs = slot.transmitters();
    let mut links = Vec::new();
    for &i in txs {
        for &j in g.neighbors(i) {
            if slot.contains(j) {
                continue;
            }
            let value = sir_over(
                pts,
                radio.alpha,
                i,
                j,
                txs.iter().copied().filter(|&k| k != i),
            )?;
            if value >= radio.beta {
                links.push((i, j));
            }
        }
    }
    Ok(links)
}
