//! Coverage audit for transmission schedules: a schedule is feasible iff
//! the union of its slot outcomes establishes every directed edge of the
//! target graph.

use super::{slot_outcome, TransmissionSchedule};
use crate::error::{Error, Result};
use crate::topology::TopologyGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub feasible: bool,
    /// Directed edges of the graph never established, sorted.
    pub missing: Vec<(usize, usize)>,
    /// Established directed-link count per slot, in schedule order.
    pub per_slot_successes: Vec<usize>,
}

pub fn validate_schedule(
    g: &TopologyGraph,
    sched: &TransmissionSchedule,
) -> Result<ValidationReport> {
    if sched.n() != g.n() {
        return Err(Error::invalid(format!(
            "schedule for {} vertices applied to a graph with {}",
            sched.n(),
            g.n()
        )));
    }
    let n = g.n();
    let mut covered: Vec<Vec<bool>> = (0..n).map(|i| vec![false; g.degree(i)]).collect();
    let mut per_slot_successes = Vec::with_capacity(sched.len());
    for slot in sched.slots() {
        let links = slot_outcome(g, slot, sched.radio())?;
        per_slot_successes.push(links.len());
        for (i, j) in links {
            let pos = g
                .neighbors(i)
                .binary_search(&j)
                .expect("established link must be a graph edge");
            covered[i][pos] = true;
        }
    }
    let mut missing = Vec::new();
    for (i, row) in covered.iter().enumerate() {
        for (pos, &j) in g.neighbors(i).iter().enumerate() {
            if !row[pos] {
                missing.push((i, j));
            }
        }
    }
    Ok(ValidationReport {
        feasible: missing.is_empty(),
        missing,
        per_slot_successes,
    })
}
