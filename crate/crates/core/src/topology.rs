//! Graph families over sampled point sets: short-range disk graphs,
//! long-range augmented graphs built from partner tiles, and the
//! cluster-limited variant that caps how many partners a node adopts.

use crate::error::{Error, Result};
use crate::geometry::{partner_tiles, torus_distance_sq, PointSet, Tiling};
use crate::textio::{fmt_real, parse_real, parse_usize};

/// Construction recipe of a [`TopologyGraph`], with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    Disk {
        r: f64,
    },
    LongRange {
        r: f64,
        gamma: f64,
        eta: f64,
        s: f64,
    },
    Cluster {
        r: f64,
        gamma: f64,
        eta: f64,
        rho: usize,
    },
}

impl GraphKind {
    pub fn radius(&self) -> f64 {
        match *self {
            GraphKind::Disk { r }
            | GraphKind::LongRange { r, .. }
            | GraphKind::Cluster { r, .. } => r,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GraphKind::Disk { .. } => "disk",
            GraphKind::LongRange { .. } => "longrange",
            GraphKind::Cluster { .. } => "cluster",
        }
    }
}

/// An undirected simple graph over the points of a [`PointSet`].
/// Neighbor lists are sorted, self-free, duplicate-free, and symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyGraph {
    kind: GraphKind,
    points: PointSet,
    adj: Vec<Vec<usize>>,
    adopted: Vec<usize>,
}

impl TopologyGraph {
    fn assemble(kind: GraphKind, points: PointSet, pairs: Vec<(usize, usize)>) -> Self {
        let n = points.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            debug_assert!(u != v && u < n && v < n);
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self {
            kind,
            points,
            adj,
            adopted: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn dimension(&self) -> usize {
        self.points.dimension()
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// How many long-range partners each node adopted itself, before
    /// symmetrization. Empty unless the graph is cluster-limited.
    #[cfg(test)]
    pub(crate) fn adoption_counts(&self) -> &[usize] {
        &self.adopted
    }

    /// Header `n kind params...`, then one sorted adjacency line per vertex.
    /// Points are not embedded; pair the text with its generating point set.
    pub fn to_text(&self) -> String {
        let header = match self.kind {
            GraphKind::Disk { r } => format!("{} disk {}", self.n(), fmt_real(r)),
            GraphKind::LongRange { r, gamma, eta, s } => format!(
                "{} longrange {} {} {} {}",
                self.n(),
                fmt_real(r),
                fmt_real(gamma),
                fmt_real(eta),
                fmt_real(s)
            ),
            GraphKind::Cluster { r, gamma, eta, rho } => format!(
                "{} cluster {} {} {} {}",
                self.n(),
                fmt_real(r),
                fmt_real(gamma),
                fmt_real(eta),
                rho
            ),
        };
        let mut out = String::with_capacity(16 * self.n());
        out.push_str(&header);
        out.push('\n');
        for list in &self.adj {
            let line: Vec<String> = list.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, points: PointSet) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let header = lines
            .first()
            .ok_or_else(|| Error::Parse("empty graph text".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::Parse(format!("short graph header {header:?}")));
        }
        let n = parse_usize(toks[0], "vertex count")?;
        if n == 0 {
            return Err(Error::Parse("graph needs at least one vertex".into()));
        }
        if n != points.len() {
            return Err(Error::Parse(format!(
                "graph has {n} vertices but the point set has {}",
                points.len()
            )));
        }
        let kind = match (toks[1], toks.len() - 2) {
            ("disk", 1) => GraphKind::Disk {
                r: parse_real(toks[2], "radius")?,
            },
            ("longrange", 4) => GraphKind::LongRange {
                r: parse_real(toks[2], "radius")?,
                gamma: parse_real(toks[3], "gamma")?,
                eta: parse_real(toks[4], "eta")?,
                s: parse_real(toks[5], "separation")?,
            },
            ("cluster", 4) => GraphKind::Cluster {
                r: parse_real(toks[2], "radius")?,
                gamma: parse_real(toks[3], "gamma")?,
                eta: parse_real(toks[4], "eta")?,
                rho: parse_usize(toks[5], "rho")?,
            },
            _ => {
                return Err(Error::Parse(format!(
                    "unknown graph kind or parameter count in {header:?}"
                )))
            }
        };
        if lines.len() < n + 1 {
            return Err(Error::Parse(format!(
                "expected {n} adjacency lines, found {}",
                lines.len() - 1
            )));
        }
        for extra in &lines[n + 1..] {
            if !extra.trim().is_empty() {
                return Err(Error::Parse(format!("trailing data {extra:?}")));
            }
        }
        let mut adj = Vec::with_capacity(n);
        for (i, line) in lines[1..=n].iter().enumerate() {
            let mut list = Vec::new();
            for tok in line.split_whitespace() {
                let v = parse_usize(tok, "neighbor index")?;
                if v >= n {
                    return Err(Error::Parse(format!("neighbor {v} outside 0..{n}")));
                }
                if v == i {
                    return Err(Error::Parse(format!("self-loop at vertex {i}")));
                }
                if let Some(&last) = list.last() {
                    if v <= last {
                        return Err(Error::Parse(format!(
                            "neighbor list of vertex {i} not strictly increasing"
                        )));
                    }
                }
                list.push(v);
            }
            adj.push(list);
        }
        for (i, list) in adj.iter().enumerate() {
            for &j in list {
                if adj[j].binary_search(&i).is_err() {
                    return Err(Error::Parse(format!(
                        "edge {i}-{j} present in one direction only"
                    )));
                }
            }
        }
        Ok(Self {
            kind,
            points,
            adj,
            adopted: Vec::new(),
        })
    }
}

/// Connectivity radius scale `(ln n / n)^{1/d}` for `n` uniform points on
/// the d-torus.
pub fn critical_radius(n: usize, d: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("critical radius needs n >= 2"));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(((n as f64).ln() / n as f64).powf(1.0 / d as f64))
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 || r > 0.5 {
        return Err(Error::invalid(format!("radius {r} must lie in (0, 1/2]")));
    }
    Ok(())
}

fn check_points(pts: &PointSet) -> Result<()> {
    if pts.is_empty() {
        return Err(Error::invalid("graph needs at least one point"));
    }
    Ok(())
}

/// All unordered pairs within torus distance `r`, via cell binning when the
/// instance is large enough to profit.
fn disk_pairs(pts: &PointSet, r: f64) -> Vec<(usize, usize)> {
    let n = pts.len();
    let d = pts.dimension();
    let r2 = r * r;
    let coords: Vec<&[f64]> = pts.points().iter().map(|p| p.coords()).collect();

    let cap = ((4 * n) as f64).powf(1.0 / d as f64).ceil() as usize;
    let m = ((1.0 / r) as usize).min(cap.max(1));
    if m < 4 || n < 64 {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if torus_distance_sq(coords[u], coords[v]) <= r2 {
                    pairs.push((u, v));
                }
            }
        }
        return pairs;
    }

    let cell_of = |p: &[f64]| -> usize {
        p.iter()
            .fold(0, |acc, &c| acc * m + ((c * m as f64) as usize).min(m - 1))
    };
    let mut cells = vec![Vec::new(); m.pow(d as u32)];
    for (i, p) in coords.iter().enumerate() {
        cells[cell_of(p)].push(i);
    }

    let offsets: Vec<Vec<isize>> = {
        let mut out: Vec<Vec<isize>> = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::with_capacity(out.len() * 3);
            for base in &out {
                for off in -1isize..=1 {
                    let mut v = base.clone();
                    v.push(off);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    };

    let mut pairs = Vec::new();
    let mut cell_idx = vec![0usize; d];
    for (u, p) in coords.iter().enumerate() {
        for (axis, &c) in p.iter().enumerate() {
            cell_idx[axis] = ((c * m as f64) as usize).min(m - 1);
        }
        for off in &offsets {
            let mut lin = 0usize;
            for axis in 0..d {
                let k = (cell_idx[axis] as isize + off[axis]).rem_euclid(m as isize) as usize;
                lin = lin * m + k;
            }
            for &v in &cells[lin] {
                if v > u && torus_distance_sq(p, coords[v]) <= r2 {
                    pairs.push((u, v));
                }
            }
        }
    }
    pairs
}

/// Short-range graph: edge `{i, j}` iff `torus_distance(i, j) <= r`.
pub fn build_disk_graph(pts: &PointSet, r: f64) -> Result<TopologyGraph> {
    check_points(pts)?;
    check_radius(r)?;
    let pairs = disk_pairs(pts, r);
    Ok(TopologyGraph::assemble(
        GraphKind::Disk { r },
        pts.clone(),
        pairs,
    ))
}

struct LongRangeSetup {
    s: f64,
    tiling: Tiling,
    occupants: Vec<Vec<usize>>,
}

fn longrange_setup(pts: &PointSet, r: f64, gamma: f64, eta: f64) -> Result<LongRangeSetup> {
    check_points(pts)?;
    check_radius(r)?;
    if !gamma.is_finite() || gamma <= 0.0 || gamma >= 1.0 {
        return Err(Error::invalid(format!(
            "gamma {gamma} must lie strictly between 0 and 1"
        )));
    }
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::invalid(format!("eta {eta} must be positive")));
    }
    let d = pts.dimension();
    let s = r.powf(gamma);
    let side = eta * r;
    if s <= 2.0 * side {
        return Err(Error::invalid(format!(
            "requires s > 2*eta*r: s = {s}, 2*eta*r = {}",
            2.0 * side
        )));
    }
    let diam_sq = (d - 1) as f64 * side * side + 0.25 * s * s;
    if diam_sq > 0.5 * s * s {
        return Err(Error::invalid(format!(
            "requires sqrt((d-1)*(eta*r)^2 + s^2/4) <= s/sqrt(2): lhs = {}, rhs = {}",
            diam_sq.sqrt(),
            s / 2.0f64.sqrt()
        )));
    }
    let tiling = Tiling::new(d, side)?;
    let mut occupants = vec![Vec::new(); tiling.tile_count()];
    for (i, p) in pts.points().iter().enumerate() {
        let idx = tiling.tile_of(p)?;
        occupants[tiling.linear_index(&idx)].push(i);
    }
    Ok(LongRangeSetup {
        s,
        tiling,
        occupants,
    })
}

fn per_axis_indices(tiling: &Tiling, lin: usize) -> Vec<usize> {
    tiling.axis_indices(lin)
}

/// Long-range graph: the disk graph plus, for every node, edges to every
/// node in each of its 2d partner tiles at separation `s = r^gamma`.
pub fn build_longrange_graph(
    pts: &PointSet,
    r: f64,
    gamma: f64,
    eta: f64,
) -> Result<TopologyGraph> {
    let setup = longrange_setup(pts, r, gamma, eta)?;
    let mut pairs = disk_pairs(pts, r);
    for (lin, members) in setup.occupants.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let c = per_axis_indices(&setup.tiling, lin);
        for partner in partner_tiles(&c, &setup.tiling, setup.s)? {
            let plin = setup.tiling.linear_index(&partner);
            for &u in members {
                for &v in &setup.occupants[plin] {
                    if u < v {
                        pairs.push((u, v));
                    }
                }
            }
        }
    }
    Ok(TopologyGraph::assemble(
        GraphKind::LongRange {
            r,
            gamma,
            eta,
            s: setup.s,
        },
        pts.clone(),
        pairs,
    ))
}

/// Cluster-limited graph: as the long-range graph, but each node adopts at
/// most `rho` partners per partner tile, the nearest ones, ties broken by
/// smaller vertex index. `rho = 0` reproduces the disk graph.
pub fn build_cluster_graph(
    pts: &PointSet,
    r: f64,
    gamma: f64,
    eta: f64,
    rho: usize,
) -> Result<TopologyGraph> {
    let setup = longrange_setup(pts, r, gamma, eta)?;
    let coords: Vec<&[f64]> = pts.points().iter().map(|p| p.coords()).collect();
    let mut pairs = disk_pairs(pts, r);
    let mut adopted = vec![0usize; pts.len()];
    if rho > 0 {
        let mut ranked: Vec<(f64, usize)> = Vec::new();
        for (lin, members) in setup.occupants.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let c = per_axis_indices(&setup.tiling, lin);
            for partner in partner_tiles(&c, &setup.tiling, setup.s)? {
                let plin = setup.tiling.linear_index(&partner);
                let pool = &setup.occupants[plin];
                if pool.is_empty() {
                    continue;
                }
                for &u in members {
                    ranked.clear();
                    ranked.extend(
                        pool.iter()
                            .map(|&v| (torus_distance_sq(coords[u], coords[v]), v)),
                    );
                    ranked.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                    for &(_, v) in ranked.iter().take(rho) {
                        pairs.push((u.min(v), u.max(v)));
                        adopted[u] += 1;
                    }
                }
            }
        }
    }
    let mut g = TopologyGraph::assemble(
        GraphKind::Cluster { r, gamma, eta, rho },
        pts.clone(),
        pairs,
    );
    g.adopted = adopted;
    Ok(g)
}

/// Degree summary: exact min and max, mean, and population standard
/// deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub std_dev: f64,
}

pub fn degree_stats(g: &TopologyGraph) -> DegreeStats {
    let n = g.n();
    let mut min = usize::MAX;
    let mut max = 0usize;
    let mut sum = 0usize;
    for i in 0..n {
        let d = g.degree(i);
        min = min.min(d);
        max = max.max(d);
        sum += d;
    }
    let mean = sum as f64 / n as f64;
    let var = (0..n)
        .map(|i| {
            let diff = g.degree(i) as f64 - mean;
            diff * diff
        })
        .sum::<f64>()
        / n as f64;
    DegreeStats {
        min,
        max,
        mean,
        std_dev: var.sqrt(),
    }
}

/// True iff the graph has a single undirected component.
pub fn is_connected(g: &TopologyGraph) -> bool {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}
