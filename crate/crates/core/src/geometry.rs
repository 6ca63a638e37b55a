//! Geometry on the unit d-torus: points, uniform sampling, the wrap metric,
//! and axis-aligned tilings with long-range partner lookup.
//!
//! All coordinates live in `[0, 1)`. Tiles are half-open boxes of width
//! `side`; the last tile on each axis absorbs the remainder when `1/side`
//! is not an integer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::textio::{fmt_real, parse_real, parse_u64, parse_usize};

/// A point on the unit d-torus. Every coordinate is finite and in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point must have at least one coordinate"));
        }
        for &c in &coords {
            if !c.is_finite() || !(0.0..1.0).contains(&c) {
                return Err(Error::invalid(format!(
                    "coordinate {c} outside the half-open unit interval"
                )));
            }
        }
        Ok(Self { coords })
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Shortest wrap displacement between two scalars in `[0, 1)`.
#[inline]
fn axis_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Squared torus distance over raw coordinate slices. Hot path for graph
/// construction and interference sums; callers guarantee equal lengths.
#[inline]
pub(crate) fn torus_distance_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let g = axis_gap(x, y);
        acc += g * g;
    }
    acc
}

/// Euclidean distance induced by the per-axis wrap metric
/// `min(|x - y|, 1 - |x - y|)`.
pub fn torus_distance(a: &TorusPoint, b: &TorusPoint) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            got: b.dimension(),
        });
    }
    Ok(torus_distance_sq(a.coords(), b.coords()).sqrt())
}

/// A deterministic batch of points with the seed that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dimension: usize,
    seed: u64,
    points: Vec<TorusPoint>,
}

impl PointSet {
    pub fn new(dimension: usize, seed: u64, points: Vec<TorusPoint>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        for p in &points {
            if p.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: p.dimension(),
                });
            }
        }
        Ok(Self {
            dimension,
            seed,
            points,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &TorusPoint {
        &self.points[i]
    }

    /// Header line `d n seed`, then one whitespace-separated line per point.
    /// Reals carry 17 significant digits and round-trip exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} {}\n",
            self.dimension,
            self.points.len(),
            self.seed
        ));
        for p in &self.points {
            let line: Vec<String> = p.coords().iter().map(|&c| fmt_real(c)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty point set text".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse(format!(
                "point set header needs `d n seed`, got {header:?}"
            )));
        }
        let d = parse_usize(toks[0], "dimension")?;
        let n = parse_usize(toks[1], "point count")?;
        let seed = parse_u64(toks[2], "seed")?;
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} point lines")))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != d {
                return Err(Error::Parse(format!(
                    "point line has {} coordinates, expected {d}",
                    toks.len()
                )));
            }
            let mut coords = Vec::with_capacity(d);
            for t in toks {
                coords.push(parse_real(t, "coordinate")?);
            }
            points.push(TorusPoint::new(coords)?);
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("trailing data after {n} point lines")));
        }
        PointSet::new(d, seed, points)
    }
}

/// Draw `n` points iid uniform on `[0, 1)^d`. The stream is consumed
/// point-major, axis-minor, so a given `(n, d, seed)` always yields the
/// same set, and prefixes agree across different `n`.
pub fn sample_points(n: usize, d: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("need at least one point"));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let mut coords = Vec::with_capacity(d);
        for _ in 0..d {
            coords.push(rng.gen::<f64>());
        }
        points.push(TorusPoint { coords });
    }
    PointSet::new(d, seed, points)
}

/// Axis-aligned tiling of the d-torus into `tiles_per_axis^d` half-open
/// boxes of width `side`. On each axis tile `k` covers
/// `[k * side, (k+1) * side)` and the last tile extends to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Tiling {
    dimension: usize,
    side: f64,
    tiles_per_axis: usize,
}

impl Tiling {
    pub fn new(dimension: usize, side: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !side.is_finite() || side <= 0.0 || side > 1.0 {
            return Err(Error::invalid(format!(
                "tile side {side} must lie in (0, 1]"
            )));
        }
        let mut m = (1.0 / side).floor() as usize;
        // Guard against the reciprocal landing just below an integer.
        if ((m + 1) as f64) * side <= 1.0 {
            m += 1;
        }
        while m > 1 && (m as f64) * side > 1.0 {
            m -= 1;
        }
        Ok(Self {
            dimension,
            side,
            tiles_per_axis: m,
        })
    }

    /// Exact-count constructor: `m` tiles of width `1/m` per axis.
    pub fn with_tiles_per_axis(dimension: usize, m: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if m == 0 {
            return Err(Error::invalid("need at least one tile per axis"));
        }
        Ok(Self {
            dimension,
            side: 1.0 / m as f64,
            tiles_per_axis: m,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn tiles_per_axis(&self) -> usize {
        self.tiles_per_axis
    }

    pub fn tile_count(&self) -> usize {
        self.tiles_per_axis.pow(self.dimension as u32)
    }

    /// Per-axis tile indices of `p`, each in `0..tiles_per_axis`.
    pub fn tile_of(&self, p: &TorusPoint) -> Result<Vec<usize>> {
        if p.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: p.dimension(),
            });
        }
        let m = self.tiles_per_axis;
        Ok(p.coords()
            .iter()
            .map(|&c| ((c / self.side) as usize).min(m - 1))
            .collect())
    }

    /// Row-major flattening of a per-axis index vector, axis 0 most
    /// significant.
    pub fn linear_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dimension);
        let m = self.tiles_per_axis;
        idx.iter().fold(0, |acc, &k| {
            debug_assert!(k < m);
            acc * m + k
        })
    }

    /// Inverse of `linear_index`.
    pub fn axis_indices(&self, mut linear: usize) -> Vec<usize> {
        debug_assert!(linear < self.tile_count());
        let m = self.tiles_per_axis;
        let mut idx = vec![0usize; self.dimension];
        for axis in (0..self.dimension).rev() {
            idx[axis] = linear % m;
            linear /= m;
        }
        idx
    }
}

/// Largest lattice offset `k >= 1` whose nominal gap `k * side` stays below
/// `s / 2`, capped at the torus width.
fn partner_offset(tiling: &Tiling, s: f64) -> Result<usize> {
    let side = tiling.side;
    let half = 0.5 * s;
    let mut k = (half / side).ceil() as i64 - 1;
    while k >= 1 && (k as f64) * side >= half {
        k -= 1;
    }
    while ((k + 1) as f64) * side < half {
        k += 1;
    }
    if k < 1 {
        return Err(Error::NoPartner { s, side });
    }
    Ok((k as usize).min(tiling.tiles_per_axis - 1))
}

/// Partner tiles of tile `c` at target separation `s`: for each axis the
/// tile offset by the partner distance in the positive then the negative
/// direction, wrapping around the torus. The result has `2 d` entries in
/// axis order.
pub fn partner_tiles(c: &[usize], tiling: &Tiling, s: f64) -> Result<Vec<Vec<usize>>> {
    if c.len() != tiling.dimension {
        return Err(Error::DimensionMismatch {
            expected: tiling.dimension,
            got: c.len(),
        });
    }
    let m = tiling.tiles_per_axis;
    for &idx in c {
        if idx >= m {
            return Err(Error::invalid(format!("tile index {idx} outside 0..{m}")));
        }
    }
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::invalid(format!("separation {s} must be positive")));
    }
    let k = partner_offset(tiling, s)?;
    let mut out = Vec::with_capacity(2 * c.len());
    for axis in 0..c.len() {
        for dir in [k % m, m - k % m] {
            let mut partner = c.to_vec();
            partner[axis] = (c[axis] + dir) % m;
            out.push(partner);
        }
    }
    Ok(out)
}
