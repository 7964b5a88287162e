//! Geodesic distance matrices of `g = eᵘ|dz|²` on a grid graph, and the
//! distortion between two such matrices under the identity correspondence of
//! chart points. A desk-scale stand-in for pointed Gromov–Hausdorff distance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::Pt;
use crate::wang::{ConformalFactor, ZERO_MODE_FRACTION};

/// Fraction of the disk radius that sample points and the graph may occupy.
pub const SAFE_FRACTION: f64 = 0.9;

/// Relative metrication budget of the 16-neighbour stencil plus interpolation.
pub const STENCIL_TOLERANCE: f64 = 0.03;

const OFFSETS: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (2, 1),
    (-1, 2),
    (-2, 1),
    (1, -2),
    (2, -1),
    (-1, -2),
    (-2, -1),
];

/// Square lattice of spacing `spacing` restricted to `|z| ≤ radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGraph {
    pub spacing: f64,
    pub radius: f64,
}

impl GridGraph {
    pub fn new(spacing: f64, radius: f64) -> Result<Self> {
        if !(spacing > 0.0 && radius > 2.0 * spacing) {
            return Err(Error::InvalidParameter(format!(
                "graph needs 0 < spacing < radius/2, got spacing {spacing}, radius {radius}"
            )));
        }
        Ok(Self { spacing, radius })
    }

    /// Default graph for a solution on `B(0, r)`: radius `0.9r`, 160 cells
    /// across the radius.
    pub fn for_disk(r: f64) -> Self {
        Self {
            spacing: SAFE_FRACTION * r / 160.0,
            radius: SAFE_FRACTION * r,
        }
    }
}

/// Where a distance matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSource {
    pub n: u32,
    pub zero_mode: bool,
    pub r: f64,
    pub m: usize,
    pub graph: GridGraph,
}

/// Sample points with their pairwise geodesic distances and a base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointedSample {
    pub points: Vec<Pt>,
    pub base: usize,
    /// Row-major symmetric matrix.
    pub dist: Vec<Vec<f64>>,
    pub source: SampleSource,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Graph {
    /// Lattice coordinates of node `k`.
    coords: Vec<(i64, i64)>,
    /// `e^{u/2}` per lattice node.
    density: Vec<f64>,
    /// Node index by lattice position, `usize::MAX` outside the disk.
    lookup: Vec<usize>,
    half: i64,
    spacing: f64,
    /// Extra nodes for the sample points: position, density and edges to
    /// lattice nodes with weights.
    points: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    fn build(cf: &ConformalFactor, graph: &GridGraph, points: &[Pt]) -> Self {
        let h = graph.spacing;
        let half = (graph.radius / h).floor() as i64;
        let side = (2 * half + 1) as usize;
        let mut lookup = vec![usize::MAX; side * side];
        let mut coords = vec![];
        let mut density = vec![];
        for i in -half..=half {
            for j in -half..=half {
                let (x, y) = (i as f64 * h, j as f64 * h);
                if x.hypot(y) <= graph.radius {
                    lookup[((i + half) as usize) * side + (j + half) as usize] = coords.len();
                    coords.push((i, j));
                    density.push((cf.value(x.hypot(y)) / 2.0).exp());
                }
            }
        }
        let mut g = Self {
            coords,
            density,
            lookup,
            half,
            spacing: h,
            points: vec![],
        };
        // each sample point links to lattice nodes within 2.5 spacings
        for p in points {
            let rho_p = p[0].hypot(p[1]);
            let dp = (cf.value(rho_p) / 2.0).exp();
            let (ci, cj) = ((p[0] / h).round() as i64, (p[1] / h).round() as i64);
            let mut edges = vec![];
            for di in -3..=3 {
                for dj in -3..=3 {
                    if let Some(k) = g.node(ci + di, cj + dj) {
                        let (x, y) = ((ci + di) as f64 * h, (cj + dj) as f64 * h);
                        let len = (x - p[0]).hypot(y - p[1]);
                        if len <= 2.5 * h {
                            edges.push((k, 0.5 * (dp + g.density[k]) * len));
                        }
                    }
                }
            }
            g.points.push(edges);
        }
        g
    }

    fn node(&self, i: i64, j: i64) -> Option<usize> {
        if i.abs() > self.half || j.abs() > self.half {
            return None;
        }
        let side = (2 * self.half + 1) as usize;
        let k = self.lookup[((i + self.half) as usize) * side + (j + self.half) as usize];
        (k != usize::MAX).then_some(k)
    }

    /// Distances from sample point `src` to every sample point.
    fn from_point(&self, src: usize, pts: &[Pt]) -> Vec<f64> {
        let n = self.coords.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for &(k, w) in &self.points[src] {
            if w < dist[k] {
                dist[k] = w;
                heap.push(Entry(w, k));
            }
        }
        while let Some(Entry(d, k)) = heap.pop() {
            if d > dist[k] {
                continue;
            }
            let (i, j) = self.coords[k];
            for (di, dj) in OFFSETS {
                if let Some(nb) = self.node(i + di, j + dj) {
                    let len = self.spacing * ((di * di + dj * dj) as f64).sqrt();
                    let nd = d + 0.5 * (self.density[k] + self.density[nb]) * len;
                    if nd < dist[nb] {
                        dist[nb] = nd;
                        heap.push(Entry(nd, nb));
                    }
                }
            }
        }
        (0..pts.len())
            .map(|t| {
                if t == src {
                    0.0
                } else {
                    self.points[t]
                        .iter()
                        .map(|&(k, w)| dist[k] + w)
                        .fold(f64::INFINITY, f64::min)
                }
            })
            .collect()
    }
}

/// Geodesic distances on the default graph [`GridGraph::for_disk`].
pub fn geodesic_distances(
    cf: &ConformalFactor,
    points: &[Pt],
    base: usize,
) -> Result<PointedSample> {
    geodesic_distances_on(cf, points, base, &GridGraph::for_disk(cf.grid().r()))
}

/// Shortest-path distances between `points` on `graph`, edge weights the
/// trapezoidal average of `e^{u/2}` times the Euclidean edge length. Sample
/// points are extra nodes joined to the lattice nodes within 2.5 spacings.
pub fn geodesic_distances_on(
    cf: &ConformalFactor,
    points: &[Pt],
    base: usize,
    graph: &GridGraph,
) -> Result<PointedSample> {
    let r = cf.grid().r();
    if points.is_empty() || base >= points.len() {
        return Err(Error::InvalidParameter(format!(
            "base {base} is not one of {} points",
            points.len()
        )));
    }
    if graph.radius > SAFE_FRACTION * r * (1.0 + 1e-12) {
        return Err(Error::OutsideRegion(format!(
            "graph radius {} exceeds {SAFE_FRACTION}·r = {}",
            graph.radius,
            SAFE_FRACTION * r
        )));
    }
    for p in points {
        if p[0].hypot(p[1]) > graph.radius - 2.5 * graph.spacing {
            return Err(Error::OutsideRegion(format!("({}, {})", p[0], p[1])));
        }
    }
    let g = Graph::build(cf, graph, points);
    let dist: Vec<Vec<f64>> = (0..points.len())
        .into_par_iter()
        .map(|s| g.from_point(s, points))
        .collect();
    // symmetrize: both directions are the same path set, up to round-off
    let n = points.len();
    let mut sym = dist.clone();
    for i in 0..n {
        for j in 0..n {
            sym[i][j] = 0.5 * (dist[i][j] + dist[j][i]);
        }
    }
    Ok(PointedSample {
        points: points.to_vec(),
        base,
        dist: sym,
        source: SampleSource {
            n: cf.cd().n(),
            zero_mode: cf.cd().is_zero_mode(),
            r,
            m: cf.grid().m(),
            graph: *graph,
        },
    })
}

/// `sup |d₁(x, y) − d₂(x, y)|` over pairs, the distortion of the identity
/// correspondence between the two point sets.
pub fn gh_discrepancy(s1: &PointedSample, s2: &PointedSample) -> Result<f64> {
    if s1.points != s2.points || s1.base != s2.base {
        return Err(Error::SampleMismatch(
            "point lists or base points differ".into(),
        ));
    }
    Ok(matrix_distortion(&s1.dist, &s2.dist))
}

pub fn matrix_distortion(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// Largest `|a − b|/b` over off-diagonal entries.
pub fn relative_distortion(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if i != j {
                worst = worst.max((a[i][j] - b[i][j]).abs() / b[i][j]);
            }
        }
    }
    worst
}

/// `c·|z − w|` for all pairs.
pub fn scaled_euclidean(points: &[Pt], c: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| c * (p[0] - q[0]).hypot(p[1] - q[1]))
                .collect()
        })
        .collect()
}

/// Distance of the curvature −1 Poincaré metric `4R²|dz|²/(R² − |z|²)²` on
/// `B(0, R)`.
pub fn poincare_distance(big_r: f64, z: Pt, w: Pt) -> f64 {
    let num = big_r * (z[0] - w[0]).hypot(z[1] - w[1]);
    // |R² − z̄w|
    let re = big_r * big_r - (z[0] * w[0] + z[1] * w[1]);
    let im = -(z[0] * w[1] - z[1] * w[0]);
    2.0 * (num / re.hypot(im)).atanh()
}

/// Closed-form matrix for the zero-mode solution on `B(0, r)`, whose data is
/// the Poincaré metric of the larger disk `B(0, r/ZERO_MODE_FRACTION)`.
pub fn zero_mode_reference(r: f64, points: &[Pt]) -> Vec<Vec<f64>> {
    let big_r = r / ZERO_MODE_FRACTION;
    points
        .iter()
        .map(|&p| {
            points
                .iter()
                .map(|&q| poincare_distance(big_r, p, q))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::CubicDifferential;
    use crate::wang::{solve, RadialGrid, SolverConfig};

    fn points() -> Vec<Pt> {
        vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [0.3, 1.7],
            [-1.2, 0.4],
            [-0.5, -1.5],
            [2.0, -1.0],
        ]
    }

    #[test]
    fn flat_case_is_scaled_euclidean() {
        let cf = solve(
            &CubicDifferential::new(0),
            &RadialGrid::new(4.0, 256).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap();
        let s = geodesic_distances(&cf, &points(), 0).unwrap();
        for i in 0..s.points.len() {
            assert_eq!(s.dist[i][i], 0.0);
        }
        let reference = scaled_euclidean(&points(), 2f64.powf(1.0 / 6.0));
        let rel = relative_distortion(&s.dist, &reference);
        assert!(rel < STENCIL_TOLERANCE, "{rel}");
        assert_eq!(gh_discrepancy(&s, &s).unwrap(), 0.0);
    }

    #[test]
    fn poincare_distance_from_origin() {
        // 2 artanh(t/R) along a radius
        let d = poincare_distance(2.0, [0.0, 0.0], [1.0, 0.0]);
        assert!((d - 2.0 * 0.5f64.atanh()).abs() < 1e-15);
        let a = poincare_distance(2.0, [0.3, -0.2], [-0.5, 0.9]);
        let b = poincare_distance(2.0, [-0.5, 0.9], [0.3, -0.2]);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn rejects_points_near_boundary() {
        let cf = solve(
            &CubicDifferential::new(1),
            &RadialGrid::new(2.0, 128).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(matches!(
            geodesic_distances(&cf, &[[1.95, 0.0]], 0),
            Err(Error::OutsideRegion(_))
        ));
        let s = geodesic_distances(&cf, &[[0.0, 0.0], [1.0, 0.0]], 0).unwrap();
        let mut t = s.clone();
        t.points[1] = [0.9, 0.0];
        assert!(matches!(
            gh_discrepancy(&s, &t),
            Err(Error::SampleMismatch(_))
        ));
    }
}
