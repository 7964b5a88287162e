//! Properly convex domains in affine charts of the projective plane.
//!
//! A chart is a 3×3 matrix `C`; the chart point `(x, y)` has homogeneous lift
//! `C·(x, y, 1)ᵀ`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Pt = [f64; 2];

/// Default number of arc-length samples on a domain boundary.
pub const DEFAULT_SAMPLES: usize = 720;

/// Default turn-angle threshold for [`dominant_vertices`], in degrees.
pub const DEFAULT_ANGLE_DEG: f64 = 10.0;

/// A ray in ℝ³ standing for a point of the projective sphere or, up to sign,
/// of ℝP².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint(Vector3<f64>);

/// Which quotient of ℝ³∖{0} equality is tested in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjMode {
    /// Positive scaling only.
    Sphere,
    /// Any nonzero scaling.
    Rp2,
}

impl ProjPoint {
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "homogeneous coordinates must be nonzero, got {v:?}"
            )));
        }
        Ok(Self(v))
    }

    pub fn coords(&self) -> Vector3<f64> {
        self.0
    }

    pub fn unit(&self) -> Vector3<f64> {
        self.0 / self.0.norm()
    }

    pub fn approx_eq(&self, other: &Self, mode: ProjMode, tol: f64) -> bool {
        let (a, b) = (self.unit(), other.unit());
        match mode {
            ProjMode::Sphere => (a - b).norm() <= tol,
            ProjMode::Rp2 => (a - b).norm().min((a + b).norm()) <= tol,
        }
    }

    /// Round distance `arccos(|⟨u, v⟩|)` on ℝP².
    pub fn rp2_distance(&self, other: &Self) -> f64 {
        round_angle(&self.0, &other.0)
    }
}

/// Element of SL(3, ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjTransform(Matrix3<f64>);

impl ProjTransform {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let d = m.determinant();
        if !((d - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidParameter(format!(
                "transform determinant {d} is not 1"
            )));
        }
        Ok(Self(m))
    }

    /// Rescales an invertible matrix to determinant 1. The projective action
    /// is unchanged.
    pub fn normalized(m: Matrix3<f64>) -> Result<Self> {
        let d = m.determinant();
        if !(d.abs() > 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter("singular transform".into()));
        }
        let s = d.signum() * d.abs().cbrt();
        let out = m / s;
        // rescaling is exact up to round-off; polish once
        let d2 = out.determinant();
        Ok(Self(out / d2.cbrt()))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }
}

/// Properly convex domain given by boundary samples in an affine chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexDomain {
    chart: Matrix3<f64>,
    /// Hull boundary resampled by arc length, counterclockwise, hull vertices included.
    boundary: Vec<Pt>,
    /// Strictly convex hull vertices, counterclockwise.
    hull: Vec<Pt>,
}

fn cross(o: Pt, a: Pt, b: Pt) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: Pt, b: Pt) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Convex hull by Andrew's monotone chain, counterclockwise, without
/// collinear points.
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts: Vec<Pt> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts
        .iter()
        .fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()))
        .max(1e-300);
    let eps = 1e-14 * scale * scale;
    let mut hull: Vec<Pt> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Pt>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn resample(hull: &[Pt], samples: usize) -> Vec<Pt> {
    if hull.len() < 2 {
        return hull.to_vec();
    }
    let perimeter: f64 = (0..hull.len())
        .map(|i| dist(hull[i], hull[(i + 1) % hull.len()]))
        .sum();
    let step = perimeter / samples.max(1) as f64;
    let mut out = Vec::with_capacity(samples + hull.len());
    let mut carry = 0.0;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let len = dist(a, b);
        out.push(a);
        // arc-length positions strictly inside this edge
        let mut s = if carry > 0.0 { step - carry } else { step };
        while s < len - 1e-12 * step {
            let t = s / len;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            s += step;
        }
        carry = len - (s - step);
        if carry >= step {
            carry = 0.0;
        }
    }
    out
}

impl ConvexDomain {
    /// Domain bounded by the convex hull of `points` in `chart`.
    pub fn from_chart_points(chart: Matrix3<f64>, points: &[Pt], samples: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        let hull = convex_hull(points);
        let boundary = resample(&hull, samples);
        Ok(Self {
            chart,
            boundary,
            hull,
        })
    }

    /// Domain whose hull vertices are the given lifts, placed in `chart`.
    pub fn from_lifts(chart: Matrix3<f64>, lifts: &[Vector3<f64>], samples: usize) -> Result<Self> {
        let inv = chart
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("singular chart".into()))?;
        let pts = lifts
            .iter()
            .map(|v| to_chart(&inv, v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_chart_points(chart, &pts, samples)
    }

    pub fn chart(&self) -> &Matrix3<f64> {
        &self.chart
    }

    pub fn boundary(&self) -> &[Pt] {
        &self.boundary
    }

    pub fn hull_vertices(&self) -> &[Pt] {
        &self.hull
    }

    pub fn lift(&self, p: Pt) -> Vector3<f64> {
        self.chart * Vector3::new(p[0], p[1], 1.0)
    }

    pub fn hull_lifts(&self) -> Vec<Vector3<f64>> {
        self.hull.iter().map(|&p| self.lift(p)).collect()
    }

    pub fn centroid(&self) -> Pt {
        polygon_centroid(&self.hull)
    }

    /// Largest distance between two boundary samples.
    pub fn diameter(&self) -> f64 {
        let h = &self.hull;
        let mut best = 0.0f64;
        for i in 0..h.len() {
            for j in i + 1..h.len() {
                best = best.max(dist(h[i], h[j]));
            }
        }
        best
    }

    /// Largest distance from `center` to a hull vertex.
    pub fn circumradius_about(&self, center: Pt) -> f64 {
        self.hull.iter().fold(0.0, |m, &p| m.max(dist(p, center)))
    }

    pub fn perimeter(&self) -> f64 {
        let h = &self.hull;
        (0..h.len()).map(|i| dist(h[i], h[(i + 1) % h.len()])).sum()
    }

    /// Resampling resolution: perimeter divided by sample count.
    pub fn resolution(&self) -> f64 {
        self.perimeter() / self.boundary.len().max(1) as f64
    }

    /// Same domain expressed in another chart.
    pub fn in_chart(&self, chart: Matrix3<f64>) -> Result<Self> {
        let inv = chart
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("singular chart".into()))?;
        let pts = self
            .boundary
            .iter()
            .map(|&p| to_chart(&inv, &self.lift(p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_chart_points(chart, &pts, self.boundary.len())
    }

    /// Applies a Euclidean similarity of the chart plane, keeping the chart.
    pub fn map_chart_points(&self, f: impl Fn(Pt) -> Pt) -> Result<Self> {
        let pts: Vec<Pt> = self.boundary.iter().map(|&p| f(p)).collect();
        Self::from_chart_points(self.chart, &pts, self.boundary.len())
    }
}

// arccos(|⟨u,v⟩|/(‖u‖‖v‖)), evaluated stably near 0
fn round_angle(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.cross(v).norm().atan2(u.dot(v).abs())
}

fn to_chart(inv: &Matrix3<f64>, v: &Vector3<f64>) -> Result<Pt> {
    let c = inv * v;
    if !(c[2] > 0.0) {
        return Err(Error::ChartOverflow(c[2]));
    }
    Ok([c[0] / c[2], c[1] / c[2]])
}

fn polygon_centroid(h: &[Pt]) -> Pt {
    if h.len() < 3 {
        let n = h.len().max(1) as f64;
        return [
            h.iter().map(|p| p[0]).sum::<f64>() / n,
            h.iter().map(|p| p[1]).sum::<f64>() / n,
        ];
    }
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..h.len() {
        let p = h[i];
        let q = h[(i + 1) % h.len()];
        let w = p[0] * q[1] - q[0] * p[1];
        a += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

/// Chart points `(x/t, y/t)` of vectors in the positive half-space, hull-reduced.
pub fn projectivize(points: &[Vector3<f64>]) -> Result<ConvexDomain> {
    projectivize_with_samples(points, DEFAULT_SAMPLES)
}

pub fn projectivize_with_samples(points: &[Vector3<f64>], samples: usize) -> Result<ConvexDomain> {
    ConvexDomain::from_lifts(Matrix3::identity(), points, samples)
}

fn point_segment_distance(p: Pt, a: Pt, b: Pt) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * dx, a[1] + t * dy])
}

fn point_polyline_distance(p: Pt, poly: &[Pt]) -> f64 {
    if poly.len() == 1 {
        return dist(p, poly[0]);
    }
    (0..poly.len())
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceMode {
    Chart,
    Rp2,
}

/// Symmetric Hausdorff distance between the boundaries of two domains.
///
/// Chart mode measures boundary samples of each domain against the closed hull
/// polyline of the other, in the chart of `d1` (`d2` is re-expressed there if
/// its chart differs). The sampling error is at most the coarser
/// [`ConvexDomain::resolution`]. RP² mode uses the round metric between
/// sample lifts.
pub fn hausdorff_distance(d1: &ConvexDomain, d2: &ConvexDomain, mode: DistanceMode) -> Result<f64> {
    if d1.boundary.is_empty() || d2.boundary.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    match mode {
        DistanceMode::Chart => {
            let other;
            let d2 = if (d1.chart - d2.chart).amax() > 1e-12 {
                other = d2.in_chart(d1.chart)?;
                &other
            } else {
                d2
            };
            let a = d1
                .boundary
                .iter()
                .map(|&p| point_polyline_distance(p, &d2.hull))
                .fold(0.0, f64::max);
            let b = d2
                .boundary
                .iter()
                .map(|&p| point_polyline_distance(p, &d1.hull))
                .fold(0.0, f64::max);
            Ok(a.max(b))
        }
        DistanceMode::Rp2 => {
            let ua: Vec<Vector3<f64>> = d1
                .boundary
                .iter()
                .map(|&p| d1.lift(p).normalize())
                .collect();
            let ub: Vec<Vector3<f64>> = d2
                .boundary
                .iter()
                .map(|&p| d2.lift(p).normalize())
                .collect();
            let directed = |xs: &[Vector3<f64>], ys: &[Vector3<f64>]| {
                xs.iter()
                    .map(|x| {
                        ys.iter()
                            .map(|y| round_angle(x, y))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max)
            };
            Ok(directed(&ua, &ub).max(directed(&ub, &ua)))
        }
    }
}

/// Regular `k`-gon with vertices `circumradius·e^{2πij/k}`, edges resampled.
pub fn regular_polygon(k: usize, circumradius: f64, chart: Matrix3<f64>) -> Result<ConvexDomain> {
    regular_polygon_rotated(k, circumradius, 0.0, chart)
}

/// Regular `k`-gon with a vertex in direction `phase`.
pub fn regular_polygon_rotated(
    k: usize,
    circumradius: f64,
    phase: f64,
    chart: Matrix3<f64>,
) -> Result<ConvexDomain> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "a polygon needs at least 3 vertices, got {k}"
        )));
    }
    if !(circumradius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "circumradius must be positive, got {circumradius}"
        )));
    }
    let pts: Vec<Pt> = (0..k)
        .map(|j| {
            let t = phase + 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            [circumradius * t.cos(), circumradius * t.sin()]
        })
        .collect();
    ConvexDomain::from_chart_points(chart, &pts, DEFAULT_SAMPLES)
}

/// Turn angle at each hull vertex, measured between chords to the nearest
/// hull vertices at distance at least `reach` on either side.
pub fn vertex_turn_angles(d: &ConvexDomain, reach: f64) -> Vec<f64> {
    let h = &d.hull;
    let n = h.len();
    if n < 3 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let p = h[i];
            let mut back = (i + n - 1) % n;
            while back != i && dist(h[back], p) < reach {
                back = (back + n - 1) % n;
            }
            let mut fwd = (i + 1) % n;
            while fwd != i && dist(h[fwd], p) < reach {
                fwd = (fwd + 1) % n;
            }
            if back == i || fwd == i {
                return 0.0;
            }
            let a = [p[0] - h[back][0], p[1] - h[back][1]];
            let b = [h[fwd][0] - p[0], h[fwd][1] - p[1]];
            let c = a[0] * b[1] - a[1] * b[0];
            let dt = a[0] * b[0] + a[1] * b[1];
            c.atan2(dt).abs()
        })
        .collect()
}

/// Number of corners whose turn angle exceeds `angle_threshold` (radians).
///
/// A corner rounded at a scale below 1% of the diameter shows up as a short
/// run of consecutive hull vertices above the threshold, closer together than
/// that scale; each such run counts once.
pub fn dominant_vertices(d: &ConvexDomain, angle_threshold: f64) -> usize {
    let reach = 0.01 * d.diameter();
    let turns = vertex_turn_angles(d, reach);
    let h = &d.hull;
    let n = turns.len();
    let above: Vec<bool> = turns.iter().map(|&t| t > angle_threshold).collect();
    let starts = (0..n)
        .filter(|&i| {
            let prev = (i + n - 1) % n;
            above[i] && (!above[prev] || dist(h[prev], h[i]) >= reach)
        })
        .count();
    if starts == 0 && above.iter().any(|&b| b) {
        1
    } else {
        starts
    }
}

/// The dual domain, given by the support lines of `d`.
///
/// `d` is first re-charted so the hull centroid sits at the origin; the edge
/// covectors are then placed in the chart `C′^{−T}`, where `C′` is the centered
/// chart. In that chart the duality is the polarity in the unit circle.
pub fn dual_domain(d: &ConvexDomain) -> Result<ConvexDomain> {
    let h = &d.hull;
    if h.len() < 3 {
        return Err(Error::DegenerateHull(h.len()));
    }
    let c = d.centroid();
    let shift = Matrix3::new(1.0, 0.0, c[0], 0.0, 1.0, c[1], 0.0, 0.0, 1.0);
    let centered = d.chart * shift;
    let local: Vec<Vector3<f64>> = h
        .iter()
        .map(|p| Vector3::new(p[0] - c[0], p[1] - c[1], 1.0))
        .collect();
    let n = local.len();
    let covectors: Vec<Vector3<f64>> = (0..n)
        .map(|i| {
            let l = local[i].cross(&local[(i + 1) % n]);
            // positive at the centroid, i.e. third entry positive
            if l[2] < 0.0 {
                -l
            } else {
                l
            }
        })
        .collect();
    let dual_chart = centered
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("singular chart".into()))?
        .transpose();
    let pts = covectors
        .iter()
        .map(|l| {
            if !(l[2] > 0.0) {
                Err(Error::ChartOverflow(l[2]))
            } else {
                Ok([l[0] / l[2], l[1] / l[2]])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ConvexDomain::from_chart_points(dual_chart, &pts, d.boundary.len())
}

/// Whether every point of `points` lies strictly inside the hull of `d`.
pub fn contains_compact(d: &ConvexDomain, points: &[Pt]) -> bool {
    let h = &d.hull;
    if h.len() < 3 {
        return false;
    }
    let scale = d.diameter();
    let eps = 1e-12 * scale * scale;
    points
        .iter()
        .all(|&p| (0..h.len()).all(|i| cross(h[i], h[(i + 1) % h.len()], p) > eps))
}

/// Projective image `a(D)`, in the same chart when the image stays in it and
/// in the chart `a·C` otherwise.
pub fn apply_transform(d: &ConvexDomain, a: &ProjTransform) -> Result<ConvexDomain> {
    let inv = d
        .chart
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("singular chart".into()))?;
    let images: Vec<Vector3<f64>> = d.boundary.iter().map(|&p| a.0 * d.lift(p)).collect();
    let local: Vec<Vector3<f64>> = images.iter().map(|v| inv * v).collect();
    let samples = d.boundary.len();
    if local.iter().all(|v| v[2] > 0.0) {
        return ConvexDomain::from_lifts(d.chart, &images, samples);
    }
    if local.iter().all(|v| v[2] < 0.0) {
        let flipped: Vec<Vector3<f64>> = images.iter().map(|v| -v).collect();
        return ConvexDomain::from_lifts(d.chart, &flipped, samples);
    }
    let chart = a.0 * d.chart;
    ConvexDomain::from_lifts(chart, &images, samples).map_err(|_| Error::NotProperlyConvex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn id() -> Matrix3<f64> {
        Matrix3::identity()
    }

    #[test]
    fn projectivize_examples() {
        let d = projectivize(&[Vector3::new(0.0, 0.0, 1.0)]).unwrap();
        assert_eq!(d.hull_vertices(), &[[0.0, 0.0]]);
        let d = projectivize(&[Vector3::new(1.0, 0.0, 2.0)]).unwrap();
        assert_eq!(d.hull_vertices(), &[[0.5, 0.0]]);
        assert!(matches!(
            projectivize(&[Vector3::new(1.0, 0.0, -1.0)]),
            Err(Error::ChartOverflow(_))
        ));
        assert!(matches!(projectivize(&[]), Err(Error::EmptyBoundary)));
    }

    #[test]
    fn regular_polygon_vertices() {
        let t = regular_polygon(3, 1.0, id()).unwrap();
        let h = t.hull_vertices();
        assert_eq!(h.len(), 3);
        for v in [
            [1.0, 0.0],
            [-0.5, 3f64.sqrt() / 2.0],
            [-0.5, -(3f64.sqrt()) / 2.0],
        ] {
            assert!(h.iter().any(|p| dist(*p, v) < 1e-12));
        }
        let s = regular_polygon_rotated(4, 2f64.sqrt(), PI / 4.0, id()).unwrap();
        for v in [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]] {
            assert!(s.hull_vertices().iter().any(|p| dist(*p, v) < 1e-12));
        }
        assert!(regular_polygon(2, 1.0, id()).is_err());
        assert!(hausdorff_distance(&t, &t, DistanceMode::Chart).unwrap() < 1e-14);
    }

    #[test]
    fn hausdorff_examples() {
        let t = regular_polygon(3, 1.0, id()).unwrap();
        let rotated = regular_polygon_rotated(3, 1.0, 2.0 * PI / 3.0, id()).unwrap();
        assert!(hausdorff_distance(&t, &rotated, DistanceMode::Chart).unwrap() < 1e-12);
        let sq = |s: f64| {
            ConvexDomain::from_chart_points(
                id(),
                &[[-s, -s], [s, -s], [s, s], [-s, s]],
                DEFAULT_SAMPLES,
            )
            .unwrap()
        };
        let d = hausdorff_distance(&sq(0.5), &sq(0.55), DistanceMode::Chart).unwrap();
        assert!((d - 0.05 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_matches_brute_force() {
        // dense point clouds on both boundaries, nearest-sample distances
        let a = regular_polygon(5, 1.0, id()).unwrap();
        let b = regular_polygon_rotated(5, 1.2, 0.3, id()).unwrap();
        let dense = |d: &ConvexDomain| {
            let h = d.hull_vertices();
            let mut out = Vec::new();
            for i in 0..h.len() {
                let (p, q) = (h[i], h[(i + 1) % h.len()]);
                for s in 0..800 {
                    let t = s as f64 / 800.0;
                    out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
                }
            }
            out
        };
        let (da, db) = (dense(&a), dense(&b));
        let directed = |xs: &[Pt], ys: &[Pt]| {
            xs.iter()
                .map(|x| {
                    ys.iter()
                        .map(|y| dist(*x, *y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let brute = directed(&da, &db).max(directed(&db, &da));
        let fast = hausdorff_distance(&a, &b, DistanceMode::Chart).unwrap();
        assert!((brute - fast).abs() < 2e-3, "{brute} {fast}");
    }

    #[test]
    fn dominant_vertex_examples() {
        let thr = DEFAULT_ANGLE_DEG.to_radians();
        assert_eq!(
            dominant_vertices(&regular_polygon(5, 1.0, id()).unwrap(), thr),
            5
        );
        let circle: Vec<Pt> = (0..360)
            .map(|j| [(j as f64).to_radians().cos(), (j as f64).to_radians().sin()])
            .collect();
        let c = ConvexDomain::from_chart_points(id(), &circle, DEFAULT_SAMPLES).unwrap();
        assert_eq!(dominant_vertices(&c, thr), 0);
        // rounded square: corners replaced by small arcs
        let mut pts = Vec::new();
        for k in 0..4 {
            let center = (k as f64 * PI / 2.0 + PI / 4.0).sin_cos();
            for j in 0..=20 {
                let t = k as f64 * PI / 2.0 + j as f64 * PI / 40.0;
                pts.push([center.1 + 1e-4 * t.cos(), center.0 + 1e-4 * t.sin()]);
            }
        }
        let rs = ConvexDomain::from_chart_points(id(), &pts, DEFAULT_SAMPLES).unwrap();
        assert_eq!(dominant_vertices(&rs, thr), 4);
    }

    #[test]
    fn simplex_duality() {
        // chart in which e1, e2, e3 all have positive third coordinate
        let chart = Matrix3::new(1.0, 0.0, 1.0, 0.0, 1.0, 1.0, -1.0, -1.0, 1.0);
        let lifts = [Vector3::x(), Vector3::y(), Vector3::z()];
        let d = ConvexDomain::from_lifts(chart, &lifts, 90).unwrap();
        let dual = dual_domain(&d).unwrap();
        let dual_lifts = dual.hull_lifts();
        assert_eq!(dual_lifts.len(), 3);
        for e in [Vector3::x(), Vector3::y(), Vector3::z()] {
            let target = ProjPoint::new(e).unwrap();
            assert!(dual_lifts
                .iter()
                .any(|l| ProjPoint::new(*l)
                    .unwrap()
                    .approx_eq(&target, ProjMode::Sphere, 1e-12)));
        }
    }

    #[test]
    fn disk_is_self_dual_and_biduality() {
        let circle: Vec<Pt> = (0..720)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / 720.0;
                [t.cos(), t.sin()]
            })
            .collect();
        let disk = ConvexDomain::from_chart_points(id(), &circle, DEFAULT_SAMPLES).unwrap();
        let dual = dual_domain(&disk).unwrap();
        // centroid is the origin, so the dual chart is the identity
        assert!((dual.chart() - id()).amax() < 1e-12);
        for p in dual.boundary() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-4);
        }
        let pent = regular_polygon_rotated(
            5,
            1.0,
            0.2,
            Matrix3::new(1.0, 0.0, 0.3, 0.0, 1.0, -0.2, 0.0, 0.0, 1.0),
        )
        .unwrap();
        let back = dual_domain(&dual_domain(&pent).unwrap()).unwrap();
        let d = hausdorff_distance(&pent, &back, DistanceMode::Chart).unwrap();
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn containment() {
        let t = regular_polygon(3, 1.0, id()).unwrap();
        assert!(contains_compact(&t, &[[0.0, 0.0]]));
        assert!(!contains_compact(&t, &[[2.0, 0.0]]));
    }

    #[test]
    fn transforms() {
        let t = regular_polygon(4, 1.0, id()).unwrap();
        let same = apply_transform(&t, &ProjTransform::identity()).unwrap();
        assert!(hausdorff_distance(&t, &same, DistanceMode::Chart).unwrap() < 1e-12);
        let (s, c) = (PI / 2.0).sin_cos();
        let rot = ProjTransform::new(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)).unwrap();
        let r = apply_transform(&t, &rot).unwrap();
        assert!(hausdorff_distance(&t, &r, DistanceMode::Chart).unwrap() < 1e-12);
        let tri = regular_polygon(3, 1.0, id()).unwrap();
        let a = ProjTransform::new(Matrix3::from_diagonal(&Vector3::new(2.0, 0.5, 1.0))).unwrap();
        let img = apply_transform(&tri, &a).unwrap();
        for v in tri.hull_vertices() {
            let w = [2.0 * v[0], 0.5 * v[1]];
            assert!(img.hull_vertices().iter().any(|p| dist(*p, w) < 1e-12));
        }
        assert!(ProjTransform::new(Matrix3::from_diagonal(&Vector3::new(2.0, 1.0, 1.0))).is_err());
        let n = ProjTransform::normalized(Matrix3::from_diagonal(&Vector3::new(-2.0, 1.0, 1.0)))
            .unwrap();
        assert!((n.matrix().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rp2_distance_mode() {
        let a = regular_polygon(6, 0.5, id()).unwrap();
        assert_eq!(hausdorff_distance(&a, &a, DistanceMode::Rp2).unwrap(), 0.0);
        let b = regular_polygon(6, 0.6, id()).unwrap();
        let d = hausdorff_distance(&a, &b, DistanceMode::Rp2).unwrap();
        // vertex to vertex along a ray: difference of angular radii
        let expect = 0.6f64.atan() - 0.5f64.atan();
        assert!((d - expect).abs() < 1e-3, "{d} {expect}");
    }
}
