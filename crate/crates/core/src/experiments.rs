//! Experiment runners shared by the command line and the acceptance suite.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cubic::{flat_radius, CubicDifferential};
use crate::developing::{assemble_connection, develop_boundary_with_steps, ConnectionField};
use crate::error::{Error, Result};
use crate::flat_surface::{patch_report, random_disk_patch, PatchReport};
use crate::gh::{geodesic_distances_on, gh_discrepancy, GridGraph, PointedSample, SAFE_FRACTION};
use crate::polygon::{
    apply_transform, dominant_vertices, hausdorff_distance, projectivize_with_samples,
    regular_polygon_rotated, ConvexDomain, DistanceMode, Pt, DEFAULT_ANGLE_DEG, DEFAULT_SAMPLES,
};
use crate::reflection::{
    build_reflections, cartan_family, domain_hull, enumerate_tiling, fundamental_normalization,
    reference_triangle, vertex_normalization, CoxeterData, Tiling,
};
use crate::wang::{solve, ConformalFactor, RadialGrid, SolverConfig};

/// Settings for the polygon-limit experiment.
///
/// Each developing image at radius `r` is computed from a solution on
/// `B(0, r + margin)` so that the rays stay clear of the Dirichlet boundary,
/// at `nodes_per_unit` radial nodes per unit length. With `extrapolate` the
/// chart points of two runs at `h` and `h/2` are combined as
/// `(4p(h/2) − p(h))/3`, which removes the leading `O(h²)` error of the
/// radial spline. All radii share one RK4 step length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonLimitConfig {
    pub n: u32,
    pub radii: Vec<f64>,
    pub nodes_per_unit: f64,
    pub margin: f64,
    pub samples: usize,
    pub angle_deg: f64,
    /// Multiplier on the default step count at the largest radius.
    pub step_factor: f64,
    pub extrapolate: bool,
}

impl PolygonLimitConfig {
    pub fn new(n: u32, radii: Vec<f64>) -> Self {
        Self {
            n,
            radii,
            nodes_per_unit: 256.0,
            margin: 1.0,
            samples: DEFAULT_SAMPLES,
            angle_deg: DEFAULT_ANGLE_DEG,
            step_factor: 4.0,
            extrapolate: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "radii must be positive, got {:?}",
                self.radii
            )));
        }
        if !(self.nodes_per_unit >= 8.0 && self.margin > 0.0 && self.step_factor > 0.0) {
            return Err(Error::InvalidParameter(
                "need nodes_per_unit ≥ 8, margin > 0 and step_factor > 0".into(),
            ));
        }
        if self.samples < 3 {
            return Err(Error::InvalidParameter(format!(
                "need at least 3 samples, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonLimitRow {
    pub r: f64,
    pub flat_radius: f64,
    pub steps: usize,
    pub vertex_count: usize,
    /// Chart Hausdorff distance to the run at the largest radius.
    pub hausdorff_to_reference: f64,
    pub circumradius: f64,
    /// Distance to the regular `(n+3)`-gon with the same circumradius and a
    /// shared vertex direction, divided by the circumradius.
    pub regular_distance: f64,
}

#[derive(Debug, Clone)]
pub struct PolygonLimit {
    pub rows: Vec<PolygonLimitRow>,
    pub domains: Vec<ConvexDomain>,
}

pub fn solve_disk(n: u32, r: f64, m: usize) -> Result<ConformalFactor> {
    solve(
        &CubicDifferential::new(n),
        &RadialGrid::new(r, m)?,
        &SolverConfig::default(),
    )
}

fn connection(n: u32, r: f64, cfg: &PolygonLimitConfig, refine: f64) -> Result<ConnectionField> {
    let big = r + cfg.margin;
    let m = (big * cfg.nodes_per_unit * refine).round() as usize;
    assemble_connection(&solve_disk(n, big, m)?)
}

fn chart_points(lifts: &[Vector3<f64>]) -> Result<Vec<Pt>> {
    lifts
        .iter()
        .map(|p| {
            if p[2] > 0.0 {
                Ok([p[0] / p[2], p[1] / p[2]])
            } else {
                Err(Error::ChartOverflow(p[2]))
            }
        })
        .collect()
}

/// Developing image of the circle of radius `r` as a convex domain.
pub fn developed_domain(cfg: &PolygonLimitConfig, r: f64, steps: usize) -> Result<ConvexDomain> {
    let coarse =
        develop_boundary_with_steps(&connection(cfg.n, r, cfg, 1.0)?, r, cfg.samples, steps)?;
    let lifts = if cfg.extrapolate {
        let fine =
            develop_boundary_with_steps(&connection(cfg.n, r, cfg, 2.0)?, r, cfg.samples, steps)?;
        let (a, b) = (chart_points(&coarse)?, chart_points(&fine)?);
        a.iter()
            .zip(&b)
            .map(|(p, q)| Vector3::new((4.0 * q[0] - p[0]) / 3.0, (4.0 * q[1] - p[1]) / 3.0, 1.0))
            .collect()
    } else {
        coarse
    };
    projectivize_with_samples(&lifts, cfg.samples)
}

/// Distance from `d` to the regular `k`-gon about the chart origin with the
/// same circumradius and a vertex in the direction of the farthest hull
/// vertex, relative to that circumradius.
pub fn regular_polygon_distance(d: &ConvexDomain, k: usize) -> Result<(f64, f64)> {
    let c = d.circumradius_about([0.0, 0.0]);
    let far = d
        .hull_vertices()
        .iter()
        .copied()
        .max_by(|a, b| a[0].hypot(a[1]).total_cmp(&b[0].hypot(b[1])))
        .ok_or(Error::EmptyBoundary)?;
    let reg = regular_polygon_rotated(k, c, far[1].atan2(far[0]), *d.chart())?;
    Ok((hausdorff_distance(d, &reg, DistanceMode::Chart)? / c, c))
}

/// Runs the developing map at every radius and compares each image with the
/// one at the largest radius.
pub fn polygon_limit(cfg: &PolygonLimitConfig) -> Result<PolygonLimit> {
    cfg.validate()?;
    let rmax = cfg.radii.iter().copied().fold(0.0, f64::max);
    let per_unit = {
        let conn = connection(cfg.n, rmax, cfg, 1.0)?;
        conn.default_steps(Complex64::new(rmax, 0.0)) as f64 * cfg.step_factor / rmax
    };
    let mut domains = vec![];
    let mut steps = vec![];
    for &r in &cfg.radii {
        let s = ((per_unit * r).ceil() as usize).max(32);
        domains.push(developed_domain(cfg, r, s)?);
        steps.push(s);
    }
    let reference = cfg.radii.iter().position(|&r| r == rmax).unwrap();
    let angle = cfg.angle_deg.to_radians();
    let mut rows = vec![];
    for (i, &r) in cfg.radii.iter().enumerate() {
        let d = &domains[i];
        let (regular_distance, circumradius) = regular_polygon_distance(d, cfg.n as usize + 3)?;
        rows.push(PolygonLimitRow {
            r,
            flat_radius: flat_radius(cfg.n, r)?,
            steps: steps[i],
            vertex_count: dominant_vertices(d, angle),
            hausdorff_to_reference: hausdorff_distance(
                d,
                &domains[reference],
                DistanceMode::Chart,
            )?,
            circumradius,
            regular_distance,
        });
    }
    Ok(PolygonLimit { rows, domains })
}

/// A tiling with its convex hull, built from the deformation family.
pub fn tits_tiling(data: &CoxeterData, depth: usize) -> Result<(Tiling, ConvexDomain)> {
    let rs = build_reflections(&cartan_family(data))?;
    let tiling = enumerate_tiling(&rs, data, depth)?;
    let hull = domain_hull(&tiling)?;
    Ok((tiling, hull))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCRow {
    pub s: f64,
    pub k: u32,
    /// `fundamental` for the triangle, `vertex:<id>` for a `k`-gon.
    pub normalization: String,
    /// Chart Hausdorff distance divided by the circumradius of the target.
    pub distance: f64,
}

/// Distances of the normalized hulls to the regular triangle and to the
/// regular `k`-gons, `k ∈ {a, b, c}`, one row per `(s, k)`.
pub fn limit_c(a: u32, b: u32, c: u32, s_list: &[f64], depth: usize) -> Result<Vec<LimitCRow>> {
    let mut rows = vec![];
    for &s in s_list {
        let data = CoxeterData::new(a, b, c, s)?;
        let (tiling, hull) = tits_tiling(&data, depth)?;
        let tri = fundamental_normalization(&tiling)?;
        let normalized = apply_transform(&hull, &tri)?;
        let [v0, ..] = reference_triangle();
        let target = regular_polygon_rotated(3, 1.0, v0[1].atan2(v0[0]), tiling.chart)?;
        rows.push(LimitCRow {
            s,
            k: 3,
            normalization: "fundamental".into(),
            distance: hausdorff_distance(&normalized, &target, DistanceMode::Chart)?,
        });
        let mut orders = vec![a, b, c];
        orders.sort_unstable();
        orders.dedup();
        for k in orders {
            let vertex = (0..3)
                .map(|i| tiling.fundamental_vertex(i))
                .find(|&v| tiling.vertices[v].order == k)
                .ok_or_else(|| Error::Structure(format!("no fundamental vertex of order {k}")))?;
            let d = apply_transform(&hull, &vertex_normalization(&tiling, vertex)?)?;
            rows.push(LimitCRow {
                s,
                k,
                normalization: format!("vertex:{vertex}"),
                distance: regular_polygon_distance(&d, k as usize)?.0,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbCheck {
    pub seed: u64,
    pub patches: Vec<PatchReport>,
    /// Largest `|residual|` over both forms and all patches.
    pub max_abs_residual: i64,
}

/// Gauss–Bonnet on `count` random disk patches of up to `size` tiles.
pub fn gb_check(tiling: &Tiling, count: usize, size: usize, seed: u64) -> Result<GbCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut patches = vec![];
    for _ in 0..count {
        let patch = random_disk_patch(tiling, size, &mut rng)?;
        patches.push(patch_report(&patch)?);
    }
    let max_abs_residual = patches
        .iter()
        .map(|p| p.residual.abs().max(p.residual_from_indices.abs()))
        .max()
        .unwrap_or(0);
    Ok(GbCheck {
        seed,
        patches,
        max_abs_residual,
    })
}

/// `count` points of `B(0, radius)`, the first one the origin (the base
/// point), the rest uniform by rejection.
pub fn sample_points(count: usize, radius: f64, seed: u64) -> Vec<Pt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![[0.0, 0.0]];
    while pts.len() < count {
        let p = [
            rng.random_range(-radius..radius),
            rng.random_range(-radius..radius),
        ];
        if p[0].hypot(p[1]) <= radius {
            pts.push(p);
        }
    }
    pts.truncate(count.max(1));
    pts
}

/// Settings for the r-versus-2r metric comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhCheckConfig {
    pub n: u32,
    pub radii: Vec<f64>,
    pub points: usize,
    /// Sample points are drawn from `B(0, sample_radius)`.
    pub sample_radius: f64,
    pub spacing: f64,
    /// Radial nodes per unit length of each solve.
    pub nodes_per_unit: f64,
    pub seed: u64,
}

impl GhCheckConfig {
    pub fn new(n: u32, radii: Vec<f64>) -> Self {
        Self {
            n,
            radii,
            points: 20,
            sample_radius: 3.0,
            spacing: 0.05,
            nodes_per_unit: 128.0,
            seed: 7,
        }
    }

    /// Common graph: the largest disk admissible for the smallest radius.
    pub fn graph(&self) -> Result<GridGraph> {
        let rmin = self.radii.iter().copied().fold(f64::INFINITY, f64::min);
        GridGraph::new(self.spacing, SAFE_FRACTION * rmin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhRow {
    pub n: u32,
    pub r: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone)]
pub struct GhCheck {
    pub rows: Vec<GhRow>,
    /// Samples at `2r` for the largest `r`.
    pub reference: PointedSample,
}

/// Discrepancy between the distance matrices of the solutions at `r` and
/// `2r`, on one graph and one point set.
pub fn gh_check(cfg: &GhCheckConfig) -> Result<GhCheck> {
    if cfg.radii.is_empty() || cfg.radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "radii must be positive, got {:?}",
            cfg.radii
        )));
    }
    let graph = cfg.graph()?;
    let pts = sample_points(cfg.points, cfg.sample_radius, cfg.seed);
    let mut rows = vec![];
    let mut reference = None;
    let rmax = cfg.radii.iter().copied().fold(0.0, f64::max);
    for &r in &cfg.radii {
        let m = |rr: f64| (rr * cfg.nodes_per_unit).round() as usize;
        let a = geodesic_distances_on(&solve_disk(cfg.n, r, m(r))?, &pts, 0, &graph)?;
        let b = geodesic_distances_on(&solve_disk(cfg.n, 2.0 * r, m(2.0 * r))?, &pts, 0, &graph)?;
        rows.push(GhRow {
            n: cfg.n,
            r,
            discrepancy: gh_discrepancy(&a, &b)?,
        });
        if r == rmax {
            reference = Some(b);
        }
    }
    Ok(GhCheck {
        rows,
        reference: reference.expect("largest radius is in the list"),
    })
}

/// Samples of the regular `k`-gon boundary, for reference figures.
pub fn regular_vertices(k: usize, circumradius: f64, phase: f64) -> Vec<Pt> {
    (0..k)
        .map(|j| {
            let t = phase + 2.0 * PI * j as f64 / k as f64;
            [circumradius * t.cos(), circumradius * t.sin()]
        })
        .collect()
}
