//! Text artifacts: CSV tables, JSON metadata and SVG figures. Every writer
//! returns a `String` and is deterministic in its inputs.

use std::fmt::Write as _;

use nalgebra::Vector3;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gh::PointedSample;
use crate::polygon::{ConvexDomain, Pt};
use crate::reflection::{conic_fit, Tiling};
use crate::wang::{flat_log_density, ConformalFactor};

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("csv: {e}"))
}

/// One CSV row per record, header from the field names.
pub fn rows_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

#[derive(Serialize)]
struct SolutionRow {
    rho: f64,
    u: f64,
    u_flat: Option<f64>,
    psi_norm_sq: f64,
}

/// Nodal values `ρ, u, u_flat, 2‖ψ‖²_g` (the flat value is empty at
/// `ρ = 0` for `n ≥ 1` and for the zero mode).
pub fn solution_csv(cf: &ConformalFactor) -> Result<String> {
    let grid = cf.grid();
    let rows: Vec<SolutionRow> = (0..=grid.m())
        .map(|k| {
            let rho = grid.node(k);
            let flat = (!cf.cd().is_zero_mode() && (cf.cd().n() == 0 || rho > 0.0))
                .then(|| flat_log_density(cf.cd().n(), rho));
            SolutionRow {
                rho,
                u: cf.values()[k],
                u_flat: flat,
                psi_norm_sq: cf.psi_norm_sq_at(k),
            }
        })
        .collect();
    rows_csv(&rows)
}

pub fn solution_json(cf: &ConformalFactor) -> Value {
    json!({
        "n": cf.cd().n(),
        "zero_mode": cf.cd().is_zero_mode(),
        "r": cf.grid().r(),
        "m": cf.grid().m(),
        "h": cf.grid().h(),
        "iterations": cf.iterations(),
        "residual": cf.residual_norm(),
        "tol": cf.tol(),
        "accepted": cf.is_accepted(),
        "curvature_defect": cf.curvature_defect(),
    })
}

#[derive(Serialize)]
struct BoundaryRow {
    j: usize,
    x: f64,
    y: f64,
    w: f64,
}

/// Lifts `f(ρe^{2πij/k})` as `j, x, y, w`.
pub fn boundary_csv(lifts: &[Vector3<f64>]) -> Result<String> {
    let rows: Vec<BoundaryRow> = lifts
        .iter()
        .enumerate()
        .map(|(j, p)| BoundaryRow {
            j,
            x: p[0],
            y: p[1],
            w: p[2],
        })
        .collect();
    rows_csv(&rows)
}

/// Distance matrix with a leading column of point coordinates.
pub fn distance_csv(sample: &PointedSample) -> String {
    let mut out = String::from("i,x,y");
    for j in 0..sample.points.len() {
        write!(out, ",d{j}").unwrap();
    }
    out.push('\n');
    for (i, (p, row)) in sample.points.iter().zip(&sample.dist).enumerate() {
        write!(out, "{i},{},{}", p[0], p[1]).unwrap();
        for d in row {
            write!(out, ",{d}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn tiling_json(tiling: &Tiling, hull: &ConvexDomain) -> Result<Value> {
    let tri = tiling.chart_triangles()?;
    let tiles: Vec<Value> = tiling
        .tiles
        .iter()
        .zip(&tri)
        .map(|(t, c)| {
            json!({
                "word": t.word_string(),
                "shaded": t.shaded,
                "vertices": t.vertex_ids,
                "chart": c,
            })
        })
        .collect();
    let vertices: Vec<Value> = tiling
        .vertices
        .iter()
        .map(|v| {
            Ok(json!({
                "kind": v.kind,
                "order": v.order,
                "chart": tiling.to_chart(&v.point)?,
                "tiles": v.tiles.len(),
            }))
        })
        .collect::<Result<_>>()?;
    let conic = conic_fit(hull.hull_vertices())?;
    Ok(json!({
        "a": tiling.data.a,
        "b": tiling.data.b,
        "c": tiling.data.c,
        "s": tiling.data.s,
        "depth": tiling.max_word_len,
        "length_counts": tiling.length_counts(),
        "conic_fit": conic,
        "hull": hull.hull_vertices(),
        "tiles": tiles,
        "vertices": vertices,
    }))
}

/// Maps chart coordinates into a square SVG viewport with `y` pointing up.
struct Viewport {
    cx: f64,
    cy: f64,
    scale: f64,
    size: f64,
}

impl Viewport {
    fn fit<'a>(points: impl Iterator<Item = &'a Pt>, size: f64) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in points {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        Self {
            cx: 0.5 * (x0 + x1),
            cy: 0.5 * (y0 + y1),
            scale: 0.9 * size / span,
            size,
        }
    }

    fn map(&self, p: Pt) -> (f64, f64) {
        (
            0.5 * self.size + self.scale * (p[0] - self.cx),
            0.5 * self.size - self.scale * (p[1] - self.cy),
        )
    }

    fn path(&self, pts: &[Pt]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" }).unwrap();
        }
        d.push_str(" Z");
        d
    }
}

fn svg_open(size: f64, title: &str, timestamp: Option<&str>) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n<title>{}</title>\n",
        escape(title)
    );
    if let Some(t) = timestamp {
        writeln!(s, "<metadata>generated {}</metadata>", escape(t)).unwrap();
    }
    writeln!(
        s,
        "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
    )
    .unwrap();
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Domain boundaries as closed paths, the first one filled.
pub fn domains_svg(
    domains: &[(&ConvexDomain, &str)],
    title: &str,
    timestamp: Option<&str>,
) -> String {
    let size = 600.0;
    let vp = Viewport::fit(domains.iter().flat_map(|(d, _)| d.boundary().iter()), size);
    let mut s = svg_open(size, title, timestamp);
    for (i, (d, colour)) in domains.iter().enumerate() {
        let fill = if i == 0 { "#dde6f3" } else { "none" };
        writeln!(
            s,
            "<path d=\"{}\" fill=\"{fill}\" stroke=\"{colour}\" stroke-width=\"1.5\"/>",
            vp.path(d.boundary())
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Tiles filled grey when shaded and white otherwise, hull outlined.
pub fn tiling_svg(tiling: &Tiling, hull: &ConvexDomain, timestamp: Option<&str>) -> Result<String> {
    let size = 800.0;
    let tri = tiling.chart_triangles()?;
    let vp = Viewport::fit(hull.boundary().iter(), size);
    let title = format!(
        "Tits domain ({}, {}, {}) s = {} depth {}",
        tiling.data.a, tiling.data.b, tiling.data.c, tiling.data.s, tiling.max_word_len
    );
    let mut s = svg_open(size, &title, timestamp);
    for (t, c) in tiling.tiles.iter().zip(&tri) {
        let fill = if t.shaded { "#7a7a7a" } else { "#ffffff" };
        writeln!(
            s,
            "<path d=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.3\"/>",
            vp.path(c)
        )
        .unwrap();
    }
    writeln!(
        s,
        "<path d=\"{}\" fill=\"none\" stroke=\"#b03030\" stroke-width=\"1\"/>",
        vp.path(hull.boundary())
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}
