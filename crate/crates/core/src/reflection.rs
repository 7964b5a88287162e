//! Projective deformations of hyperbolic `(a, b, c)` triangle reflection
//! groups and the tiling of their invariant convex domain.
//!
//! Generators act on column vectors. The group elements stored in a
//! [`Tiling`] use the geometric lifts `rᵢ = I − eᵢαᵢ = −σᵢ`, which preserve the
//! convex cone over the domain; `σᵢ` itself is the determinant-one reflection.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use nalgebra::{Matrix3, RowVector3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{ConvexDomain, ProjPoint, ProjTransform, Pt, DEFAULT_SAMPLES};

/// Angles `π/a`, `π/b`, `π/c` and the deformation parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoxeterData {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub s: f64,
}

impl CoxeterData {
    pub fn new(a: u32, b: u32, c: u32, s: f64) -> Result<Self> {
        if a < 3 || b < 3 || c < 3 {
            return Err(Error::InvalidParameter(format!(
                "orders must be at least 3, got ({a}, {b}, {c})"
            )));
        }
        let sum = 1.0 / a as f64 + 1.0 / b as f64 + 1.0 / c as f64;
        if sum >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "({a}, {b}, {c}) is not hyperbolic: 1/a + 1/b + 1/c = {sum}"
            )));
        }
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "deformation parameter {s} is not finite"
            )));
        }
        Ok(Self { a, b, c, s })
    }

    /// `m_ij` with `(m₂₃, m₁₃, m₁₂) = (a, b, c)` and `m_ii = 1`.
    pub fn orders(&self) -> [[u32; 3]; 3] {
        [
            [1, self.c, self.b],
            [self.c, 1, self.a],
            [self.b, self.a, 1],
        ]
    }

    pub fn with_s(&self, s: f64) -> Self {
        Self { s, ..*self }
    }
}

/// Cartan matrix of the deformation: `A₁₂ = −2cos(π/c)eˢ`,
/// `A₂₁ = −2cos(π/c)e⁻ˢ`, the other off-diagonal pairs symmetric.
pub fn cartan_family(data: &CoxeterData) -> Matrix3<f64> {
    let k = |m: u32| -2.0 * (PI / m as f64).cos();
    let (ka, kb, kc) = (k(data.a), k(data.b), k(data.c));
    Matrix3::new(
        2.0,
        kc * data.s.exp(),
        kb,
        kc * (-data.s).exp(),
        2.0,
        ka,
        kb,
        ka,
        2.0,
    )
}

/// `(A₁₂A₂₃A₃₁)/(A₂₁A₃₂A₁₃)`.
pub fn triple_ratio(a: &Matrix3<f64>) -> f64 {
    (a[(0, 1)] * a[(1, 2)] * a[(2, 0)]) / (a[(1, 0)] * a[(2, 1)] * a[(0, 2)])
}

/// Diagonal conjugate `DAD⁻¹` in which the three ratios `A_ij/A_ji` (cyclic
/// order) are equal. Conjugate Cartan matrices give conjugate groups.
pub fn balanced_cartan(a: &Matrix3<f64>) -> (Matrix3<f64>, Vector3<f64>) {
    let l = |i: usize, j: usize| (a[(i, j)] / a[(j, i)]).ln();
    let (a12, a23, a31) = (l(0, 1), l(1, 2), l(2, 0));
    let t = (a12 + a23 + a31) / 3.0;
    let d2 = (a12 - t) / 2.0;
    let d3 = d2 + (a23 - t) / 2.0;
    let d = Vector3::new(1.0, d2.exp(), d3.exp());
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] *= d[i] / d[j];
        }
    }
    (out, d)
}

/// Reflections `σᵢ = eᵢαᵢ − I` built from a Cartan matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSet {
    cartan: Matrix3<f64>,
    orders: [[u32; 3]; 3],
    sigma: [Matrix3<f64>; 3],
}

/// Integer `m` with `A_ij·A_ji = 4cos²(π/m)`.
fn order_from_product(p: f64) -> Result<u32> {
    if !(p > 0.0 && p < 4.0) {
        return Err(Error::Structure(format!(
            "Cartan product {p} is outside (0, 4)"
        )));
    }
    let m = PI / (p.sqrt() / 2.0).acos();
    let r = m.round();
    if (m - r).abs() > 1e-6 || r < 2.0 {
        return Err(Error::Structure(format!(
            "Cartan product {p} gives non-integer order {m}"
        )));
    }
    Ok(r as u32)
}

pub fn build_reflections(a: &Matrix3<f64>) -> Result<ReflectionSet> {
    let mut orders = [[1u32; 3]; 3];
    for i in 0..3 {
        if (a[(i, i)] - 2.0).abs() > 1e-12 {
            return Err(Error::Structure(format!(
                "diagonal entry A[{i}][{i}] = {} is not 2",
                a[(i, i)]
            )));
        }
        for j in 0..3 {
            if i != j {
                if !(a[(i, j)] < 0.0) {
                    return Err(Error::Structure(format!(
                        "off-diagonal entry A[{i}][{j}] is not negative"
                    )));
                }
                orders[i][j] = order_from_product(a[(i, j)] * a[(j, i)])?;
            }
        }
    }
    let sigma = [0, 1, 2].map(|i| {
        let e = Vector3::ith(i, 1.0);
        e * a.row(i) - Matrix3::identity()
    });
    Ok(ReflectionSet {
        cartan: *a,
        orders,
        sigma,
    })
}

impl ReflectionSet {
    pub fn cartan(&self) -> &Matrix3<f64> {
        &self.cartan
    }

    pub fn orders(&self) -> [[u32; 3]; 3] {
        self.orders
    }

    /// `αᵢ`, the i-th row of the Cartan matrix.
    pub fn root(&self, i: usize) -> RowVector3<f64> {
        self.cartan.row(i).into_owned()
    }

    /// `σᵢ`, with `det σᵢ = 1`.
    pub fn sigma(&self, i: usize) -> &Matrix3<f64> {
        &self.sigma[i]
    }

    /// `rᵢ = −σᵢ`, the lift preserving the cone over the domain.
    pub fn geometric(&self, i: usize) -> Matrix3<f64> {
        -self.sigma[i]
    }

    /// Largest entry of `(σᵢσⱼ)^{m_ij} − I` over all pairs.
    pub fn relation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            worst = worst.max((self.sigma[i] * self.sigma[i] - Matrix3::identity()).amax());
            for j in 0..3 {
                if i != j {
                    let g = self.sigma[i] * self.sigma[j];
                    let p = g.pow(self.orders[i][j]);
                    worst = worst.max((p - Matrix3::identity()).amax());
                }
            }
        }
        worst
    }
}

/// Vertex of the chamber opposite wall `k`: `αᵢ × αⱼ` for the other two walls,
/// signed so that `α_k` is positive on it.
fn chamber_vertex(rs: &ReflectionSet, k: usize) -> Result<Vector3<f64>> {
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let v = rs.root(i).transpose().cross(&rs.root(j).transpose());
    let ak = (rs.root(k) * v)[0];
    if !(ak.abs() > 1e-14 * v.norm()) || v.norm() == 0.0 {
        return Err(Error::Structure("roots are linearly dependent".into()));
    }
    Ok(if ak > 0.0 { v } else { -v })
}

/// The three vertices of the fundamental triangle; vertex `k` lies opposite
/// wall `k` (on the walls of the other two generators).
pub fn fundamental_triangle(rs: &ReflectionSet) -> Result<[ProjPoint; 3]> {
    let v = [
        chamber_vertex(rs, 0)?,
        chamber_vertex(rs, 1)?,
        chamber_vertex(rs, 2)?,
    ];
    Ok([
        ProjPoint::new(v[0])?,
        ProjPoint::new(v[1])?,
        ProjPoint::new(v[2])?,
    ])
}

/// Vertices of the equilateral reference triangle, circumradius 1, vertex `k`
/// at angle `π/2 + 2πk/3`.
pub fn reference_triangle() -> [Pt; 3] {
    [0, 1, 2].map(|k| {
        let t = PI / 2.0 + 2.0 * PI * k as f64 / 3.0;
        [t.cos(), t.sin()]
    })
}

/// `N` sending the chamber of `a` (in the balanced gauge) to the reference
/// triangle: vertices to vertices and the point where all three roots equal 1
/// to the origin. Returned in the coordinates of `a`.
fn triangle_frame(a: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let (bal, d) = balanced_cartan(a);
    let bal_inv = bal
        .try_inverse()
        .ok_or_else(|| Error::Structure("singular Cartan matrix".into()))?;
    let dinv = Matrix3::from_diagonal(&d.map(|x| 1.0 / x));
    // chamber vertices and centre of the original group
    let verts = dinv * bal_inv;
    let centre = dinv * bal_inv * Vector3::repeat(1.0);
    let coef = verts
        .try_inverse()
        .ok_or_else(|| Error::Structure("degenerate chamber".into()))?
        * centre;
    let q = reference_triangle();
    let target = Matrix3::new(
        q[0][0], q[1][0], q[2][0], q[0][1], q[1][1], q[2][1], 1.0, 1.0, 1.0,
    );
    let scale = Matrix3::from_diagonal(&coef.map(|c| 1.0 / (3.0 * c)));
    Ok(target * scale * verts.try_inverse().unwrap())
}

/// Chart in which the undeformed fundamental triangle of `(a, b, c)` is the
/// reference triangle. Used for every `s` so pictures are comparable.
pub fn standard_chart(data: &CoxeterData) -> Result<Matrix3<f64>> {
    let n0 = triangle_frame(&cartan_family(&data.with_s(0.0)))?;
    n0.try_inverse()
        .ok_or_else(|| Error::Structure("singular chart".into()))
}

/// One tile `γΔ` of the tiling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    /// Reduced word of `γ` over generators `1, 2, 3`.
    pub word: Vec<u8>,
    /// `γ` as a product of geometric lifts.
    pub element: Matrix3<f64>,
    /// `γvₖ` for the chamber vertices `vₖ`.
    pub vertices: [Vector3<f64>; 3],
    /// Vertex ids into [`Tiling::vertices`].
    pub vertex_ids: [usize; 3],
    /// Even word length, i.e. orientation preserving.
    pub shaded: bool,
}

impl Tile {
    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }
}

/// A vertex of the tiling together with the tiles around it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingVertex {
    /// Chamber vertex type: the vertex lies on the walls other than `kind`.
    pub kind: usize,
    pub point: Vector3<f64>,
    /// Order of the rotation stabilizing the vertex; a full link has `2·order` tiles.
    pub order: u32,
    pub tiles: Vec<usize>,
}

/// Finite part of the orbit of the fundamental triangle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tiling {
    pub data: CoxeterData,
    pub reflections: ReflectionSet,
    pub chart: Matrix3<f64>,
    pub max_word_len: usize,
    pub tiles: Vec<Tile>,
    pub vertices: Vec<TilingVertex>,
    /// `neighbors[t][i]`: the tile across wall `i` of tile `t`, when enumerated.
    pub neighbors: Vec<[Option<usize>; 3]>,
}

/// Interior point of the chamber where every root equals 1.
fn chamber_centre(rs: &ReflectionSet) -> Result<Vector3<f64>> {
    let inv = rs
        .cartan
        .try_inverse()
        .ok_or_else(|| Error::Structure("singular Cartan matrix".into()))?;
    Ok(inv * Vector3::repeat(1.0))
}

fn word_string(word: &[u8]) -> String {
    if word.is_empty() {
        "e".into()
    } else {
        word.iter().map(|g| char::from(b'0' + g)).collect()
    }
}

/// Right descents of a group element and their exact combinatorics, decided
/// geometrically: `ℓ(us) < ℓ(u)` exactly when the tile `u⁻¹Δ` lies on the
/// negative side of wall `s`.
struct Descents<'a> {
    rs: &'a ReflectionSet,
    gens: [Matrix3<f64>; 3],
    centre: Vector3<f64>,
    tol: f64,
}

impl Descents<'_> {
    /// Bit set of right descents, given `u⁻¹`.
    fn of(&self, inverse: &Matrix3<f64>, word: &[u8]) -> Result<u8> {
        let y = inverse * self.centre;
        let mut out = 0u8;
        for s in 0..3 {
            let root = self.rs.root(s);
            let v = (root * y)[0];
            if v.abs() <= self.tol * root.norm() * y.norm() {
                return Err(Error::Resolution {
                    word: word_string(word),
                    quantum: self.tol,
                });
            }
            if v < 0.0 {
                out |= 1 << s;
            }
        }
        Ok(out)
    }

    /// Normal form of `u` (given `u⁻¹`): strip the smallest right descent
    /// until none is left, then reverse. Every element enumerated by
    /// [`enumerate_tiling`] carries exactly this word.
    fn normal_form(&self, inverse: &Matrix3<f64>, max_len: usize) -> Result<Vec<u8>> {
        let mut inv = *inverse;
        let mut rev = vec![];
        loop {
            let d = self.of(&inv, &rev)?;
            if d == 0 {
                break;
            }
            if rev.len() == max_len {
                return Err(Error::Resolution {
                    word: word_string(&rev),
                    quantum: self.tol,
                });
            }
            let s = d.trailing_zeros() as usize;
            rev.push(s as u8 + 1);
            inv = self.gens[s] * inv;
        }
        rev.reverse();
        Ok(rev)
    }
}

/// Relative size below which a root value counts as lying on its wall.
pub const DESCENT_TOLERANCE: f64 = 1e-12;

/// Breadth-first enumeration of all elements of word length at most
/// `max_word_len`, applied to the fundamental triangle.
///
/// An element `u` of length `ℓ + 1` is produced once, from `us` where `s` is
/// its smallest right descent, so no numerical deduplication is needed.
/// Descents are read off the sign of `αₛ(u⁻¹x₀)`; a value within
/// `DESCENT_TOLERANCE` of zero is reported as a resolution error.
pub fn enumerate_tiling(
    rs: &ReflectionSet,
    data: &CoxeterData,
    max_word_len: usize,
) -> Result<Tiling> {
    enumerate_tiling_with_tolerance(rs, data, max_word_len, DESCENT_TOLERANCE)
}

pub fn enumerate_tiling_with_tolerance(
    rs: &ReflectionSet,
    data: &CoxeterData,
    max_word_len: usize,
    tol: f64,
) -> Result<Tiling> {
    let chart = standard_chart(data)?;
    let chamber = [
        chamber_vertex(rs, 0)?,
        chamber_vertex(rs, 1)?,
        chamber_vertex(rs, 2)?,
    ];
    let gens = [rs.geometric(0), rs.geometric(1), rs.geometric(2)];
    let desc = Descents {
        rs,
        gens,
        centre: chamber_centre(rs)?,
        tol,
    };
    let mk = |word: Vec<u8>, element: Matrix3<f64>| Tile {
        shaded: word.len() % 2 == 0,
        vertices: chamber.map(|v| element * v),
        vertex_ids: [0; 3],
        word,
        element,
    };
    let mut tiles: Vec<Tile> = vec![mk(vec![], Matrix3::identity())];
    let mut inverses: Vec<Matrix3<f64>> = vec![Matrix3::identity()];
    let mut descents: Vec<u8> = vec![0];
    let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(vec![], 0)]);
    let mut level_start = 0;
    for _ in 0..max_word_len {
        let level_end = tiles.len();
        for t in level_start..level_end {
            for g in 0..3 {
                if descents[t] & (1 << g) != 0 {
                    continue;
                }
                let inv = gens[g] * inverses[t];
                let mut word = tiles[t].word.clone();
                word.push(g as u8 + 1);
                let d = desc.of(&inv, &word)?;
                if d.trailing_zeros() as usize != g {
                    continue;
                }
                let element = tiles[t].element * gens[g];
                index.insert(word.clone(), tiles.len());
                tiles.push(mk(word, element));
                inverses.push(inv);
                descents.push(d);
            }
        }
        level_start = level_end;
    }

    let lookup = |inv: &Matrix3<f64>| -> Result<Option<usize>> {
        Ok(index.get(&desc.normal_form(inv, max_word_len)?).copied())
    };

    let mut neighbors = vec![[None; 3]; tiles.len()];
    for t in 0..tiles.len() {
        for (g, gen) in gens.iter().enumerate() {
            let shorter = descents[t] & (1 << g) != 0;
            if shorter || tiles[t].word.len() < max_word_len {
                neighbors[t][g] = lookup(&(gen * inverses[t]))?;
            }
        }
    }

    // a vertex is the coset u·⟨rᵢ, rⱼ⟩, keyed by its shortest element
    let mut vertex_map: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices: Vec<TilingVertex> = vec![];
    for t in 0..tiles.len() {
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let mut inv = inverses[t];
            let mut word = tiles[t].word.clone();
            loop {
                let d = desc.of(&inv, &word)?;
                let s = if d & (1 << i) != 0 {
                    i
                } else if d & (1 << j) != 0 {
                    j
                } else {
                    break;
                };
                inv = gens[s] * inv;
                word.push(s as u8 + 1);
            }
            let rep = lookup(&inv)?.ok_or_else(|| {
                Error::Structure(format!(
                    "shortest coset element of {} not enumerated",
                    tiles[t].word_string()
                ))
            })?;
            let id = *vertex_map.entry((k, rep)).or_insert_with(|| {
                vertices.push(TilingVertex {
                    kind: k,
                    point: tiles[rep].vertices[k],
                    order: rs.orders[i][j],
                    tiles: vec![],
                });
                vertices.len() - 1
            });
            vertices[id].tiles.push(t);
            tiles[t].vertex_ids[k] = id;
        }
    }

    Ok(Tiling {
        data: *data,
        reflections: rs.clone(),
        chart,
        max_word_len,
        tiles,
        vertices,
        neighbors,
    })
}

/// Signed area of a chart polygon.
fn signed_area(p: &[Pt]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|i| p[i][0] * p[(i + 1) % n][1] - p[(i + 1) % n][0] * p[i][1])
        .sum::<f64>()
        / 2.0
}

fn ccw(mut t: [Pt; 3]) -> [Pt; 3] {
    if signed_area(&t) < 0.0 {
        t.swap(1, 2);
    }
    t
}

/// Area of the intersection of two triangles (Sutherland–Hodgman clipping).
pub fn triangle_overlap_area(a: &[Pt; 3], b: &[Pt; 3]) -> f64 {
    let clip = ccw(*b);
    let mut poly: Vec<Pt> = ccw(*a).to_vec();
    for e in 0..3 {
        let (p, q) = (clip[e], clip[(e + 1) % 3]);
        let side = |x: Pt| (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]);
        let input = std::mem::take(&mut poly);
        let n = input.len();
        for i in 0..n {
            let (cur, next) = (input[i], input[(i + 1) % n]);
            let (sc, sn) = (side(cur), side(next));
            if sc >= 0.0 {
                poly.push(cur);
            }
            if (sc >= 0.0) != (sn >= 0.0) {
                let t = sc / (sc - sn);
                poly.push([
                    cur[0] + t * (next[0] - cur[0]),
                    cur[1] + t * (next[1] - cur[1]),
                ]);
            }
        }
        if poly.is_empty() {
            return 0.0;
        }
    }
    signed_area(&poly).abs()
}

impl Tiling {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    fn chart_inverse(&self) -> Matrix3<f64> {
        self.chart.try_inverse().expect("chart is invertible")
    }

    /// Chart coordinates of a lift.
    pub fn to_chart(&self, v: &Vector3<f64>) -> Result<Pt> {
        let c = self.chart_inverse() * v;
        if !(c[2] > 0.0) {
            return Err(Error::ChartOverflow(c[2]));
        }
        Ok([c[0] / c[2], c[1] / c[2]])
    }

    /// Every tile as a chart triangle.
    pub fn chart_triangles(&self) -> Result<Vec<[Pt; 3]>> {
        let inv = self.chart_inverse();
        self.tiles
            .iter()
            .map(|t| {
                let mut out = [[0.0; 2]; 3];
                for (o, v) in out.iter_mut().zip(&t.vertices) {
                    let c = inv * v;
                    if !(c[2] > 0.0) {
                        return Err(Error::ChartOverflow(c[2]));
                    }
                    *o = [c[0] / c[2], c[1] / c[2]];
                }
                Ok(out)
            })
            .collect()
    }

    /// Number of elements of each word length `0..=max_word_len`.
    pub fn length_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_word_len + 1];
        for t in &self.tiles {
            out[t.word.len()] += 1;
        }
        out
    }

    /// Id of the vertex of the fundamental triangle opposite wall `k`.
    pub fn fundamental_vertex(&self, k: usize) -> usize {
        self.tiles[0].vertex_ids[k]
    }

    /// Largest intersection area over all pairs of tiles, in the chart.
    pub fn max_pairwise_overlap(&self) -> Result<f64> {
        let tris = self.chart_triangles()?;
        let bbox = |t: &[Pt; 3]| {
            let xs = [t[0][0], t[1][0], t[2][0]];
            let ys = [t[0][1], t[1][1], t[2][1]];
            (
                xs.iter().cloned().fold(f64::INFINITY, f64::min),
                xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                ys.iter().cloned().fold(f64::INFINITY, f64::min),
                ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        let boxes: Vec<_> = tris.iter().map(bbox).collect();
        let mut order: Vec<usize> = (0..tris.len()).collect();
        order.sort_by(|&i, &j| boxes[i].0.total_cmp(&boxes[j].0));
        let mut worst = 0.0f64;
        for (pos, &i) in order.iter().enumerate() {
            for &j in &order[pos + 1..] {
                if boxes[j].0 > boxes[i].1 {
                    break;
                }
                if boxes[j].2 > boxes[i].3 || boxes[i].2 > boxes[j].3 {
                    continue;
                }
                worst = worst.max(triangle_overlap_area(&tris[i], &tris[j]));
            }
        }
        Ok(worst)
    }
}

/// Convex hull of all tile vertices, in the tiling chart.
pub fn domain_hull(tiling: &Tiling) -> Result<ConvexDomain> {
    domain_hull_with_samples(tiling, DEFAULT_SAMPLES)
}

pub fn domain_hull_with_samples(tiling: &Tiling, samples: usize) -> Result<ConvexDomain> {
    if tiling.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let pts: Vec<Pt> = tiling.chart_triangles()?.into_iter().flatten().collect();
    let d = ConvexDomain::from_chart_points(tiling.chart, &pts, samples)?;
    if d.hull_vertices().len() < 3 {
        return Err(Error::DegenerateHull(d.hull_vertices().len()));
    }
    Ok(d)
}

/// Incidence counts at one vertex of the tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDegree {
    pub total: usize,
    pub shaded: usize,
    /// The full link of `2·order` tiles is present.
    pub interior: bool,
    pub order: u32,
}

pub fn vertex_degrees(tiling: &Tiling) -> BTreeMap<usize, VertexDegree> {
    tiling
        .vertices
        .iter()
        .enumerate()
        .map(|(id, v)| {
            let shaded = v.tiles.iter().filter(|&&t| tiling.tiles[t].shaded).count();
            (
                id,
                VertexDegree {
                    total: v.tiles.len(),
                    shaded,
                    interior: v.tiles.len() == 2 * v.order as usize,
                    order: v.order,
                },
            )
        })
        .collect()
}

/// Projective frame at an interior vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexFrame {
    /// Sends the vertex to the chart origin and the rotation below to a
    /// Euclidean rotation of the tiling chart.
    pub transform: ProjTransform,
    /// Stabilizer generator acting as rotation by `+2π/order` after the
    /// transform.
    pub rotation: Matrix3<f64>,
    pub order: u32,
}

pub fn vertex_frame(tiling: &Tiling, vertex: usize) -> Result<VertexFrame> {
    let v = tiling
        .vertices
        .get(vertex)
        .ok_or_else(|| Error::InvalidParameter(format!("no vertex {vertex}")))?;
    if v.tiles.len() != 2 * v.order as usize {
        return Err(Error::Structure(format!(
            "vertex {vertex} is not interior: {} of {} tiles",
            v.tiles.len(),
            2 * v.order
        )));
    }
    let gamma = tiling.tiles[v.tiles[0]].element;
    let (i, j) = ((v.kind + 1) % 3, (v.kind + 2) % 3);
    let rs = &tiling.reflections;
    let inv = gamma
        .try_inverse()
        .ok_or_else(|| Error::Structure("singular element".into()))?;
    let rot = gamma * rs.geometric(i) * rs.geometric(j) * inv;
    let theta = 2.0 * PI / v.order as f64;
    if (rot.trace() - (1.0 + 2.0 * theta.cos())).abs() > 1e-8 * rot.amax().max(1.0) {
        return Err(Error::Structure(format!(
            "stabilizer trace {} does not match a rotation of order {}",
            rot.trace(),
            v.order
        )));
    }
    let p = v.point;
    // (R − I) maps onto the invariant plane
    let shift = rot - Matrix3::identity();
    let x = (0..3)
        .map(|c| shift.column(c).into_owned())
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let x = x / x.norm();
    let build = |r: &Matrix3<f64>| {
        let y = (r * x - x * theta.cos()) / theta.sin();
        Matrix3::from_columns(&[x, y, p])
    };
    let mut basis = build(&rot);
    let mut rotation = rot;
    if basis.determinant() < 0.0 {
        rotation = rot.try_inverse().unwrap();
        basis = build(&rotation);
    }
    let binv = basis
        .try_inverse()
        .ok_or_else(|| Error::Structure("degenerate vertex frame".into()))?;
    Ok(VertexFrame {
        transform: ProjTransform::normalized(tiling.chart * binv)?,
        rotation,
        order: v.order,
    })
}

/// Transform centring the tiling at an interior vertex (see [`VertexFrame`]).
pub fn vertex_normalization(tiling: &Tiling, vertex: usize) -> Result<ProjTransform> {
    Ok(vertex_frame(tiling, vertex)?.transform)
}

/// Transform sending the fundamental triangle onto the reference triangle of
/// the tiling chart, centred through the balanced Cartan gauge.
pub fn fundamental_normalization(tiling: &Tiling) -> Result<ProjTransform> {
    let n = triangle_frame(tiling.reflections.cartan())?;
    ProjTransform::normalized(tiling.chart * n)
}

/// Least-squares conic through chart points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicFit {
    /// `(A, B, C, D, E, F)` of `Ax² + Bxy + Cy² + Dx + Ey + F = 0` in the
    /// input coordinates, unit norm.
    pub coefficients: [f64; 6],
    /// Largest first-order distance of a point to the conic, relative to the
    /// RMS distance of the points from their mean.
    pub residual: f64,
    pub is_ellipse: bool,
}

pub fn conic_fit(points: &[Pt]) -> Result<ConicFit> {
    if points.len() < 6 {
        return Err(Error::InvalidParameter(format!(
            "need at least 6 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let scale = (points
        .iter()
        .map(|p| (p[0] - mx).powi(2) + (p[1] - my).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter("points coincide".into()));
    }
    let local: Vec<Pt> = points
        .iter()
        .map(|p| [(p[0] - mx) / scale, (p[1] - my) / scale])
        .collect();
    let design = nalgebra::DMatrix::from_fn(local.len(), 6, |r, c| {
        let [x, y] = local[r];
        [x * x, x * y, y * y, x, y, 1.0][c]
    });
    let svd = nalgebra::linalg::SVD::new(design, false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Structure("SVD failed".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let c: Vec<f64> = vt.row(imin).iter().cloned().collect();
    let residual = local
        .iter()
        .map(|&[x, y]| {
            let q = c[0] * x * x + c[1] * x * y + c[2] * y * y + c[3] * x + c[4] * y + c[5];
            let gx = 2.0 * c[0] * x + c[1] * y + c[3];
            let gy = c[1] * x + 2.0 * c[2] * y + c[4];
            q.abs() / gx.hypot(gy)
        })
        .fold(0.0, f64::max);
    // back to input coordinates: x = (X − mx)/scale
    let (a, b, cc, d, e, f) = (c[0], c[1], c[2], c[3], c[4], c[5]);
    let s2 = scale * scale;
    let big = [
        a / s2,
        b / s2,
        cc / s2,
        (-2.0 * a * mx - b * my) / s2 + d / scale,
        (-2.0 * cc * my - b * mx) / s2 + e / scale,
        (a * mx * mx + b * mx * my + cc * my * my) / s2 - (d * mx + e * my) / scale + f,
    ];
    let norm = big.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(ConicFit {
        coefficients: big.map(|x| x / norm),
        residual,
        is_ellipse: b * b - 4.0 * a * cc < 0.0,
    })
}
