//! Exact bookkeeping for ⅓-translation surfaces glued from the equilateral
//! tiles of a [`Tiling`]: corner indices, zero multiplicities and the
//! Gauss–Bonnet identity, all in integers.
//!
//! Every tile is an equilateral triangle of the flat metric, so each tile
//! contributes an angle `π/3` at each of its vertices and a vertex met by
//! `d` tiles of a patch has angle `d·π/3`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reflection::Tiling;

/// Index `l` of a boundary point with interior angle `j·π/3`, from
/// `∠ = π + (π/3)·l`.
pub fn corner_index_from_thirds(j: u32) -> Result<i32> {
    if j == 0 {
        return Err(Error::InvalidParameter(
            "a corner angle must be positive".into(),
        ));
    }
    let l = j as i32 - 3;
    if l == 0 {
        return Err(Error::Structure("angle π is not a corner".into()));
    }
    Ok(l)
}

/// [`corner_index_from_thirds`] for an angle in radians, which must be a
/// multiple of `π/3` up to round-off.
pub fn corner_index(angle: f64) -> Result<i32> {
    let j = angle * 3.0 / std::f64::consts::PI;
    let r = j.round();
    if !(r >= 1.0) || (j - r).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "{angle} is not a positive multiple of π/3"
        )));
    }
    corner_index_from_thirds(r as u32)
}

/// Zero multiplicity `n = (d − 6)/2` at an interior vertex met by `d` tiles.
pub fn multiplicity_from_degree(total_degree: u32) -> Result<u32> {
    if total_degree < 6 || total_degree % 2 != 0 {
        return Err(Error::Structure(format!(
            "interior degree {total_degree} must be even and at least 6"
        )));
    }
    Ok((total_degree - 6) / 2)
}

/// `2Σn + Σl + 6χ`: the Gauss–Bonnet identity `−(2π/3)Σn − (π/3)Σl = 2πχ`
/// multiplied by `−3/π` and moved to one side. Zero on every compact surface
/// with real boundary.
pub fn gauss_bonnet_residual(
    zero_multiplicities: &[u32],
    corner_indices: &[i32],
    euler_characteristic: i64,
) -> i64 {
    let n: i64 = zero_multiplicities.iter().map(|&n| n as i64).sum();
    let l: i64 = corner_indices.iter().map(|&l| l as i64).sum();
    2 * n + l + 6 * euler_characteristic
}

/// Degree of one vertex of a patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchVertex {
    pub id: usize,
    /// Number of patch tiles at the vertex.
    pub degree: u32,
    /// All tiles around the vertex belong to the patch.
    pub interior: bool,
}

/// Connected set of tiles of a tiling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrianglePatch {
    pub tiles: Vec<usize>,
    pub vertices: Vec<PatchVertex>,
    pub edges: usize,
    /// `V − E + F`.
    pub euler_characteristic: i64,
    /// The tiles at every vertex form a single fan, so the patch is a surface
    /// with boundary.
    pub manifold: bool,
}

impl TrianglePatch {
    pub fn new(tiling: &Tiling, tiles: &[usize]) -> Result<Self> {
        if tiles.is_empty() {
            return Err(Error::DisconnectedPatch);
        }
        let set: BTreeSet<usize> = tiles.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&t| t >= tiling.len()) {
            return Err(Error::InvalidParameter(format!(
                "tile {bad} is not in the tiling"
            )));
        }
        if !connected(tiling, &set) {
            return Err(Error::DisconnectedPatch);
        }
        let mut at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for &t in &set {
            let ids = tiling.tiles[t].vertex_ids;
            for k in 0..3 {
                at.entry(ids[k]).or_default().push(t);
                let (a, b) = (ids[(k + 1) % 3], ids[(k + 2) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let mut manifold = true;
        let vertices: Vec<PatchVertex> = at
            .iter()
            .map(|(&id, ts)| {
                let v = &tiling.vertices[id];
                manifold &= single_fan(tiling, v.kind, ts);
                PatchVertex {
                    id,
                    degree: ts.len() as u32,
                    interior: ts.len() == 2 * v.order as usize,
                }
            })
            .collect();
        let euler_characteristic = vertices.len() as i64 - edges.len() as i64 + set.len() as i64;
        Ok(Self {
            tiles: set.into_iter().collect(),
            vertices,
            edges: edges.len(),
            euler_characteristic,
            manifold,
        })
    }

    /// A disk: a surface with boundary of Euler characteristic 1.
    pub fn is_disk(&self) -> bool {
        self.manifold && self.euler_characteristic == 1
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = &PatchVertex> {
        self.vertices.iter().filter(|v| v.interior)
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = &PatchVertex> {
        self.vertices.iter().filter(|v| !v.interior)
    }

    /// Zero multiplicities at interior vertices, zeros of multiplicity 0
    /// (ordinary points) omitted.
    pub fn zeros(&self) -> Result<Vec<u32>> {
        let mut out = vec![];
        for v in self.interior_vertices() {
            let n = multiplicity_from_degree(v.degree)?;
            if n > 0 {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// Corner indices at boundary vertices; straight boundary points
    /// (degree 3) are not corners and are skipped.
    pub fn corners(&self) -> Vec<(usize, i32)> {
        self.boundary_vertices()
            .filter(|v| v.degree != 3)
            .map(|v| (v.id, v.degree as i32 - 3))
            .collect()
    }
}

fn connected(tiling: &Tiling, set: &BTreeSet<usize>) -> bool {
    let start = *set.iter().next().expect("nonempty");
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        for nb in tiling.neighbors[t].iter().flatten() {
            if set.contains(nb) && seen.insert(*nb) {
                stack.push(*nb);
            }
        }
    }
    seen.len() == set.len()
}

/// Whether the tiles `ts` around a vertex of type `kind` are connected
/// through the two walls meeting at that vertex.
fn single_fan(tiling: &Tiling, kind: usize, ts: &[usize]) -> bool {
    let walls = [(kind + 1) % 3, (kind + 2) % 3];
    let mut seen = BTreeSet::from([ts[0]]);
    let mut stack = vec![ts[0]];
    while let Some(t) = stack.pop() {
        for w in walls {
            if let Some(nb) = tiling.neighbors[t][w] {
                if ts.contains(&nb) && seen.insert(nb) {
                    stack.push(nb);
                }
            }
        }
    }
    seen.len() == ts.len()
}

/// `Σ_int(d − 6) + Σ_bd(d − 3) + 6χ`, the integer form of Gauss–Bonnet in
/// terms of vertex degrees. Zero on every disk patch.
pub fn gauss_bonnet_check(patch: &TrianglePatch) -> i64 {
    let interior: i64 = patch.interior_vertices().map(|v| v.degree as i64 - 6).sum();
    let boundary: i64 = patch.boundary_vertices().map(|v| v.degree as i64 - 3).sum();
    interior + boundary + 6 * patch.euler_characteristic
}

/// Grows a disk patch of up to `target` tiles from a random seed tile,
/// adding random edge-adjacent tiles that keep it a disk.
pub fn random_disk_patch<R: Rng>(
    tiling: &Tiling,
    target: usize,
    rng: &mut R,
) -> Result<TrianglePatch> {
    if tiling.is_empty() || target == 0 {
        return Err(Error::InvalidParameter(
            "need a nonempty tiling and a positive size".into(),
        ));
    }
    let seed = rng.random_range(0..tiling.len());
    let mut tiles = vec![seed];
    let mut patch = TrianglePatch::new(tiling, &tiles)?;
    let mut stalls = 0;
    while tiles.len() < target && stalls < 4 * target {
        let frontier: Vec<usize> = tiles
            .iter()
            .flat_map(|&t| tiling.neighbors[t].iter().flatten().copied())
            .filter(|nb| !tiles.contains(nb))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let Some(&next) = frontier.choose(rng) else {
            break;
        };
        let mut grown = tiles.clone();
        grown.push(next);
        let candidate = TrianglePatch::new(tiling, &grown)?;
        if candidate.is_disk() {
            tiles = grown;
            patch = candidate;
        } else {
            stalls += 1;
        }
    }
    Ok(patch)
}

/// Per-patch record for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchReport {
    pub tiles: usize,
    pub euler_characteristic: i64,
    /// `(vertex id, multiplicity)` at interior zeros.
    pub zeros: Vec<(usize, u32)>,
    /// `(vertex id, index)` at boundary corners.
    pub corners: Vec<(usize, i32)>,
    pub residual: i64,
    /// The same residual from the multiplicity/index form.
    pub residual_from_indices: i64,
}

pub fn patch_report(patch: &TrianglePatch) -> Result<PatchReport> {
    let mut zeros = vec![];
    for v in patch.interior_vertices() {
        let n = multiplicity_from_degree(v.degree)?;
        if n > 0 {
            zeros.push((v.id, n));
        }
    }
    let corners = patch.corners();
    let ns: Vec<u32> = zeros.iter().map(|z| z.1).collect();
    let ls: Vec<i32> = corners.iter().map(|c| c.1).collect();
    Ok(PatchReport {
        tiles: patch.tiles.len(),
        euler_characteristic: patch.euler_characteristic,
        residual: gauss_bonnet_check(patch),
        residual_from_indices: gauss_bonnet_residual(&ns, &ls, patch.euler_characteristic),
        zeros,
        corners,
    })
}
