//! The marked unit cube: lattice points, cells as vertex subsets, faces,
//! volumes and the order-48 symmetry group.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

pub type LatticePoint = [i64; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("cell is not full-dimensional")]
    DegenerateCell,
    #[error("point {0:?} is not a vertex of the unit cube")]
    NotACubeVertex(LatticePoint),
}

/// Vertex index `4x + 2y + z`, so index order is lexicographic order.
pub fn vertex(i: usize) -> LatticePoint {
    [(i >> 2 & 1) as i64, (i >> 1 & 1) as i64, (i & 1) as i64]
}

pub fn vertex_index(p: &LatticePoint) -> Result<usize, GeometryError> {
    if p.iter().all(|&c| c == 0 || c == 1) {
        Ok((p[0] * 4 + p[1] * 2 + p[2]) as usize)
    } else {
        Err(GeometryError::NotACubeVertex(*p))
    }
}

/// "xyz" bitstring label used by the JSON formats.
pub fn vertex_label(i: usize) -> String {
    let p = vertex(i);
    format!("{}{}{}", p[0], p[1], p[2])
}

pub fn parse_vertex_label(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    if b.len() != 3 || !b.iter().all(|&c| c == b'0' || c == b'1') {
        return None;
    }
    Some(((b[0] - b'0') * 4 + (b[1] - b'0') * 2 + (b[2] - b'0')) as usize)
}

pub(crate) fn sub(a: &LatticePoint, b: &LatticePoint) -> LatticePoint {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: &LatticePoint, b: &LatticePoint) -> LatticePoint {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot(a: &LatticePoint, b: &LatticePoint) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn det3(a: &LatticePoint, b: &LatticePoint, c: &LatticePoint) -> i64 {
    dot(a, &cross(b, c))
}

/// Dimension of the affine span of a point set (-1 for the empty set).
pub fn affine_dim(points: &[LatticePoint]) -> i32 {
    let Some(o) = points.first() else { return -1 };
    let d: Vec<LatticePoint> = points[1..].iter().map(|p| sub(p, o)).collect();
    if d.iter().all(|v| *v == [0, 0, 0]) {
        return 0;
    }
    let any_cross = d.iter().enumerate().any(|(i, a)| d[i + 1..].iter().any(|b| cross(a, b) != [0, 0, 0]));
    if !any_cross {
        return 1;
    }
    let any_det = (0..d.len()).any(|i| {
        (i + 1..d.len()).any(|j| (j + 1..d.len()).any(|k| det3(&d[i], &d[j], &d[k]) != 0))
    });
    if any_det {
        3
    } else {
        2
    }
}

pub fn mask_points(mask: u8) -> Vec<LatticePoint> {
    (0..8).filter(|i| mask >> i & 1 == 1).map(vertex).collect()
}

pub fn mask_indices(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| mask >> i & 1 == 1).collect()
}

/// A full-dimensional cell, identified with its vertex set (a subset of the
/// eight cube vertices; the cube has no other lattice points).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarkedCell(u8);

impl MarkedCell {
    pub const CUBE: MarkedCell = MarkedCell(0xff);

    pub fn new(mask: u8) -> Result<Self, GeometryError> {
        if affine_dim(&mask_points(mask)) == 3 {
            Ok(MarkedCell(mask))
        } else {
            Err(GeometryError::DegenerateCell)
        }
    }

    pub fn from_points(points: &[LatticePoint]) -> Result<Self, GeometryError> {
        let mut mask = 0u8;
        for p in points {
            mask |= 1 << vertex_index(p)?;
        }
        Self::new(mask)
    }

    pub fn from_indices(idx: &[usize]) -> Result<Self, GeometryError> {
        Self::new(idx.iter().fold(0u8, |m, &i| m | 1 << i))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        mask_indices(self.0)
    }

    pub fn vertices(self) -> Vec<LatticePoint> {
        mask_points(self.0)
    }

    pub fn is_subset_of(self, other: MarkedCell) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn volume(self) -> u32 {
        cell_info(self).volume
    }

    pub fn facets(self) -> &'static [Facet] {
        &cell_info(self).facets
    }
}

impl Ord for MarkedCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl PartialOrd for MarkedCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MarkedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.indices().into_iter().map(vertex_label).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl Serialize for MarkedCell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkedCell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pts: Vec<LatticePoint> = Vec::deserialize(d)?;
        MarkedCell::from_points(&pts).map_err(serde::de::Error::custom)
    }
}

/// A facet with its integer inward normal: `normal·x >= offset` on the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Facet {
    pub vertices: u8,
    pub normal: LatticePoint,
    pub offset: i64,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    /// `faces[d]` lists the vertex masks of the d-dimensional faces.
    pub faces: Vec<Vec<u8>>,
    pub facets: Vec<Facet>,
}

impl FaceLattice {
    pub fn count(&self, dim: usize) -> usize {
        self.faces[dim].len()
    }
}

struct CellInfo {
    volume: u32,
    facets: Vec<Facet>,
}

fn cell_info(c: MarkedCell) -> &'static CellInfo {
    static TABLE: OnceLock<Vec<Option<CellInfo>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=255u8)
            .map(|m| MarkedCell::new(m).ok().map(compute_info))
            .collect()
    });
    table[c.0 as usize].as_ref().expect("valid cell")
}

fn compute_info(c: MarkedCell) -> CellInfo {
    let pts = c.vertices();
    let idx = c.indices();
    let mut facets: Vec<Facet> = Vec::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for d in b + 1..pts.len() {
                let mut n = cross(&sub(&pts[b], &pts[a]), &sub(&pts[d], &pts[a]));
                if n == [0, 0, 0] {
                    continue;
                }
                let mut off = dot(&n, &pts[a]);
                let side: Vec<i64> = pts.iter().map(|p| dot(&n, p) - off).collect();
                if side.iter().any(|&s| s < 0) && side.iter().any(|&s| s > 0) {
                    continue;
                }
                if side.iter().any(|&s| s < 0) {
                    n = [-n[0], -n[1], -n[2]];
                    off = -off;
                }
                let g = gcd3(&n);
                n = [n[0] / g, n[1] / g, n[2] / g];
                off /= g;
                let verts = idx
                    .iter()
                    .zip(&pts)
                    .filter(|(_, p)| dot(&n, p) == off)
                    .fold(0u8, |m, (&i, _)| m | 1 << i);
                if !facets.iter().any(|f| f.vertices == verts) {
                    facets.push(Facet { vertices: verts, normal: n, offset: off });
                }
            }
        }
    }
    facets.sort_by_key(|f| mask_indices(f.vertices));
    // pulling triangulation from the first vertex
    let v0 = pts[0];
    let mut vol = 0i64;
    for f in facets.iter().filter(|f| f.vertices & 1 << idx[0] == 0) {
        for [p, q, r] in triangulate_planar(&mask_points(f.vertices)) {
            vol += det3(&sub(&p, &v0), &sub(&q, &v0), &sub(&r, &v0)).abs();
        }
    }
    CellInfo { volume: vol as u32, facets }
}

fn gcd3(n: &LatticePoint) -> i64 {
    fn g(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            g(b, a % b)
        }
    }
    g(g(n[0], n[1]), n[2])
}

/// Triangulates a convex planar polygon given by its vertices (3 or 4 points
/// from the cube; four coplanar cube vertices always form a parallelogram).
fn triangulate_planar(pts: &[LatticePoint]) -> Vec<[LatticePoint; 3]> {
    match pts.len() {
        3 => vec![[pts[0], pts[1], pts[2]]],
        4 => {
            let a = pts[0];
            let opp = (1..4)
                .find(|&k| {
                    let others: Vec<usize> = (1..4).filter(|&j| j != k).collect();
                    let s1 = [a[0] + pts[k][0], a[1] + pts[k][1], a[2] + pts[k][2]];
                    let (p, q) = (pts[others[0]], pts[others[1]]);
                    s1 == [p[0] + q[0], p[1] + q[1], p[2] + q[2]]
                })
                .expect("planar quadrilateral of cube vertices is a parallelogram");
            let others: Vec<usize> = (1..4).filter(|&j| j != opp).collect();
            vec![[a, pts[opp], pts[others[0]]], [a, pts[opp], pts[others[1]]]]
        }
        n => panic!("unexpected facet with {n} vertices"),
    }
}

/// Normalized volume: 3! times the Euclidean volume.
pub fn normalized_volume(c: MarkedCell) -> u32 {
    c.volume()
}

/// Volume of an arbitrary vertex subset's hull, 0 if degenerate.
pub fn hull_volume(mask: u8) -> u32 {
    MarkedCell::new(mask).map_or(0, |c| c.volume())
}

pub fn face_lattice(c: MarkedCell) -> FaceLattice {
    let facets = c.facets().to_vec();
    let mut all: Vec<u8> = vec![c.mask()];
    let mut frontier: Vec<u8> = facets.iter().map(|f| f.vertices).collect();
    while let Some(m) = frontier.pop() {
        if m == 0 || all.contains(&m) {
            continue;
        }
        all.push(m);
        for f in &facets {
            let i = m & f.vertices;
            if i != m {
                frontier.push(i);
            }
        }
    }
    // every vertex of the cell is a face (cube vertices are extreme points)
    for i in c.indices() {
        if !all.contains(&(1 << i)) {
            all.push(1 << i);
        }
    }
    let mut faces = vec![Vec::new(); 4];
    for m in all {
        let d = affine_dim(&mask_points(m));
        faces[d as usize].push(m);
    }
    for f in faces.iter_mut() {
        f.sort_by_key(|&m| mask_indices(m));
    }
    FaceLattice { faces, facets }
}

/// Element of Sym(Q): `(g·p)_i = p[perm[i]]`, then `x -> 1 - x` where flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymQElement {
    pub perm: [usize; 3],
    pub flips: [bool; 3],
}

impl SymQElement {
    pub const IDENTITY: SymQElement = SymQElement { perm: [0, 1, 2], flips: [false; 3] };

    pub fn all() -> &'static [SymQElement] {
        static ALL: OnceLock<Vec<SymQElement>> = OnceLock::new();
        ALL.get_or_init(|| {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let mut v = Vec::with_capacity(48);
            for perm in perms {
                for f in 0..8u8 {
                    v.push(SymQElement { perm, flips: [f & 4 != 0, f & 2 != 0, f & 1 != 0] });
                }
            }
            v
        })
    }

    pub fn apply_point(&self, p: &LatticePoint) -> LatticePoint {
        let mut q = [0; 3];
        for i in 0..3 {
            let x = p[self.perm[i]];
            q[i] = if self.flips[i] { 1 - x } else { x };
        }
        q
    }

    pub fn apply_index(&self, i: usize) -> usize {
        vertex_index(&self.apply_point(&vertex(i))).expect("cube vertex")
    }

    pub fn apply_mask(&self, m: u8) -> u8 {
        (0..8).filter(|i| m >> i & 1 == 1).fold(0u8, |acc, i| acc | 1 << self.apply_index(i))
    }

    pub fn apply_cell(&self, c: MarkedCell) -> MarkedCell {
        MarkedCell(self.apply_mask(c.0))
    }

    pub fn compose(&self, other: &SymQElement) -> SymQElement {
        // self ∘ other, found by matching the vertex permutation
        let target: Vec<usize> = (0..8).map(|i| self.apply_index(other.apply_index(i))).collect();
        *Self::all()
            .iter()
            .find(|g| (0..8).all(|i| g.apply_index(i) == target[i]))
            .expect("group closed")
    }

    pub fn inverse(&self) -> SymQElement {
        *Self::all()
            .iter()
            .find(|g| (0..8).all(|i| g.apply_index(self.apply_index(i)) == i))
            .expect("group closed")
    }
}

pub fn canonical_form(c: MarkedCell) -> MarkedCell {
    SymQElement::all().iter().map(|g| g.apply_cell(c)).min().expect("nonempty group")
}

/// All full-dimensional vertex subsets of the cube, in canonical order.
pub fn all_cells() -> &'static [MarkedCell] {
    static CELLS: OnceLock<Vec<MarkedCell>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let mut v: Vec<MarkedCell> = (1..=255u8).filter_map(|m| MarkedCell::new(m).ok()).collect();
        v.sort();
        v
    })
}

/// The corner cut with apex at vertex `apex`.
pub fn corner_cut_at(apex: usize) -> MarkedCell {
    let mut m = 1u8 << apex;
    for bit in [1usize, 2, 4] {
        m |= 1 << (apex ^ bit);
    }
    MarkedCell(m)
}
