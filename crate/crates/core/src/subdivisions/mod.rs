//! Polyhedral subdivisions of the marked cube: lower hulls, regularity,
//! enumeration, symmetry orbits and secondary-cone dimensions.

mod affine;
mod enumerate;

pub use enumerate::{enumerate_all, flip_graph_triangulations, bottom_up_subdivisions, top_down_subdivisions};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use thiserror::Error;

use crate::cube_geometry::{
    affine_dim, all_cells, hull_volume, mask_points, parse_vertex_label, vertex, vertex_label, MarkedCell,
    SymQElement,
};
use crate::exact_kernel::{lcm_of_denominators, lp_feasible, parse_rational, rational_rank, LinearSystem, Rational};
pub(crate) use affine::{frame_in, frames};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("subdivision is not regular")]
    NotRegular,
    #[error("bad height data: {0}")]
    BadHeights(String),
}

/// Cells sorted in canonical order; see [`Subdivision::new`] for the checks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subdivision {
    cells: Vec<MarkedCell>,
}

impl std::fmt::Debug for Subdivision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(&self.cells).finish()
    }
}

impl Subdivision {
    /// Checks volumes sum to 6 and every pair of cells meets in a common face.
    pub fn new(cells: Vec<MarkedCell>) -> Result<Self, SubdivisionError> {
        let s = Self::from_sorted(cells);
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_sorted(mut cells: Vec<MarkedCell>) -> Self {
        cells.sort();
        Subdivision { cells }
    }

    pub fn trivial() -> Self {
        Subdivision { cells: vec![MarkedCell::CUBE] }
    }

    pub fn from_index_lists(lists: &[&[usize]]) -> Result<Self, SubdivisionError> {
        let cells = lists
            .iter()
            .map(|l| MarkedCell::from_indices(l).map_err(|e| SubdivisionError::InvalidSubdivision(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(cells)
    }

    fn validate(&self) -> Result<(), SubdivisionError> {
        let bad = |m: String| Err(SubdivisionError::InvalidSubdivision(m));
        let total: u32 = self.cells.iter().map(|c| c.volume()).sum();
        if total != 6 {
            return bad(format!("cell volumes sum to {total}, expected 6"));
        }
        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                if !cells_compatible(*a, *b) {
                    return bad(format!("cells {a:?} and {b:?} do not meet in a common face"));
                }
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> &[MarkedCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.cells == [MarkedCell::CUBE]
    }

    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 4)
    }

    pub fn volumes(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cells.iter().map(|c| c.volume()).collect();
        v.sort_unstable();
        v
    }

    pub fn total_volume(&self) -> u32 {
        self.cells.iter().map(|c| c.volume()).sum()
    }

    pub fn apply(&self, g: &SymQElement) -> Subdivision {
        Self::from_sorted(self.cells.iter().map(|c| g.apply_cell(*c)).collect())
    }

    /// Lexicographic minimum over the 48 images.
    pub fn canonical(&self) -> Subdivision {
        SymQElement::all().iter().map(|g| self.apply(g)).min().expect("nonempty group")
    }

    /// Every cell of `self` lies in a cell of `other`.
    pub fn refines(&self, other: &Subdivision) -> bool {
        self.cells.iter().all(|c| other.cells.iter().any(|d| c.is_subset_of(*d)))
    }

    /// Pairs of cell positions sharing a 2-dimensional face, with the face.
    pub fn interior_facets(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        for i in 0..self.cells.len() {
            for j in i + 1..self.cells.len() {
                let m = self.cells[i].mask() & self.cells[j].mask();
                if affine_dim(&mask_points(m)) == 2 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "cells": self.cells })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, SubdivisionError> {
        #[derive(Deserialize)]
        struct Raw {
            cells: Vec<MarkedCell>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| SubdivisionError::InvalidSubdivision(e.to_string()))?;
        Self::new(raw.cells)
    }
}

impl Serialize for Subdivision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Whether two distinct cells intersect in a common face: a hyperplane
/// must weakly separate them and cut each exactly in the shared vertices.
pub fn cells_compatible(a: MarkedCell, b: MarkedCell) -> bool {
    static TABLE: OnceLock<Vec<Vec<bool>>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        use rayon::prelude::*;
        let cells = all_cells();
        let mut table = vec![vec![false; 256]; 256];
        let results: Vec<(u8, u8, bool)> = (0..cells.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..cells.len()).map(move |j| (cells[i].mask(), cells[j].mask(), separable(cells[i], cells[j])))
            })
            .collect();
        for (x, y, ok) in results {
            table[x as usize][y as usize] = ok;
            table[y as usize][x as usize] = ok;
        }
        table
    });
    t[a.mask() as usize][b.mask() as usize]
}

fn separable(a: MarkedCell, b: MarkedCell) -> bool {
    let (ma, mb) = (a.mask(), b.mask());
    if ma & !mb == 0 || mb & !ma == 0 {
        return false;
    }
    // overlapping interiors make the hull of the union too small
    if hull_volume(ma | mb) < a.volume() + b.volume() {
        return false;
    }
    let mut sys = LinearSystem::new(4);
    let row = |i: usize, sign: i64| {
        let p = vertex(i);
        vec![Rational::from_integer((sign * p[0]).into()), Rational::from_integer((sign * p[1]).into()),
             Rational::from_integer((sign * p[2]).into()), Rational::from_integer((-sign).into())]
    };
    for i in 0..8 {
        let (ia, ib) = (ma >> i & 1 == 1, mb >> i & 1 == 1);
        match (ia, ib) {
            (true, true) => sys.eq(row(i, 1), Rational::zero()),
            (true, false) => sys.gt(row(i, -1), Rational::zero()),
            (false, true) => sys.gt(row(i, 1), Rational::zero()),
            _ => {}
        }
    }
    lp_feasible(&sys).expect("consistent dimensions").feasible
}

/// Rational heights on the eight cube vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HeightFunction {
    values: [Rational; 8],
}

impl std::fmt::Debug for HeightFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries((0..8).map(|i| (vertex_label(i), self.values[i].to_string())))
            .finish()
    }
}

impl HeightFunction {
    pub fn new(values: [Rational; 8]) -> Self {
        HeightFunction { values }
    }

    pub fn zero() -> Self {
        Self::from_integers([0; 8])
    }

    pub fn from_integers(v: [i64; 8]) -> Self {
        HeightFunction { values: v.map(|x| Rational::from_integer(x.into())) }
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn set(&mut self, i: usize, v: Rational) {
        self.values[i] = v;
    }

    pub fn values(&self) -> &[Rational; 8] {
        &self.values
    }

    /// `(h∘g⁻¹)(v) = h(g⁻¹ v)`.
    pub fn transform(&self, g: &SymQElement) -> HeightFunction {
        let mut out = self.values.clone();
        for i in 0..8 {
            out[g.apply_index(i)] = self.values[i].clone();
        }
        HeightFunction { values: out }
    }

    /// Adds `a·x + c`.
    pub fn add_affine(&self, a: [i64; 3], c: i64) -> HeightFunction {
        let mut out = self.values.clone();
        for (i, v) in out.iter_mut().enumerate() {
            let p = vertex(i);
            *v += Rational::from_integer((a[0] * p[0] + a[1] * p[1] + a[2] * p[2] + c).into());
        }
        HeightFunction { values: out }
    }

    pub fn scale(&self, t: &Rational) -> HeightFunction {
        HeightFunction { values: self.values.clone().map(|v| v * t) }
    }

    /// Clears denominators and common factors.
    pub fn normalized_integral(&self) -> HeightFunction {
        let l = lcm_of_denominators(self.values.iter());
        let ints: Vec<BigInt> = self.values.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let vals: Vec<Rational> = ints.iter().map(|x| Rational::from_integer(x / &g)).collect();
        HeightFunction { values: vals.try_into().expect("eight values") }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: BTreeMap<String, String> = (0..8).map(|i| (vertex_label(i), self.values[i].to_string())).collect();
        serde_json::json!({ "heights": m })
    }

    /// Accepts `{"heights": {...}}` or the bare map; values may be strings or integers.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SubdivisionError> {
        let map = v.get("heights").unwrap_or(v);
        let obj = map.as_object().ok_or_else(|| SubdivisionError::BadHeights("expected an object".into()))?;
        let mut vals: Vec<Option<Rational>> = vec![None; 8];
        for (k, val) in obj {
            let i = parse_vertex_label(k).ok_or_else(|| SubdivisionError::BadHeights(format!("bad vertex {k:?}")))?;
            let r = match val {
                serde_json::Value::String(s) => parse_rational(s).map_err(|e| SubdivisionError::BadHeights(e.to_string()))?,
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(|x| Rational::from_integer(x.into()))
                    .ok_or_else(|| SubdivisionError::BadHeights(format!("non-integer number for {k}")))?,
                _ => return Err(SubdivisionError::BadHeights(format!("bad value for {k}"))),
            };
            vals[i] = Some(r);
        }
        let vals: Vec<Rational> = vals
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| SubdivisionError::BadHeights(format!("missing vertex {}", vertex_label(i)))))
            .collect::<Result<_, _>>()?;
        Ok(HeightFunction { values: vals.try_into().expect("eight values") })
    }
}

/// Value at vertex `w` of the affine function interpolating `h` on the frame.
pub(crate) fn extend(h: &HeightFunction, frame: &affine::Frame, w: usize) -> Rational {
    frame.base.iter().zip(&frame.coords[w]).map(|(&b, l)| l * h.get(b)).sum()
}

/// Projection of the lower hull of the lifted points.
pub fn from_heights(h: &HeightFunction) -> Subdivision {
    let mut cells: BTreeSet<MarkedCell> = BTreeSet::new();
    for f in frames() {
        let mut on = 0u8;
        let mut lower = true;
        for w in 0..8 {
            let l = extend(h, f, w);
            match h.get(w).cmp(&l) {
                std::cmp::Ordering::Less => {
                    lower = false;
                    break;
                }
                std::cmp::Ordering::Equal => on |= 1 << w,
                std::cmp::Ordering::Greater => {}
            }
        }
        if lower {
            cells.insert(MarkedCell::new(on).expect("contains a frame"));
        }
    }
    Subdivision::from_sorted(cells.into_iter().collect())
}

#[derive(Debug, Clone)]
pub struct Regularity {
    pub regular: bool,
    pub witness: Option<HeightFunction>,
}

fn unit(i: usize) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); 8];
    r[i] = Rational::one();
    r
}

/// Rows expressing "h is affine on every cell".
fn affinity_rows(s: &Subdivision) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for c in s.cells() {
        let f = frame_in(c.mask());
        for w in c.indices() {
            if f.base_mask >> w & 1 == 1 {
                continue;
            }
            let mut r = unit(w);
            for (k, &b) in f.base.iter().enumerate() {
                r[b] -= &f.coords[w][k];
            }
            rows.push(r);
        }
    }
    rows
}

pub fn is_regular(s: &Subdivision) -> Result<Regularity, SubdivisionError> {
    s.validate()?;
    let mut sys = LinearSystem::new(8);
    for r in affinity_rows(s) {
        sys.eq(r, Rational::zero());
    }
    // local convexity across each interior facet
    for (i, j, _) in s.interior_facets() {
        let (c, d) = (s.cells()[i], s.cells()[j]);
        let f = frame_in(c.mask());
        let w = d.indices().into_iter().find(|&w| !c.contains(w)).expect("distinct cells");
        let mut r = unit(w);
        for (k, &b) in f.base.iter().enumerate() {
            r[b] -= &f.coords[w][k];
        }
        sys.gt(r, Rational::zero());
    }
    let out = lp_feasible(&sys).expect("consistent dimensions");
    if !out.feasible {
        return Ok(Regularity { regular: false, witness: None });
    }
    let w = out.witness.expect("feasible has witness");
    let h = HeightFunction::new(w.try_into().expect("eight values")).normalized_integral();
    debug_assert_eq!(&from_heights(&h), s);
    Ok(Regularity { regular: true, witness: Some(h) })
}

/// 8 minus the dimension of the space of heights affine on every cell.
pub fn stratum_dimension(s: &Subdivision) -> Result<usize, SubdivisionError> {
    if !is_regular(s)?.regular {
        return Err(SubdivisionError::NotRegular);
    }
    Ok(rational_rank(affinity_rows(s)))
}

/// Dimension of E(s) without the regularity precondition.
pub fn affine_space_dimension(s: &Subdivision) -> usize {
    8 - rational_rank(affinity_rows(s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: Subdivision,
    pub size: usize,
}

pub fn orbit_size(s: &Subdivision) -> usize {
    SymQElement::all().iter().map(|g| s.apply(g)).collect::<BTreeSet<_>>().len()
}

/// Groups by canonical form; output sorted by representative.
pub fn orbits(list: &[Subdivision]) -> Vec<Orbit> {
    let reps: BTreeSet<Subdivision> = list.iter().map(|s| s.canonical()).collect();
    reps.into_iter()
        .map(|r| {
            let size = orbit_size(&r);
            Orbit { representative: r, size }
        })
        .collect()
}

/// Refinement order on a list of subdivisions.
#[derive(Debug, Clone)]
pub struct SubdivisionPoset {
    pub nodes: Vec<Subdivision>,
    /// `leq[i][j]`: node i refines node j.
    pub leq: Vec<Vec<bool>>,
}

impl SubdivisionPoset {
    /// j covers i: i < j with nothing strictly between.
    pub fn covers(&self, i: usize, j: usize) -> bool {
        i != j
            && self.leq[i][j]
            && !(0..self.nodes.len()).any(|k| k != i && k != j && self.leq[i][k] && self.leq[k][j])
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !(0..self.nodes.len()).any(|k| k != i && self.leq[k][i])).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !(0..self.nodes.len()).any(|k| k != i && self.leq[i][k])).collect()
    }
}

pub fn refinement_poset(list: &[Subdivision]) -> SubdivisionPoset {
    let nodes = list.to_vec();
    let leq = nodes.iter().map(|a| nodes.iter().map(|b| a.refines(b)).collect()).collect();
    SubdivisionPoset { nodes, leq }
}
