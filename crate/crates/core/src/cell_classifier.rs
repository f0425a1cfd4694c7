//! Cell types of corner-cut-free subdivisions, equation subtypes and the
//! component count of the glued degenerate surface.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cube_geometry::{canonical_form, dot, parse_vertex_label, sub, vertex, vertex_label, MarkedCell, SymQElement};
use crate::exact_kernel::{parse_rational, rational_rank, Rational};
use crate::subdivisions::Subdivision;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("not a cell of a corner-cut-free subdivision: {0}")]
    NotABulletCell(String),
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),
}

/// One coefficient per cube vertex; `c_ijk` multiplies `X_i Y_j Z_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientAssignment {
    values: [Rational; 8],
}

impl CoefficientAssignment {
    pub fn new(values: [Rational; 8]) -> Self {
        CoefficientAssignment { values }
    }

    pub fn from_integers(v: [i64; 8]) -> Self {
        CoefficientAssignment { values: v.map(|x| Rational::from_integer(x.into())) }
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

    /// `c ∘ g⁻¹`, so that the value at `g(v)` is the old value at `v`.
    pub fn transform(&self, g: &SymQElement) -> Self {
        let mut out = self.values.clone();
        for i in 0..8 {
            out[g.apply_index(i)] = self.values[i].clone();
        }
        CoefficientAssignment { values: out }
    }

    pub fn scale(&self, t: &Rational) -> Self {
        CoefficientAssignment { values: self.values.clone().map(|v| v * t) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: BTreeMap<String, String> = (0..8).map(|i| (vertex_label(i), self.values[i].to_string())).collect();
        serde_json::json!({ "coefficients": m })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ClassifierError> {
        let bad = |m: String| ClassifierError::InvalidCoefficients(m);
        let map = v.get("coefficients").unwrap_or(v);
        let obj = map.as_object().ok_or_else(|| bad("expected an object".into()))?;
        let mut vals: Vec<Option<Rational>> = vec![None; 8];
        for (k, val) in obj {
            let i = parse_vertex_label(k).ok_or_else(|| bad(format!("bad vertex {k:?}")))?;
            vals[i] = Some(match val {
                serde_json::Value::String(s) => parse_rational(s).map_err(|e| bad(e.to_string()))?,
                serde_json::Value::Number(n) => {
                    n.as_i64().map(|x| Rational::from_integer(x.into())).ok_or_else(|| bad(format!("non-integer number for {k}")))?
                }
                _ => return Err(bad(format!("bad value for {k}"))),
            });
        }
        let vals: Vec<Rational> = vals
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| bad(format!("missing vertex {}", vertex_label(i)))))
            .collect::<Result<_, _>>()?;
        Ok(CoefficientAssignment { values: vals.try_into().expect("eight values") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellType {
    A,
    B,
    C,
    D,
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CellType::A => "a",
            CellType::B => "b",
            CellType::C => "c",
            CellType::D => "d",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Subtype {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c1")]
    C1,
    #[serde(rename = "c2")]
    C2,
    #[serde(rename = "c3")]
    C3,
    #[serde(rename = "d1")]
    D1,
    #[serde(rename = "d1'")]
    D1Prime,
    #[serde(rename = "d2")]
    D2,
    #[serde(rename = "d3")]
    D3,
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subtype::A => "a",
            Subtype::B => "b",
            Subtype::C1 => "c1",
            Subtype::C2 => "c2",
            Subtype::C3 => "c3",
            Subtype::D1 => "d1",
            Subtype::D1Prime => "d1'",
            Subtype::D2 => "d2",
            Subtype::D3 => "d3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubtypeLabel {
    pub subtype: Subtype,
    /// Some vertex of the cell carries a zero coefficient.
    pub triple_point: bool,
    /// Square faces of the cell whose 2×2 determinant vanishes, as vertex masks.
    pub broken_lines: Vec<u8>,
}

pub fn cell_type(c: MarkedCell) -> Result<CellType, ClassifierError> {
    let c = canonical_form(c);
    match (c.len(), c.volume()) {
        (4, 1) => Ok(CellType::A),
        (5, 2) => Ok(CellType::B),
        (6, 3) => Ok(CellType::C),
        (8, 6) => Ok(CellType::D),
        (n, v) => Err(ClassifierError::NotABulletCell(format!("{n} vertices, volume {v}"))),
    }
}

/// Cayley's hyperdeterminant of the 2×2×2 array of coefficients.
pub fn hyperdeterminant_222(c: &CoefficientAssignment) -> Rational {
    let a = |i: usize| c.get(i).clone();
    let (a000, a001, a010, a011, a100, a101, a110, a111) = (a(0), a(1), a(2), a(3), a(4), a(5), a(6), a(7));
    let sq = |x: &Rational, y: &Rational| (x * y) * (x * y);
    let squares = sq(&a000, &a111) + sq(&a001, &a110) + sq(&a010, &a101) + sq(&a100, &a011);
    let mixed = &a000 * &a001 * &a110 * &a111
        + &a000 * &a010 * &a101 * &a111
        + &a000 * &a100 * &a011 * &a111
        + &a001 * &a010 * &a101 * &a110
        + &a001 * &a100 * &a011 * &a110
        + &a010 * &a100 * &a011 * &a101;
    let quartic = &a000 * &a011 * &a101 * &a110 + &a001 * &a010 * &a100 * &a111;
    squares - mixed * Rational::from_integer(2.into()) + quartic * Rational::from_integer(4.into())
}

/// 2×4 matrix of the two slices orthogonal to `axis` (0 = x).
pub fn flattening(c: &CoefficientAssignment, axis: usize) -> [[Rational; 4]; 2] {
    let mut m: [[Rational; 4]; 2] = Default::default();
    for i in 0..8 {
        let p = vertex(i);
        let slice = p[axis] as usize;
        let rest: Vec<usize> = (0..3).filter(|&k| k != axis).map(|k| p[k] as usize).collect();
        m[slice][2 * rest[0] + rest[1]] = c.get(i).clone();
    }
    m
}

fn flattening_rank(c: &CoefficientAssignment, axis: usize) -> usize {
    let m = flattening(c, axis);
    rational_rank(m.iter().map(|r| r.to_vec()).collect())
}

/// Splits four coplanar cube vertices into two diagonals, by equal midpoints.
fn square_diagonals(mask: u8) -> [[usize; 2]; 2] {
    let idx = crate::cube_geometry::mask_indices(mask);
    debug_assert_eq!(idx.len(), 4);
    let sum = |i: usize, j: usize| {
        let (p, q) = (vertex(idx[i]), vertex(idx[j]));
        [p[0] + q[0], p[1] + q[1], p[2] + q[2]]
    };
    for (k, l, m) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
        if sum(0, k) == sum(l, m) {
            return [[idx[0], idx[k]], [idx[l], idx[m]]];
        }
    }
    unreachable!("four coplanar cube vertices form a parallelogram")
}

/// Determinant of the coefficients on a square face, diagonal minus antidiagonal.
pub fn square_determinant(c: &CoefficientAssignment, face: u8) -> Rational {
    let [d, e] = square_diagonals(face);
    c.get(d[0]) * c.get(d[1]) - c.get(e[0]) * c.get(e[1])
}

fn square_faces(cell: MarkedCell) -> Vec<u8> {
    cell.facets().iter().map(|f| f.vertices).filter(|m| m.count_ones() == 4).collect()
}

fn label(cell: MarkedCell, c: &CoefficientAssignment, subtype: Subtype) -> SubtypeLabel {
    SubtypeLabel {
        subtype,
        triple_point: cell.indices().iter().any(|&i| c.get(i).is_zero()),
        broken_lines: square_faces(cell).into_iter().filter(|&f| square_determinant(c, f).is_zero()).collect(),
    }
}

fn check_edge_zero(cell: MarkedCell, c: &CoefficientAssignment) -> Result<(), ClassifierError> {
    let idx = cell.indices();
    for &i in &idx {
        for &j in &idx {
            if i < j && (i ^ j).count_ones() == 1 && c.get(i).is_zero() && c.get(j).is_zero() {
                return Err(ClassifierError::InvalidCoefficients(format!(
                    "adjacent vertices {} and {} both vanish",
                    vertex_label(i),
                    vertex_label(j)
                )));
            }
        }
    }
    Ok(())
}

/// Only the zero array is rejected here; the edge-zero rule for cells of a
/// modified subdivision is enforced by [`classify_cell`].
pub fn classify_d(c: &CoefficientAssignment) -> Result<SubtypeLabel, ClassifierError> {
    if c.values().iter().all(|v| v.is_zero()) {
        return Err(ClassifierError::InvalidCoefficients("all coefficients vanish".into()));
    }
    let rank_one = (0..3).filter(|&k| flattening_rank(c, k) == 1).count();
    let subtype = match rank_one {
        3 => Subtype::D3,
        1 => Subtype::D2,
        _ if hyperdeterminant_222(c).is_zero() => Subtype::D1Prime,
        _ => Subtype::D1,
    };
    Ok(label(MarkedCell::CUBE, c, subtype))
}

fn proportional(u: &[&Rational], v: &[&Rational]) -> bool {
    (0..u.len()).all(|i| (0..u.len()).all(|j| (u[i] * v[j] - u[j] * v[i]).is_zero()))
}

/// Prism in the `(a₀,a₁,a₂; b₀,b₁,b₂)` convention: the two triangles are
/// translates, and index 2 is the right-angle vertex, so `a₂ = b₂ = 0`
/// cuts out the rectangle through the hypotenuses.
pub fn classify_c(a: &[Rational; 3], b: &[Rational; 3]) -> Result<SubtypeLabel, ClassifierError> {
    let sub = classify_c_subtype(a, b)?;
    Ok(SubtypeLabel { subtype: sub, triple_point: a.iter().chain(b).any(|x| x.is_zero()), broken_lines: Vec::new() })
}

fn classify_c_subtype(a: &[Rational; 3], b: &[Rational; 3]) -> Result<Subtype, ClassifierError> {
    if a[2].is_zero() && b[2].is_zero() {
        return Err(ClassifierError::InvalidCoefficients("both a2 and b2 vanish".into()));
    }
    if a.iter().all(|x| x.is_zero()) || b.iter().all(|x| x.is_zero()) {
        return Err(ClassifierError::InvalidCoefficients("a triangle carries only zeros".into()));
    }
    if proportional(&[&a[0], &a[1], &a[2]], &[&b[0], &b[1], &b[2]]) {
        Ok(Subtype::C3)
    } else if proportional(&[&a[0], &a[1]], &[&b[0], &b[1]]) {
        Ok(Subtype::C2)
    } else {
        Ok(Subtype::C1)
    }
}

/// Vertex indices `([a₀,a₁,a₂], [b₀,b₁,b₂])` of a prism cell.
pub fn prism_triangles(cell: MarkedCell) -> Result<([usize; 3], [usize; 3]), ClassifierError> {
    let tris: Vec<u8> = cell.facets().iter().map(|f| f.vertices).filter(|m| m.count_ones() == 3).collect();
    let not_prism = || ClassifierError::NotABulletCell(format!("{cell:?} is not a prism"));
    if cell.len() != 6 || tris.len() != 2 {
        return Err(not_prism());
    }
    let ta = crate::cube_geometry::mask_indices(tris[0]);
    let tb = crate::cube_geometry::mask_indices(tris[1]);
    let right = ta
        .iter()
        .copied()
        .find(|&r| {
            let others: Vec<usize> = ta.iter().copied().filter(|&o| o != r).collect();
            dot(&sub(&vertex(others[0]), &vertex(r)), &sub(&vertex(others[1]), &vertex(r))) == 0
        })
        .ok_or_else(not_prism)?;
    let others: Vec<usize> = ta.iter().copied().filter(|&o| o != right).collect();
    let a = [others[0], others[1], right];
    // translation carrying the a-triangle to the b-triangle
    let t = tb
        .iter()
        .map(|&j| sub(&vertex(j), &vertex(a[0])))
        .find(|t| a.iter().all(|&i| {
            let p = vertex(i);
            tb.iter().any(|&j| vertex(j) == [p[0] + t[0], p[1] + t[1], p[2] + t[2]])
        }))
        .ok_or_else(not_prism)?;
    let b = a.map(|i| {
        let p = vertex(i);
        4 * (p[0] + t[0]) as usize + 2 * (p[1] + t[1]) as usize + (p[2] + t[2]) as usize
    });
    Ok((a, b))
}

fn classify_b(cell: MarkedCell, c: &CoefficientAssignment) -> (SubtypeLabel, usize) {
    let base = square_faces(cell)[0];
    let apex = (cell.mask() & !base).trailing_zeros() as usize;
    let reducible = c.get(apex).is_zero() && square_determinant(c, base).is_zero();
    (label(cell, c, Subtype::B), if reducible { 2 } else { 1 })
}

/// Classification of a single cell with its irreducible component count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellClass {
    pub cell: MarkedCell,
    pub cell_type: CellType,
    pub label: SubtypeLabel,
    pub components: usize,
}

pub fn classify_cell(cell: MarkedCell, c: &CoefficientAssignment) -> Result<CellClass, ClassifierError> {
    let ty = cell_type(cell)?;
    check_edge_zero(cell, c)?;
    let (lab, comps) = match ty {
        CellType::A => (label(cell, c, Subtype::A), 1),
        CellType::B => classify_b(cell, c),
        CellType::C => {
            let (a, b) = prism_triangles(cell)?;
            let sub = classify_c_subtype(&a.map(|i| c.get(i).clone()), &b.map(|i| c.get(i).clone()))?;
            (label(cell, c, sub), if sub == Subtype::C3 { 2 } else { 1 })
        }
        CellType::D => {
            let l = classify_d(c)?;
            let n = match l.subtype {
                Subtype::D3 => 3,
                Subtype::D2 => 2,
                _ => 1,
            };
            (l, n)
        }
    };
    Ok(CellClass { cell, cell_type: ty, label: lab, components: comps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DegenerationCase {
    I,
    II,
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cusp {
    Even,
    Odd1,
    Odd2,
    NotACusp,
    Unassigned,
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cusp::Even => "even",
            Cusp::Odd1 => "odd1",
            Cusp::Odd2 => "odd2",
            Cusp::NotACusp => "not-a-cusp",
            Cusp::Unassigned => "unassigned",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Degeneration {
    pub components: usize,
    pub case: DegenerationCase,
    pub cusp: Cusp,
    pub cells: Vec<CellClass>,
}

impl Degeneration {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

pub fn classify_degeneration(s: &Subdivision, c: &CoefficientAssignment) -> Result<Degeneration, ClassifierError> {
    let cells: Vec<CellClass> = s.cells().iter().map(|&cell| classify_cell(cell, c)).collect::<Result<_, _>>()?;
    let components: usize = cells.iter().map(|k| k.components).sum();
    let case = match components {
        1 => DegenerationCase::I,
        2 if cells.len() == 1 => DegenerationCase::II,
        2 => {
            let shared = cells[0].cell.mask() & cells[1].cell.mask();
            let irreducible = match shared.count_ones() {
                3 => true,
                4 => !square_determinant(c, shared).is_zero(),
                _ => false,
            };
            if irreducible {
                DegenerationCase::II
            } else {
                DegenerationCase::III
            }
        }
        _ => DegenerationCase::III,
    };
    let cusp = if case != DegenerationCase::III {
        Cusp::NotACusp
    } else if cells.len() == 1 && cells[0].label.subtype == Subtype::D3 {
        Cusp::Odd2
    } else if cells.iter().all(|k| matches!(k.cell_type, CellType::A | CellType::B)) {
        Cusp::Even
    } else if cells.iter().all(|k| matches!(k.label.subtype, Subtype::C2 | Subtype::C3)) {
        Cusp::Odd1
    } else {
        Cusp::Unassigned
    };
    Ok(Degeneration { components, case, cusp, cells })
}

/// No accidental vanishing: nonzero values, nonzero square determinants on
/// every cell, no proportional prism data, no rank-one flattening, and a
/// nonzero hyperdeterminant.
pub fn is_generic_for(s: &Subdivision, c: &CoefficientAssignment) -> bool {
    if c.values().iter().any(|v| v.is_zero()) {
        return false;
    }
    for &cell in s.cells() {
        if square_faces(cell).into_iter().any(|f| square_determinant(c, f).is_zero()) {
            return false;
        }
        match cell_type(cell) {
            Ok(CellType::C) => match prism_triangles(cell) {
                Ok((a, b)) => {
                    let (a, b) = (a.map(|i| c.get(i).clone()), b.map(|i| c.get(i).clone()));
                    if classify_c_subtype(&a, &b) != Ok(Subtype::C1) {
                        return false;
                    }
                }
                Err(_) => return false,
            },
            Ok(CellType::D) => {
                if (0..3).any(|k| flattening_rank(c, k) == 1) || hyperdeterminant_222(c).is_zero() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

/// Deterministic generic coefficients: distinct primes, reshuffled until generic.
pub fn generic_coefficients(s: &Subdivision) -> CoefficientAssignment {
    const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    let mut vals = PRIMES;
    for round in 0..64i64 {
        let c = CoefficientAssignment::from_integers(vals);
        if is_generic_for(s, &c) {
            return c;
        }
        vals.rotate_left(1);
        vals[round as usize % 8] += 23 * (round + 1);
    }
    panic!("no generic coefficients found")
}
