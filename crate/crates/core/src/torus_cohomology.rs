//! First cohomology of the torus sheaf on a polytopal complex, computed as
//! integral H₁ of the Čech chain complex of cell lattices, plus the
//! combinatorial reduction argument as a second opinion.
//!
//! H¹ with coefficients in 𝕂* is `Hom(H₁, 𝕂*)`. Since 𝕂* is divisible and
//! has torsion of every order, that functor is exact and kills no nonzero
//! finitely generated group, so H¹ is trivial iff H₁ = 0.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cube_geometry::{mask_points, MarkedCell};
use crate::exact_kernel::{saturate_rows, smith_normal_form, IntMatrix, Rational};
use crate::subdivisions::Subdivision;

/// Maximal cells given by their lattice points, in any ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointComplex {
    pub ambient_dim: usize,
    pub cells: Vec<Vec<Vec<i64>>>,
}

impl PointComplex {
    pub fn new(ambient_dim: usize, cells: Vec<Vec<Vec<i64>>>) -> Self {
        let cells = cells
            .into_iter()
            .map(|mut c| {
                c.sort();
                c.dedup();
                c
            })
            .collect();
        PointComplex { ambient_dim, cells }
    }

    pub fn from_subdivision(s: &Subdivision) -> Self {
        let cells = s.cells().iter().map(|c| mask_points(c.mask()).into_iter().map(|p| p.to_vec()).collect()).collect();
        PointComplex::new(3, cells)
    }

    fn meet(&self, ids: &[usize]) -> Vec<Vec<i64>> {
        let mut pts = self.cells[ids[0]].clone();
        for &i in &ids[1..] {
            pts.retain(|p| self.cells[i].binary_search(p).is_ok());
        }
        pts
    }

    fn without(&self, i: usize) -> PointComplex {
        let mut cells = self.cells.clone();
        cells.remove(i);
        PointComplex { ambient_dim: self.ambient_dim, cells }
    }
}

/// Saturated sublattice of ℤ ⊕ ℤᵈ generated by `(1, p)`, as a row basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl CellLattice {
    pub fn of_points(points: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<i64>> = points.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect();
        let m = IntMatrix::from_rows(&rows).expect("rectangular");
        CellLattice { basis: saturate_rows(&m) }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of `v` in this basis; `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        // c·B = v, solved over ℚ on the transposed system
        let r = self.rank();
        let n = v.len();
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|k| {
                (0..r)
                    .map(|i| Rational::from_integer(self.basis[i][k].clone()))
                    .chain(std::iter::once(Rational::from_integer(v[k].clone())))
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..r {
            let Some(p) = (row..n).find(|&k| !a[k][col].is_zero()) else { continue };
            a.swap(row, p);
            let inv = Rational::one() / &a[row][col];
            for x in a[row].iter_mut() {
                *x *= &inv;
            }
            for k in 0..n {
                if k != row && !a[k][col].is_zero() {
                    let f = a[k][col].clone();
                    for j in 0..=r {
                        let t = &a[row][j] * &f;
                        a[k][j] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if (row..n).any(|k| !a[k][r].is_zero()) {
            return None;
        }
        let mut c = vec![Rational::zero(); r];
        for (k, &col) in pivots.iter().enumerate() {
            c[col] = a[k][r].clone();
        }
        c.into_iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    pub cells: Vec<CellLattice>,
    pub pairs: Vec<([usize; 2], CellLattice)>,
    pub triples: Vec<([usize; 3], CellLattice)>,
}

pub fn build_nerve_points(k: &PointComplex) -> NerveComplex {
    let n = k.cells.len();
    let cells = k.cells.iter().map(|c| CellLattice::of_points(c)).collect();
    let mut pairs = Vec::new();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = k.meet(&[i, j]);
            if m.is_empty() {
                continue;
            }
            pairs.push(([i, j], CellLattice::of_points(&m)));
            for l in j + 1..n {
                let m = k.meet(&[i, j, l]);
                if !m.is_empty() {
                    triples.push(([i, j, l], CellLattice::of_points(&m)));
                }
            }
        }
    }
    NerveComplex { cells, pairs, triples }
}

pub fn build_nerve(s: &Subdivision) -> NerveComplex {
    build_nerve_points(&PointComplex::from_subdivision(s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroupDescriptor {
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl AbelianGroupDescriptor {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Matrix of a signed sum of inclusions: rows index generators of the source.
fn boundary_block(
    src: &CellLattice,
    targets: &[(usize, i64)],
    offsets: &[usize],
    lattices: &[&CellLattice],
    width: usize,
) -> Vec<Vec<BigInt>> {
    src.basis
        .iter()
        .map(|v| {
            let mut row = vec![BigInt::zero(); width];
            for &(t, sign) in targets {
                let c = lattices[t].coordinates(v).expect("a face lattice sits inside the lattice of any cell containing it");
                for (k, x) in c.into_iter().enumerate() {
                    row[offsets[t] + k] += x * sign;
                }
            }
            row
        })
        .collect()
}

fn offsets(ls: &[&CellLattice]) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(ls.len());
    let mut total = 0;
    for l in ls {
        off.push(total);
        total += l.rank();
    }
    (off, total)
}

fn rank_of(rows: &[Vec<BigInt>], cols: usize) -> (usize, Vec<BigInt>) {
    if rows.is_empty() || cols == 0 {
        return (0, Vec::new());
    }
    let s = smith_normal_form(&IntMatrix::from_rows(rows).expect("rectangular"));
    (s.rank, s.factors)
}

pub fn h1_of_nerve(nerve: &NerveComplex) -> AbelianGroupDescriptor {
    let c0: Vec<&CellLattice> = nerve.cells.iter().collect();
    let c1: Vec<&CellLattice> = nerve.pairs.iter().map(|(_, l)| l).collect();
    let (off0, w0) = offsets(&c0);
    let (off1, w1) = offsets(&c1);
    let d1: Vec<Vec<BigInt>> = nerve
        .pairs
        .iter()
        .flat_map(|([i, j], l)| boundary_block(l, &[(*j, 1), (*i, -1)], &off0, &c0, w0))
        .collect();
    let pair_index = |a: usize, b: usize| nerve.pairs.iter().position(|(p, _)| *p == [a, b]).expect("faces of a triple meet");
    let d2: Vec<Vec<BigInt>> = nerve
        .triples
        .iter()
        .flat_map(|([i, j, k], l)| {
            let t = [(pair_index(*j, *k), 1), (pair_index(*i, *k), -1), (pair_index(*i, *j), 1)];
            boundary_block(l, &t, &off1, &c1, w1)
        })
        .collect();
    let (r1, _) = rank_of(&d1, w0);
    let (r2, factors) = rank_of(&d2, w1);
    AbelianGroupDescriptor {
        rank: w1 - r1 - r2,
        torsion: factors.into_iter().filter(|f| f.abs() > BigInt::one()).map(|f| f.to_string()).collect(),
    }
}

pub fn h1_torus(s: &Subdivision) -> AbelianGroupDescriptor {
    h1_of_nerve(&build_nerve(s))
}

pub fn h1_points(k: &PointComplex) -> AbelianGroupDescriptor {
    h1_of_nerve(&build_nerve_points(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionVerdict {
    TrivialByReduction,
    Inconclusive,
}

fn dim_of(points: &[Vec<i64>]) -> i32 {
    if points.is_empty() {
        return -1;
    }
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| Rational::from_integer((a - b).into())).collect())
        .collect();
    crate::exact_kernel::rational_rank(rows) as i32
}

/// A cell meeting the rest of the complex in exactly one facet.
fn hanging_cell(k: &PointComplex) -> Option<usize> {
    let d = k.ambient_dim as i32;
    (0..k.cells.len()).find(|&i| {
        let others: Vec<usize> = (0..k.cells.len()).filter(|&j| j != i).collect();
        let facets: Vec<Vec<Vec<i64>>> =
            others.iter().map(|&j| k.meet(&[i, j])).filter(|m| dim_of(m) == d - 1).collect();
        if facets.len() != 1 {
            return false;
        }
        let f: BTreeSet<&Vec<i64>> = facets[0].iter().collect();
        others.iter().all(|&j| k.meet(&[i, j]).iter().all(|p| f.contains(p)))
    })
}

/// All cells around one codimension-2 face, consecutive ones sharing facets
/// and the facet-adjacency graph a single cycle.
fn is_codim2_cycle(k: &PointComplex) -> bool {
    let n = k.cells.len();
    let d = k.ambient_dim as i32;
    if n < 3 {
        return false;
    }
    let all: Vec<usize> = (0..n).collect();
    if dim_of(&k.meet(&all)) != d - 2 {
        return false;
    }
    let adj: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| j != i && dim_of(&k.meet(&[i, j])) == d - 1).collect()).collect();
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut seen) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        seen += 1;
    }
    seen == n
}

pub fn reduce_points(k: &PointComplex) -> ReductionVerdict {
    let mut k = k.clone();
    while k.cells.len() > 1 {
        match hanging_cell(&k) {
            Some(i) => k = k.without(i),
            None => break,
        }
    }
    if k.cells.len() == 1 || is_codim2_cycle(&k) {
        ReductionVerdict::TrivialByReduction
    } else {
        ReductionVerdict::Inconclusive
    }
}

pub fn reduce_and_verdict(s: &Subdivision) -> ReductionVerdict {
    reduce_points(&PointComplex::from_subdivision(s))
}

/// Cells removed by the hanging-cell reduction, in removal order.
pub fn hanging_sequence(s: &Subdivision) -> Vec<MarkedCell> {
    let mut k = PointComplex::from_subdivision(s);
    let mut cells: Vec<MarkedCell> = s.cells().to_vec();
    let mut out = Vec::new();
    while k.cells.len() > 1 {
        let Some(i) = hanging_cell(&k) else { break };
        out.push(cells.remove(i));
        k = k.without(i);
    }
    out
}
