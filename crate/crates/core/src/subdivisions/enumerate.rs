//! Two independent enumerations of all subdivisions of the cube.

use num_traits::{Signed, Zero};
use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use super::{affine::affine_coords, cells_compatible, Subdivision};
use crate::cube_geometry::{affine_dim, all_cells, hull_volume, mask_points, vertex, MarkedCell};
use crate::exact_kernel::Rational;

/// Every subdivision of the cube, in canonical order. Both strategies run
/// on first use and must return the same set.
pub fn enumerate_all() -> &'static [Subdivision] {
    static ALL: OnceLock<Vec<Subdivision>> = OnceLock::new();
    ALL.get_or_init(|| {
        let (top, bottom) = rayon::join(top_down_subdivisions, bottom_up_subdivisions);
        assert_eq!(top, bottom, "enumeration strategies disagree");
        top
    })
}

type Bits = [u64; 3];

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_and(a: &Bits, b: &Bits) -> Bits {
    [a[0] & b[0], a[1] & b[1], a[2] & b[2]]
}

fn bit_iter_from(b: &Bits, start: usize) -> impl Iterator<Item = usize> + '_ {
    (start..192).filter(move |&i| b[i / 64] >> (i % 64) & 1 == 1)
}

/// Strategy (i): exact-cover search over all lattice cells of the cube,
/// choosing pairwise face-compatible cells until the volume reaches 6.
pub fn top_down_subdivisions() -> Vec<Subdivision> {
    let cells = all_cells();
    let n = cells.len();
    let compat: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = [0u64; 3];
            for j in 0..n {
                if i != j && cells_compatible(cells[i], cells[j]) {
                    bit_set(&mut b, j);
                }
            }
            b
        })
        .collect();
    let vols: Vec<u32> = cells.iter().map(|c| c.volume()).collect();
    let mut all = [0u64; 3];
    for i in 0..n {
        bit_set(&mut all, i);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search(cells, &compat, &vols, &all, 0, 0, &mut chosen, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    cells: &[MarkedCell],
    compat: &[Bits],
    vols: &[u32],
    allowed: &Bits,
    start: usize,
    volume: u32,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Subdivision>,
) {
    if volume == 6 {
        out.push(Subdivision::from_sorted(chosen.iter().map(|&i| cells[i]).collect()));
        return;
    }
    // the lowest uncovered vertex must be covered by some later cell
    let covered = chosen.iter().fold(0u8, |m, &i| m | cells[i].mask());
    let need = (0..8).find(|&v| covered >> v & 1 == 0);
    for i in bit_iter_from(allowed, start) {
        if volume + vols[i] > 6 {
            continue;
        }
        if let Some(v) = need {
            // some chosen cell must contain v; cells are tried in order, so if
            // no remaining candidate contains v the branch is dead
            if !bit_iter_from(allowed, i).any(|k| cells[k].contains(v)) {
                return;
            }
        }
        chosen.push(i);
        let next = bit_and(allowed, &compat[i]);
        search(cells, compat, vols, &next, i + 1, volume + vols[i], chosen, out);
        chosen.pop();
    }
}

struct Circuit {
    plus: Vec<usize>,
    minus: Vec<usize>,
}

fn circuits() -> &'static [Circuit] {
    static C: OnceLock<Vec<Circuit>> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = Vec::new();
        for mask in 0u16..256 {
            let m = mask as u8;
            let k = m.count_ones();
            if !(4..=5).contains(&k) {
                continue;
            }
            let idx: Vec<usize> = (0..8).filter(|i| m >> i & 1 == 1).collect();
            let pts = mask_points(m);
            let dim = affine_dim(&pts);
            // minimal dependence: 4 coplanar points, or 5 points in general position
            let minimal = match k {
                4 => dim == 2,
                _ => dim == 3 && (0..5).all(|drop| {
                    let sub: Vec<_> = pts.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, p)| *p).collect();
                    affine_dim(&sub) == 3
                }),
            };
            if !minimal {
                continue;
            }
            let lambda = dependence(&pts);
            let plus = idx.iter().zip(&lambda).filter(|(_, l)| l.is_positive()).map(|(&i, _)| i).collect();
            let minus = idx.iter().zip(&lambda).filter(|(_, l)| l.is_negative()).map(|(&i, _)| i).collect();
            out.push(Circuit { plus, minus });
        }
        out
    })
}

/// Coefficients of the unique affine dependence of a circuit.
fn dependence(pts: &[[i64; 3]]) -> Vec<Rational> {
    // express the last point in terms of an independent subset, then
    // move everything to one side
    let k = pts.len();
    let last = pts[k - 1];
    let base: Vec<[i64; 3]> = pts[..k - 1].to_vec();
    if k == 5 {
        let l = affine_coords(&base, &last);
        let mut v: Vec<Rational> = l.to_vec();
        v.push(-Rational::from_integer(1.into()));
        return v;
    }
    // coplanar quadruple: add a point off the plane to get a frame
    let extra = (0..8)
        .map(vertex)
        .find(|p| affine_dim(&[base[0], base[1], base[2], *p]) == 3)
        .expect("point off the plane");
    let frame = [base[0], base[1], base[2], extra];
    let l = affine_coords(&frame, &last);
    debug_assert!(l[3].is_zero());
    vec![l[0].clone(), l[1].clone(), l[2].clone(), -Rational::from_integer(1.into())]
}

type Tri = BTreeSet<u8>;

fn flip(t: &Tri, z: &Circuit) -> Option<Tri> {
    let zmask = z.plus.iter().chain(&z.minus).fold(0u8, |m, &i| m | 1 << i);
    let plus_cells: Vec<u8> = z.plus.iter().map(|&p| zmask & !(1 << p)).collect();
    let mut link: Option<BTreeSet<u8>> = None;
    for &sigma in &plus_cells {
        let l: BTreeSet<u8> = t.iter().filter(|&&tau| tau & sigma == sigma).map(|&tau| tau & !sigma).collect();
        if l.is_empty() {
            return None;
        }
        match &link {
            None => link = Some(l),
            Some(prev) if *prev == l => {}
            Some(_) => return None,
        }
    }
    let link = link?;
    let mut out = t.clone();
    for &sigma in &plus_cells {
        for &rho in &link {
            out.remove(&(sigma | rho));
        }
    }
    for &m in &z.minus {
        let tau = zmask & !(1 << m);
        for &rho in &link {
            out.insert(tau | rho);
        }
    }
    Some(out)
}

fn staircase() -> Tri {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms
        .iter()
        .map(|p| {
            let mut pt = [0i64; 3];
            let mut m = 1u8; // vertex 000
            for &axis in p {
                pt[axis] = 1;
                m |= 1 << (pt[0] * 4 + pt[1] * 2 + pt[2]);
            }
            m
        })
        .collect()
}

/// All triangulations reachable from the staircase triangulation by
/// bistellar flips.
pub fn flip_graph_triangulations() -> Vec<Subdivision> {
    let start = staircase();
    let mut seen: BTreeSet<Tri> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        for z in circuits() {
            if let Some(u) = flip(&t, z) {
                if !seen.contains(&u) {
                    seen.insert(u.clone());
                    queue.push_back(u);
                }
            }
        }
    }
    let mut out: Vec<Subdivision> = seen
        .into_iter()
        .map(|t| {
            let cells = t.into_iter().map(|m| MarkedCell::new(m).expect("flip produced a degenerate simplex")).collect();
            Subdivision::new(cells).expect("flip produced an invalid triangulation")
        })
        .collect();
    out.sort();
    out
}

/// Strategy (ii): triangulations by flips, then every coarsening obtained by
/// merging blocks of a set partition whose unions are convex.
pub fn bottom_up_subdivisions() -> Vec<Subdivision> {
    let mut out: BTreeSet<Subdivision> = BTreeSet::new();
    for t in flip_graph_triangulations() {
        let cells = t.cells().to_vec();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        partitions(0, cells.len(), &mut blocks, &mut |blocks| {
            let mut merged = Vec::with_capacity(blocks.len());
            for b in blocks {
                let mask = b.iter().fold(0u8, |m, &i| m | cells[i].mask());
                let vol: u32 = b.iter().map(|&i| cells[i].volume()).sum();
                if hull_volume(mask) != vol {
                    return;
                }
                merged.push(MarkedCell::new(mask).expect("full-dimensional union"));
            }
            if let Ok(s) = Subdivision::new(merged) {
                out.insert(s);
            }
        });
    }
    out.into_iter().collect()
}

fn partitions(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>])) {
    if i == n {
        visit(blocks);
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(i);
        partitions(i + 1, n, blocks, visit);
        blocks[b].pop();
    }
    blocks.push(vec![i]);
    partitions(i + 1, n, blocks, visit);
    blocks.pop();
}
