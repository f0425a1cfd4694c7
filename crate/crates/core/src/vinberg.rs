//! Vinberg's algorithm for (−1)-vectors in hyperbolic lattices of
//! signature (1, n), Coxeter diagrams and their elliptic and parabolic
//! subdiagrams.
//!
//! Sign convention: the form is positive on the timelike side and roots have
//! norm −1, so a root `x` is accepted iff `x·r ≥ 0` for every root `r`
//! already accepted, and distinct simple roots have nonnegative products.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_kernel::{floor_sqrt, rational_sqrt, signature, IntMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VinbergError {
    #[error("not a hyperbolic lattice: {0}")]
    NotHyperbolic(String),
    #[error("bad vector: {0}")]
    BadVector(String),
    #[error("the slice at height {height} is unbounded; supply a coordinate window")]
    UnboundedSlice { height: i64 },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

pub type Vector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramLattice {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

impl GramLattice {
    pub fn new(name: &str, gram: Vec<Vec<i64>>) -> Result<Self, VinbergError> {
        let n = gram.len();
        if n < 2 || gram.iter().any(|r| r.len() != n) {
            return Err(VinbergError::NotHyperbolic("gram matrix must be square of size at least 2".into()));
        }
        let m = IntMatrix::from_rows(&gram).expect("square");
        let sig = signature(&m).map_err(|e| VinbergError::NotHyperbolic(e.to_string()))?;
        if sig.positive != 1 || sig.zero != 0 {
            return Err(VinbergError::NotHyperbolic(format!(
                "signature ({}, {}, {})",
                sig.positive, sig.negative, sig.zero
            )));
        }
        Ok(GramLattice { name: name.to_string(), gram })
    }

    /// ℤ^{1,3}, the lattice at the even cusp.
    pub fn even() -> Self {
        Self::new("even", diag(&[1, -1, -1, -1])).expect("hyperbolic")
    }

    /// ℤ^{1,1} ⊕ ℤ²(−2).
    pub fn odd1() -> Self {
        Self::new("odd1", diag(&[1, -1, -2, -2])).expect("hyperbolic")
    }

    /// U ⊕ ℤ²(−2), an even lattice.
    pub fn odd2() -> Self {
        let g = vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, -2, 0], vec![0, 0, 0, -2]];
        Self::new("odd2", g).expect("hyperbolic")
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "even" => Some(Self::even()),
            "odd1" => Some(Self::odd1()),
            "odd2" => Some(Self::odd2()),
            _ => None,
        }
    }

    /// The initial vector used for each named lattice.
    pub fn default_v0(&self) -> Vector {
        match self.name.as_str() {
            "odd1" => vec![1, -1, 0, 0],
            _ => {
                let mut v = vec![0; self.rank()];
                v[0] = 1;
                v
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, VinbergError> {
        let g = v.get("gram").unwrap_or(v);
        let rows: Vec<Vec<i64>> = serde_json::from_value(g.clone())
            .map_err(|e| VinbergError::NotHyperbolic(format!("expected an integer matrix: {e}")))?;
        let name = v.get("name").and_then(|n| n.as_str()).unwrap_or("custom");
        Self::new(name, rows)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn dot(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if *g != 0 {
                    s += g * x[i] * y[j];
                }
            }
        }
        s
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    fn gv(&self, v: &[i64]) -> Vector {
        self.gram.iter().map(|row| row.iter().zip(v).map(|(g, x)| g * x).sum()).collect()
    }
}

fn diag(d: &[i64]) -> Vec<Vec<i64>> {
    (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().cloned().chain((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() })).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, p);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Coordinate bounds on `{x : v0·x = n, x·x = −1}` for timelike `v0`, from
/// the majorant `2(v0·x)²/v0² − x·x`, which is positive definite.
fn timelike_bounds(l: &GramLattice, v0: &[i64], n: i64) -> Vec<i64> {
    let w = l.gv(v0);
    let g0 = q(l.dot(v0, v0));
    let k = l.rank();
    let p: Vec<Vec<Rational>> =
        (0..k).map(|i| (0..k).map(|j| q(2 * w[i] * w[j]) / &g0 - q(l.gram[i][j])).collect()).collect();
    let pinv = invert(&p);
    let b = q(2 * n * n) / &g0 + Rational::one();
    (0..k)
        .map(|i| {
            let v = (&b * &pinv[i][i]).floor().to_integer();
            let r = floor_sqrt(&v);
            i64::try_from(r).expect("bound fits in i64")
        })
        .collect()
}

/// All x with `x·x = −1` and `v0·x = n`, sorted lexicographically.
///
/// For isotropic `v0` the slice is unbounded; `window` then bounds every
/// coordinate except the two solved for.
pub fn roots_at_height(l: &GramLattice, v0: &[i64], n: i64, window: Option<i64>) -> Result<Vec<Vector>, VinbergError> {
    let k = l.rank();
    if v0.len() != k {
        return Err(VinbergError::BadVector(format!("expected {k} coordinates")));
    }
    let g0 = l.dot(v0, v0);
    if v0.iter().all(|&x| x == 0) || g0 < 0 {
        return Err(VinbergError::BadVector("v0 must be nonzero with v0·v0 ≥ 0".into()));
    }
    // x·x ≡ Σ g_ii x_i² mod 2
    if l.is_even() {
        return Ok(Vec::new());
    }
    let w = l.gv(v0);
    let p = (0..k).find(|&i| w[i] != 0).expect("nondegenerate form");
    let qi = (0..k).find(|&i| i != p && w[i] != 0).unwrap_or_else(|| (0..k).find(|&i| i != p).expect("rank ≥ 2"));
    let free: Vec<usize> = (0..k).filter(|&i| i != p && i != qi).collect();
    let bounds: Vec<i64> = if g0 > 0 {
        let b = timelike_bounds(l, v0, n);
        free.iter().map(|&i| b[i]).collect()
    } else {
        let w = window.ok_or(VinbergError::UnboundedSlice { height: n })?;
        vec![w; free.len()]
    };

    let fval = |x: &[Rational]| -> Rational {
        let mut s = Rational::one();
        for i in 0..k {
            for j in 0..k {
                if l.gram[i][j] != 0 {
                    s += q(l.gram[i][j]) * &x[i] * &x[j];
                }
            }
        }
        s
    };
    let point = |fixed: &[i64], t: &Rational| -> Vec<Rational> {
        let mut x = vec![Rational::zero(); k];
        let mut rest = q(n);
        for (slot, &i) in free.iter().enumerate() {
            x[i] = q(fixed[slot]);
            rest -= q(w[i] * fixed[slot]);
        }
        x[qi] = t.clone();
        rest -= q(w[qi]) * t;
        x[p] = rest / q(w[p]);
        x
    };

    let mut out = BTreeSet::new();
    let mut fixed: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let f0 = fval(&point(&fixed, &Rational::zero()));
        let f1 = fval(&point(&fixed, &Rational::one()));
        let fm = fval(&point(&fixed, &-Rational::one()));
        let a = (&f1 + &fm) / q(2) - &f0;
        let b = (&f1 - &fm) / q(2);
        let c = f0;
        let mut ts: Vec<Rational> = Vec::new();
        if !a.is_zero() {
            let disc = &b * &b - q(4) * &a * &c;
            if !disc.is_negative() {
                if let Some(s) = rational_sqrt(&disc) {
                    ts.push((-&b + &s) / (q(2) * &a));
                    ts.push((-&b - &s) / (q(2) * &a));
                }
            }
        } else if !b.is_zero() {
            ts.push(-c / b);
        } else if c.is_zero() {
            return Err(VinbergError::UnboundedSlice { height: n });
        }
        for t in ts {
            if !t.is_integer() {
                continue;
            }
            let x = point(&fixed, &t);
            if x.iter().all(|v| v.is_integer()) {
                let x: Vector = x.iter().map(|v| i64::try_from(v.to_integer()).expect("fits")).collect();
                debug_assert_eq!(l.dot(&x, &x), -1);
                debug_assert_eq!(l.dot(v0, &x), n);
                out.insert(x);
            }
        }
        // odometer over the free coordinates
        let mut i = 0;
        while i < fixed.len() && fixed[i] == bounds[i] {
            fixed[i] = -bounds[i];
            i += 1;
        }
        if i == fixed.len() {
            break;
        }
        fixed[i] += 1;
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcceptedRoot {
    pub vector: Vector,
    pub height: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub candidate: Vector,
    pub height: i64,
    /// First accepted root with a negative product.
    pub witness: Vector,
    pub product: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VinbergRun {
    pub accepted: Vec<AcceptedRoot>,
    pub terminated: bool,
    /// First height after which the accepted set had finite volume.
    pub finite_at: Option<i64>,
    pub last_height: i64,
    pub rejections: Vec<Rejection>,
}

impl VinbergRun {
    pub fn roots(&self) -> Vec<Vector> {
        self.accepted.iter().map(|a| a.vector.clone()).collect()
    }
}

/// Heights 0..=max_height; stops early once the accepted set has finite volume.
pub fn vinberg_run(l: &GramLattice, v0: &[i64], max_height: i64, window: Option<i64>) -> Result<VinbergRun, VinbergError> {
    run(l, v0, max_height, window, true)
}

/// Like [`vinberg_run`] but keeps going through every height up to `max_height`.
pub fn vinberg_run_exhaustive(
    l: &GramLattice,
    v0: &[i64],
    max_height: i64,
    window: Option<i64>,
) -> Result<VinbergRun, VinbergError> {
    run(l, v0, max_height, window, false)
}

fn run(l: &GramLattice, v0: &[i64], max_height: i64, window: Option<i64>, stop: bool) -> Result<VinbergRun, VinbergError> {
    let mut accepted: Vec<AcceptedRoot> = Vec::new();
    let mut rejections = Vec::new();
    let mut finite_at = None;
    let mut last_height = 0;
    for n in 0..=max_height {
        last_height = n;
        for x in roots_at_height(l, v0, n, window)? {
            let neg: Vector = x.iter().map(|v| -v).collect();
            let bad = accepted.iter().find_map(|r| {
                let p = l.dot(&x, &r.vector);
                (p < 0 || (n == 0 && r.vector == neg)).then(|| (r.vector.clone(), p))
            });
            match bad {
                None => accepted.push(AcceptedRoot { vector: x, height: n }),
                Some((witness, product)) => {
                    if n > 0 {
                        rejections.push(Rejection { candidate: x, height: n, witness, product })
                    }
                }
            }
        }
        if n > 0 && !accepted.is_empty() && finite_at.is_none() {
            let roots: Vec<Vector> = accepted.iter().map(|a| a.vector.clone()).collect();
            if finite_volume_check(&CoxeterDiagram::from_roots(l, &roots), l.rank()) {
                finite_at = Some(n);
                if stop {
                    break;
                }
            }
        }
    }
    // an empty accepted set means the decomposition is the whole cone
    let terminated = finite_at.is_some() || accepted.is_empty();
    Ok(VinbergRun { accepted, terminated, finite_at, last_height, rejections })
}

/// α(a, b) = (a²+b², 1−a²−b², a, b) in ℤ^{1,1} ⊕ ℤ²(−2).
pub fn alpha(a: i64, b: i64) -> Vector {
    let s = a * a + b * b;
    vec![s, 1 - s, a, b]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Edge {
    None,
    Infinity,
    Dotted(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterDiagram {
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    /// Root vectors, when the diagram came from a lattice.
    pub vectors: Option<Vec<Vector>>,
    /// ℤ² positions for the closed-form diagram at the odd1 cusp.
    pub coords: Option<Vec<(i64, i64)>>,
}

impl CoxeterDiagram {
    pub fn from_roots(l: &GramLattice, roots: &[Vector]) -> Self {
        let gram = roots.iter().map(|x| roots.iter().map(|y| l.dot(x, y)).collect()).collect();
        let labels = roots.iter().map(|r| format!("{r:?}")).collect();
        CoxeterDiagram { labels, gram, vectors: Some(roots.to_vec()), coords: None }
    }

    /// Vertices `(a, b)` with `|a|, |b| ≤ radius`, Gram `−1 + (a−c)² + (b−d)²`.
    pub fn odd1_window(radius: i64) -> Self {
        let coords: Vec<(i64, i64)> =
            (-radius..=radius).flat_map(|a| (-radius..=radius).map(move |b| (a, b))).collect();
        let gram = coords
            .iter()
            .map(|&(a, b)| coords.iter().map(|&(c, d)| -1 + (a - c).pow(2) + (b - d).pow(2)).collect())
            .collect();
        let labels = coords.iter().map(|(a, b)| format!("({a},{b})")).collect();
        CoxeterDiagram { labels, gram, vectors: None, coords: Some(coords) }
    }

    pub fn len(&self) -> usize {
        self.gram.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gram.is_empty()
    }

    pub fn edge(&self, i: usize, j: usize) -> Edge {
        match self.gram[i][j] {
            0 => Edge::None,
            1 => Edge::Infinity,
            k => Edge::Dotted(k),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph coxeter {\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{l}\"];\n"));
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                match self.edge(i, j) {
                    Edge::None => {}
                    Edge::Infinity => s.push_str(&format!("  v{i} -- v{j} [label=\"inf\"];\n")),
                    Edge::Dotted(k) => s.push_str(&format!("  v{i} -- v{j} [style=dotted, label=\"{k}\"];\n")),
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    fn sub_gram(&self, set: &[usize]) -> Vec<Vec<i64>> {
        set.iter().map(|&i| set.iter().map(|&j| self.gram[i][j]).collect()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubdiagramKind {
    Elliptic,
    MaximalParabolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdiagramClass {
    pub kind: SubdiagramKind,
    pub rank: usize,
    /// Component types joined by "+", e.g. "A1+A1" or "A1~+A1~".
    pub name: String,
    pub representative: Vec<usize>,
    pub labels: Vec<String>,
}

fn neg_signature(g: &[Vec<i64>]) -> crate::exact_kernel::Signature {
    let m: Vec<Vec<i64>> = g.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    signature(&IntMatrix::from_rows(&m).expect("square")).expect("symmetric")
}

fn components(d: &CoxeterDiagram, set: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; set.len()];
    let mut out = Vec::new();
    for s in 0..set.len() {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            for v in 0..set.len() {
                if !seen[v] && d.gram[set[u]][set[v]] != 0 {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        out.push(comp.into_iter().map(|i| set[i]).collect());
    }
    out
}

/// `Some((kind, rank, name))` for elliptic or maximal parabolic subsets.
fn kind_of(d: &CoxeterDiagram, set: &[usize], lattice_rank: usize) -> Option<(SubdiagramKind, usize, String)> {
    let sig = neg_signature(&d.sub_gram(set));
    let comps = components(d, set);
    let comp_name = |c: &[usize], affine: bool| match (c.len(), affine) {
        (1, false) => "A1".to_string(),
        (2, true) if d.gram[c[0]][c[1]] == 1 => "A1~".to_string(),
        (n, false) => format!("E{n}"),
        (n, true) => format!("P{n}"),
    };
    if sig.positive == set.len() {
        let mut names: Vec<String> = comps.iter().map(|c| comp_name(c, false)).collect();
        names.sort();
        return Some((SubdiagramKind::Elliptic, set.len(), names.join("+")));
    }
    let parabolic = comps.iter().all(|c| {
        let s = neg_signature(&d.sub_gram(c));
        s.negative == 0 && s.zero == 1
    });
    let rank = set.len() - comps.len();
    if parabolic && lattice_rank >= 2 && rank == lattice_rank - 2 {
        let mut names: Vec<String> = comps.iter().map(|c| comp_name(c, true)).collect();
        names.sort();
        return Some((SubdiagramKind::MaximalParabolic, rank, names.join("+")));
    }
    None
}

/// Vertex subsets whose pairwise 2×2 minors are semidefinite, up to `max_size`.
fn candidate_subsets(d: &CoxeterDiagram, max_size: usize) -> Vec<Vec<usize>> {
    let n = d.len();
    let ok = |i: usize, j: usize| d.gram[i][j].abs() <= 1;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(s) = stack.pop() {
        let last = *s.last().expect("nonempty");
        if s.len() < max_size {
            for j in last + 1..n {
                if s.iter().all(|&i| ok(i, j)) {
                    let mut t = s.clone();
                    t.push(j);
                    stack.push(t);
                }
            }
        }
        out.push(s);
    }
    out.sort();
    out
}

/// Permutations of the vertices preserving the Gram matrix.
pub fn diagram_automorphisms(d: &CoxeterDiagram) -> Vec<Vec<usize>> {
    let n = d.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(d: &CoxeterDiagram, k: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = d.len();
        if k == n {
            out.push(perm.clone());
            return;
        }
        for img in 0..n {
            if used[img] || (0..k).any(|i| d.gram[i][k] != d.gram[perm[i]][img]) || d.gram[k][k] != d.gram[img][img] {
                continue;
            }
            perm[k] = img;
            used[img] = true;
            go(d, k + 1, perm, used, out);
            used[img] = false;
        }
        perm[k] = usize::MAX;
    }
    go(d, 0, &mut perm, &mut used, &mut out);
    out
}

/// Canonical key of a subset modulo translations and the dihedral group of the square.
fn plane_key(coords: &[(i64, i64)], set: &[usize]) -> Vec<(i64, i64)> {
    let maps: [fn(i64, i64) -> (i64, i64); 8] = [
        |a, b| (a, b),
        |a, b| (-b, a),
        |a, b| (-a, -b),
        |a, b| (b, -a),
        |a, b| (b, a),
        |a, b| (-a, b),
        |a, b| (a, -b),
        |a, b| (-b, -a),
    ];
    maps.iter()
        .map(|f| {
            let pts: Vec<(i64, i64)> = set.iter().map(|&i| f(coords[i].0, coords[i].1)).collect();
            let ma = pts.iter().map(|p| p.0).min().expect("nonempty");
            let mb = pts.iter().map(|p| p.1).min().expect("nonempty");
            let mut t: Vec<(i64, i64)> = pts.iter().map(|p| (p.0 - ma, p.1 - mb)).collect();
            t.sort();
            t
        })
        .min()
        .expect("eight maps")
}

/// Elliptic and maximal parabolic subdiagrams (nonempty) up to symmetry:
/// diagram automorphisms for a finite diagram, plane symmetries of ℤ² for
/// the closed-form odd1 window.
pub fn classify_subdiagrams(d: &CoxeterDiagram, lattice_rank: usize) -> Result<Vec<SubdiagramClass>, VinbergError> {
    let max_size = 2 * lattice_rank;
    let mut classes: BTreeMap<(SubdiagramKind, usize, String, Vec<i64>), Vec<usize>> = BTreeMap::new();
    let autos = if d.coords.is_none() { diagram_automorphisms(d) } else { Vec::new() };
    if let Some(coords) = &d.coords {
        let (amin, amax) = (coords.iter().map(|c| c.0).min(), coords.iter().map(|c| c.0).max());
        let (bmin, bmax) = (coords.iter().map(|c| c.1).min(), coords.iter().map(|c| c.1).max());
        let wide = |lo: Option<i64>, hi: Option<i64>| matches!((lo, hi), (Some(l), Some(h)) if h - l >= 1);
        if !wide(amin, amax) || !wide(bmin, bmax) {
            return Err(VinbergError::WindowTooSmall("the window must contain a 2×2 block of vertices".into()));
        }
    }
    for set in candidate_subsets(d, max_size) {
        let Some((kind, rank, name)) = kind_of(d, &set, lattice_rank) else { continue };
        let key: Vec<i64> = match &d.coords {
            Some(coords) => plane_key(coords, &set).into_iter().flat_map(|(a, b)| [a, b]).collect(),
            None => autos
                .iter()
                .map(|p| {
                    let mut t: Vec<i64> = set.iter().map(|&i| p[i] as i64).collect();
                    t.sort();
                    t
                })
                .min()
                .expect("identity"),
        };
        classes.entry((kind, rank, name, key)).or_insert(set);
    }
    Ok(classes
        .into_iter()
        .map(|((kind, rank, name, _), rep)| SubdiagramClass {
            kind,
            rank,
            name,
            labels: rep.iter().map(|&i| d.labels[i].clone()).collect(),
            representative: rep,
        })
        .collect())
}

/// Every elliptic subdiagram of rank `lattice_rank − 2` lies in exactly two
/// subdiagrams that are elliptic of rank `lattice_rank − 1` or maximal
/// parabolic. The empty diagram passes vacuously.
pub fn finite_volume_check(d: &CoxeterDiagram, lattice_rank: usize) -> bool {
    if d.is_empty() {
        return true;
    }
    if lattice_rank < 3 {
        return false;
    }
    let m = lattice_rank - 2;
    let kinds: Vec<(Vec<usize>, SubdiagramKind, usize)> = candidate_subsets(d, 2 * lattice_rank)
        .into_iter()
        .filter_map(|s| kind_of(d, &s, lattice_rank).map(|(k, r, _)| (s, k, r)))
        .collect();
    let bases: Vec<&Vec<usize>> =
        kinds.iter().filter(|(_, k, r)| *k == SubdiagramKind::Elliptic && *r == m).map(|(s, _, _)| s).collect();
    if bases.is_empty() {
        return false;
    }
    bases.iter().all(|s| {
        let count = kinds
            .iter()
            .filter(|(t, k, r)| {
                let grows = match k {
                    SubdiagramKind::Elliptic => *r == m + 1,
                    SubdiagramKind::MaximalParabolic => true,
                };
                grows && s.iter().all(|i| t.contains(i))
            })
            .count();
        count == 2
    })
}
