//! Oracles shared by the integration tests.
#![allow(dead_code)]

use cubestrata::cube_geometry::vertex;
use cubestrata::exact_kernel::{int, Rational};
use cubestrata::subdivisions::Subdivision;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `a + b√d` with `d` fixed per computation and not a rational square.
#[derive(Clone, Debug)]
struct Q2 {
    a: Rational,
    b: Rational,
}

struct Field {
    d: Rational,
}

impl Field {
    fn rat(&self, a: Rational) -> Q2 {
        Q2 { a, b: Rational::zero() }
    }
    fn add(&self, x: &Q2, y: &Q2) -> Q2 {
        Q2 { a: &x.a + &y.a, b: &x.b + &y.b }
    }
    fn sub(&self, x: &Q2, y: &Q2) -> Q2 {
        Q2 { a: &x.a - &y.a, b: &x.b - &y.b }
    }
    fn mul(&self, x: &Q2, y: &Q2) -> Q2 {
        Q2 { a: &x.a * &y.a + &x.b * &y.b * &self.d, b: &x.a * &y.b + &x.b * &y.a }
    }
    fn is_zero(x: &Q2) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
}

fn rational_square_root(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Whether `Σ c_ijk x_i y_j z_k = 0` is singular in (P¹)³, by solving the
/// critical equations directly. Slices along each axis in turn; `None` when
/// the slice pencil's determinant vanishes identically for all three.
pub fn singular_by_critical_points(c: &[Rational; 8]) -> Option<bool> {
    (0..3).find_map(|axis| {
        // move `axis` to the front; the other two keep their order
        let bits = [2 - axis, (0..3).rev().find(|&b| b != 2 - axis).unwrap(), (0..3).find(|&b| b != 2 - axis).unwrap()];
        let t: [Rational; 8] = std::array::from_fn(|v| {
            let src = (0..3).fold(0, |acc, k| acc | (((v >> (2 - k)) & 1) << bits[k]));
            c[src].clone()
        });
        singular_along_first_axis(&t)
    })
}

/// With `M(x) = x₀C₀ + x₁C₁` and `F = uᵀM(x)v`, a critical point needs
/// `M(x)v = 0`, `uᵀM(x) = 0` and `uᵀC_i v = 0`, so `x` is a root of the
/// binary quadratic `det M(x)`; those roots live in ℚ(√D).
fn singular_along_first_axis(c: &[Rational; 8]) -> Option<bool> {
    let slice = |i: usize| [[c[4 * i].clone(), c[4 * i + 1].clone()], [c[4 * i + 2].clone(), c[4 * i + 3].clone()]];
    let (c0, c1) = (slice(0), slice(1));
    let det = |m: &[[Rational; 2]; 2]| &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let alpha = det(&c0);
    let gamma = det(&c1);
    let beta = &c0[0][0] * &c1[1][1] + &c1[0][0] * &c0[1][1] - &c0[0][1] * &c1[1][0] - &c1[0][1] * &c0[1][0];
    if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
        return None;
    }
    let disc = &beta * &beta - Rational::from_integer(BigInt::from(4)) * &alpha * &gamma;
    let (field, roots): (Field, Vec<[Q2; 2]>) = if alpha.is_zero() {
        let f = Field { d: Rational::zero() };
        let mut r = vec![[f.rat(Rational::from_integer(1.into())), f.rat(Rational::zero())]];
        if !beta.is_zero() {
            r.push([f.rat(-gamma.clone()), f.rat(beta.clone())]);
        }
        (f, r)
    } else {
        let two_a = Rational::from_integer(2.into()) * &alpha;
        let one = Q2 { a: Rational::from_integer(1.into()), b: Rational::zero() };
        match rational_square_root(&disc) {
            Some(s) => {
                let f = Field { d: Rational::zero() };
                let r = [&s, &-s.clone()]
                    .iter()
                    .map(|s| [f.rat((-&beta + *s) / &two_a), one.clone()])
                    .collect();
                (f, r)
            }
            None => {
                let f = Field { d: disc.clone() };
                let base = -&beta / &two_a;
                let r = [1, -1]
                    .iter()
                    .map(|&sg| [Q2 { a: base.clone(), b: Rational::from_integer(sg.into()) / &two_a }, one.clone()])
                    .collect();
                (f, r)
            }
        }
    };
    let lift = |m: &[[Rational; 2]; 2]| m.clone().map(|row| row.map(|x| field.rat(x)));
    let (k0, k1) = (lift(&c0), lift(&c1));
    for [x0, x1] in roots {
        let m: [[Q2; 2]; 2] = std::array::from_fn(|j| {
            std::array::from_fn(|k| field.add(&field.mul(&x0, &k0[j][k]), &field.mul(&x1, &k1[j][k])))
        });
        if m.iter().flatten().all(Field::is_zero) {
            // two bilinear conditions in (u, v) always have a common solution over the closure
            return Some(true);
        }
        let neg = |x: &Q2| field.sub(&field.rat(Rational::zero()), x);
        let v = if !Field::is_zero(&m[0][0]) || !Field::is_zero(&m[0][1]) {
            [m[0][1].clone(), neg(&m[0][0])]
        } else {
            [m[1][1].clone(), neg(&m[1][0])]
        };
        let u = if !Field::is_zero(&m[0][0]) || !Field::is_zero(&m[1][0]) {
            [m[1][0].clone(), neg(&m[0][0])]
        } else {
            [m[1][1].clone(), neg(&m[0][1])]
        };
        let form = |k: &[[Q2; 2]; 2]| {
            let mut s = field.rat(Rational::zero());
            for j in 0..2 {
                for l in 0..2 {
                    s = field.add(&s, &field.mul(&field.mul(&u[j], &k[j][l]), &v[l]));
                }
            }
            s
        };
        if Field::is_zero(&form(&k0)) && Field::is_zero(&form(&k1)) {
            return Some(true);
        }
    }
    Some(false)
}

/// Applies the 2×2 matrix `m` to tensor index `axis` (0 = x).
pub fn act(t: &[i64; 8], axis: usize, m: [i64; 4]) -> [i64; 8] {
    let bit = 2 - axis;
    std::array::from_fn(|v| {
        let i = (v >> bit) & 1;
        let base = v & !(1 << bit);
        m[2 * i] * t[base] + m[2 * i + 1] * t[base | (1 << bit)]
    })
}

/// Rank over ℚ by plain elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{λ : Σ λ_i r_i = 0}` for the given rows r_i.
pub fn relations(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let k = points.len();
    let d = points[0].len();
    // columns are points; reduce the d × k matrix
    let mut m: Vec<Vec<Rational>> = (0..d).map(|a| points.iter().map(|p| p[a].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..d).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..k)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); k];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// 8 − dim E: h is affine on a cell iff it annihilates every affine
/// relation among the cell's vertices.
pub fn dimension_oracle(s: &Subdivision) -> usize {
    let mut rows = Vec::new();
    for c in s.cells() {
        let idx = c.indices();
        let pts: Vec<Vec<Rational>> =
            idx.iter().map(|&v| std::iter::once(int(1)).chain(vertex(v).iter().map(|&x| int(x))).collect()).collect();
        for lam in relations(&pts) {
            let mut row = vec![Rational::zero(); 8];
            for (&v, l) in idx.iter().zip(lam) {
                row[v] = l;
            }
            rows.push(row);
        }
    }
    rank(rows)
}
