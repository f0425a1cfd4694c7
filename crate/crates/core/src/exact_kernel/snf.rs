use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    /// Nonzero invariant factors d1 | d2 | ... | dr, all positive.
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// `u * m * v == d` with `u`, `v` unimodular; `v_inv` is the inverse of `v`.
#[derive(Debug, Clone)]
pub struct SmithTransforms {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    smith_with_transforms(m).0
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
        self.v_inv.add_row(src, dst, &-q);
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        self.u.negate_row(r);
    }
}

pub fn smith_with_transforms(m: &IntMatrix) -> (Smith, SmithTransforms) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.d[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < w.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.d[(i, t)].is_zero() {
                    let q = &w.d[(i, t)] / &w.d[(t, t)];
                    w.add_row(i, t, &-q);
                    if !w.d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.d[(t, j)].is_zero() {
                    let q = &w.d[(t, j)] / &w.d[(t, t)];
                    w.add_col(j, t, &-q);
                    if !w.d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; move it up
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = &w.d[(i, t)];
                    if !x.is_zero() && x.abs() < w.d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = &w.d[(t, j)];
                    if !x.is_zero() && x.abs() < w.d[best].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let p = w.d[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.d[(i, j)] % &p).is_zero()));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.d[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let factors: Vec<BigInt> = (0..t).map(|i| w.d[(i, i)].clone()).collect();
    let smith = Smith { rank: factors.len(), factors };
    (smith, SmithTransforms { u: w.u, v: w.v, v_inv: w.v_inv, d: w.d })
}

/// Basis (as rows) of the saturation in Z^n of the row lattice of `m`.
pub fn saturate_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (s, tr) = smith_with_transforms(m);
    (0..s.rank).map(|i| tr.v_inv.row(i).to_vec()).collect()
}
