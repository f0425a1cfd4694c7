//! Affine coordinates of cube vertices relative to affinely independent
//! quadruples, precomputed once.

use num_traits::{One, Zero};
use std::sync::OnceLock;

use crate::cube_geometry::{affine_dim, vertex, LatticePoint};
use crate::exact_kernel::{int, Rational};

pub(crate) struct Frame {
    pub base: [usize; 4],
    pub base_mask: u8,
    /// `coords[w]` expresses vertex w as an affine combination of `base`.
    pub coords: Vec<[Rational; 4]>,
}

pub(crate) fn frames() -> &'static [Frame] {
    static F: OnceLock<Vec<Frame>> = OnceLock::new();
    F.get_or_init(|| {
        let mut out = Vec::new();
        for a in 0..8 {
            for b in a + 1..8 {
                for c in b + 1..8 {
                    for d in c + 1..8 {
                        let base = [a, b, c, d];
                        let pts: Vec<LatticePoint> = base.iter().map(|&i| vertex(i)).collect();
                        if affine_dim(&pts) < 3 {
                            continue;
                        }
                        let coords = (0..8).map(|w| affine_coords(&pts, &vertex(w))).collect();
                        out.push(Frame {
                            base,
                            base_mask: base.iter().fold(0, |m, &i| m | 1 << i),
                            coords,
                        });
                    }
                }
            }
        }
        out
    })
}

/// First frame (in index order) whose base lies inside `mask`.
pub(crate) fn frame_in(mask: u8) -> &'static Frame {
    frames()
        .iter()
        .find(|f| f.base_mask & !mask == 0)
        .expect("full-dimensional vertex set has a frame")
}

/// Solves `sum l_i base_i = w`, `sum l_i = 1` exactly.
pub(crate) fn affine_coords(base: &[LatticePoint], w: &LatticePoint) -> [Rational; 4] {
    let mut m: Vec<Vec<Rational>> = (0..4)
        .map(|r| {
            let mut row: Vec<Rational> = (0..4)
                .map(|j| if r < 3 { int(base[j][r]) } else { Rational::one() })
                .collect();
            row.push(if r < 3 { int(w[r]) } else { Rational::one() });
            row
        })
        .collect();
    for col in 0..4 {
        let p = (col..4).find(|&r| !m[r][col].is_zero()).expect("independent base");
        m.swap(col, p);
        let piv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &piv;
        }
        for r in 0..4 {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..5 {
                    let v = &f * &m[col][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    [m[0][4].clone(), m[1][4].clone(), m[2][4].clone(), m[3][4].clone()]
}
