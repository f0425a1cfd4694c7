use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{IntMatrix, KernelError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Sylvester signature by congruence diagonalization over Q.
pub fn signature(g: &IntMatrix) -> Result<Signature, KernelError> {
    if !g.is_symmetric() {
        return Err(KernelError::NotSymmetric);
    }
    let n = g.rows();
    let mut a: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| Rational::from_integer(g[(i, j)].clone())).collect()).collect();
    let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
    let mut live: Vec<usize> = (0..n).collect();
    while !live.is_empty() {
        let pivot = live.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // zero diagonal: replace e_i by e_i + e_j to create a pivot
                let pair = live.iter().copied().find_map(|i| {
                    live.iter().copied().find(|&j| j != i && !a[i][j].is_zero()).map(|j| (i, j))
                });
                let Some((i, j)) = pair else {
                    sig.zero += live.len();
                    break;
                };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        live.retain(|&k| k != p);
        for &i in &live {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &d;
            for &j in &live {
                let v = &f * &a[p][j];
                a[i][j] -= v;
            }
        }
        for &i in &live {
            a[i][p] = Rational::zero();
            a[p][i] = Rational::zero();
        }
    }
    Ok(sig)
}
