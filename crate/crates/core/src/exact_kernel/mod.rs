//! Exact arithmetic: rationals, integer matrices, Smith normal form,
//! symmetric signatures and strict-inequality feasibility.

mod lp;
mod matrix;
mod signature;
mod snf;

pub use lp::{lp_feasible, LinearSystem, LpOutcome};
pub use matrix::IntMatrix;
pub use signature::{signature, Signature};
pub use snf::{saturate_rows, smith_normal_form, smith_with_transforms, Smith, SmithTransforms};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Accepts `p`, `p/q` and surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rational, KernelError> {
    let bad = || KernelError::BadRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `p/q` for non-integers, `p` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn floor_sqrt(n: &BigInt) -> BigInt {
    if n.is_negative() || n.is_zero() {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = floor_sqrt(n);
    let sd = floor_sqrt(d);
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Rank over Q by Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &piv;
            for j in c..cols {
                let v = &f * &rows[rank][j];
                rows[r][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}
