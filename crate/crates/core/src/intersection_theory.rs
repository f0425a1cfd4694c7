//! Divisor classes with ε-affine coefficients on P², P¹×P¹, F₁ and Bl₃P².

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_kernel::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("classes live on different surfaces: {0} and {1}")]
    LatticeMismatch(Surface, Surface),
    #[error("unknown surface {0:?}")]
    UnknownLattice(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Surface {
    P2,
    P1xP1,
    F1,
    Bl3P2,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Surface::P2 => "P2",
            Surface::P1xP1 => "P1xP1",
            Surface::F1 => "F1",
            Surface::Bl3P2 => "Bl3P2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Surface {
    type Err = IntersectionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P2" => Ok(Surface::P2),
            "P1xP1" => Ok(Surface::P1xP1),
            "F1" => Ok(Surface::F1),
            "Bl3P2" => Ok(Surface::Bl3P2),
            _ => Err(IntersectionError::UnknownLattice(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicLattice {
    pub surface: Surface,
    pub labels: Vec<&'static str>,
    pub matrix: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
}

impl PicLattice {
    pub fn of(surface: Surface) -> Self {
        let (labels, matrix, canonical) = match surface {
            Surface::P2 => (vec!["l"], vec![vec![1]], vec![-3]),
            Surface::P1xP1 => (vec!["l1", "l2"], vec![vec![0, 1], vec![1, 0]], vec![-2, -2]),
            // h a section with h² = 1, f a fiber
            Surface::F1 => (vec!["h", "f"], vec![vec![1, 1], vec![1, 0]], vec![-2, -1]),
            Surface::Bl3P2 => (
                vec!["l", "e1", "e2", "e3"],
                vec![vec![1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]],
                vec![-3, 1, 1, 1],
            ),
        };
        PicLattice { surface, labels, matrix, canonical }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn canonical_class(&self) -> EpsClass {
        EpsClass::fixed(self.surface, &self.canonical)
    }

    /// Curves whose positive pairing characterizes ampleness.
    fn test_curves(&self) -> Vec<Vec<i64>> {
        match self.surface {
            Surface::P2 => vec![vec![1]],
            Surface::P1xP1 => vec![vec![1, 0], vec![0, 1]],
            Surface::F1 => vec![vec![0, 1], vec![1, -1]],
            Surface::Bl3P2 => vec![
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, -1, -1, 0],
                vec![1, -1, 0, -1],
                vec![1, 0, -1, -1],
            ],
        }
    }
}

/// `c[0] + c[1] ε + c[2] ε²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsPoly {
    pub c: [Rational; 3],
}

impl EpsPoly {
    pub fn constant(&self) -> &Rational {
        &self.c[0]
    }

    pub fn is_constant(&self, v: &Rational) -> bool {
        self.c[0] == *v && self.c[1].is_zero() && self.c[2].is_zero()
    }

    /// Sign for all sufficiently small ε > 0.
    pub fn positive_near_zero(&self) -> bool {
        self.c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => v.to_string(),
                1 => format!("{v}*eps"),
                _ => format!("{v}*eps^2"),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A class `a + b ε` with `a`, `b` rational vectors in the Picard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsClass {
    pub surface: Surface,
    pub coefficients: Vec<(Rational, Rational)>,
}

impl EpsClass {
    pub fn new(surface: Surface, constant: Vec<Rational>, eps: Vec<Rational>) -> Self {
        EpsClass { surface, coefficients: constant.into_iter().zip(eps).collect() }
    }

    pub fn fixed(surface: Surface, v: &[i64]) -> Self {
        EpsClass {
            surface,
            coefficients: v.iter().map(|&x| (Rational::from_integer(x.into()), Rational::zero())).collect(),
        }
    }

    /// `ε · v`.
    pub fn eps_times(surface: Surface, v: &[i64]) -> Self {
        EpsClass {
            surface,
            coefficients: v.iter().map(|&x| (Rational::zero(), Rational::from_integer(x.into()))).collect(),
        }
    }

    pub fn add(&self, other: &EpsClass) -> Result<EpsClass, IntersectionError> {
        self.same(other)?;
        let coefficients =
            self.coefficients.iter().zip(&other.coefficients).map(|((a, b), (c, d))| (a + c, b + d)).collect();
        Ok(EpsClass { surface: self.surface, coefficients })
    }

    pub fn scale(&self, t: &Rational) -> EpsClass {
        EpsClass { surface: self.surface, coefficients: self.coefficients.iter().map(|(a, b)| (a * t, b * t)).collect() }
    }

    /// `((1+ε)/2) · self` for a class without ε-part.
    pub fn half_one_plus_eps(&self) -> EpsClass {
        let half = Rational::new(1.into(), 2.into());
        EpsClass {
            surface: self.surface,
            coefficients: self.coefficients.iter().map(|(a, _)| (a * &half, a * &half)).collect(),
        }
    }

    fn same(&self, other: &EpsClass) -> Result<(), IntersectionError> {
        if self.surface != other.surface {
            return Err(IntersectionError::LatticeMismatch(self.surface, other.surface));
        }
        Ok(())
    }
}

pub fn intersect(x: &EpsClass, y: &EpsClass) -> Result<EpsPoly, IntersectionError> {
    x.same(y)?;
    let m = PicLattice::of(x.surface).matrix;
    let mut c: [Rational; 3] = Default::default();
    for (i, (a, b)) in x.coefficients.iter().enumerate() {
        for (j, (p, q)) in y.coefficients.iter().enumerate() {
            if m[i][j] == 0 {
                continue;
            }
            let g = Rational::from_integer(m[i][j].into());
            c[0] += a * p * &g;
            c[1] += (a * q + b * p) * &g;
            c[2] += b * q * &g;
        }
    }
    Ok(EpsPoly { c })
}

/// `group_order · (K + ½(Da + Db + Dc))²` for a bidouble cover branched on the Dᵢ.
pub fn cover_canonical_square(
    l: &PicLattice,
    da: &EpsClass,
    db: &EpsClass,
    dc: &EpsClass,
    group_order: i64,
) -> Result<Rational, IntersectionError> {
    let k = l.canonical_class();
    let half = Rational::new(1.into(), 2.into());
    let d = da.add(db)?.add(dc)?.scale(&half);
    let e = k.add(&d)?;
    let sq = intersect(&e, &e)?;
    Ok(Rational::from_integer(group_order.into()) * sq.constant())
}

/// Ample for every sufficiently small rational ε > 0.
pub fn ampleness_witness(x: &EpsClass) -> bool {
    let l = PicLattice::of(x.surface);
    l.test_curves().iter().all(|c| {
        let curve = EpsClass::fixed(x.surface, c);
        intersect(x, &curve).expect("same surface").positive_near_zero()
    })
}

/// Ampleness for a surface given by name.
pub fn ampleness_witness_named(surface: &str, constant: Vec<Rational>, eps: Vec<Rational>) -> Result<bool, IntersectionError> {
    let s: Surface = surface.parse()?;
    Ok(ampleness_witness(&EpsClass::new(s, constant, eps)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub value: String,
    pub expected: String,
    pub ok: bool,
}

/// The cover invariants and the ε² identity, as a report.
pub fn invariants_report() -> Vec<Invariant> {
    use Surface::*;
    let r = |n: i64| Rational::from_integer(n.into());
    let cover = |s: Surface, d: [&[i64]; 3], expected: i64, name: &str| {
        let l = PicLattice::of(s);
        let v = cover_canonical_square(&l, &EpsClass::fixed(s, d[0]), &EpsClass::fixed(s, d[1]), &EpsClass::fixed(s, d[2]), 4)
            .expect("same surface");
        Invariant { name: name.into(), value: v.to_string(), expected: expected.to_string(), ok: v == r(expected) }
    };
    let mut out = vec![
        cover(F1, [&[1, 2], &[1, 0], &[1, 0]], 1, "K_X^2 over F1, branch (h+2f, h, h)"),
        cover(P1xP1, [&[1, 1], &[1, 1], &[1, 1]], 2, "K_X^2 over P1xP1, branch ((1,1), (1,1), (1,1))"),
        cover(P2, [&[2], &[2], &[0]], 4, "K_X^2 over P2, branch (2l, 2l, 0)"),
        cover(P1xP1, [&[2, 1], &[0, 1], &[0, 1]], 4, "K_X^2 over P1xP1, branch ((2,1), (0,1), (0,1))"),
    ];
    let delta = EpsClass::fixed(Bl3P2, &[6, -2, -2, -2]);
    let k = PicLattice::of(Bl3P2).canonical_class();
    let e = k.add(&delta.half_one_plus_eps()).expect("same surface");
    let sq = intersect(&e, &e).expect("same surface");
    let want = EpsPoly { c: [r(0), r(0), r(6)] };
    out.push(Invariant { name: "(K + (1+eps)/2 Delta)^2 on Bl3P2".into(), value: sq.to_string(), expected: want.to_string(), ok: sq == want });
    out
}
