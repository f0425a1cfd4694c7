//! Corner cuts and the bullet map, combinatorially and on heights.

use serde::Serialize;
use thiserror::Error;

use crate::cube_geometry::{corner_cut_at, vertex_label, MarkedCell};
use crate::exact_kernel::Rational;
use crate::subdivisions::{extend, frame_in, from_heights, is_regular, HeightFunction, Subdivision, SubdivisionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CornerCutError {
    #[error("subdivision is not regular")]
    NotRegular,
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CornerCut {
    pub cell: MarkedCell,
    pub apex: usize,
    /// The unique cell across the facet opposite the apex.
    pub neighbor: MarkedCell,
}

pub fn corner_apex(c: MarkedCell) -> Option<usize> {
    (0..8).find(|&a| c == corner_cut_at(a))
}

/// Corner cuts in canonical cell order.
pub fn detect(s: &Subdivision) -> Vec<CornerCut> {
    let mut out = Vec::new();
    for &c in s.cells() {
        let Some(apex) = corner_apex(c) else { continue };
        let base = c.mask() & !(1 << apex);
        let neighbor = s
            .cells()
            .iter()
            .copied()
            .find(|d| *d != c && d.mask() & base == base)
            .expect("the base triangle of a corner cut is interior to the cube");
        out.push(CornerCut { cell: c, apex, neighbor });
    }
    out
}

pub fn delta_cartier(s: &Subdivision) -> bool {
    detect(s).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightModification {
    pub heights: HeightFunction,
    /// (apex, q_m) in the order the drops were applied.
    pub drops: Vec<(usize, Rational)>,
}

impl HeightModification {
    pub fn to_json(&self) -> serde_json::Value {
        let drops: Vec<serde_json::Value> = self
            .drops
            .iter()
            .map(|(m, q)| serde_json::json!({ "apex": vertex_label(*m), "q": q.to_string() }))
            .collect();
        serde_json::json!({ "heights": self.heights.to_json()["heights"], "drops": drops })
    }
}

/// h•: lower each apex onto the affine function of its neighbor cell,
/// one corner cut at a time, until none remain.
pub fn modify_heights(h: &HeightFunction) -> HeightModification {
    modify_heights_with(h, |_| 0)
}

/// As [`modify_heights`], with `pick` choosing which detected cut to resolve.
pub fn modify_heights_with(h: &HeightFunction, pick: impl Fn(&[CornerCut]) -> usize) -> HeightModification {
    let mut h = h.clone();
    let mut drops = Vec::new();
    loop {
        let s = from_heights(&h);
        let cuts = detect(&s);
        if cuts.is_empty() {
            return HeightModification { heights: h, drops };
        }
        let cut = cuts[pick(&cuts)];
        let l = extend(&h, frame_in(cut.neighbor.mask()), cut.apex);
        let q = h.get(cut.apex) - &l;
        assert!(q > Rational::from_integer(0.into()), "apex of a corner cut lies strictly above the neighbor plane");
        h.set(cut.apex, l);
        drops.push((cut.apex, q));
    }
}

/// The bullet map s -> s•, realized through an exact regularity witness.
pub fn modify(s: &Subdivision) -> Result<Subdivision, CornerCutError> {
    modify_with(s, |_| 0)
}

pub fn modify_with(s: &Subdivision, pick: impl Fn(&[CornerCut]) -> usize) -> Result<Subdivision, CornerCutError> {
    if detect(s).is_empty() {
        return Ok(s.clone());
    }
    let reg = is_regular(s)?;
    let h = reg.witness.ok_or(CornerCutError::NotRegular)?;
    Ok(from_heights(&modify_heights_with(&h, pick).heights))
}
