//! The acceptance checks as one report.

use std::collections::BTreeSet;
use std::time::Instant;

use cubestrata::cell_classifier::{cell_type, hyperdeterminant_222, CoefficientAssignment};
use cubestrata::corner_cuts::{detect, modify, modify_heights};
use cubestrata::cube_geometry::SymQElement;
use cubestrata::exact_kernel::Rational;
use cubestrata::intersection_theory::invariants_report;
use cubestrata::strata_atlas::{boundary_atlas, crosscheck_even, crosscheck_odd1, maximal_components};
use cubestrata::subdivisions::{
    bottom_up_subdivisions, enumerate_all, from_heights, is_regular, stratum_dimension, top_down_subdivisions,
    HeightFunction, Subdivision,
};
use cubestrata::torus_cohomology::{h1_torus, reduce_and_verdict, ReductionVerdict};
use cubestrata::vinberg::{
    alpha, classify_subdiagrams, roots_at_height, vinberg_run, vinberg_run_exhaustive, CoxeterDiagram, Edge,
    GramLattice,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub criteria: Vec<Criterion>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub bullet_samples: usize,
    pub hyperdet_samples: usize,
    pub odd1_window: i64,
    pub odd2_bound: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { bullet_samples: 500, hyperdet_samples: 1000, odd1_window: 6, odd2_bound: 20 }
    }
}

type Check = fn(&Bounds, &mut ChaCha8Rng) -> (bool, String);

pub fn run(seed: u64, bounds: &Bounds) -> Report {
    let checks: [(&'static str, Check); 12] = [
        ("regularity", regularity),
        ("secondary dimension", secondary_dimension),
        ("bullet map", bullet_map),
        ("torus H1", torus_h1),
        ("cell census", cell_census),
        ("numeric invariants", numeric_invariants),
        ("odd1 Vinberg", odd1_vinberg),
        ("odd2 cusp", odd2_cusp),
        ("bijection cross-checks", crosschecks),
        ("component census", component_census),
        ("hyperdeterminant", hyperdeterminant),
        ("even Vinberg stability", even_stability),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let criteria: Vec<Criterion> = checks
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let t = Instant::now();
            let (pass, detail) = f(bounds, &mut rng);
            Criterion { id: i + 1, name, pass, detail, millis: t.elapsed().as_millis() }
        })
        .collect();
    let all_pass = criteria.iter().all(|c| c.pass);
    Report { seed, criteria, all_pass }
}

fn regularity(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let all = enumerate_all();
    let regular = all
        .par_iter()
        .filter(|s| is_regular(s).ok().and_then(|r| r.witness).is_some_and(|h| from_heights(&h) == **s))
        .count();
    let top: BTreeSet<Subdivision> = top_down_subdivisions().into_iter().collect();
    let bottom: BTreeSet<Subdivision> = bottom_up_subdivisions().into_iter().collect();
    let tri = all.iter().filter(|s| s.is_triangulation()).count();
    let pass = regular == all.len() && top == bottom && top.len() == all.len();
    (pass, format!("{} subdivisions ({tri} triangulations), {regular} with exact witnesses, strategies agree: {}", all.len(), top == bottom))
}

fn secondary_dimension(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let all = enumerate_all();
    let q = stratum_dimension(&Subdivision::trivial()).ok();
    let tri_zero = all.iter().filter(|s| s.is_triangulation()).all(|s| stratum_dimension(s) == Ok(0));
    let invariant = all.par_iter().all(|s| {
        let d = stratum_dimension(s).ok();
        SymQElement::all().iter().all(|g| stratum_dimension(&s.apply(g)).ok() == d)
    });
    let pass = q == Some(4) && tri_zero && invariant;
    (pass, format!("dim {{Q}} = {q:?}, triangulations all 0: {tri_zero}, orbit-invariant: {invariant}"))
}

fn random_heights(rng: &mut ChaCha8Rng) -> HeightFunction {
    HeightFunction::from_integers(std::array::from_fn(|_| rng.gen_range(-5..=5)))
}

fn bullet_map(b: &Bounds, rng: &mut ChaCha8Rng) -> (bool, String) {
    let samples: Vec<HeightFunction> = (0..b.bullet_samples).map(|_| random_heights(rng)).collect();
    let bad = samples
        .par_iter()
        .filter(|h| {
            let s = from_heights(h);
            let via_heights = from_heights(&modify_heights(h).heights);
            let Ok(m) = modify(&s) else { return true };
            via_heights != m || modify(&m).as_ref() != Ok(&m) || !detect(&m).is_empty() || m.total_volume() != 6
        })
        .count();
    let all_ok = enumerate_all().par_iter().all(|s| {
        modify(s).is_ok_and(|m| detect(&m).is_empty() && m.total_volume() == 6 && modify(&m).as_ref() == Ok(&m))
    });
    (bad == 0 && all_ok, format!("{} random height functions, {bad} failures; all enumerated: {all_ok}", samples.len()))
}

fn torus_h1(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let all = enumerate_all();
    let snf = all.par_iter().filter(|s| h1_torus(s).is_trivial()).count();
    let red = all.par_iter().filter(|s| reduce_and_verdict(s) == ReductionVerdict::TrivialByReduction).count();
    (snf == all.len() && red == all.len(), format!("H1 = 0 for {snf}/{n}, trivial by reduction for {red}/{n}", n = all.len()))
}

fn cell_census(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let allowed = [(4, 1), (5, 2), (6, 3), (8, 6)];
    let mut errors = 0;
    let mut cells = 0;
    let mut seen = BTreeSet::new();
    for s in enumerate_all() {
        let Ok(m) = modify(s) else {
            errors += 1;
            continue;
        };
        for &c in m.cells() {
            cells += 1;
            let sig = (c.len(), c.volume());
            if cell_type(c).is_err() || !allowed.contains(&sig) {
                errors += 1;
            } else {
                seen.insert(sig);
            }
        }
    }
    (errors == 0, format!("{cells} cells, {errors} errors, signatures {seen:?}"))
}

fn numeric_invariants(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let r = invariants_report();
    let values: Vec<String> = r.iter().map(|i| i.value.clone()).collect();
    (r.iter().all(|i| i.ok), values.join(", "))
}

fn odd1_vinberg(b: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let l = GramLattice::odd1();
    let v0 = l.default_v0();
    let w = b.odd1_window;
    let Ok(step1) = roots_at_height(&l, &v0, 1, Some(w)) else { return (false, "height 1 search failed".into()) };
    let expected: BTreeSet<Vec<i64>> = (-w..=w).flat_map(|a| (-w..=w).map(move |c| alpha(a, c))).collect();
    let roots_match = step1.iter().cloned().collect::<BTreeSet<_>>() == expected;
    let d = CoxeterDiagram::odd1_window(w);
    let coords = d.coords.clone().unwrap_or_default();
    let gram_ok = coords.iter().all(|&(a, b1)| {
        coords.iter().all(|&(c, e)| l.dot(&alpha(a, b1), &alpha(c, e)) == -1 + (a - c).pow(2) + (b1 - e).pow(2))
    });
    let edges_ok = (0..d.len()).all(|i| {
        (0..d.len()).filter(|&j| j != i).all(|j| {
            let dist = (coords[i].0 - coords[j].0).pow(2) + (coords[i].1 - coords[j].1).pow(2);
            match d.edge(i, j) {
                Edge::None => dist == 1,
                Edge::Infinity => dist == 2,
                Edge::Dotted(k) => dist >= 3 && k == dist - 1,
            }
        })
    });
    let run = vinberg_run_exhaustive(&l, &v0, 10, Some(w));
    let late = run.as_ref().map(|r| r.accepted.iter().filter(|a| a.height >= 2).count()).ok();
    let pass = roots_match && gram_ok && edges_ok && late == Some(0);
    (
        pass,
        format!("{} height-1 roots in window {w}, Gram rule {gram_ok}, edge rules {edges_ok}, acceptances at heights 2..10: {late:?}", step1.len()),
    )
}

fn odd2_cusp(b: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let l = GramLattice::odd2();
    let n = b.odd2_bound;
    let found = (-n..=n)
        .into_par_iter()
        .map(|x0| {
            let mut c = 0usize;
            for x1 in -n..=n {
                for x2 in -n..=n {
                    for x3 in -n..=n {
                        if l.dot(&[x0, x1, x2, x3], &[x0, x1, x2, x3]) == -1 {
                            c += 1;
                        }
                    }
                }
            }
            c
        })
        .sum::<usize>();
    let parity = l.is_even();
    let run_empty = vinberg_run(&l, &l.default_v0(), 10, Some(n)).is_ok_and(|r| r.accepted.is_empty());
    (found == 0 && parity && run_empty, format!("{found} norm -1 vectors with |x_i| <= {n}, even lattice: {parity}, run empty: {run_empty}"))
}

fn crosschecks(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let atlas = boundary_atlas();
    let l = GramLattice::even();
    let Ok(run) = vinberg_run(&l, &l.default_v0(), 10, None) else { return (false, "even run failed".into()) };
    let even = crosscheck_even(atlas, &CoxeterDiagram::from_roots(&l, &run.roots()));
    let odd = classify_subdiagrams(&CoxeterDiagram::odd1_window(2), 4)
        .map_err(|e| e.to_string())
        .and_then(|c| crosscheck_odd1(atlas, &c).map_err(|e| e.to_string()));
    match (even, odd) {
        (Ok(e), Ok(o)) => {
            let tagged = o.convention("cusp-tagged");
            let odd_ok = tagged.is_some_and(|c| c.counts_equal && c.classes.len() == 3 && !c.rules.is_empty());
            let summary = |r: &cubestrata::strata_atlas::CrosscheckReport| {
                r.conventions
                    .iter()
                    .map(|c| format!("{} {}={}", c.convention, c.strata.len(), c.classes.len()))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            (e.counts_equal() && o.counts_equal() && odd_ok, format!("even: {}; odd1: {}", summary(&e), summary(&o)))
        }
        (e, o) => (false, format!("even: {:?}, odd1: {:?}", e.err(), o.err())),
    }
}

fn component_census(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let m = maximal_components(boundary_atlas());
    (m == [3, 3, 1], format!("{m:?}"))
}

/// `det(x0 C0 + x1 C1)` is a binary quadratic; Det vanishes iff it has a double root.
fn pencil_double_root(c: &CoefficientAssignment) -> bool {
    let v = |i: usize, j: usize, k: usize| c.get(4 * i + 2 * j + k).clone();
    let m = |x: usize| [[v(x, 0, 0), v(x, 0, 1)], [v(x, 1, 0), v(x, 1, 1)]];
    let (a, b) = (m(0), m(1));
    let det = |p: &[[Rational; 2]; 2]| &p[0][0] * &p[1][1] - &p[0][1] * &p[1][0];
    let qa = det(&a);
    let qc = det(&b);
    let qb = &a[0][0] * &b[1][1] + &b[0][0] * &a[1][1] - &a[0][1] * &b[1][0] - &b[0][1] * &a[1][0];
    (&qb * &qb - Rational::from_integer(4.into()) * qa * qc).is_zero()
}

/// Applies the 2×2 matrix `m` to index `axis` of the tensor.
fn act(t: &[i64; 8], axis: usize, m: [i64; 4]) -> [i64; 8] {
    let bit = 2 - axis;
    std::array::from_fn(|v| {
        let i = (v >> bit) & 1;
        let base = v & !(1 << bit);
        m[2 * i] * t[base] + m[2 * i + 1] * t[base | (1 << bit)]
    })
}

fn hyperdeterminant(b: &Bounds, rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut agree = 0;
    let mut vanishing = 0;
    let mut invariant = true;
    for i in 0..b.hyperdet_samples {
        let mut vals: [i64; 8] = std::array::from_fn(|_| rng.gen_range(-4..=4));
        if i % 4 == 0 {
            // singular at the origin of (P¹)³, then moved by random changes of coordinates
            for v in [0, 1, 2, 4] {
                vals[v] = 0;
            }
            for axis in 0..3 {
                let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-2..=2));
                vals = act(&vals, axis, m);
            }
        }
        let c = CoefficientAssignment::from_integers(vals);
        let d = hyperdeterminant_222(&c);
        if d.is_zero() {
            vanishing += 1;
        }
        if d.is_zero() == pencil_double_root(&c) {
            agree += 1;
        }
        if i < 50 {
            let abs = if d < Rational::zero() { -d.clone() } else { d.clone() };
            invariant &= SymQElement::all().iter().all(|g| {
                let e = hyperdeterminant_222(&c.transform(g));
                e == abs || -e == abs
            });
        }
    }
    (
        agree == b.hyperdet_samples && invariant,
        format!("{agree}/{} agree with the pencil discriminant ({vanishing} vanishing), |Det| invariant under Sym(Q): {invariant}", b.hyperdet_samples),
    )
}

fn even_stability(_: &Bounds, _: &mut ChaCha8Rng) -> (bool, String) {
    let l = GramLattice::even();
    let v0 = l.default_v0();
    let Ok(first) = vinberg_run(&l, &v0, 20, None) else { return (false, "even run failed".into()) };
    let Some(f) = first.finite_at else { return (false, "no finite-volume height within 20".into()) };
    let Ok(longer) = vinberg_run_exhaustive(&l, &v0, f + 5, None) else { return (false, "extended run failed".into()) };
    let same = longer.roots() == first.roots();
    (same, format!("{} roots, finite volume at height {f}, unchanged through height {}: {same}", first.accepted.len(), f + 5))
}
