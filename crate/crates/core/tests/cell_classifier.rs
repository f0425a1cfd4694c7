mod common;

use cubestrata::cell_classifier::{
    cell_type, classify_c, classify_cell, classify_d, classify_degeneration, flattening, generic_coefficients,
    hyperdeterminant_222, is_generic_for, CellType, ClassifierError, CoefficientAssignment, Cusp, DegenerationCase,
    Subtype,
};
use cubestrata::corner_cuts::modify;
use cubestrata::cube_geometry::{corner_cut_at, parse_vertex_label, MarkedCell, SymQElement};
use cubestrata::exact_kernel::{int, rational_rank, Rational};
use cubestrata::subdivisions::{enumerate_all, Subdivision};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cell(labels: &[&str]) -> MarkedCell {
    let idx: Vec<usize> = labels.iter().map(|l| parse_vertex_label(l).unwrap()).collect();
    MarkedCell::from_indices(&idx).unwrap()
}

fn coeffs(v: [i64; 8]) -> CoefficientAssignment {
    CoefficientAssignment::from_integers(v)
}

fn r3(v: [i64; 3]) -> [Rational; 3] {
    v.map(int)
}

fn two_prisms() -> Subdivision {
    Subdivision::new(vec![MarkedCell::from_indices(&[0, 1, 4, 5, 6, 7]).unwrap(), MarkedCell::from_indices(&[0, 1, 2, 3, 6, 7]).unwrap()])
        .unwrap()
}

#[test]
fn cell_types() {
    assert_eq!(cell_type(cell(&["000", "100", "010", "011"])), Ok(CellType::A));
    assert_eq!(cell_type(corner_cut_at(5)), Ok(CellType::A));
    assert_eq!(cell_type(cell(&["000", "100", "010", "110", "001"])), Ok(CellType::B));
    assert_eq!(cell_type(cell(&["000", "100", "110", "001", "101", "111"])), Ok(CellType::C));
    assert_eq!(cell_type(MarkedCell::CUBE), Ok(CellType::D));
    let octahedron = MarkedCell::new(0x7e).unwrap();
    assert!(matches!(cell_type(octahedron), Err(ClassifierError::NotABulletCell(_))));
    assert!(matches!(cell_type(MarkedCell::new(0xfe).unwrap()), Err(ClassifierError::NotABulletCell(_))));
}

#[test]
fn hyperdeterminant_examples() {
    assert_eq!(hyperdeterminant_222(&coeffs([1; 8])), int(0));
    assert_eq!(hyperdeterminant_222(&coeffs([1, 0, 0, 0, 0, 0, 0, -1])), int(1));
}

#[test]
fn d_subtypes() {
    assert_eq!(classify_d(&coeffs([1; 8])).unwrap().subtype, Subtype::D3);
    let l = classify_d(&coeffs([1, 0, 0, 0, 0, 0, 0, -1])).unwrap();
    assert_eq!(l.subtype, Subtype::D1);
    assert!(l.triple_point);
    assert_eq!(l.broken_lines.len(), 6);
    // (X0 + X1)(Y0Z0 + Y1Z0 + Y0Z1 + 2 Y1Z1)
    let q = [1, 1, 1, 2];
    let c = coeffs(std::array::from_fn(|v| q[v & 3]));
    assert_eq!(classify_d(&c).unwrap().subtype, Subtype::D2);
    // a nodal cube: singular at one point but irreducible
    let c = coeffs(common::act(&[0, 0, 0, 1, 0, 1, 1, 1], 0, [1, 1, 0, 1]));
    assert_eq!(classify_d(&c).unwrap().subtype, Subtype::D1Prime);
    assert!(classify_d(&coeffs([0; 8])).is_err());
}

#[test]
fn c_subtypes() {
    assert_eq!(classify_c(&r3([1, 1, 1]), &r3([2, 2, 2])).unwrap().subtype, Subtype::C3);
    assert_eq!(classify_c(&r3([1, 1, 1]), &r3([1, 1, 2])).unwrap().subtype, Subtype::C2);
    assert_eq!(classify_c(&r3([1, 1, 1]), &r3([1, 2, 3])).unwrap().subtype, Subtype::C1);
    assert!(classify_c(&r3([1, 1, 0]), &r3([1, 2, 0])).is_err());
}

#[test]
fn edge_zero_rule() {
    let c = coeffs([0, 0, 1, 1, 1, 1, 1, 1]);
    assert!(matches!(classify_cell(MarkedCell::CUBE, &c), Err(ClassifierError::InvalidCoefficients(_))));
    let c = coeffs([0, 1, 1, 1, 1, 1, 1, 0]);
    assert!(classify_cell(MarkedCell::CUBE, &c).is_ok());
}

#[test]
fn pyramid_components() {
    // base square z = 0, apex 001
    let p = cell(&["000", "100", "010", "110", "001"]);
    let generic = classify_cell(p, &coeffs([2, 3, 5, 0, 7, 0, 11, 0])).unwrap();
    assert_eq!(generic.components, 1);
    // apex coefficient 0 and a rank-one base: two planes
    let split = classify_cell(p, &coeffs([1, 0, 2, 0, 3, 0, 6, 0])).unwrap();
    assert_eq!(split.components, 2);
    assert!(split.label.triple_point);
}

#[test]
fn degenerations() {
    let q = Subdivision::trivial();
    let d = classify_degeneration(&q, &generic_coefficients(&q)).unwrap();
    assert_eq!((d.components, d.case, d.cusp), (1, DegenerationCase::I, Cusp::NotACusp));
    let tp = two_prisms();
    let c = generic_coefficients(&tp);
    assert!(is_generic_for(&tp, &c));
    let d = classify_degeneration(&tp, &c).unwrap();
    assert_eq!((d.components, d.case), (2, DegenerationCase::II));
    let d = classify_degeneration(&q, &coeffs([1; 8])).unwrap();
    assert_eq!((d.components, d.case, d.cusp), (3, DegenerationCase::III, Cusp::Odd2));
}

#[test]
fn json_round_trip() {
    let c = CoefficientAssignment::new(std::array::from_fn(|i| Rational::new((i as i64 - 3).into(), 7.into())));
    assert_eq!(CoefficientAssignment::from_json(&c.to_json()).unwrap(), c);
    assert!(CoefficientAssignment::from_json(&serde_json::json!({"coefficients": {"000": "1"}})).is_err());
}

#[test]
fn every_bullet_cell_is_one_of_four_types() {
    for s in enumerate_all() {
        let m = modify(s).unwrap();
        for &c in m.cells() {
            let t = cell_type(c).unwrap();
            let sig = match t {
                CellType::A => (4, 1),
                CellType::B => (5, 2),
                CellType::C => (6, 3),
                CellType::D => (8, 6),
            };
            assert_eq!((c.len(), c.volume()), sig);
        }
        let g = generic_coefficients(&m);
        assert!(classify_degeneration(&m, &g).is_ok());
    }
}

fn random_assignment(rng: &mut ChaCha8Rng, singular: bool) -> [i64; 8] {
    let mut v: [i64; 8] = std::array::from_fn(|_| rng.gen_range(-4..=4));
    if singular {
        for i in [0, 1, 2, 4] {
            v[i] = 0;
        }
        for axis in 0..3 {
            let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-2..=2));
            v = common::act(&v, axis, m);
        }
    }
    v
}

#[test]
fn hyperdeterminant_matches_critical_point_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut compared, mut vanishing) = (0, 0);
    while compared < 1500 {
        let v = random_assignment(&mut rng, compared % 3 == 0);
        let c = coeffs(v);
        let Some(sing) = common::singular_by_critical_points(c.values()) else { continue };
        let d = hyperdeterminant_222(&c);
        assert_eq!(d.is_zero(), sing, "{v:?}");
        compared += 1;
        vanishing += usize::from(sing);
    }
    assert!(vanishing > 300 && vanishing < 1200, "{vanishing}");
}

fn flattening_rank(c: &CoefficientAssignment, axis: usize) -> usize {
    rational_rank(flattening(c, axis).iter().map(|r| r.to_vec()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hyperdeterminant_symmetry_and_degree(v in prop::array::uniform8(-6i64..=6), t in -4i64..=4) {
        let c = coeffs(v);
        let d = hyperdeterminant_222(&c).abs();
        for g in SymQElement::all() {
            prop_assert_eq!(hyperdeterminant_222(&c.transform(g)).abs(), d.clone());
        }
        let scaled = hyperdeterminant_222(&c.scale(&int(t)));
        prop_assert_eq!(scaled, hyperdeterminant_222(&c) * int(t.pow(4)));
    }

    #[test]
    fn d3_is_singular_with_rank_one_flattenings(
        x in prop::array::uniform2(-3i64..=3), y in prop::array::uniform2(-3i64..=3), z in prop::array::uniform2(-3i64..=3)
    ) {
        prop_assume!(x != [0, 0] && y != [0, 0] && z != [0, 0]);
        let c = coeffs(std::array::from_fn(|v| x[v >> 2] * y[(v >> 1) & 1] * z[v & 1]));
        let l = classify_d(&c).unwrap();
        prop_assert_eq!(l.subtype, Subtype::D3);
        prop_assert!(hyperdeterminant_222(&c).is_zero());
        prop_assert!((0..3).all(|k| flattening_rank(&c, k) == 1));
    }

    #[test]
    fn classifiers_are_equivariant(v in prop::array::uniform8(1i64..=5), g in 0usize..48, k in 0usize..349) {
        let g = &SymQElement::all()[g];
        let c = coeffs(v);
        let m = modify(&enumerate_all()[k]).unwrap();
        let gm = m.apply(g);
        let gc = c.transform(g);
        for &cell in m.cells() {
            let a = classify_cell(cell, &c).unwrap();
            let b = classify_cell(g.apply_cell(cell), &gc).unwrap();
            prop_assert_eq!(a.label.subtype, b.label.subtype);
            prop_assert_eq!(a.components, b.components);
            prop_assert_eq!(a.label.broken_lines.len(), b.label.broken_lines.len());
        }
        let (a, b) = (classify_degeneration(&m, &c).unwrap(), classify_degeneration(&gm, &gc).unwrap());
        prop_assert_eq!((a.components, a.case, a.cusp), (b.components, b.case, b.cusp));
    }
}
