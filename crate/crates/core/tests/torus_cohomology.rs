use cubestrata::cube_geometry::MarkedCell;
use cubestrata::subdivisions::{enumerate_all, Subdivision};
use cubestrata::torus_cohomology::{
    build_nerve, h1_of_nerve, h1_points, h1_torus, hanging_sequence, reduce_and_verdict, reduce_points, CellLattice,
    NerveComplex, PointComplex, ReductionVerdict,
};
use proptest::prelude::*;

fn sub(cells: &[&[usize]]) -> Subdivision {
    Subdivision::new(cells.iter().map(|c| MarkedCell::from_indices(c).unwrap()).collect()).unwrap()
}

fn square(x: i64, y: i64) -> Vec<Vec<i64>> {
    vec![vec![x, y], vec![x + 1, y], vec![x, y + 1], vec![x + 1, y + 1]]
}

#[test]
fn nerve_examples() {
    let n = build_nerve(&Subdivision::trivial());
    assert_eq!((n.cells.len(), n.pairs.len(), n.triples.len()), (1, 0, 0));
    assert_eq!(n.cells[0].rank(), 4);
    assert!(h1_torus(&Subdivision::trivial()).is_trivial());

    let prisms = sub(&[&[0, 1, 4, 5, 6, 7], &[0, 1, 2, 3, 6, 7]]);
    let n = build_nerve(&prisms);
    assert_eq!(n.pairs.len(), 1);
    assert_eq!(n.pairs[0].1.rank(), 3);
    assert!(h1_torus(&prisms).is_trivial());

    let pyramids = sub(&[&[0, 1, 2, 3, 7], &[0, 1, 4, 5, 7], &[0, 2, 4, 6, 7]]);
    let n = build_nerve(&pyramids);
    assert_eq!((n.pairs.len(), n.triples.len()), (3, 1));
    assert!(n.pairs.iter().all(|(_, l)| l.rank() == 3));
    // the diagonal 000 to 111
    assert_eq!(n.triples[0].1.rank(), 2);
    assert!(h1_torus(&pyramids).is_trivial());
}

#[test]
fn lattice_coordinates() {
    let l = CellLattice::of_points(&[vec![0, 0], vec![2, 0]]);
    assert_eq!(l.rank(), 2);
    // (1, 1, 0) is in the saturation even though 1 is not a lattice point
    assert!(l.coordinates(&[1.into(), 1.into(), 0.into()]).is_some());
    assert!(l.coordinates(&[1.into(), 0.into(), 1.into()]).is_none());
}

#[test]
fn squares_around_a_vertex() {
    let k = PointComplex::new(2, vec![square(0, 0), square(-1, 0), square(-1, -1), square(0, -1)]);
    assert!(h1_points(&k).is_trivial());
    assert_eq!(reduce_points(&k), ReductionVerdict::TrivialByReduction);
}

#[test]
fn a_cycle_of_point_lattices_has_h1() {
    let p = CellLattice::of_points(&[vec![0]]);
    let nerve = NerveComplex {
        cells: vec![p.clone(); 3],
        pairs: vec![([0, 1], p.clone()), ([0, 2], p.clone()), ([1, 2], p.clone())],
        triples: vec![],
    };
    let h = h1_of_nerve(&nerve);
    assert_eq!(h.rank, 1);
    assert!(!h.is_trivial());
}

#[test]
fn annulus_is_inconclusive_for_the_reduction() {
    let ring: Vec<Vec<Vec<i64>>> =
        [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)].iter().map(|&(x, y)| square(x, y)).collect();
    let k = PointComplex::new(2, ring);
    assert_eq!(reduce_points(&k), ReductionVerdict::Inconclusive);
    assert!(h1_points(&k).is_trivial());
}

#[test]
fn every_subdivision_is_trivial_both_ways() {
    for s in enumerate_all() {
        let h = h1_torus(s);
        assert!(h.is_trivial(), "{s:?}: {h:?}");
        assert_eq!(reduce_and_verdict(s), ReductionVerdict::TrivialByReduction, "{s:?}");
        assert!(hanging_sequence(s).len() < s.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cell_order_does_not_matter(k in 0usize..349, seed in any::<u64>()) {
        let s = &enumerate_all()[k];
        let base = PointComplex::from_subdivision(s);
        let mut cells = base.cells.clone();
        let n = cells.len();
        for i in (1..n).rev() {
            cells.swap(i, (seed as usize).wrapping_add(i * 31) % (i + 1));
        }
        let shuffled = PointComplex::new(3, cells);
        prop_assert_eq!(h1_points(&shuffled), h1_points(&base));
        prop_assert_eq!(reduce_points(&shuffled), reduce_points(&base));
    }

    #[test]
    fn removing_hanging_cells_preserves_h1(k in 0usize..349) {
        let s = &enumerate_all()[k];
        let gone = hanging_sequence(s);
        let rest: Vec<MarkedCell> = s.cells().iter().copied().filter(|c| !gone.contains(c)).collect();
        let base = PointComplex::from_subdivision(s);
        let reduced = PointComplex::new(
            3,
            rest.iter().map(|c| c.indices().iter().map(|&v| cubestrata::cube_geometry::vertex(v).to_vec()).collect()).collect(),
        );
        prop_assert_eq!(h1_points(&reduced), h1_points(&base));
    }
}
