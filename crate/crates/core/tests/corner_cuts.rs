use cubestrata::cell_classifier::cell_type;
use cubestrata::corner_cuts::{delta_cartier, detect, modify, modify_heights, modify_with};
use cubestrata::cube_geometry::{corner_cut_at, MarkedCell, SymQElement};
use cubestrata::exact_kernel::int;
use cubestrata::subdivisions::{enumerate_all, from_heights, HeightFunction, Subdivision};
use proptest::prelude::*;

fn corner_split() -> Subdivision {
    Subdivision::new(vec![corner_cut_at(0), MarkedCell::new(0xfe).unwrap()]).unwrap()
}

fn opposite_corners() -> Subdivision {
    let mid = MarkedCell::new(0x7e).unwrap();
    Subdivision::new(vec![corner_cut_at(0), corner_cut_at(7), mid]).unwrap()
}

fn two_prisms() -> Subdivision {
    // x ≥ y and x ≤ y
    Subdivision::new(vec![MarkedCell::from_indices(&[0, 1, 4, 5, 6, 7]).unwrap(), MarkedCell::from_indices(&[0, 1, 2, 3, 6, 7]).unwrap()])
        .unwrap()
}

#[test]
fn detection() {
    assert!(detect(&Subdivision::trivial()).is_empty());
    let cuts = detect(&corner_split());
    assert_eq!(cuts.len(), 1);
    assert_eq!(cuts[0].apex, 0);
    assert_eq!(cuts[0].neighbor, MarkedCell::new(0xfe).unwrap());
    let cuts = detect(&opposite_corners());
    assert_eq!(cuts.iter().map(|c| c.apex).collect::<Vec<_>>(), vec![0, 7]);
    assert!(cuts.iter().all(|c| c.neighbor == MarkedCell::new(0x7e).unwrap()));
}

#[test]
fn bullet_examples() {
    assert_eq!(modify(&corner_split()), Ok(Subdivision::trivial()));
    assert_eq!(modify(&two_prisms()), Ok(two_prisms()));
    assert_eq!(modify(&opposite_corners()), Ok(Subdivision::trivial()));
}

#[test]
fn cartier_flag() {
    assert!(delta_cartier(&Subdivision::trivial()));
    assert!(!delta_cartier(&corner_split()));
    assert!(delta_cartier(&two_prisms()));
}

#[test]
fn height_drops() {
    let m = modify_heights(&HeightFunction::from_integers([1, 0, 0, 0, 0, 0, 0, 0]));
    assert_eq!(m.drops, vec![(0, int(1))]);
    assert_eq!(m.heights, HeightFunction::zero());
    let m = modify_heights(&HeightFunction::from_integers([2, 0, 0, 0, 0, 0, 0, 0]));
    assert_eq!(m.drops, vec![(0, int(2))]);
    assert_eq!(m.heights, HeightFunction::zero());
    // the x ≥ y / x ≤ y split is already corner-cut free
    let h = HeightFunction::from_integers([0, 0, 1, 1, 0, 0, 0, 0]);
    assert_eq!(from_heights(&h), two_prisms());
    let m = modify_heights(&h);
    assert!(m.drops.is_empty());
    assert_eq!(m.heights, h);
}

#[test]
fn bullet_on_every_subdivision() {
    for s in enumerate_all() {
        let m = modify(s).unwrap();
        assert!(detect(&m).is_empty());
        assert_eq!(m.total_volume(), 6);
        assert_eq!(modify(&m).as_ref(), Ok(&m));
        assert_eq!(m == *s, detect(s).is_empty());
        assert!(m.cells().iter().all(|&c| cell_type(c).is_ok()), "{m:?}");
        // order of resolution does not matter
        assert_eq!(modify_with(s, |cuts| cuts.len() - 1).as_ref(), Ok(&m));
        for g in SymQElement::all().iter().step_by(7) {
            assert_eq!(modify(&s.apply(g)), Ok(m.apply(g)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn algebraic_and_combinatorial_bullets_agree(h in prop::array::uniform8(-5i64..=5)) {
        let h = HeightFunction::from_integers(h);
        let m = modify_heights(&h);
        prop_assert!(m.drops.iter().all(|(_, q)| *q > int(0)));
        prop_assert_eq!(from_heights(&m.heights), modify(&from_heights(&h)).unwrap());
    }
}
