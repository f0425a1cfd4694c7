use cubestrata::cell_classifier::{Cusp, DegenerationCase};
use cubestrata::corner_cuts::{detect, modify};
use cubestrata::strata_atlas::{
    boundary_atlas, common_rules, crosscheck_even, crosscheck_odd1, fitting_rules, maximal_components, ClassEntry,
    PairingRule, StratumSource,
};
use cubestrata::subdivisions::{enumerate_all, stratum_dimension};
use cubestrata::vinberg::{
    classify_subdiagrams, vinberg_run, CoxeterDiagram, GramLattice, SubdiagramClass, SubdiagramKind,
};

fn even_diagram() -> CoxeterDiagram {
    let l = GramLattice::even();
    let run = vinberg_run(&l, &l.default_v0(), 10, None).unwrap();
    CoxeterDiagram::from_roots(&l, &run.roots())
}

fn odd1_classes(w: i64) -> Vec<SubdiagramClass> {
    classify_subdiagrams(&CoxeterDiagram::odd1_window(w), 4).unwrap()
}

fn rule(slope: i64, offset: i64, parabolic: i64) -> PairingRule {
    PairingRule { slope, offset, parabolic }
}

#[test]
fn named_strata() {
    let a = boundary_atlas();
    let by_name = |n: &str| a.strata.iter().find(|s| s.name == n).unwrap_or_else(|| panic!("{n}"));
    let prisms = by_name("cells[6,6]");
    assert_eq!((prisms.dimension, prisms.orbit_size, prisms.components), (3, 6, 2));
    assert_eq!(prisms.case, DegenerationCase::II);
    let pyramids = by_name("cells[5,5,5]");
    assert_eq!((pyramids.dimension, pyramids.orbit_size, pyramids.components), (3, 8, 3));
    assert_eq!(pyramids.cusp, Cusp::Even);
    let d2 = by_name("d2");
    assert_eq!((d2.dimension, d2.source), (1, StratumSource::CoefficientDegeneration));
    assert_eq!((by_name("d3").dimension, by_name("d3").cusp), (0, Cusp::Odd2));
    assert_eq!((by_name("c3+c3").dimension, by_name("c3+c3").cusp), (0, Cusp::Odd1));
    assert_eq!(maximal_components(a), vec![3, 3, 1]);
    assert!(!a.unmodeled.is_empty());
}

#[test]
fn subdivision_strata_are_the_corner_cut_free_orbits() {
    let a = boundary_atlas();
    let free = enumerate_all().iter().filter(|s| detect(s).is_empty() && !s.is_trivial()).count();
    let subs: Vec<_> = a.strata.iter().filter(|s| s.source == StratumSource::Subdivision).collect();
    assert_eq!(subs.iter().map(|s| s.orbit_size).sum::<usize>(), free);
    for s in subs {
        let rep = &s.representative;
        assert!(detect(rep).is_empty());
        assert!(!rep.is_trivial());
        assert_eq!(modify(rep).as_ref(), Ok(rep));
        assert_eq!(stratum_dimension(rep), Ok(s.dimension));
        assert_eq!(s.cell_labels.len(), rep.len());
    }
}

#[test]
fn closure_order() {
    let a = boundary_atlas();
    let n = a.strata.len();
    for i in 0..n {
        assert!(a.leq[i][i]);
        for j in 0..n {
            if i != j && a.leq[i][j] {
                assert!(!a.leq[j][i], "antisymmetric");
                assert!(a.strata[i].dimension < a.strata[j].dimension);
            }
            for k in 0..n {
                if a.leq[i][j] && a.leq[j][k] {
                    assert!(a.leq[i][k], "transitive");
                }
            }
        }
        for &k in &a.strata[i].covers {
            assert!(a.leq[k][i] && k != i);
            // nothing strictly between
            assert!(!(0..n).any(|m| m != k && m != i && a.leq[k][m] && a.leq[m][i]));
        }
    }
    let max = a.maximal();
    for z in (0..n).filter(|&z| a.strata[z].dimension == 0) {
        assert!(max.iter().any(|&m| a.leq[z][m]), "{}", a.strata[z].name);
    }
    assert!(a.to_dot().starts_with("digraph"));
}

#[test]
fn crosscheck_counts() {
    let a = boundary_atlas();
    let even = crosscheck_even(a, &even_diagram()).unwrap();
    let odd = crosscheck_odd1(a, &odd1_classes(2)).unwrap();
    assert!(even.counts_equal() && odd.counts_equal());
    let sizes = |r: &cubestrata::strata_atlas::CrosscheckReport, c: &str| {
        let c = r.convention(c).unwrap();
        (c.strata.len(), c.classes.len())
    };
    assert_eq!(sizes(&even, "closure"), (6, 6));
    assert_eq!(sizes(&odd, "closure"), (4, 4));
    assert_eq!(sizes(&even, "cusp-tagged"), (5, 5));
    assert_eq!(sizes(&odd, "cusp-tagged"), (3, 3));
    assert_eq!(common_rules(&[&even, &odd], "closure").first(), Some(&rule(1, 0, 3)));
    assert_eq!(common_rules(&[&even, &odd], "cusp-tagged").first(), Some(&rule(1, 0, 0)));
    // 3 − r with parabolic at 0 fits the odd1 tags but not the even ones
    let flipped = rule(-1, 3, 0);
    assert!(odd.convention("cusp-tagged").unwrap().rules.contains(&flipped));
    assert!(!even.convention("cusp-tagged").unwrap().rules.contains(&flipped));
    assert_eq!(rule(1, -2, 0).to_string(), "elliptic rank r -> dim r - 2, maximal parabolic -> dim 0");
}

#[test]
fn crosscheck_is_sensitive_to_a_missing_class() {
    let a = boundary_atlas();
    let odd = crosscheck_odd1(a, &odd1_classes(2)).unwrap();
    let c = odd.convention("closure").unwrap();
    let dims: Vec<usize> = c.strata.iter().map(|s| s.1).collect();
    assert!(!fitting_rules(&dims, &c.classes).is_empty());
    for drop in 0..c.classes.len() {
        let mut fewer: Vec<ClassEntry> = c.classes.clone();
        fewer.remove(drop);
        assert!(fitting_rules(&dims, &fewer).is_empty());
    }
    // a spurious elliptic class of rank 3 breaks it too
    let mut more = c.classes.clone();
    more.push(ClassEntry { kind: SubdiagramKind::Elliptic, rank: 3, name: "A1+A1+A1".into() });
    assert!(fitting_rules(&dims, &more).is_empty());
    let partial = crosscheck_odd1(a, &odd1_classes(2)[..1]).unwrap();
    assert!(!partial.counts_equal());
}

#[test]
fn odd1_crosscheck_is_window_independent() {
    let a = boundary_atlas();
    assert_eq!(crosscheck_odd1(a, &odd1_classes(2)).unwrap(), crosscheck_odd1(a, &odd1_classes(3)).unwrap());
}
