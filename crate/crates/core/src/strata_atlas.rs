//! Boundary strata of the moduli space: Sym(Q)-orbits of corner-cut-free
//! subdivisions plus the coefficient-degeneration strata over the two-prism
//! subdivision and over the trivial subdivision; closure order, component
//! census and the comparison with Coxeter subdiagrams at the 0-cusps.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::cell_classifier::{
    classify_degeneration, generic_coefficients, prism_triangles, CoefficientAssignment, Cusp, DegenerationCase,
};
use crate::corner_cuts::detect;
use crate::cube_geometry::{vertex, MarkedCell, SymQElement};
use crate::exact_kernel::{rational_rank, Rational};
use crate::subdivisions::{affine_space_dimension, enumerate_all, orbits, stratum_dimension, Subdivision};
use crate::vinberg::{classify_subdiagrams, CoxeterDiagram, SubdiagramClass, SubdiagramKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("no 0-dimensional stratum with cusp {0}")]
    ZeroStratumNotFound(String),
    #[error("subdiagram classification failed: {0}")]
    Subdiagrams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumSource {
    /// Generic coefficients on a corner-cut-free subdivision.
    Subdivision,
    /// Special coefficients on a fixed subdivision.
    CoefficientDegeneration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRecord {
    pub name: String,
    pub source: StratumSource,
    pub representative: Subdivision,
    pub orbit_size: usize,
    pub dimension: usize,
    /// Indices of the strata this one covers in the closure order.
    pub covers: Vec<usize>,
    pub components: usize,
    pub case: DegenerationCase,
    pub cusp: Cusp,
    pub cell_labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Atlas {
    pub strata: Vec<StratumRecord>,
    /// `leq[i][j]`: stratum i lies in the closure of stratum j.
    pub leq: Vec<Vec<bool>>,
    pub unmodeled: Vec<String>,
}

/// Special coefficient loci, each given by a monomial parametrization:
/// every vertex coefficient is a product of parameters.
#[derive(Debug, Clone)]
struct Locus {
    name: String,
    subdivision: Subdivision,
    monomials: [Vec<usize>; 8],
    params: usize,
}

impl Locus {
    /// Dimension of the parametrized coefficient cone modulo the cell
    /// tori: Jacobian rank at a generic point minus dim E.
    fn dimension(&self) -> usize {
        let point = self.point();
        let rows: Vec<Vec<Rational>> = (0..8)
            .map(|v| {
                (0..self.params)
                    .map(|p| {
                        let k = self.monomials[v].iter().filter(|&&q| q == p).count();
                        if k == 0 {
                            return Rational::from_integer(0.into());
                        }
                        let rest: i64 =
                            self.monomials[v].iter().filter(|&&q| q != p).map(|&q| point[q]).product();
                        Rational::from_integer((k as i64 * rest * point[p].pow(k as u32 - 1)).into())
                    })
                    .collect()
            })
            .collect();
        rational_rank(rows) - affine_space_dimension(&self.subdivision)
    }

    fn point(&self) -> Vec<i64> {
        const PRIMES: [i64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
        (0..self.params).map(|i| PRIMES[i % 16] + 53 * (i as i64 / 16)).collect()
    }

    fn coefficients(&self) -> CoefficientAssignment {
        let p = self.point();
        CoefficientAssignment::from_integers(std::array::from_fn(|v| self.monomials[v].iter().map(|&q| p[q]).product()))
    }
}

struct LocusBuilder {
    monomials: [Vec<usize>; 8],
    params: usize,
}

impl LocusBuilder {
    fn new() -> Self {
        LocusBuilder { monomials: Default::default(), params: 0 }
    }

    fn fresh(&mut self) -> usize {
        self.params += 1;
        self.params - 1
    }

    /// One parameter per key, shared across calls.
    fn keyed(&mut self, table: &mut BTreeMap<String, usize>, key: String) -> usize {
        if let Some(&p) = table.get(&key) {
            return p;
        }
        let p = self.fresh();
        table.insert(key, p);
        p
    }

    fn finish(mut self, name: &str, subdivision: Subdivision) -> Locus {
        for v in 0..8 {
            if self.monomials[v].is_empty() {
                let p = self.fresh();
                self.monomials[v].push(p);
            }
        }
        Locus { name: name.to_string(), subdivision, monomials: self.monomials, params: self.params }
    }
}

/// c = L(x_axis) · Q(other two coordinates) on the whole cube.
fn split_cube_locus(factors: &[&[usize]], name: &str) -> Locus {
    let mut b = LocusBuilder::new();
    let mut table = BTreeMap::new();
    for v in 0..8 {
        let p = vertex(v);
        for (k, axes) in factors.iter().enumerate() {
            let key = format!("{k}:{:?}", axes.iter().map(|&a| p[a]).collect::<Vec<_>>());
            let q = b.keyed(&mut table, key);
            b.monomials[v].push(q);
        }
    }
    b.finish(name, Subdivision::trivial())
}

/// The two-prism subdivision with the shared rectangle of rank one, and
/// each prism in `full` having proportional triangle data.
fn two_prism_locus(s: &Subdivision, full: [bool; 2], name: &str) -> Locus {
    let mut b = LocusBuilder::new();
    let mut table = BTreeMap::new();
    let shared = s.cells()[0].mask() & s.cells()[1].mask();
    for (ci, &cell) in s.cells().iter().enumerate() {
        let (a, bb) = prism_triangles(cell).expect("two-prism cells are prisms");
        let axis = (0..3).find(|&k| vertex(a[0])[k] != vertex(bb[0])[k]).expect("prism axis");
        for &v in a.iter().chain(&bb) {
            if !(full[ci] || shared & (1 << v) != 0) || !b.monomials[v].is_empty() {
                continue;
            }
            let p = vertex(v);
            let proj: Vec<i64> = (0..3).filter(|&k| k != axis).map(|k| p[k]).collect();
            let r = b.keyed(&mut table, format!("side:{}", p[axis]));
            let u = b.keyed(&mut table, format!("pos:{proj:?}"));
            b.monomials[v] = vec![r, u];
        }
    }
    b.finish(name, s.clone())
}

fn two_prism() -> Subdivision {
    let list = enumerate_all();
    list.iter()
        .find(|s| s.len() == 2 && s.cells().iter().all(|c| c.len() == 6))
        .expect("a two-prism subdivision exists")
        .canonical()
}

fn coefficient_loci() -> Vec<Locus> {
    let tp = two_prism();
    vec![
        two_prism_locus(&tp, [false, false], "c2+c2"),
        two_prism_locus(&tp, [true, false], "c2+c3"),
        two_prism_locus(&tp, [true, true], "c3+c3"),
        split_cube_locus(&[&[0], &[1, 2]], "d2"),
        split_cube_locus(&[&[0], &[1], &[2]], "d3"),
    ]
}

/// Whether some image of `a` under Sym(Q) refines `b`.
fn orbit_refines(a: &Subdivision, b: &Subdivision) -> bool {
    SymQElement::all().iter().any(|g| a.apply(g).refines(b))
}

fn subdivision_name(s: &Subdivision) -> String {
    let mut sizes: Vec<String> = s.cells().iter().map(|c| format!("{}", c.len())).collect();
    sizes.sort();
    format!("cells[{}]", sizes.join(","))
}

fn build_atlas() -> Atlas {
    let free: Vec<Subdivision> = enumerate_all().iter().filter(|s| detect(s).is_empty()).cloned().collect();
    let mut strata: Vec<StratumRecord> = Vec::new();
    for o in orbits(&free) {
        if o.representative.is_trivial() {
            continue;
        }
        let s = o.representative;
        let c = generic_coefficients(&s);
        let d = classify_degeneration(&s, &c).expect("generic coefficients are valid");
        // the bullet image must be reducible to lie on the boundary
        if d.components < 2 {
            continue;
        }
        strata.push(StratumRecord {
            name: subdivision_name(&s),
            source: StratumSource::Subdivision,
            dimension: stratum_dimension(&s).expect("all subdivisions are regular"),
            orbit_size: o.size,
            covers: Vec::new(),
            components: d.components,
            case: d.case,
            cusp: d.cusp,
            cell_labels: d.cells.iter().map(|k| k.label.subtype.to_string()).collect(),
            representative: s,
        });
    }
    let n_sub = strata.len();
    let loci = coefficient_loci();
    for l in &loci {
        let d = classify_degeneration(&l.subdivision, &l.coefficients()).expect("valid locus point");
        strata.push(StratumRecord {
            name: l.name.clone(),
            source: StratumSource::CoefficientDegeneration,
            representative: l.subdivision.clone(),
            orbit_size: 1,
            dimension: l.dimension(),
            covers: Vec::new(),
            components: d.components,
            case: d.case,
            cusp: d.cusp,
            cell_labels: d.cells.iter().map(|k| k.label.subtype.to_string()).collect(),
        });
    }
    let n = strata.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = i == j
                || match (i < n_sub, j < n_sub) {
                    (true, true) => orbit_refines(&strata[i].representative, &strata[j].representative),
                    // a locus lies over its subdivision's stratum
                    (false, true) => strata[i].representative == strata[j].representative,
                    (false, false) => locus_contains(&loci[j - n_sub], &loci[i - n_sub]),
                    (true, false) => false,
                };
        }
    }
    for i in 0..n {
        strata[i].covers = (0..n)
            .filter(|&k| k != i && leq[k][i] && !(0..n).any(|m| m != i && m != k && leq[k][m] && leq[m][i]))
            .collect();
    }
    let unmodeled = vec![
        "coefficient degenerations over subdivision strata other than the two-prism and the trivial subdivision".into(),
        "the nodal hypersurface locus of the trivial subdivision (irreducible, not boundary)".into(),
    ];
    Atlas { strata, leq, unmodeled }
}

/// `outer ⊇ inner`: same subdivision and inner's parameters specialize outer's.
fn locus_contains(outer: &Locus, inner: &Locus) -> bool {
    if outer.subdivision != inner.subdivision {
        return false;
    }
    // each monomial relation satisfied by outer (equal-product pairs) must hold on inner
    let rel = |l: &Locus| -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    for d in 0..8 {
                        let mut lhs = [l.monomials[a].clone(), l.monomials[b].clone()].concat();
                        let mut rhs = [l.monomials[c].clone(), l.monomials[d].clone()].concat();
                        lhs.sort();
                        rhs.sort();
                        if lhs == rhs {
                            out.push((a, b, c, d));
                        }
                    }
                }
            }
        }
        out
    };
    let ri = rel(inner);
    rel(outer).iter().all(|r| ri.contains(r))
}

pub fn boundary_atlas() -> &'static Atlas {
    static ATLAS: OnceLock<Atlas> = OnceLock::new();
    ATLAS.get_or_init(build_atlas)
}

impl Atlas {
    pub fn maximal(&self) -> Vec<usize> {
        let n = self.strata.len();
        (0..n).filter(|&i| !(0..n).any(|j| j != i && self.leq[i][j])).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph strata {\n  rankdir=BT;\n");
        for (i, r) in self.strata.iter().enumerate() {
            s.push_str(&format!("  s{i} [label=\"{} dim {} {}\"];\n", r.name, r.dimension, r.cusp));
        }
        for (i, r) in self.strata.iter().enumerate() {
            for &k in &r.covers {
                s.push_str(&format!("  s{k} -> s{i};\n"));
            }
        }
        s.push_str("}\n");
        s
    }

    fn zero_stratum(&self, cusp: Cusp) -> Result<usize, AtlasError> {
        let found: Vec<usize> =
            (0..self.strata.len()).filter(|&i| self.strata[i].dimension == 0 && self.strata[i].cusp == cusp).collect();
        match found.as_slice() {
            [i] => Ok(*i),
            _ => Err(AtlasError::ZeroStratumNotFound(cusp.to_string())),
        }
    }
}

/// Dimensions of the maximal boundary strata, largest first.
pub fn maximal_components(atlas: &Atlas) -> Vec<usize> {
    let mut d: Vec<usize> = atlas.maximal().into_iter().map(|i| atlas.strata[i].dimension).collect();
    d.sort_by(|a, b| b.cmp(a));
    d
}

/// Elliptic subdiagrams of rank `r` go to dimension `slope·r + offset`,
/// maximal parabolic ones to `parabolic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingRule {
    pub slope: i64,
    pub offset: i64,
    pub parabolic: i64,
}

impl std::fmt::Display for PairingRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lin = match (self.slope, self.offset) {
            (1, 0) => "r".to_string(),
            (1, o) if o < 0 => format!("r - {}", -o),
            (1, o) => format!("r + {o}"),
            (-1, o) => format!("{o} - r"),
            (s, o) => format!("{s}r + {o}"),
        };
        write!(f, "elliptic rank r -> dim {lin}, maximal parabolic -> dim {}", self.parabolic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub kind: SubdiagramKind,
    pub rank: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConventionReport {
    pub convention: String,
    pub strata: Vec<(String, usize)>,
    pub classes: Vec<ClassEntry>,
    pub counts_equal: bool,
    pub rules: Vec<PairingRule>,
    /// (class, stratum) under the first fitting rule.
    pub pairing: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub cusp: String,
    pub conventions: Vec<ConventionReport>,
}

impl CrosscheckReport {
    pub fn counts_equal(&self) -> bool {
        self.conventions.iter().all(|c| c.counts_equal)
    }

    pub fn convention(&self, name: &str) -> Option<&ConventionReport> {
        self.conventions.iter().find(|c| c.convention == name)
    }
}

/// Rules fitting the same convention in every report.
pub fn common_rules(reports: &[&CrosscheckReport], convention: &str) -> Vec<PairingRule> {
    let Some(first) = reports.first().and_then(|r| r.convention(convention)) else { return Vec::new() };
    first
        .rules
        .iter()
        .copied()
        .filter(|rule| reports.iter().all(|r| r.convention(convention).is_some_and(|c| c.rules.contains(rule))))
        .collect()
}

fn target_dim(rule: &PairingRule, c: &ClassEntry) -> i64 {
    match c.kind {
        SubdiagramKind::Elliptic => rule.slope * c.rank as i64 + rule.offset,
        SubdiagramKind::MaximalParabolic => rule.parabolic,
    }
}

/// Affine rank-to-dimension rules whose image multiset equals the strata dimensions.
pub fn fitting_rules(strata_dims: &[usize], classes: &[ClassEntry]) -> Vec<PairingRule> {
    let mut want: Vec<i64> = strata_dims.iter().map(|&d| d as i64).collect();
    want.sort();
    let mut out = Vec::new();
    for slope in [1, -1] {
        for offset in -4..=4 {
            for parabolic in 0..=4 {
                let rule = PairingRule { slope, offset, parabolic };
                let mut got: Vec<i64> = classes.iter().map(|c| target_dim(&rule, c)).collect();
                got.sort();
                if got == want {
                    out.push(rule);
                }
            }
        }
    }
    out.sort_by_key(|r| (r.slope != 1, r.offset.abs(), r.parabolic));
    out
}

fn convention_report(name: &str, strata: Vec<(String, usize)>, classes: Vec<ClassEntry>) -> ConventionReport {
    let dims: Vec<usize> = strata.iter().map(|s| s.1).collect();
    let rules = fitting_rules(&dims, &classes);
    let mut pairing = Vec::new();
    if let Some(rule) = rules.first() {
        let mut free: Vec<bool> = vec![true; strata.len()];
        for c in &classes {
            let t = target_dim(rule, c);
            if let Some(k) = (0..strata.len()).find(|&k| free[k] && strata[k].1 as i64 == t) {
                free[k] = false;
                pairing.push((format!("{} ({:?} rank {})", c.name, c.kind, c.rank), strata[k].0.clone()));
            }
        }
    }
    ConventionReport { convention: name.into(), counts_equal: strata.len() == classes.len(), strata, classes, rules, pairing }
}

fn entries(classes: &[SubdiagramClass]) -> Vec<ClassEntry> {
    classes.iter().map(|c| ClassEntry { kind: c.kind, rank: c.rank, name: c.name.clone() }).collect()
}

fn empty_class() -> ClassEntry {
    ClassEntry { kind: SubdiagramKind::Elliptic, rank: 0, name: "empty".into() }
}

/// Two conventions: "closure" takes every stratum whose closure contains the
/// 0-stratum against all elliptic subdiagrams including the empty one plus
/// the maximal parabolic ones; "cusp-tagged" keeps only strata carrying the
/// cusp's label against the nonempty classes.
fn crosscheck(atlas: &Atlas, cusp: Cusp, classes: &[SubdiagramClass]) -> Result<CrosscheckReport, AtlasError> {
    let z = atlas.zero_stratum(cusp)?;
    let above: Vec<usize> = (0..atlas.strata.len()).filter(|&j| atlas.leq[z][j]).collect();
    let label = |j: usize| (format!("{} ({})", atlas.strata[j].name, atlas.strata[j].cusp), atlas.strata[j].dimension);
    let all: Vec<(String, usize)> = above.iter().map(|&j| label(j)).collect();
    let tagged: Vec<(String, usize)> = above.iter().filter(|&&j| atlas.strata[j].cusp == cusp).map(|&j| label(j)).collect();
    let nonempty = entries(classes);
    let mut with_empty = vec![empty_class()];
    with_empty.extend(nonempty.clone());
    Ok(CrosscheckReport {
        cusp: cusp.to_string(),
        conventions: vec![
            convention_report("closure", all, with_empty),
            convention_report("cusp-tagged", tagged, nonempty),
        ],
    })
}

pub fn crosscheck_even(atlas: &Atlas, diagram: &CoxeterDiagram) -> Result<CrosscheckReport, AtlasError> {
    let classes = classify_subdiagrams(diagram, 4).map_err(|e| AtlasError::Subdiagrams(e.to_string()))?;
    crosscheck(atlas, Cusp::Even, &classes)
}

pub fn crosscheck_odd1(atlas: &Atlas, classes: &[SubdiagramClass]) -> Result<CrosscheckReport, AtlasError> {
    crosscheck(atlas, Cusp::Odd1, classes)
}

/// Cells of a stratum representative, for reports.
pub fn representative_cells(r: &StratumRecord) -> Vec<MarkedCell> {
    r.representative.cells().to_vec()
}
