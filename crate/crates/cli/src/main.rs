mod input;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cubestrata::cell_classifier::classify_degeneration;
use cubestrata::corner_cuts::{detect, modify, modify_heights};
use cubestrata::intersection_theory::invariants_report;
use cubestrata::strata_atlas::{boundary_atlas, crosscheck_even, crosscheck_odd1, maximal_components};
use cubestrata::subdivisions::{enumerate_all, from_heights, is_regular, orbits, stratum_dimension, Subdivision};
use cubestrata::torus_cohomology::{h1_torus, hanging_sequence, reduce_and_verdict, ReductionVerdict};
use cubestrata::vinberg::{classify_subdiagrams, vinberg_run, CoxeterDiagram, GramLattice, VinbergError};
use rayon::prelude::*;
use serde_json::{json, Value};

const AFTER_HELP: &str = "\
Formats (every JSON argument may be a file path or inline JSON):
  subdivision   {\"cells\": [[[0,0,0],[1,0,0],...], ...]}   each cell as its lattice points
  heights       {\"heights\": {\"000\": \"1\", ..., \"111\": \"0\"}}   rationals as \"p/q\" strings or integers
  coefficients  {\"coefficients\": {\"000\": \"1\", ...}}   same shape as heights
  gram          {\"gram\": [[1,0],[0,-1]], \"name\": \"custom\"}
  diagram       {\"gram\": [[-1,0],[0,-1]], \"labels\": [\"a\",\"b\"]}, or the word odd1 for the closed-form window

Every report is a JSON object carrying the seed. Errors go to stderr as
{\"error\": {\"kind\": ..., \"message\": ...}}.

Exit codes: 0 success, 1 invalid input, 2 bound exceeded or inconclusive.
Environment: CUBESTRATA_WORKERS sets the number of worker threads.";

#[derive(Parser)]
#[command(name = "cubestrata", version, about = "Subdivisions of the unit cube, stable replacement and cusp data", after_help = AFTER_HELP)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized checks; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All subdivisions of the marked cube.
    Enumerate {
        /// Keep only triangulations.
        #[arg(long)]
        triangulations_only: bool,
        /// One representative per Sym(Q)-orbit, with orbit sizes.
        #[arg(long)]
        up_to_symmetry: bool,
        /// Keep only subdivisions without corner cuts.
        #[arg(long)]
        corner_cut_free: bool,
    },
    /// Exact regularity witness for a subdivision.
    Regularity {
        /// Subdivision JSON, inline or a path.
        #[arg(long)]
        subdivision: String,
    },
    /// Subdivision induced by a height function.
    FromHeights {
        /// Height function JSON, inline or a path.
        #[arg(long)]
        heights: String,
    },
    /// Stable replacement, on a subdivision or on heights.
    Bullet {
        /// Subdivision JSON, inline or a path.
        #[arg(long, conflicts_with = "heights", required_unless_present = "heights")]
        subdivision: Option<String>,
        /// Height function JSON; also reports the corner drops.
        #[arg(long)]
        heights: Option<String>,
    },
    /// Cell subtypes, component count, case and cusp of a degeneration.
    Classify {
        /// Subdivision JSON, inline or a path.
        #[arg(long)]
        subdivision: String,
        /// Coefficient JSON, one nonzero rational per vertex.
        #[arg(long)]
        coefficients: String,
    },
    /// H1 of the torus complex, one JSON line per subdivision.
    H1 {
        /// Every enumerated subdivision.
        #[arg(long, conflicts_with = "subdivision")]
        all: bool,
        /// Subdivision JSON, inline or a path.
        #[arg(long, required_unless_present = "all")]
        subdivision: Option<String>,
    },
    /// Vinberg's algorithm for (-1)-vectors.
    Vinberg {
        /// One of the three cusp lattices.
        #[arg(long, value_enum, conflicts_with = "gram", required_unless_present = "gram")]
        lattice: Option<NamedLattice>,
        /// Gram matrix JSON of signature (1, n).
        #[arg(long)]
        gram: Option<String>,
        /// Initial vector, e.g. 1,0,0,0; defaults per named lattice.
        #[arg(long, allow_hyphen_values = true)]
        v0: Option<String>,
        /// Last height to search.
        #[arg(long, default_value_t = 10)]
        max_height: i64,
        /// Coordinate window, needed when v0 is isotropic.
        #[arg(long)]
        window: Option<i64>,
        /// Also write the Coxeter diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Elliptic and maximal parabolic subdiagrams up to symmetry.
    Subdiagrams {
        /// Diagram JSON, or odd1.
        #[arg(long)]
        diagram: String,
        /// Rank of the ambient lattice.
        #[arg(long)]
        rank: usize,
        /// Window radius for odd1.
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Also write the diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cover invariants and the eps-square identity.
    Invariants,
    /// Boundary strata, closure order and component census.
    Atlas {
        /// Also write the closure order as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Strata at a 0-cusp against subdiagrams of its Coxeter diagram.
    Crosscheck {
        #[arg(value_enum)]
        cusp: CrosscheckTarget,
    },
    /// Every acceptance check, one line each.
    VerifyAll,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedLattice {
    Even,
    Odd1,
    Odd2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CrosscheckTarget {
    Even,
    Odd1,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Bound(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Bound(_) => 2,
            _ => 1,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Input(m) => ("invalid-input", m),
            CliError::Bound(m) => ("bound-exceeded", m),
            CliError::Io(m) => ("io", m),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

fn vinberg_err(e: VinbergError) -> CliError {
    match e {
        VinbergError::UnboundedSlice { .. } => CliError::Bound(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

/// Result of a command: the report and whether it is conclusive.
struct Outcome {
    body: Vec<Value>,
    inconclusive: Option<String>,
}

impl Outcome {
    fn one(v: Value) -> Self {
        Outcome { body: vec![v], inconclusive: None }
    }
}

fn with_seed(mut v: Value, seed: u64) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), json!(seed));
    }
    v
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn subdivision_entry(s: &Subdivision) -> Value {
    json!({
        "cells": s.to_json()["cells"],
        "volumes": s.volumes(),
        "dimension": stratum_dimension(s).ok(),
        "corner_cuts": detect(s).len(),
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Enumerate { triangulations_only, up_to_symmetry, corner_cut_free } => {
            let keep = |s: &Subdivision| (!triangulations_only || s.is_triangulation()) && (!corner_cut_free || detect(s).is_empty());
            let list: Vec<Subdivision> = enumerate_all().iter().filter(|s| keep(s)).cloned().collect();
            let entries: Vec<Value> = if *up_to_symmetry {
                orbits(&list)
                    .iter()
                    .map(|o| {
                        let mut e = subdivision_entry(&o.representative);
                        e["orbit_size"] = json!(o.size);
                        e
                    })
                    .collect()
            } else {
                list.iter().map(subdivision_entry).collect()
            };
            Ok(Outcome::one(json!({ "count": entries.len(), "subdivisions": entries })))
        }
        Command::Regularity { subdivision } => {
            let s = input::subdivision(subdivision)?;
            let r = is_regular(&s).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Outcome::one(json!({
                "subdivision": s.to_json(),
                "regular": r.regular,
                "witness": r.witness.map(|h| h.to_json()["heights"].clone()),
            })))
        }
        Command::FromHeights { heights } => {
            let h = input::heights(heights)?;
            let s = from_heights(&h);
            Ok(Outcome::one(json!({ "heights": h.to_json()["heights"], "subdivision": s.to_json() })))
        }
        Command::Bullet { subdivision, heights } => {
            if let Some(h) = heights {
                let h = input::heights(h)?;
                let m = modify_heights(&h);
                let mut v = m.to_json();
                v["input_subdivision"] = from_heights(&h).to_json();
                v["subdivision"] = from_heights(&m.heights).to_json();
                Ok(Outcome::one(v))
            } else {
                let s = input::subdivision(subdivision.as_deref().expect("required by clap"))?;
                let cuts = detect(&s);
                let m = modify(&s).map_err(|e| CliError::Input(e.to_string()))?;
                Ok(Outcome::one(json!({
                    "input_subdivision": s.to_json(),
                    "corner_cuts": cuts,
                    "subdivision": m.to_json(),
                })))
            }
        }
        Command::Classify { subdivision, coefficients } => {
            let s = input::subdivision(subdivision)?;
            let c = input::coefficients(coefficients)?;
            let d = classify_degeneration(&s, &c).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Outcome::one(d.to_json()))
        }
        Command::H1 { all, subdivision } => {
            let list: Vec<Subdivision> = if *all {
                enumerate_all().to_vec()
            } else {
                vec![input::subdivision(subdivision.as_deref().expect("required by clap"))?]
            };
            let rows: Vec<(Value, bool)> = list
                .par_iter()
                .map(|s| {
                    let h = h1_torus(s);
                    let verdict = reduce_and_verdict(s);
                    let hanging: Vec<_> = hanging_sequence(s);
                    let ok = h.is_trivial() && verdict == ReductionVerdict::TrivialByReduction;
                    (json!({ "subdivision": s.to_json(), "h1": h, "reduction": verdict, "hanging": hanging }), ok)
                })
                .collect();
            let bad = rows.iter().filter(|r| !r.1).count();
            Ok(Outcome {
                body: rows.into_iter().map(|r| r.0).collect(),
                inconclusive: (bad > 0).then(|| format!("{bad} subdivisions without a trivial verdict from both methods")),
            })
        }
        Command::Vinberg { lattice, gram, v0, max_height, window, dot } => {
            if *max_height < 0 {
                return Err(CliError::Input("max-height must be nonnegative".into()));
            }
            let l = match (lattice, gram) {
                (Some(NamedLattice::Even), _) => GramLattice::even(),
                (Some(NamedLattice::Odd1), _) => GramLattice::odd1(),
                (Some(NamedLattice::Odd2), _) => GramLattice::odd2(),
                (None, Some(g)) => input::lattice(g)?,
                (None, None) => unreachable!("required by clap"),
            };
            let v0 = match v0 {
                Some(v) => input::vector(v)?,
                None => l.default_v0(),
            };
            let run = vinberg_run(&l, &v0, *max_height, *window).map_err(vinberg_err)?;
            let diagram = CoxeterDiagram::from_roots(&l, &run.roots());
            if let Some(p) = dot {
                write_file(p, &diagram.to_dot())?;
            }
            let inconclusive = (!run.terminated).then(|| format!("no finite-volume polytope up to height {max_height}"));
            let body = json!({ "lattice": l, "v0": v0, "window": window, "run": run, "diagram": diagram.to_json() });
            Ok(Outcome { body: vec![body], inconclusive })
        }
        Command::Subdiagrams { diagram, rank, window, dot } => {
            if *rank < 2 || *window < 1 {
                return Err(CliError::Input("rank must be at least 2 and window at least 1".into()));
            }
            let d = input::diagram(diagram, *window)?;
            if let Some(p) = dot {
                write_file(p, &d.to_dot())?;
            }
            let classes = classify_subdiagrams(&d, *rank).map_err(vinberg_err)?;
            Ok(Outcome::one(json!({ "vertices": d.len(), "classes": classes, "count": classes.len() })))
        }
        Command::Invariants => {
            let r = invariants_report();
            let ok = r.iter().all(|i| i.ok);
            Ok(Outcome { body: vec![json!({ "invariants": r, "all_ok": ok })], inconclusive: (!ok).then(|| "mismatch".into()) })
        }
        Command::Atlas { dot } => {
            let a = boundary_atlas();
            if let Some(p) = dot {
                write_file(p, &a.to_dot())?;
            }
            let mut v = a.to_json();
            v["maximal"] = json!(a.maximal());
            v["maximal_components"] = json!(maximal_components(a));
            Ok(Outcome::one(v))
        }
        Command::Crosscheck { cusp } => {
            let atlas = boundary_atlas();
            let mut reports = Vec::new();
            if matches!(cusp, CrosscheckTarget::Even | CrosscheckTarget::All) {
                let l = GramLattice::even();
                let run = vinberg_run(&l, &l.default_v0(), 10, None).map_err(vinberg_err)?;
                let d = CoxeterDiagram::from_roots(&l, &run.roots());
                reports.push(crosscheck_even(atlas, &d).map_err(|e| CliError::Bound(e.to_string()))?);
            }
            if matches!(cusp, CrosscheckTarget::Odd1 | CrosscheckTarget::All) {
                let classes = classify_subdiagrams(&CoxeterDiagram::odd1_window(2), 4).map_err(vinberg_err)?;
                reports.push(crosscheck_odd1(atlas, &classes).map_err(|e| CliError::Bound(e.to_string()))?);
            }
            let ok = reports.iter().all(|r| r.counts_equal());
            Ok(Outcome {
                body: vec![json!({ "reports": reports, "counts_equal": ok })],
                inconclusive: (!ok).then(|| "counts differ".into()),
            })
        }
        Command::VerifyAll => {
            let r = verify::run(cli.seed, &verify::Bounds::default());
            for c in &r.criteria {
                eprintln!("{} criterion {:>2} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
            }
            let ok = r.all_pass;
            let v = serde_json::to_value(&r).expect("serializable");
            Ok(Outcome { body: vec![v], inconclusive: (!ok).then(|| "some criteria failed".into()) })
        }
    }
}

fn emit(cli: &Cli, out: &Outcome) -> Result<(), CliError> {
    let text = if matches!(cli.command, Command::H1 { .. }) {
        let mut t = String::new();
        for v in &out.body {
            t.push_str(&serde_json::to_string(&with_seed(v.clone(), cli.seed)).expect("serializable"));
            t.push('\n');
        }
        t
    } else {
        let v = with_seed(out.body[0].clone(), cli.seed);
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    };
    match &cli.output {
        Some(p) => write_file(p, &text),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // the reader went away, e.g. `| head`
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| CliError::Io(e.to_string())),
        },
    }
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var("CUBESTRATA_WORKERS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Input(format!("CUBESTRATA_WORKERS={v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_workers().and_then(|_| run(&cli)).and_then(|out| {
        emit(&cli, &out)?;
        match out.inconclusive {
            Some(m) => Err(CliError::Bound(m)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code())
        }
    }
}
