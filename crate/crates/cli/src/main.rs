use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trisphere::bistellar::{apply_generalized_move, classify_move, enumerate_moves, MoveClass};
use trisphere::catalog;
use trisphere::census::{self, CensusSpec};
use trisphere::collapse::{is_collapsible, CollapseStatus, DEFAULT_BUDGET};
use trisphere::homology::reduced_betti;
use trisphere::io::{
    census_node, collapse_verdict_node, move_node, parse_facets, sphere_certificate_node, write_facets, Node, Report,
};
use trisphere::recognition::{
    certify_sphere, invariant_suite, is_combinatorial_manifold, BallPolicy, CertifyOptions, SphereVerdict,
};
use trisphere::structure::{is_pseudomanifold, is_weak_pm_with_boundary, is_weak_pseudomanifold};
use trisphere::{Face, SimplicialComplex};

const OK: u8 = 0;
const ERROR: u8 = 1;
const NEGATIVE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "trisphere", version, about = "Exact tools for small simplicial complexes")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true, env = "TRISPHERE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Facet-list file, `-` for stdin, or a catalog name.
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// f-vector, Euler characteristic and structural flags.
    Info(Input),
    /// Reduced GF(2) Betti numbers.
    Homology(Input),
    /// Search for a collapse to a single vertex.
    Collapse {
        #[command(flatten)]
        input: Input,
        /// Search without a node budget.
        #[arg(long, conflicts_with = "budget")]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// List generalized bistellar moves.
    Moves {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "all")]
        filter: MoveFilter,
    },
    /// Apply the generalized move at a vertex set.
    ApplyMove {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertex set, e.g. 1,2,5,6.
        #[arg(long)]
        a_set: String,
        /// Print the resulting facet list instead of a report.
        #[arg(long)]
        facets: bool,
    },
    /// Certify a combinatorial sphere.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Skip the combinatorial manifold check.
        #[arg(long)]
        assume_manifold: bool,
        #[arg(long, default_value = "auto", value_parser = parse_policy)]
        policy: BallPolicy,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Enumerate 2-complexes, or sample random complexes for acyclic non-collapsible ones.
    Census {
        #[arg(long, value_enum, required_unless_present = "samples")]
        spec: Option<Preset>,
        /// Disable the vertex-labeling symmetry breaking.
        #[arg(long)]
        no_symmetry_breaking: bool,
        /// Print every representative's facet encoding.
        #[arg(long)]
        list: bool,
        /// Number of random complexes to test.
        #[arg(long, conflicts_with = "spec")]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// List catalog entries or export one as a facet list.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
    /// Run the built-in consistency suites.
    Verify {
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveFilter {
    All,
    Bistellar,
    Proper,
    Singular,
    SingularBs1,
    SingularBs2,
}

impl MoveFilter {
    fn classes(self) -> Vec<MoveClass> {
        match self {
            MoveFilter::All => vec![
                MoveClass::Bistellar,
                MoveClass::ProperBistellar,
                MoveClass::SingularBs1,
                MoveClass::SingularBs2,
            ],
            MoveFilter::Bistellar => vec![MoveClass::Bistellar, MoveClass::ProperBistellar],
            MoveFilter::Proper => vec![MoveClass::ProperBistellar],
            MoveFilter::Singular => vec![MoveClass::SingularBs1, MoveClass::SingularBs2],
            MoveFilter::SingularBs1 => vec![MoveClass::SingularBs1],
            MoveFilter::SingularBs2 => vec![MoveClass::SingularBs2],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Closed 2-dimensional weak pseudomanifolds on at most 6 vertices.
    Closed6,
    /// Closed 2-dimensional weak pseudomanifolds on 7 vertices with at most 10 triangles.
    Closed7,
    /// 2-complexes on at most 7 vertices, at most 10 triangles, every edge of even degree.
    Even7,
}

fn parse_policy(s: &str) -> Result<BallPolicy, String> {
    s.parse()
}

fn load(input: &Input) -> Result<SimplicialComplex, String> {
    let text = if input.input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        let path = PathBuf::from(&input.input);
        if !path.exists() && catalog::names().contains(&input.input.as_str()) {
            return catalog::get(&input.input).map(|e| e.complex).map_err(|e| e.to_string());
        }
        fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    let parsed = parse_facets(&text).map_err(|e| e.to_string())?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.complex)
}

fn flag(b: bool) -> Node {
    Node::scalar(b)
}

fn run(cli: Cli) -> Result<u8, String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    match cli.command {
        Command::Info(input) => {
            let k = load(&input)?;
            let mut r = Report::new("info", Some(&k), None);
            r.push("dimension", Node::scalar(k.dim()));
            r.push("vertices", Node::scalar(k.num_vertices()));
            r.push("facets", Node::scalar(k.num_facets()));
            r.push("f_vector", Node::scalar(k.f_vector()));
            r.push("euler_characteristic", Node::scalar(k.euler_characteristic()));
            r.push("pure", flag(k.is_pure()));
            r.push("connected", flag(k.is_connected()));
            r.push("weak_pseudomanifold", flag(is_weak_pseudomanifold(&k)));
            r.push("pseudomanifold", flag(is_pseudomanifold(&k)));
            r.push("weak_pseudomanifold_with_boundary", flag(is_weak_pm_with_boundary(&k)));
            r.push("combinatorial_manifold", Node::scalar(is_combinatorial_manifold(&k).status));
            print!("{}", r.render());
            Ok(OK)
        }
        Command::Homology(input) => {
            let k = load(&input)?;
            let b = reduced_betti(&k);
            let mut r = Report::new("homology", Some(&k), None);
            r.push("betti", Node::scalar(&b));
            r.push("acyclic", flag(b.is_zero()));
            print!("{}", r.render());
            Ok(OK)
        }
        Command::Collapse { input, exhaustive, budget } => {
            let k = load(&input)?;
            let v = is_collapsible(&k, if exhaustive { u64::MAX } else { budget });
            let mut r = Report::new("collapse", Some(&k), None);
            r.push("verdict", collapse_verdict_node(&v));
            print!("{}", r.render());
            Ok(match v.status {
                CollapseStatus::Collapsible => OK,
                CollapseStatus::NotCollapsibleExhausted => NEGATIVE,
                CollapseStatus::InconclusiveBudget => INCONCLUSIVE,
            })
        }
        Command::Moves { input, filter } => {
            let k = load(&input)?;
            let moves = enumerate_moves(&k, &filter.classes());
            let mut r = Report::new("moves", Some(&k), None);
            r.push("count", Node::scalar(moves.len()));
            r.push("moves", Node::List(moves.iter().map(move_node).collect()));
            print!("{}", r.render());
            Ok(OK)
        }
        Command::ApplyMove { input, a_set, facets } => {
            let k = load(&input)?;
            let a: Face = a_set.parse().map_err(|e| format!("--a-set: {e}"))?;
            let m = classify_move(&k, a).map_err(|e| e.to_string())?;
            let result = apply_generalized_move(&k, a).map_err(|e| e.to_string())?;
            if facets {
                print!("{}", write_facets(&result));
            } else {
                let mut r = Report::new("apply-move", Some(&k), None);
                r.push("move", move_node(&m));
                r.push("result", Node::scalar(result.encoding()));
                r.push("result_f_vector", Node::scalar(result.f_vector()));
                print!("{}", r.render());
            }
            Ok(OK)
        }
        Command::Certify { input, assume_manifold, policy, budget } => {
            let k = load(&input)?;
            let cert = certify_sphere(&k, &CertifyOptions { assume_manifold, policy, budget })
                .map_err(|e| e.to_string())?;
            let mut r = Report::new("certify", Some(&k), None);
            r.push("certificate", sphere_certificate_node(&cert));
            print!("{}", r.render());
            Ok(match cert.verdict {
                SphereVerdict::CombinatorialSphere => OK,
                SphereVerdict::PreconditionFailed(_) => NEGATIVE,
                SphereVerdict::Inconclusive(_) => INCONCLUSIVE,
            })
        }
        Command::Census { spec: Some(preset), no_symmetry_breaking, list, .. } => {
            let (mut spec, expected) = match preset {
                Preset::Closed6 => (CensusSpec::closed_surfaces_upto6(), census::expected_closed_upto6()),
                Preset::Closed7 => (CensusSpec::closed_surfaces_7_upto10(), census::expected_closed_7()),
                Preset::Even7 => (CensusSpec::even_upto7_upto10(), census::expected_even()),
            };
            spec.symmetry_breaking = !no_symmetry_breaking;
            let result = census::enumerate(&spec).map_err(|e| e.to_string())?;
            let m = census::match_catalog(&result, &expected);
            let mut node = census_node(&result);
            if !list {
                if let Node::Map(entries) = &mut node {
                    entries.retain(|(k, _)| k != "representatives");
                }
            }
            let mut r = Report::new("census", None, None);
            r.push("census", node);
            r.push(
                "catalog_match",
                Node::map()
                    .with(
                        "matched",
                        Node::Map(m.matched.iter().map(|(i, name)| (name.clone(), Node::scalar(i))).collect()),
                    )
                    .with(
                        "unexpected",
                        Node::List(
                            m.unexpected.iter().map(|&i| Node::scalar(result.representatives[i].encoding())).collect(),
                        ),
                    )
                    .with("missing", Node::List(m.missing.iter().map(Node::scalar).collect()))
                    .with("perfect", flag(m.is_perfect())),
            );
            print!("{}", r.render());
            Ok(if m.is_perfect() { OK } else { NEGATIVE })
        }
        Command::Census { samples, seed, .. } => {
            let n = samples.expect("clap requires --spec or --samples");
            let t = census::sample_collapse_test(n, seed);
            let mut r = Report::new("census", None, Some(seed));
            let by_dim = Node::Map(
                t.acyclic_by_dimension.iter().map(|(d, c)| (d.to_string(), Node::scalar(c))).collect(),
            );
            r.push(
                "sampling",
                Node::map()
                    .with("tested", Node::scalar(t.tested))
                    .with("acyclic", Node::scalar(t.acyclic_found))
                    .with("acyclic_by_dimension", by_dim)
                    .with("collapsible", Node::scalar(t.collapsible_count))
                    .with("counterexamples", Node::List(t.counterexamples.iter().map(Node::scalar).collect()))
                    .with("inconclusive", Node::List(t.inconclusive.iter().map(Node::scalar).collect()))
                    .with("euler_violations", Node::scalar(t.euler_violations))
                    .with("certificate_failures", Node::scalar(t.certificate_failures))
                    .with("three_dim_without_free_face", Node::scalar(t.three_dim_without_free_face))
                    .with("minimal_f_vector_hits", Node::scalar(t.minimal_f_vector_hits))
                    .with("max_nodes", Node::scalar(t.max_nodes)),
            );
            print!("{}", r.render());
            Ok(if !t.counterexamples.is_empty() || t.euler_violations > 0 || t.certificate_failures > 0 {
                NEGATIVE
            } else if !t.inconclusive.is_empty() {
                INCONCLUSIVE
            } else {
                OK
            })
        }
        Command::Catalog { name: Some(name) } => {
            let e = catalog::get(&name).map_err(|e| e.to_string())?;
            print!("{}", write_facets(&e.complex));
            Ok(OK)
        }
        Command::Catalog { name: None } => {
            let entries = catalog::all().map_err(|e| e.to_string())?;
            let mut r = Report::new("catalog", None, None);
            r.push(
                "entries",
                Node::Map(
                    entries
                        .iter()
                        .map(|e| (e.name.to_string(), Node::scalar(e.complex.f_vector())))
                        .collect(),
                ),
            );
            print!("{}", r.render());
            Ok(OK)
        }
        Command::Verify { pairs, seed } => {
            let suite = invariant_suite(pairs, seed);
            let checks = catalog::move_checks();
            let catalog_ok = catalog::all().is_ok();
            let moves_ok = checks.iter().all(|c| c.passed);
            let mut r = Report::new("verify", None, Some(seed));
            r.push("catalog_valid", flag(catalog_ok));
            r.push(
                "decompositions",
                Node::map()
                    .with("checked", Node::scalar(suite.decompositions))
                    .with("failures", Node::List(suite.decomposition_failures.iter().map(Node::scalar).collect())),
            );
            r.push(
                "neighbourhoods",
                Node::map()
                    .with("checked", Node::scalar(suite.neighbourhoods))
                    .with("failures", Node::List(suite.neighbourhood_failures.iter().map(Node::scalar).collect())),
            );
            r.push("move_checks", Node::List(checks.iter().map(Node::scalar).collect()));
            let ok = catalog_ok && moves_ok && suite.passed();
            r.push("passed", flag(ok));
            print!("{}", r.render());
            Ok(if ok { OK } else { NEGATIVE })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => OK,
                _ => ERROR,
            };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR)
        }
    }
}
