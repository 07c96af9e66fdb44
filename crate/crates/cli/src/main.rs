//! `toughham`: analyse graphs, build hamiltonian cycles, and run the lemma suites.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit status 0 means the command completed (even
//! if a suite found violations); 2 means bad input or unmet hypotheses.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use toughham::generators::{
    certify_brute_force, clique_join, complete_multipartite, least_free_k, planted_lemma_instance, random_free_graph,
    CertifiedGraph, FreenessCheck, PlantSpec, Provenance, BRUTE_FORCE_LIMIT,
};
use toughham::harness::{run_lemma_suite, tightness_search, LemmaId, SuiteConfig, SCHEMA_VERSION};
use toughham::invariants::{connectivity, independence_number, min_degree, toughness};
use toughham::io::{parse_graph, to_edge_list, to_graph6};
use toughham::oracle;
use toughham::patterns::is_p3_kp1_free;
use toughham::pipeline::{construct_hamiltonian_cycle, Family, TheoremInstance, EXACT_TOUGHNESS_LIMIT};
use toughham::{Graph, Rational};

#[derive(Parser)]
#[command(name = "toughham", version, about = "Toughness, forbidden patterns and hamiltonian cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Connectivity, independence number, minimum degree, toughness and freeness.
    Analyze {
        /// graph6 or edge-list file ("-" for stdin).
        file: String,
    },
    /// Verify the hypotheses and construct a hamiltonian cycle.
    Cycle {
        file: String,
        /// Required toughness.
        #[arg(long, default_value = "15")]
        t: Rational,
        /// Certify toughness by a family formula: complete_multipartite or clique_join.
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Exact hamiltonian cycle or path search.
    Oracle {
        file: String,
        /// Search for a hamiltonian path instead of a cycle.
        #[arg(long)]
        path: bool,
        /// Pin the path ends.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        ends: Option<Vec<usize>>,
    },
    /// Run a lemma property suite.
    Lemma {
        id: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Search free graphs for nonhamiltonian examples.
    Search {
        #[arg(long, default_value = "15")]
        t_max: Rational,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a graph: complete_multipartite 2,2,3 | clique_join 45 689,1,1 |
    /// components S 8,9,10 TRIVIAL | random_free N P K SEED.
    Gen {
        family: String,
        params: Vec<String>,
        /// Write the graph here (graph6, or an edge list if the name ends in .txt).
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&v).expect("serialisable"));
            ExitCode::SUCCESS
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(file: &str) -> Result<Graph, Failure> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(file).map_err(|e| Failure(format!("{file}: {e}")))?
    };
    Ok(parse_graph(&text)?)
}

fn with_schema(mut v: Value) -> Value {
    v.as_object_mut().expect("object").insert("schema_version".into(), json!(SCHEMA_VERSION));
    v
}

fn run(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::Analyze { file } => {
            let g = read_graph(&file)?;
            let tau = (g.n() <= EXACT_TOUGHNESS_LIMIT).then(|| toughness(&g));
            let freeness: Vec<Value> = (1..=3)
                .map(|k| {
                    let (free, w) = is_p3_kp1_free(&g, k);
                    json!({ "k": k, "free": free, "witness": w })
                })
                .collect();
            Ok(with_schema(json!({
                "graph6": to_graph6(&g),
                "n": g.n(),
                "m": g.edge_count(),
                "kappa": connectivity(&g).0,
                "alpha": independence_number(&g).0,
                "delta": if g.n() == 0 { None } else { Some(min_degree(&g)) },
                "toughness": tau,
                "freeness": freeness,
            })))
        }
        Command::Cycle { file, t, certificate } => {
            let g = read_graph(&file)?;
            let family = match certificate.as_deref() {
                None => None,
                Some(name) => Some(Family::parse(name).ok_or_else(|| Failure(format!("unknown family {name:?}")))?),
            };
            let inst = TheoremInstance::verify(g, t, family)?;
            let trace = construct_hamiltonian_cycle(&inst);
            Ok(with_schema(json!({ "terminal": trace.terminal(), "trace": trace })))
        }
        Command::Oracle { file, path, ends } => {
            let g = read_graph(&file)?;
            if path || ends.is_some() {
                let (u, v) = match ends.as_deref() {
                    Some([u, v]) => (Some(*u), Some(*v)),
                    _ => (None, None),
                };
                let ans = oracle::hamiltonian_path_oracle(&g, u, v)?;
                Ok(with_schema(json!({ "kind": "path", "answer": ans })))
            } else {
                let ans = oracle::hamiltonian_cycle_oracle(&g)?;
                Ok(with_schema(json!({ "kind": "cycle", "answer": ans })))
            }
        }
        Command::Lemma { id, n_max, seed, budget } => {
            let lemma: LemmaId = id.parse()?;
            let mut cfg: SuiteConfig = lemma.default_config(seed);
            if let Some(n) = n_max {
                cfg.n_max = n;
            }
            if budget.is_some() {
                cfg.budget = budget;
            }
            let report = run_lemma_suite(lemma, &cfg)?;
            if !report.passed() {
                eprintln!("{}: {} violation(s)", report.lemma_id, report.violations.len());
            }
            Ok(serde_json::to_value(report)?)
        }
        Command::Search { t_max, n_max, budget, seed } => {
            Ok(serde_json::to_value(tightness_search(t_max, n_max, budget, seed)?)?)
        }
        Command::Gen { family, params, out } => {
            let c = generate(&family, &params)?;
            if let Some(path) = out {
                let body =
                    if path.ends_with(".txt") { to_edge_list(&c.graph) } else { format!("{}\n", to_graph6(&c.graph)) };
                fs::write(&path, body).map_err(|e| Failure(format!("{path}: {e}")))?;
            }
            Ok(with_schema(serde_json::to_value(c)?))
        }
    }
}

fn list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| Failure(format!("bad number {x:?}")))).collect()
}

fn generate(family: &str, p: &[String]) -> Result<CertifiedGraph, Failure> {
    let arg = |i: usize| {
        p.get(i).map(String::as_str).ok_or_else(|| Failure(format!("{family}: missing parameter {}", i + 1)))
    };
    let num =
        |i: usize| -> Result<usize, Failure> { arg(i)?.parse().map_err(|_| Failure(format!("bad number {:?}", p[i]))) };
    Ok(match family {
        "complete_multipartite" | "multipartite" => complete_multipartite(&list(arg(0)?)?)?,
        "clique_join" => clique_join(num(0)?, &list(arg(1)?)?)?,
        "components" => {
            let spec = PlantSpec::Components { s: num(0)?, nontrivial: list(arg(1)?)?, trivial: num(2)? };
            planted_lemma_instance(&spec)?.certified
        }
        "random_free" => {
            let prob: f64 = arg(1)?.parse().map_err(|_| Failure(format!("bad probability {:?}", p[1])))?;
            let seed: u64 = arg(3)?.parse().map_err(|_| Failure(format!("bad seed {:?}", p[3])))?;
            let g = random_free_graph(num(0)?, prob, num(2)?, seed)?;
            if g.n() <= BRUTE_FORCE_LIMIT {
                certify_brute_force(&g)?
            } else {
                CertifiedGraph {
                    freeness_k: least_free_k(&g).unwrap_or(usize::MAX),
                    graph: g,
                    toughness_bound: Rational::ZERO,
                    provenance: Provenance::Trivial,
                    freeness_check: FreenessCheck::PatternSearch,
                }
            }
        }
        other => return Err(Failure(format!("unknown family {other:?}"))),
    })
}
