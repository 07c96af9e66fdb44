//! Property suites for the individual structural lemmas and a search for nonhamiltonian tough
//! graphs.
//!
//! Every suite turns a source (exhaustive enumeration or seeded sampling) into a list of
//! [`Instance`]s, checks each one independently on the rayon pool and aggregates the results into
//! a [`LemmaReport`]. A violation carries the graph6 string plus the instance parameters, and
//! [`replay`] re-runs the check on exactly that input. Reports are sorted before emission, so the
//! same seed and budget always give the same report (apart from the wall-clock runtime).
//!
//! `TOUGHHAM_THREADS` sets the number of worker threads.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{canonical_key, hereditary_classes, CANON_LIMIT};
use crate::generators::{clique_join, complete_multipartite, planted_lemma_instance, random_free_graph, PlantSpec};
use crate::graph::{Cycle, Graph, VertexSet};
use crate::invariants::{connectivity, degree_sum_check, dirac_type_check, independence_number, toughness};
use crate::io::{parse_graph6, to_graph6, ParseError};
use crate::oracle::{self, validate_cycle, validate_path_cover};
use crate::paths::{chvatal_erdos_cycle, insert_vertex, is_hamiltonian_connected, min_path_cover_p32p1free};
use crate::patterns::{classify_cutset, find_induced, is_p3_kp1_free, p3_union_kp1, structure_report};
use crate::pipeline::{assemble_lemma27, deficiency_split, Family, PipelineOptions, EXACT_TOUGHNESS_LIMIT};
use crate::rational::Rational;
use crate::star_matching::{
    generalized_matching, max_deficiency, star_matching, validate_generalized_matching, Bipartite, MatchingOptions,
    StarOutcome,
};

/// Version of every JSON document the harness emits.
pub const SCHEMA_VERSION: u32 = 1;
/// Largest order accepted by [`tightness_search`].
pub const TIGHTNESS_N_LIMIT: usize = 18;
/// Largest order for enumerated lemma suites.
pub const ENUMERATION_N_LIMIT: usize = 9;
/// Orders up to which [`tightness_search`] enumerates every free graph.
pub const TIGHTNESS_ENUMERATION_LIMIT: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("unknown lemma id {0:?}; known ids: {ids}", ids = known_ids())]
    UnknownLemma(String),
    #[error("n_max = {0} exceeds the limit {1} for this run")]
    TooLarge(usize, usize),
    #[error("replayed graph: {0}")]
    Parse(#[from] ParseError),
    #[error("violation parameters do not fit the graph: {0}")]
    BadParams(String),
}

fn known_ids() -> String {
    LemmaId::ALL.iter().map(|l| l.id()).collect::<Vec<_>>().join(", ")
}

/// The registered lemma suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    /// Structure of `G - S` for a `(P3 ∪ kP1)`-free graph and a cutset `S`.
    CutsetStructure,
    /// Star matchings exist iff the Hall-type condition holds.
    StarMatching,
    /// Generalized `K_{1,2s}`-matchings under the resource conditions.
    GeneralizedMatching,
    /// Generalized `K_{1,2}`-matchings in 4-tough free graphs, any cutset.
    GeneralizedK12,
    /// 1-tough graphs free of `P4`, `P3 ∪ P1` or `P2 ∪ 2P1` are hamiltonian.
    OneToughFree,
    /// More than 1-tough `(P3 ∪ P1)`-free graphs are hamiltonian-connected.
    HamiltonianConnected,
    /// Path covers of `(P3 ∪ 2P1)`-free graphs.
    PathCover,
    /// Inserting a high-degree vertex into a cycle.
    Insertion,
    /// Minimum-degree and degree-sum conditions in tough graphs.
    DegreeConditions,
    /// Many-components cycle assembly.
    ComponentAssembly,
    /// Tough sets of `(P3 ∪ P1)`-free graphs with `0 < tau <= 1` leave `alpha` components.
    ToughSetComponents,
    /// Connectivity versus independence number.
    ChvatalErdos,
    /// The deficiency split picks the largest maximally deficient set.
    DeficiencySplit,
}

impl LemmaId {
    pub const ALL: [LemmaId; 13] = [
        LemmaId::CutsetStructure,
        LemmaId::StarMatching,
        LemmaId::GeneralizedMatching,
        LemmaId::GeneralizedK12,
        LemmaId::OneToughFree,
        LemmaId::HamiltonianConnected,
        LemmaId::PathCover,
        LemmaId::Insertion,
        LemmaId::DegreeConditions,
        LemmaId::ComponentAssembly,
        LemmaId::ToughSetComponents,
        LemmaId::ChvatalErdos,
        LemmaId::DeficiencySplit,
    ];

    /// The canonical identifier.
    pub fn id(self) -> &'static str {
        self.aliases()[0]
    }

    /// Every accepted spelling, canonical one first.
    pub fn aliases(self) -> &'static [&'static str] {
        match self {
            LemmaId::CutsetStructure => &["2.1"],
            LemmaId::StarMatching => &["2.2"],
            LemmaId::GeneralizedMatching => &["2.3"],
            LemmaId::GeneralizedK12 => &["cor2.4", "2.4"],
            LemmaId::OneToughFree => &["result10", "2.5"],
            LemmaId::HamiltonianConnected => &["result5", "2.6"],
            LemmaId::PathCover => &["pathcover", "result9"],
            LemmaId::Insertion => &["result4", "2.8"],
            LemmaId::DegreeConditions => &["dirac", "result2"],
            LemmaId::ComponentAssembly => &["result11", "2.7"],
            LemmaId::ToughSetComponents => &["result13"],
            LemmaId::ChvatalErdos => &["CE", "result7", "ce"],
            LemmaId::DeficiencySplit => &["deficiency-split-maximality"],
        }
    }

    /// Default source size: `n_max` for enumerations, sample count for sampled suites.
    pub fn default_config(self, seed: u64) -> SuiteConfig {
        let (n_max, budget) = match self {
            LemmaId::CutsetStructure => (7, None),
            LemmaId::StarMatching => (0, Some(1000)),
            LemmaId::GeneralizedMatching => (0, Some(200)),
            LemmaId::GeneralizedK12 => (0, Some(200)),
            LemmaId::OneToughFree => (8, None),
            LemmaId::HamiltonianConnected => (8, None),
            LemmaId::PathCover => (9, None),
            LemmaId::Insertion => (14, Some(500)),
            LemmaId::DegreeConditions => (8, None),
            LemmaId::ComponentAssembly => (0, Some(20)),
            LemmaId::ToughSetComponents => (8, None),
            LemmaId::ChvatalErdos => (8, None),
            LemmaId::DeficiencySplit => (0, Some(500)),
        };
        SuiteConfig { n_max, seed, budget }
    }

    fn is_sampled(self) -> bool {
        matches!(
            self,
            LemmaId::StarMatching
                | LemmaId::GeneralizedMatching
                | LemmaId::GeneralizedK12
                | LemmaId::Insertion
                | LemmaId::ComponentAssembly
                | LemmaId::DeficiencySplit
        )
    }
}

impl FromStr for LemmaId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.aliases().contains(&s))
            .ok_or_else(|| HarnessError::UnknownLemma(s.to_string()))
    }
}

/// What a suite runs over. Enumerated suites use every graph with at most `n_max` vertices
/// (capped at `budget` instances if given); sampled suites draw `budget` instances from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub seed: u64,
    pub budget: Option<usize>,
}

/// Extra input that, together with the graph, pins down an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Params {
    Graph,
    /// Vertices `0..left` form `X`, the rest `Y`; `f` gives the star sizes.
    Bipartite {
        left: usize,
        f: Vec<usize>,
    },
    Cutset {
        cut: Vec<usize>,
        s: usize,
    },
    Assembly {
        cut: Vec<usize>,
        t: Rational,
    },
    Insertion {
        cycle: Vec<usize>,
        x: usize,
        t: Rational,
    },
    Clique {
        clique: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub params: Params,
}

impl Instance {
    fn graph(g: Graph) -> Instance {
        Instance { graph: g, params: Params::Graph }
    }
}

/// One failed clause; `graph6` plus `params` replay it through [`replay`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub graph6: String,
    pub clause: String,
    pub details: String,
    pub params: Params,
}

/// The outcome of one instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Checked {
    /// The instance met the hypotheses.
    pub applicable: bool,
    /// `(clause, details)` pairs.
    pub violations: Vec<(String, String)>,
    /// Counters such as which strategy fired.
    pub tally: Vec<String>,
}

impl Checked {
    fn fail(&mut self, clause: impl Into<String>, details: impl Into<String>) {
        self.violations.push((clause.into(), details.into()));
    }

    fn count(&mut self, key: impl Into<String>) {
        self.tally.push(key.into());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub schema_version: u32,
    pub lemma_id: String,
    /// Instances that met the hypotheses and were checked.
    pub instances_tested: usize,
    /// Instances produced by the source.
    pub instances_sourced: usize,
    pub violations: Vec<Violation>,
    pub runtime_seconds: f64,
    pub seed: u64,
    pub n_max: usize,
    pub budget: Option<usize>,
    pub tallies: BTreeMap<String, usize>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tally(&self, key: &str) -> usize {
        self.tallies.get(key).copied().unwrap_or(0)
    }
}

/// Runs `f` on a pool sized by `TOUGHHAM_THREADS`, or on the global pool if unset.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var("TOUGHHAM_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

pub fn run_lemma_suite(lemma: LemmaId, cfg: &SuiteConfig) -> Result<LemmaReport, HarnessError> {
    let start = Instant::now();
    let limit = match lemma {
        LemmaId::Insertion => 14,
        _ if lemma.is_sampled() => usize::MAX,
        _ => ENUMERATION_N_LIMIT,
    };
    if cfg.n_max > limit {
        return Err(HarnessError::TooLarge(cfg.n_max, limit));
    }
    let (instances, results) = with_pool(|| {
        let instances = source(lemma, cfg);
        let results: Vec<Checked> = instances.par_iter().map(|i| check_instance(lemma, i)).collect();
        (instances, results)
    });
    let mut tallies = BTreeMap::new();
    let mut rows: Vec<(String, Violation)> = Vec::new();
    let mut tested = 0;
    for (inst, r) in instances.iter().zip(results) {
        if r.applicable {
            tested += 1;
        }
        for t in r.tally {
            *tallies.entry(t).or_insert(0) += 1;
        }
        if !r.violations.is_empty() {
            let g6 = to_graph6(&inst.graph);
            let key = serde_json::to_string(&inst.params).expect("serialisable");
            for (clause, details) in r.violations {
                let v = Violation { graph6: g6.clone(), clause, details, params: inst.params.clone() };
                rows.push((key.clone(), v));
            }
        }
    }
    rows.sort_by(|(ka, a), (kb, b)| {
        (&a.graph6, &a.clause, &a.details, ka).cmp(&(&b.graph6, &b.clause, &b.details, kb))
    });
    let violations = rows.into_iter().map(|(_, v)| v).collect();
    Ok(LemmaReport {
        schema_version: SCHEMA_VERSION,
        lemma_id: lemma.id().to_string(),
        instances_tested: tested,
        instances_sourced: instances.len(),
        violations,
        runtime_seconds: start.elapsed().as_secs_f64(),
        seed: cfg.seed,
        n_max: cfg.n_max,
        budget: cfg.budget,
        tallies,
    })
}

/// Re-runs the check behind a violation; true iff the same clause fails again.
pub fn replay(lemma: LemmaId, graph6: &str, params: &Params, clause: &str) -> Result<bool, HarnessError> {
    let g = parse_graph6(graph6)?;
    let n = g.n();
    let in_range = |vs: &[usize]| vs.iter().all(|&v| v < n);
    let ok = match params {
        Params::Graph => true,
        Params::Bipartite { left, f } => *left <= n && f.len() == *left,
        Params::Cutset { cut, .. } | Params::Assembly { cut, .. } => in_range(cut),
        Params::Insertion { cycle, x, .. } => in_range(cycle) && *x < n,
        Params::Clique { clique } => in_range(clique),
    };
    if !ok {
        return Err(HarnessError::BadParams(format!("{params:?} for n = {n}")));
    }
    let r = check_instance(lemma, &Instance { graph: g, params: params.clone() });
    Ok(r.violations.iter().any(|(c, _)| c == clause))
}

// ---------------------------------------------------------------------------------------------
// Sources

fn enumerate(n_min: usize, n_max: usize, keep: impl Fn(&Graph) -> bool + Sync) -> Vec<Instance> {
    hereditary_classes(n_max, keep).into_iter().skip(n_min).flatten().map(Instance::graph).collect()
}

fn capped(mut v: Vec<Instance>, budget: Option<usize>) -> Vec<Instance> {
    if let Some(b) = budget {
        v.truncate(b);
    }
    v
}

fn source(lemma: LemmaId, cfg: &SuiteConfig) -> Vec<Instance> {
    let budget = cfg.budget.unwrap_or_else(|| lemma.default_config(0).budget.unwrap_or(0));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match lemma {
        LemmaId::CutsetStructure => capped(enumerate(1, cfg.n_max, |_| true), cfg.budget),
        LemmaId::OneToughFree | LemmaId::DegreeConditions | LemmaId::ChvatalErdos => {
            capped(enumerate(3, cfg.n_max, |_| true), cfg.budget)
        }
        LemmaId::HamiltonianConnected | LemmaId::ToughSetComponents => {
            capped(enumerate(2, cfg.n_max, |g| is_p3_kp1_free(g, 1).0), cfg.budget)
        }
        LemmaId::PathCover => capped(enumerate(1, cfg.n_max, |g| is_p3_kp1_free(g, 2).0), cfg.budget),
        LemmaId::StarMatching => (0..budget).map(|_| random_bipartite(&mut rng)).collect(),
        LemmaId::GeneralizedMatching => (0..budget).filter_map(|_| partner_instance(&mut rng)).collect(),
        LemmaId::GeneralizedK12 => (0..budget).map(|_| tough_cutset_instance(&mut rng)).collect(),
        LemmaId::Insertion => insertion_instances(&mut rng, budget, cfg.n_max.max(6)),
        LemmaId::ComponentAssembly => (0..budget).filter_map(|_| assembly_instance(&mut rng)).collect(),
        LemmaId::DeficiencySplit => (0..budget)
            .map(|i| if i % 2 == 0 { random_bipartite(&mut rng) } else { heavy_clique_instance(&mut rng) })
            .collect(),
    }
}

/// A bipartite instance with `|X| <= 8`, `|Y| <= 16`, `f <= 3`.
fn random_bipartite(rng: &mut ChaCha8Rng) -> Instance {
    let left = rng.gen_range(1..=8);
    let right = rng.gen_range(1..=16);
    let p = rng.gen_range(0.1..0.9);
    let f: Vec<usize> = (0..left).map(|_| rng.gen_range(1..=3)).collect();
    let mut edges = Vec::new();
    for x in 0..left {
        for y in 0..right {
            if rng.gen_bool(p) {
                edges.push((x, left + y));
            }
        }
    }
    Instance { graph: Graph::new(left + right, edges).expect("valid"), params: Params::Bipartite { left, f } }
}

fn partner_instance(rng: &mut ChaCha8Rng) -> Option<Instance> {
    let s = rng.gen_range(1..=2);
    let l = rng.gen_range(5..=7);
    let components: Vec<usize> = (0..l).map(|_| rng.gen_range(1..=4)).collect();
    let spec = PlantSpec::Partners {
        s,
        components,
        extra: rng.gen_range(0..=3),
        density: rng.gen_range(0.0..0.3),
        seed: rng.gen(),
    };
    let p = planted_lemma_instance(&spec).ok()?;
    Some(Instance { graph: p.certified.graph, params: Params::Cutset { cut: p.cut.to_vec(), s } })
}

/// A 4-tough member of a recognised family with a random cutset.
fn tough_cutset_instance(rng: &mut ChaCha8Rng) -> Instance {
    if rng.gen_bool(0.5) {
        let s = rng.gen_range(8..=24);
        let r = rng.gen_range(2..=s / 4);
        let sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=5)).collect();
        let g = clique_join(s, &sizes).expect("valid").graph;
        let mut cut: Vec<usize> = (0..s).collect();
        let mut start = s;
        for &c in &sizes {
            // Remove a random proper part of some cliques.
            let drop = if c > 1 && rng.gen_bool(0.3) { rng.gen_range(1..c) } else { 0 };
            cut.extend(start..start + drop);
            start += c;
        }
        Instance { graph: g, params: Params::Cutset { cut, s: 1 } }
    } else {
        let m = rng.gen_range(2..=5);
        let parts_count = rng.gen_range(5..=8);
        let mut parts: Vec<usize> = (0..parts_count).map(|_| rng.gen_range(1..=m)).collect();
        parts[0] = m;
        // Keep tau = (n - m) / m >= 4.
        while parts.iter().sum::<usize>() < 5 * m {
            parts.push(rng.gen_range(1..=m));
        }
        let g = complete_multipartite(&parts).expect("valid").graph;
        let keep = rng.gen_range(2..=m);
        let mut part0: Vec<usize> = (0..m).collect();
        part0.shuffle(rng);
        let kept: BTreeSet<usize> = part0[..keep].iter().copied().collect();
        let cut = (0..g.n()).filter(|v| !kept.contains(v)).collect();
        Instance { graph: g, params: Params::Cutset { cut, s: 1 } }
    }
}

/// Dense random graphs with a cycle missing `x` (and possibly a few more vertices) such that
/// `d_C(x) > n/(t+1) - 1` for `t = tau(G)`.
fn insertion_instances(rng: &mut ChaCha8Rng, budget: usize, n_max: usize) -> Vec<Instance> {
    let mut out = Vec::with_capacity(budget);
    let mut attempts = 0;
    while out.len() < budget && attempts < budget * 100 {
        attempts += 1;
        let n = rng.gen_range(6..=n_max.min(14));
        let p = rng.gen_range(0.45..0.95);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).expect("valid");
        let tau = toughness(&g).value;
        if tau <= Rational::ZERO || tau.is_infinite() {
            continue;
        }
        let x = rng.gen_range(0..n);
        let mut others: Vec<usize> = (0..n).filter(|&v| v != x).collect();
        others.shuffle(rng);
        let drop = rng.gen_range(0..=2.min(n - 4));
        let span = g.set_of(others[drop..].iter().copied());
        let sub = g.induced(&span);
        let Ok(ans) = oracle::hamiltonian_cycle_oracle(&sub.graph) else { continue };
        let Some(c) = ans.into_witness() else { continue };
        let cycle = sub.path_to_host(c.vertices());
        let d = cycle.iter().filter(|&&v| g.has_edge(v, x)).count();
        if num_rational::Ratio::from_integer(d as i64) <= Rational::degree_threshold(n, tau) {
            continue;
        }
        out.push(Instance { graph: g, params: Params::Insertion { cycle, x, t: tau } });
    }
    out
}

fn assembly_instance(rng: &mut ChaCha8Rng) -> Option<Instance> {
    let nontrivial: Vec<usize> = (0..rng.gen_range(3..=5)).map(|_| rng.gen_range(2..=12)).collect();
    let trivial = rng.gen_range(2..=4);
    let r = nontrivial.len() + trivial;
    let s = 8 * r + rng.gen_range(0..=10);
    let p = planted_lemma_instance(&PlantSpec::Components { s, nontrivial, trivial }).ok()?;
    let t = p.certified.toughness_bound;
    let t = if t >= Rational::int(8) { Rational::int(8) } else { t };
    Some(Instance { graph: p.certified.graph, params: Params::Assembly { cut: p.cut.to_vec(), t } })
}

fn heavy_clique_instance(rng: &mut ChaCha8Rng) -> Instance {
    let q = rng.gen_range(4..=14);
    let outside = rng.gen_range(1..=(q - 2) / 2);
    let attachments: Vec<Vec<usize>> = (0..outside)
        .map(|_| {
            let k = rng.gen_range(1..=q.min(4));
            let mut vs: Vec<usize> = (0..q).collect();
            vs.shuffle(rng);
            vs.truncate(k);
            vs.sort_unstable();
            vs
        })
        .collect();
    let rest = rng.gen_range(0..=2);
    let p = planted_lemma_instance(&PlantSpec::HeavyClique { q, attachments, rest }).expect("valid spec");
    Instance { graph: p.certified.graph, params: Params::Clique { clique: (0..q).collect() } }
}

// ---------------------------------------------------------------------------------------------
// Checks

/// Checks one instance against one lemma, verifying the hypotheses first.
pub fn check_instance(lemma: LemmaId, inst: &Instance) -> Checked {
    let mut out = Checked::default();
    let g = &inst.graph;
    match (lemma, &inst.params) {
        (LemmaId::CutsetStructure, Params::Graph) => check_cutset_structure(g, &mut out),
        (LemmaId::StarMatching, Params::Bipartite { left, f }) => check_star_matching(g, *left, f, &mut out),
        (LemmaId::GeneralizedMatching, Params::Cutset { cut, s }) => {
            check_generalized(g, &g.set_of(cut.iter().copied()), *s, false, &mut out)
        }
        (LemmaId::GeneralizedK12, Params::Cutset { cut, .. }) => {
            let tough = certified_toughness(g).is_some_and(|t| t >= Rational::int(4));
            if tough && is_p3_kp1_free(g, 3).0 {
                check_generalized(g, &g.set_of(cut.iter().copied()), 1, true, &mut out);
            }
        }
        (LemmaId::OneToughFree, Params::Graph) => check_one_tough(g, &mut out),
        (LemmaId::HamiltonianConnected, Params::Graph) => {
            if g.n() >= 3 && is_p3_kp1_free(g, 1).0 && toughness(g).value > Rational::ONE {
                out.applicable = true;
                match is_hamiltonian_connected(g) {
                    Ok(true) => {}
                    Ok(false) => out.fail("hamiltonian-connected", "some pair has no hamiltonian path"),
                    Err(e) => out.fail("hamiltonian-connected", e.to_string()),
                }
            }
        }
        (LemmaId::PathCover, Params::Graph) => check_path_cover(g, &mut out),
        (LemmaId::Insertion, Params::Insertion { cycle, x, t }) => check_insertion(g, cycle, *x, *t, &mut out),
        (LemmaId::DegreeConditions, Params::Graph) => check_degree_conditions(g, &mut out),
        (LemmaId::ComponentAssembly, Params::Assembly { cut, t }) => {
            check_assembly(g, &g.set_of(cut.iter().copied()), *t, &mut out)
        }
        (LemmaId::ToughSetComponents, Params::Graph) => check_tough_sets(g, &mut out),
        (LemmaId::ChvatalErdos, Params::Graph) => check_chvatal_erdos(g, &mut out),
        (LemmaId::DeficiencySplit, Params::Bipartite { left, f }) => check_max_deficiency(g, *left, f, &mut out),
        (LemmaId::DeficiencySplit, Params::Clique { clique }) => {
            check_split(g, &g.set_of(clique.iter().copied()), &mut out)
        }
        _ => {}
    }
    out
}

/// Exact toughness where feasible, otherwise a family formula.
pub fn certified_toughness(g: &Graph) -> Option<Rational> {
    if g.is_complete_graph() || g.n() <= EXACT_TOUGHNESS_LIMIT {
        return Some(toughness(g).value);
    }
    [Family::CompleteMultipartite, Family::CliqueJoin].iter().find_map(|f| f.certify(g))
}

fn set_str(s: &VertexSet) -> String {
    format!("{:?}", s.to_vec())
}

fn check_cutset_structure(g: &Graph, out: &mut Checked) {
    let n = g.n();
    for k in 1..=3 {
        if !is_p3_kp1_free(g, k).0 {
            continue;
        }
        out.applicable = true;
        for mask in 0u64..(1 << n) {
            let s = VertexSet::from_mask(n, mask);
            let Ok(cls) = classify_cutset(g, &s) else { continue };
            out.count(format!("k={k} cutsets"));
            let report = structure_report(g, &cls, k);
            for c in report.failures() {
                out.fail(
                    format!("k={k} {}", c.clause),
                    format!("S = {}: {}", set_str(&s), c.detail.clone().unwrap_or_default()),
                );
            }
        }
    }
}

fn bipartite_of(g: &Graph, left: usize) -> Bipartite {
    let right = g.n() - left;
    let adj = (0..left).map(|x| (0..right).filter(|&y| g.has_edge(x, left + y)).collect()).collect();
    Bipartite::new(left, right, adj)
}

/// `f(X) - |N(X)|` for every subset mask of the left side.
fn deficiencies(b: &Bipartite, f: &[usize]) -> Vec<i64> {
    (0u32..1 << b.left)
        .map(|mask| {
            let xs: Vec<usize> = (0..b.left).filter(|&x| mask >> x & 1 == 1).collect();
            let demand: usize = xs.iter().map(|&x| f[x]).sum();
            demand as i64 - b.neighborhood(&xs).len() as i64
        })
        .collect()
}

fn check_star_matching(g: &Graph, left: usize, f: &[usize], out: &mut Checked) {
    out.applicable = true;
    let b = bipartite_of(g, left);
    let hall = deficiencies(&b, f).iter().all(|&d| d <= 0);
    match star_matching(&b, f) {
        StarOutcome::Stars(m) => {
            out.count("stars");
            if !m.is_valid(&b, f) {
                out.fail("matching-valid", format!("invalid stars {:?}", m.leaves));
            }
            if !hall {
                out.fail("matching-iff-hall", "stars returned although some X has |N(X)| < f(X)");
            }
        }
        StarOutcome::Deficient(xs) => {
            out.count("deficient");
            let demand: usize = xs.iter().map(|&x| f[x]).sum();
            if b.neighborhood(&xs).len() >= demand {
                out.fail("deficient-set", format!("{xs:?} is not deficient"));
            }
            if hall {
                out.fail("matching-iff-hall", "no stars returned although the condition holds");
            }
        }
    }
}

fn check_generalized(g: &Graph, cut: &VertexSet, s: usize, any_cutset: bool, out: &mut Checked) {
    let comps = g.components(cut);
    let w = comps.len();
    if w < 2 || (!any_cutset && w < 5) {
        return;
    }
    if cut.len() < 2 * s * w || comps.iter().any(|c| g.neighborhood_of_set(c).intersection_len(cut) < 4 * s) {
        return;
    }
    out.applicable = true;
    out.count(format!("w={}", w.min(9)));
    let opts = MatchingOptions { allow_few_components: any_cutset };
    match generalized_matching(g, cut, s, opts) {
        Ok(m) => {
            if let Err(d) = validate_generalized_matching(g, cut, &m) {
                out.fail("validation", d.to_string());
            }
            for b in m.balance_methods.iter().flatten() {
                out.count(format!("balance {b:?}"));
            }
        }
        Err(e) => out.fail("construction", e.to_string()),
    }
}

fn check_one_tough(g: &Graph, out: &mut Checked) {
    let patterns = [
        ("P4", Graph::path(4)),
        ("P3+P1", p3_union_kp1(1)),
        ("P2+2P1", Graph::path(2).disjoint_union(&Graph::empty(2))),
    ];
    // Any R induced in one of these maximal patterns: R-free implies free of the maximal one,
    // so checking the three maximal patterns covers every R.
    let free: Vec<&str> =
        patterns.iter().filter(|(_, p)| matches!(find_induced(g, p), Ok(None))).map(|(name, _)| *name).collect();
    if free.is_empty() || toughness(g).value < Rational::ONE {
        return;
    }
    out.applicable = true;
    let ham = matches!(oracle::hamiltonian_cycle_oracle(g), Ok(a) if a.is_yes());
    for name in free {
        out.count(format!("{name}-free"));
        if !ham {
            out.fail(format!("{name}-free hamiltonian"), "1-tough but the oracle finds no hamiltonian cycle");
        }
    }
}

fn check_path_cover(g: &Graph, out: &mut Checked) {
    if !is_p3_kp1_free(g, 2).0 {
        return;
    }
    out.applicable = true;
    let res = match min_path_cover_p32p1free(g) {
        Ok(r) => r,
        Err(e) => {
            out.fail("construction", e.to_string());
            return;
        }
    };
    out.count(format!("{:?}", res.route));
    let k = res.cover.len();
    if !validate_path_cover(g, &res.cover) {
        out.fail("valid-cover", format!("{:?}", res.cover.paths));
    }
    let tau = toughness(g).value;
    if tau >= Rational::ONE && k > 2 {
        out.fail("tough-at-most-two", format!("tau = {tau}, {k} paths"));
    }
    if tau > Rational::ZERO && tau < Rational::ONE {
        match &res.cover.witness {
            None => out.fail("witness-bound", "no cutset returned"),
            Some(w) => {
                let bound = g.component_count(w) as i64 - w.len() as i64;
                let alpha = independence_number(g).0 as i64;
                if (k as i64) > bound || bound > alpha {
                    out.fail("witness-bound", format!("k = {k}, w(G - W) - |W| = {bound}, alpha = {alpha}"));
                }
            }
        }
    }
    if g.n() <= oracle::PATH_COVER_LIMIT {
        match oracle::min_path_cover_oracle(g) {
            Ok((best, _)) if best > k => out.fail("oracle-optimum", format!("oracle {best} > constructive {k}")),
            Ok(_) => {}
            Err(e) => out.fail("oracle-optimum", e.to_string()),
        }
    }
}

fn check_insertion(g: &Graph, cycle: &[usize], x: usize, t: Rational, out: &mut Checked) {
    let n = g.n();
    let Ok(c) = Cycle::new(g, cycle.to_vec()) else { return };
    if t <= Rational::ZERO || n > EXACT_TOUGHNESS_LIMIT || c.len() >= n || c.position(x).is_some() {
        return;
    }
    if toughness(g).value < t {
        return;
    }
    let d = cycle.iter().filter(|&&v| g.has_edge(v, x)).count();
    if num_rational::Ratio::from_integer(d as i64) <= Rational::degree_threshold(n, t) {
        return;
    }
    out.applicable = true;
    match insert_vertex(g, &c, x, t) {
        Ok((c2, rung)) => {
            out.count(format!("{rung:?}"));
            let mut want = c.vertex_set(n);
            want.insert(x);
            if c2.validate(g).is_err() || c2.vertex_set(n) != want || c2.len() != want.len() {
                out.fail("vertex-set", format!("returned {:?}", c2.vertices()));
            }
        }
        Err(e) => out.fail("insertion", e.to_string()),
    }
}

fn check_degree_conditions(g: &Graph, out: &mut Checked) {
    if g.n() < 3 {
        return;
    }
    let tau = toughness(g).value;
    if tau <= Rational::ZERO {
        return;
    }
    let min_deg = dirac_type_check(g, tau);
    let sum = degree_sum_check(g, tau).0;
    if !min_deg && !sum {
        return;
    }
    out.applicable = true;
    let ham = matches!(oracle::hamiltonian_cycle_oracle(g), Ok(a) if a.is_yes());
    if min_deg {
        out.count("min-degree");
        if !ham {
            out.fail("min-degree hamiltonian", format!("tau = {tau}"));
        }
    }
    if sum {
        out.count("degree-sum");
        if !ham {
            out.fail("degree-sum hamiltonian", format!("tau = {tau}"));
        }
    }
}

fn check_assembly(g: &Graph, cut: &VertexSet, t: Rational, out: &mut Checked) {
    if t < Rational::int(8) || !certified_toughness(g).is_some_and(|tau| tau >= t) || !is_p3_kp1_free(g, 3).0 {
        return;
    }
    match crate::invariants::is_proper_cutset(g, cut) {
        Ok(true) => {}
        _ => return,
    }
    match assemble_lemma27(g, cut, t, &PipelineOptions::default()) {
        Err(_) => {}
        Ok(Ok(a)) => {
            out.applicable = true;
            for r in &a.rungs {
                out.count(format!("{r:?}"));
            }
            if !validate_cycle(g, &a.cycle) {
                out.fail("hamiltonian", "assembled cycle does not validate");
            }
        }
        Ok(Err(why)) => {
            out.applicable = true;
            out.fail("hamiltonian", why);
        }
    }
}

fn check_tough_sets(g: &Graph, out: &mut Checked) {
    let n = g.n();
    if !is_p3_kp1_free(g, 1).0 {
        return;
    }
    let tau = toughness(g).value;
    if tau <= Rational::ZERO || tau > Rational::ONE {
        return;
    }
    out.applicable = true;
    let alpha = independence_number(g).0;
    for mask in 0u64..(1 << n) {
        let s = VertexSet::from_mask(n, mask);
        let w = g.component_count(&s);
        if w < 2 || Rational::frac(s.len() as i64, w as i64) != tau {
            continue;
        }
        out.count("tough sets");
        if w != alpha {
            out.fail("components-equal-alpha", format!("S = {}: w = {w}, alpha = {alpha}", set_str(&s)));
        }
    }
}

fn check_chvatal_erdos(g: &Graph, out: &mut Checked) {
    if g.n() < 3 {
        return;
    }
    let (kappa, _) = connectivity(g);
    let (alpha, _) = independence_number(g);
    if kappa + 1 < alpha {
        return;
    }
    out.applicable = true;
    if kappa + 1 >= alpha {
        out.count("path instances");
        if !matches!(oracle::hamiltonian_path_oracle(g, None, None), Ok(a) if a.is_yes()) {
            out.fail("path", format!("kappa = {kappa}, alpha = {alpha}"));
        }
    }
    if kappa >= alpha {
        out.count("cycle instances");
        match chvatal_erdos_cycle(g) {
            Ok(o) => {
                if o.fallback {
                    out.count("cycle fallback");
                }
                if !validate_cycle(g, &o.cycle) {
                    out.fail("cycle", "returned cycle does not validate");
                }
            }
            Err(e) => out.fail("cycle", e.to_string()),
        }
    }
    if kappa > alpha {
        out.count("connected instances");
        if !matches!(is_hamiltonian_connected(g), Ok(true)) {
            out.fail("hamiltonian-connected", format!("kappa = {kappa}, alpha = {alpha}"));
        }
    }
}

fn check_max_deficiency(g: &Graph, left: usize, f: &[usize], out: &mut Checked) {
    out.applicable = true;
    let b = bipartite_of(g, left);
    let all = deficiencies(&b, f);
    let best = *all.iter().max().expect("nonempty");
    let (def, set) = max_deficiency(&b, f);
    if def as i64 != best {
        out.fail("maximum", format!("reported {def}, brute force {best}"));
    }
    let mask = set.iter().fold(0usize, |m, &x| m | 1 << x);
    if all[mask] != best {
        out.fail("maximizer", format!("{set:?} has deficiency {}", all[mask]));
    }
    let union = (0..all.len()).filter(|&m| all[m] == best).fold(0usize, |u, m| u | m);
    if union != mask {
        out.fail("largest-maximizer", format!("returned mask {mask:#b}, union of maximizers {union:#b}"));
    }
}

fn check_split(g: &Graph, q1: &VertexSet, out: &mut Checked) {
    let nbhd = g.neighborhood_of_set(q1);
    if !g.is_complete(q1) || (q1.len() as i64) - 2 * (nbhd.len() as i64) < 2 || nbhd.len() > 12 {
        return;
    }
    out.applicable = true;
    let sp = match deficiency_split(g, q1) {
        Ok(sp) => sp,
        Err(e) => {
            out.fail("split", e.to_string());
            return;
        }
    };
    // Brute force over subsets of N(Q1): the largest set of maximum deficiency.
    let outside = nbhd.to_vec();
    let mut best = 0i64;
    let mut union = 0usize;
    for mask in 0usize..1 << outside.len() {
        let x = g.set_of((0..outside.len()).filter(|&i| mask >> i & 1 == 1).map(|i| outside[i]));
        let d = 2 * x.len() as i64 - g.neighborhood_of_set(&x).intersection_len(q1) as i64;
        if d > best {
            best = d;
            union = 0;
        }
        if d == best {
            union |= mask;
        }
    }
    // With no strictly deficient set the split leaves S' empty.
    let union = if best == 0 { 0 } else { union };
    let expected = g.set_of((0..outside.len()).filter(|&i| union >> i & 1 == 1).map(|i| outside[i]));
    // What the gluing needs: every T ⊆ S'' keeps 2|T| neighbours in Q1 - N(S').
    let rest = sp.s_double_prime.to_vec();
    let private = q1.difference(&g.neighborhood_of_set(&sp.s_prime));
    for mask in 1usize..1 << rest.len() {
        let t = g.set_of((0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]));
        if g.neighborhood_of_set(&t).intersection_len(&private) < 2 * t.len() {
            out.fail("remainder-condition", format!("T = {} lacks 2|T| private neighbours", set_str(&t)));
            break;
        }
    }
    out.count(if sp.s_prime.is_empty() { "empty S'" } else { "nonempty S'" });
    if sp.s_prime != expected {
        out.fail("largest-deficient-set", format!("S' = {}, expected {}", set_str(&sp.s_prime), set_str(&expected)));
    }
    if sp.d1_star.len() < 2 {
        out.fail("d1-star-size", format!("|D1*| = {}", sp.d1_star.len()));
    }
    let mut seen = VertexSet::new(g.n());
    let centres: Vec<usize> = sp.matching.iter().map(|(c, _)| *c).collect();
    if centres != sp.s_double_prime.to_vec() {
        out.fail("matching", "centres differ from S''");
    }
    for (c, leaves) in &sp.matching {
        for &l in leaves {
            if !sp.d1_star.contains(l) || !g.has_edge(*c, l) || seen.contains(l) {
                out.fail("matching", format!("leaf {l} of {c} is outside D1*, nonadjacent or reused"));
            }
            seen.insert(l);
        }
        if leaves.len() != 2 {
            out.fail("matching", format!("{c} has {} leaves", leaves.len()));
        }
    }
}

// ---------------------------------------------------------------------------------------------
// Tightness search

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TightnessRecord {
    pub graph6: String,
    pub n: usize,
    pub tau: Rational,
    pub hamiltonian: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub schema_version: u32,
    pub t_max: Rational,
    pub n_max: usize,
    pub budget: usize,
    pub seed: u64,
    /// Distinct connected free graphs examined.
    pub examined: usize,
    /// Nonhamiltonian finds, sorted by graph6.
    pub records: Vec<TightnessRecord>,
    /// Largest toughness among the nonhamiltonian finds.
    pub max_tau: Option<Rational>,
    /// Records with `tau >= t_max`.
    pub counterexamples: Vec<TightnessRecord>,
}

/// Searches connected `(P3 ∪ 3P1)`-free graphs for nonhamiltonian ones: every graph on
/// `3..=min(n_max, 7)` vertices, plus `budget` seeded samples on `3..=n_max` vertices.
/// Graphs with `tau < 1` are nonhamiltonian outright; graphs meeting the minimum-degree
/// condition for their toughness are hamiltonian; the rest go to the oracle. Finds with
/// `tau >= t_max` are reported separately as counterexamples.
pub fn tightness_search(
    t_max: Rational,
    n_max: usize,
    budget: usize,
    seed: u64,
) -> Result<TightnessReport, HarnessError> {
    if n_max > TIGHTNESS_N_LIMIT {
        return Err(HarnessError::TooLarge(n_max, TIGHTNESS_N_LIMIT));
    }
    let free = |g: &Graph| is_p3_kp1_free(g, 3).0;
    let mut graphs: Vec<Graph> = if n_max >= 3 {
        with_pool(|| hereditary_classes(n_max.min(TIGHTNESS_ENUMERATION_LIMIT), free))
            .into_iter()
            .skip(3)
            .flatten()
            .collect()
    } else {
        Vec::new()
    };
    if n_max >= 3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let n = rng.gen_range(3..=n_max);
            let p = rng.gen_range(0.2..0.95);
            let g = random_free_graph(n, p, 3, rng.gen()).expect("valid probability");
            graphs.push(g);
        }
    }
    // Deduplicate up to isomorphism where the canonical key applies.
    let mut seen = BTreeSet::new();
    graphs.retain(|g| {
        let key = if g.n() <= CANON_LIMIT { format!("{}:{}", g.n(), canonical_key(g)) } else { to_graph6(g) };
        g.is_connected() && seen.insert(key)
    });
    let examined = graphs.len();
    let mut records: Vec<TightnessRecord> = with_pool(|| {
        graphs
            .par_iter()
            .filter_map(|g| {
                let tau = toughness(g).value;
                // Hamiltonian graphs are 1-tough; everything else goes to the exact oracle.
                let ham = tau >= Rational::ONE
                    && oracle::hamiltonian_cycle_oracle(g).expect("n within oracle limit").is_yes();
                (!ham).then(|| TightnessRecord { graph6: to_graph6(g), n: g.n(), tau, hamiltonian: false })
            })
            .collect()
    });
    records.sort();
    let max_tau = records.iter().map(|r| r.tau).max();
    let counterexamples = records.iter().filter(|r| r.tau >= t_max).cloned().collect();
    Ok(TightnessReport {
        schema_version: SCHEMA_VERSION,
        t_max,
        n_max,
        budget,
        seed,
        examined,
        records,
        max_tau,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(lemma: LemmaId, n_max: usize, budget: Option<usize>) -> LemmaReport {
        run_lemma_suite(lemma, &SuiteConfig { n_max, seed: 7, budget }).unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for l in LemmaId::ALL {
            for a in l.aliases() {
                assert_eq!(a.parse::<LemmaId>().unwrap(), l);
            }
        }
        assert!(matches!("2.9".parse::<LemmaId>(), Err(HarnessError::UnknownLemma(_))));
    }

    #[test]
    fn every_suite_runs_clean_at_small_size() {
        for l in LemmaId::ALL {
            let cfg = l.default_config(11);
            let cfg = SuiteConfig {
                n_max: cfg.n_max.min(6),
                seed: 11,
                budget: cfg.budget.map(|b| b.min(if l == LemmaId::ComponentAssembly { 2 } else { 40 })),
            };
            let r = run_lemma_suite(l, &cfg).unwrap();
            // The cutset bound on path covers has genuine counterexamples (see below).
            let unexpected: Vec<_> =
                r.violations.iter().filter(|v| !(l == LemmaId::PathCover && v.clause == "witness-bound")).collect();
            assert!(unexpected.is_empty(), "{}: {:?}", l.id(), unexpected);
            assert!(r.instances_tested > 0, "{} tested nothing", l.id());
        }
    }

    #[test]
    fn path_cover_bound_fails_on_the_net() {
        // A triangle with a pendant at each vertex: (P3 ∪ 2P1)-free, tau = 1/2, no hamiltonian
        // path, yet w(G - W) - |W| <= 1 for every W.
        let net = Graph::new(6, [(3, 4), (4, 5), (3, 5), (0, 5), (1, 4), (2, 3)]).unwrap();
        assert!(is_p3_kp1_free(&net, 2).0);
        assert_eq!(toughness(&net).value, Rational::frac(1, 2));
        assert_eq!(oracle::min_path_cover_oracle(&net).unwrap().0, 2);
        let best = (0u64..64)
            .map(|m| {
                let w = VertexSet::from_mask(6, m);
                net.component_count(&w) as i64 - w.len() as i64
            })
            .max();
        assert_eq!(best, Some(1));
        let r = check_instance(LemmaId::PathCover, &Instance::graph(net.clone()));
        assert_eq!(r.violations.len(), 1);
        assert!(replay(LemmaId::PathCover, &to_graph6(&net), &Params::Graph, "witness-bound").unwrap());
    }

    #[test]
    fn reports_are_reproducible() {
        let a = small(LemmaId::StarMatching, 0, Some(50));
        let b = small(LemmaId::StarMatching, 0, Some(50));
        assert_eq!(a.tallies, b.tallies);
        assert_eq!(a.instances_tested, b.instances_tested);
    }

    #[test]
    fn replay_detects_a_planted_failure() {
        // A 1-tough P4-free graph is hamiltonian, so no violation replays; a non-instance
        // (a star, not 1-tough) is simply not applicable.
        assert!(!replay(LemmaId::OneToughFree, &to_graph6(&Graph::cycle(4)), &Params::Graph, "P4-free hamiltonian")
            .unwrap());
        assert!(check_instance(LemmaId::OneToughFree, &Instance::graph(Graph::star(3))).violations.is_empty());
        // Deficiency check on a deliberately wrong claim fails the replay of the right clause.
        assert!(replay(LemmaId::StarMatching, "Bw", &Params::Bipartite { left: 9, f: vec![] }, "x").is_err());
    }

    #[test]
    fn tightness_small() {
        let r = tightness_search(Rational::int(15), 6, 50, 1).unwrap();
        assert!(r.counterexamples.is_empty());
        assert!(r.records.iter().all(|x| x.tau < Rational::ONE));
        assert!(!r.records.is_empty());
        assert_eq!(r, tightness_search(Rational::int(15), 6, 50, 1).unwrap());
        let empty = tightness_search(Rational::int(15), 2, 0, 1).unwrap();
        assert!(empty.records.is_empty() && empty.examined == 0);
        assert!(tightness_search(Rational::int(15), 19, 0, 1).is_err());
    }
}
