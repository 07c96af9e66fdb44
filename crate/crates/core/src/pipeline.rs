//! Constructive hamiltonian cycles for tough `(P3 ∪ 3P1)`-free graphs.
//!
//! The driver checks the hypotheses, tries the degree conditions, decomposes around a
//! nonadjacent pair of minimum degree sum and then follows one of two constructive routes:
//!
//! * many components behind the cutset: chain the components through cutset vertices into a
//!   cycle and insert the remaining cutset vertices one at a time;
//! * three components: find a clique `Q1` with `|Q1| - 2|N(Q1)| >= 2`, split its neighbourhood
//!   by deficiency, cover everything else by paths ending in `S*` and thread those paths
//!   through the complete component `D1*`.
//!
//! Whatever the constructive routes cannot handle falls back to cycle extension and then to the
//! exact oracle; each run records the branches it took and ends in exactly one terminal tag.

use serde::Serialize;
use thiserror::Error;

use crate::generators::{
    clique_join_toughness_formula, multipartite_toughness_formula, recognize_clique_join,
    recognize_complete_multipartite, CertifiedGraph, FreenessCheck, Provenance,
};
use crate::graph::{Cycle, Graph, Path, VertexSet};
use crate::invariants::{degree_sum_check, dirac_type_check, min_degree_sum_pair, toughness, ToughnessCertificate};
use crate::oracle::{self, validate_cycle};
use crate::paths::{distinct_ends, extend_cycle, initial_cycle, insert_vertex, order_component, InsertRung, SpliceLog};
use crate::patterns::{is_p3_kp1_free, PatternWitness};
use crate::rational::Rational;
use crate::star_matching::{
    generalized_matching, max_deficiency, star_matching, Bipartite, GeneralizedStarMatching, MatchingOptions,
    StarOutcome,
};

/// Smallest toughness the driver accepts.
pub const MIN_TOUGHNESS: i64 = 15;
/// Largest order handled by exact toughness when building an instance.
pub const EXACT_TOUGHNESS_LIMIT: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("need at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("t = {0} is below the supported minimum 15")]
    TooWeak(Rational),
    #[error("toughness {value} is below t = {t}")]
    NotTough { value: Rational, t: Rational },
    #[error("graph is not (P3 ∪ 3P1)-free: induced copy at {0:?}")]
    NotFree(PatternWitness),
    #[error("no toughness certificate: n = {0} is beyond exact computation and no family matched")]
    NoCertificate(usize),
    #[error("graph is not a member of family {0}")]
    NotInFamily(String),
    #[error("cutset hypothesis failed: {0}")]
    Cutset(String),
}

/// How the toughness hypothesis is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ToughnessEvidence {
    Computed(ToughnessCertificate),
    Analytic { bound: Rational, provenance: Provenance },
}

impl ToughnessEvidence {
    pub fn bound(&self) -> Rational {
        match self {
            ToughnessEvidence::Computed(c) => c.value,
            ToughnessEvidence::Analytic { bound, .. } => *bound,
        }
    }
}

/// A graph with verified hypotheses: `t >= 15`, `tau >= t` (computed or by family formula)
/// and `(P3 ∪ 3P1)`-freeness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremInstance {
    pub g: Graph,
    pub t: Rational,
    pub toughness: ToughnessEvidence,
    pub freeness: FreenessCheck,
}

/// The two recognised families with toughness formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    CompleteMultipartite,
    CliqueJoin,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::CompleteMultipartite => "complete_multipartite",
            Family::CliqueJoin => "clique_join",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "complete_multipartite" | "multipartite" => Some(Family::CompleteMultipartite),
            "clique_join" => Some(Family::CliqueJoin),
            _ => None,
        }
    }

    /// Toughness if `g` belongs to the family.
    pub fn certify(self, g: &Graph) -> Option<Rational> {
        match self {
            Family::CompleteMultipartite => {
                recognize_complete_multipartite(g).map(|p| multipartite_toughness_formula(&p))
            }
            Family::CliqueJoin => recognize_clique_join(g).map(|(s, c)| clique_join_toughness_formula(s, &c)),
        }
    }
}

impl TheoremInstance {
    /// Establishes the hypotheses from scratch: exact toughness for complete graphs and
    /// `n <= 18`, otherwise a family formula (the named one, or any recognised family);
    /// freeness by pattern search.
    pub fn verify(g: Graph, t: Rational, family: Option<Family>) -> Result<TheoremInstance, HypothesisError> {
        check_basic(&g, t)?;
        let toughness = if g.is_complete_graph() || (family.is_none() && g.n() <= EXACT_TOUGHNESS_LIMIT) {
            ToughnessEvidence::Computed(toughness(&g))
        } else {
            let fams: Vec<Family> = match family {
                Some(f) => vec![f],
                None => vec![Family::CompleteMultipartite, Family::CliqueJoin],
            };
            let found = fams.iter().find_map(|f| f.certify(&g).map(|b| (*f, b)));
            match (found, family) {
                (Some((f, bound)), _) => {
                    ToughnessEvidence::Analytic { bound, provenance: Provenance::FamilyFormula(f.name().into()) }
                }
                (None, Some(f)) => return Err(HypothesisError::NotInFamily(f.name().into())),
                (None, None) => return Err(HypothesisError::NoCertificate(g.n())),
            }
        };
        if toughness.bound() < t {
            return Err(HypothesisError::NotTough { value: toughness.bound(), t });
        }
        if let (false, Some(w)) = is_p3_kp1_free(&g, 3) {
            return Err(HypothesisError::NotFree(w));
        }
        Ok(TheoremInstance { g, t, toughness, freeness: FreenessCheck::PatternSearch })
    }

    /// Trusts a generator certificate (re-checking only that it is strong enough).
    pub fn from_certified(c: &CertifiedGraph, t: Rational) -> Result<TheoremInstance, HypothesisError> {
        check_basic(&c.graph, t)?;
        if c.toughness_bound < t {
            return Err(HypothesisError::NotTough { value: c.toughness_bound, t });
        }
        if c.freeness_k > 3 {
            let (_, w) = is_p3_kp1_free(&c.graph, 3);
            return Err(HypothesisError::NotFree(w.expect("freeness_k > 3 means a copy exists")));
        }
        let toughness = match c.provenance {
            Provenance::BruteForce => ToughnessEvidence::Computed(toughness(&c.graph)),
            _ => ToughnessEvidence::Analytic { bound: c.toughness_bound, provenance: c.provenance.clone() },
        };
        Ok(TheoremInstance { g: c.graph.clone(), t, toughness, freeness: c.freeness_check })
    }
}

fn check_basic(g: &Graph, t: Rational) -> Result<(), HypothesisError> {
    if g.n() < 3 {
        return Err(HypothesisError::TooSmall(g.n()));
    }
    if t < Rational::int(MIN_TOUGHNESS) {
        return Err(HypothesisError::TooWeak(t));
    }
    Ok(())
}

/// Branch tags. Terminal tags: `DegreeSumShortcut`, `Lemma27Assembly`, `Claim1Glue`,
/// `CeExtension`, `OracleFallback`, `Failure`; the rest are informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BranchTag {
    HypothesesVerified,
    DiracCondition,
    DegreeSumCondition,
    Decomposed,
    StructureUnavailable,
    ManyComponents,
    HeavyClique,
    DeficiencySplit,
    PathSystem,
    /// The degree conditions hold and the cycle came from cycle extension.
    DegreeSumShortcut,
    /// Components chained through the cutset, remaining cutset vertices inserted.
    #[serde(rename = "LEMMA_2_7_ASSEMBLY")]
    Lemma27Assembly,
    /// Paths ending in `S*` threaded through `D1*`.
    #[serde(rename = "CLAIM1_GLUE")]
    Claim1Glue,
    /// A constructive route failed outside the shortcut regime; cycle extension succeeded.
    CeExtension,
    OracleFallback,
    Failure,
}

impl BranchTag {
    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            BranchTag::DegreeSumShortcut
                | BranchTag::Lemma27Assembly
                | BranchTag::Claim1Glue
                | BranchTag::CeExtension
                | BranchTag::OracleFallback
                | BranchTag::Failure
        )
    }

    /// Terminal tags produced without the exact oracle.
    pub fn is_constructive(self) -> bool {
        self.is_terminal() && !matches!(self, BranchTag::OracleFallback | BranchTag::Failure)
    }
}

/// Everything a run did, for inspection and JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleTrace {
    /// The hamiltonian cycle, or `None` for FAILURE.
    pub result: Option<Cycle>,
    pub branch_log: Vec<BranchTag>,
    pub notes: Vec<String>,
    pub splice_log: Option<SpliceLog>,
    pub toughness_provenance: ToughnessEvidence,
    pub insert_rungs: Vec<InsertRung>,
    /// True iff `result` passed the independent validator (always true when present).
    pub validated: bool,
}

impl CycleTrace {
    pub fn terminal(&self) -> BranchTag {
        *self.branch_log.iter().rev().find(|t| t.is_terminal()).unwrap_or(&BranchTag::Failure)
    }
}

/// The sets around a nonadjacent pair `u, v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionState {
    pub u: usize,
    pub v: usize,
    /// `N_G(uv)`: neighbours of `u` or `v`, other than `u` and `v`.
    pub n_uv: VertexSet,
    pub n_u: VertexSet,
    pub n_v: VertexSet,
    /// `N_G(uv) - (N_u ∪ N_v)`.
    pub s: VertexSet,
    /// Components of `G - N_G(uv)`.
    pub outer_components: Vec<VertexSet>,
    /// Components of `G - S`.
    pub components: Vec<VertexSet>,
    /// The component of `G - S` containing a largest component of `G - N_G(uv)`.
    pub d1: VertexSet,
}

/// Why [`decompose`] gave no decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecomposeOutcome {
    Decomposed(Box<DecompositionState>),
    /// Every nonadjacent pair has a large degree sum; carries the least minimizing pair.
    Shortcut(Option<(usize, usize)>),
}

/// Decomposes at the least nonadjacent pair of minimum degree sum unless the degree-sum
/// condition makes the graph hamiltonian outright.
pub fn decompose(inst: &TheoremInstance) -> Result<DecomposeOutcome, HypothesisError> {
    let (holds, pair) = degree_sum_check(&inst.g, inst.t);
    if holds {
        return Ok(DecomposeOutcome::Shortcut(min_degree_sum_pair(&inst.g).map(|(u, v, _)| (u, v))));
    }
    let (u, v) = pair.expect("a failing pair");
    decompose_at(&inst.g, u, v).map(|d| DecomposeOutcome::Decomposed(Box::new(d)))
}

/// `N_u`, `N_v`, `S` and `D1` for the nonadjacent pair `u, v`, asserting that `S` is a proper
/// cutset with `w(G - S) = w(G - N_G(uv)) >= 3`.
pub fn decompose_at(g: &Graph, u: usize, v: usize) -> Result<DecompositionState, HypothesisError> {
    let mut n_uv = g.neighbors(u).union(g.neighbors(v));
    n_uv.remove(u);
    n_uv.remove(v);
    let mut allowed_u = n_uv.clone();
    allowed_u.insert(u);
    let n_u = g.set_of(n_uv.iter().filter(|&x| g.neighbors(x).is_subset(&allowed_u)));
    let rest = n_uv.difference(&n_u);
    let mut allowed_v = rest.clone();
    allowed_v.insert(v);
    let n_v = g.set_of(rest.iter().filter(|&x| g.neighbors(x).is_subset(&allowed_v)));
    let s = rest.difference(&n_v);
    let outer = g.components(&n_uv);
    let comps = g.components(&s);
    if outer.len() < 3 || comps.len() != outer.len() {
        return Err(HypothesisError::Cutset(format!(
            "w(G - N(uv)) = {}, w(G - S) = {}; need equal and at least 3",
            outer.len(),
            comps.len()
        )));
    }
    if !s.iter().all(|x| comps.iter().filter(|c| g.neighbors(x).intersects(c)).count() >= 2) {
        return Err(HypothesisError::Cutset("S is not a proper cutset".into()));
    }
    let largest = outer.iter().max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a))).expect("nonempty");
    let anchor = largest.first().expect("nonempty component");
    let d1 = comps.iter().find(|c| c.contains(anchor)).expect("covers").clone();
    Ok(DecompositionState { u, v, n_uv, n_u, n_v, s, outer_components: outer, components: comps, d1 })
}

/// Whether every pair of components of `G - N_G(uv)` leaves more than `n/(t+1) - 1` vertices
/// outside `N_G(uv)` and the pair (the many-components regime).
pub fn many_components_regime(g: &Graph, d: &DecompositionState, t: Rational) -> bool {
    let threshold = Rational::degree_threshold(g.n(), t);
    let outside = g.n() - d.n_uv.len();
    let oc = &d.outer_components;
    (0..oc.len()).all(|i| {
        (i + 1..oc.len()).all(|j| {
            let left = outside - oc[i].len() - oc[j].len();
            num_rational::Ratio::from_integer(left as i64) > threshold
        })
    })
}

/// A clique `Q1 ⊆ D1` with `|Q1| - 2|N_G(Q1)| >= 2`: the whole component if complete, else
/// complete components of `D1 - T` for a tough set `T` of `G[D1]` (when `|D1| <= 18`), else
/// maximal cliques of `G[D1]` explored within `budget` search nodes.
pub fn heavy_clique_search(g: &Graph, d1: &VertexSet, budget: u64) -> Option<VertexSet> {
    let heavy = |q: &VertexSet| q.len() as i64 - 2 * g.neighborhood_of_set(q).len() as i64 >= 2;
    if g.is_complete(d1) {
        return heavy(d1).then(|| d1.clone());
    }
    if d1.len() <= EXACT_TOUGHNESS_LIMIT {
        let sub = g.induced(d1);
        let t = sub.set_to_host(&toughness(&sub.graph).tough_set, g.n());
        for c in g.components_within(&d1.difference(&t)) {
            if g.is_complete(&c) && heavy(&c) {
                return Some(c);
            }
        }
    }
    let mut found = None;
    let mut nodes = 0u64;
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, d1.clone(), VertexSet::new(g.n()), &mut nodes, budget, &mut |q| {
        let q = g.set_of(q.iter().copied());
        if heavy(&q) {
            found = Some(q);
            true
        } else {
            false
        }
    });
    found
}

/// Maximal cliques with pivoting; `visit` returns true to stop.
fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    p: VertexSet,
    x: VertexSet,
    nodes: &mut u64,
    budget: u64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    *nodes += 1;
    if *nodes > budget {
        return true;
    }
    if p.is_empty() && x.is_empty() {
        return visit(r);
    }
    let pivot = p.union(&x).iter().max_by_key(|&w| g.neighbors(w).intersection_len(&p)).expect("nonempty");
    let mut p = p;
    let mut x = x;
    for v in p.difference(g.neighbors(pivot)).iter() {
        r.push(v);
        let nv = g.neighbors(v);
        if bron_kerbosch(g, r, p.intersection(nv), x.intersection(nv), nodes, budget, visit) {
            return true;
        }
        r.pop();
        p.remove(v);
        x.insert(v);
    }
    false
}

/// `S'`, `S''`, `S*`, `D1*` and the `K_{1,2}`-matching of `S''` into `Q1 - N_{Q1}(S')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencySplit {
    pub q1: VertexSet,
    pub s_prime: VertexSet,
    pub s_double_prime: VertexSet,
    pub s_star: VertexSet,
    pub d1_star: VertexSet,
    /// `(centre, [leaf, leaf])` for each vertex of `S''`.
    pub matching: Vec<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("|Q1| - 2|N(Q1)| = {0} < 2")]
    NotHeavy(i64),
    #[error("Q1 is not a clique")]
    NotClique,
    #[error("no K_(1,2)-matching for S'' (deficient {0:?})")]
    NoMatching(Vec<usize>),
}

/// Splits `N_G(Q1)`: `S'` is the maximal set of maximum deficiency `2|X| - |N_{Q1}(X)|`
/// (empty when that maximum is 0), computed from a minimum cut; every subset of the remainder
/// `S''` then has at least twice its size in private neighbours in `Q1 - N_{Q1}(S')`.
pub fn deficiency_split(g: &Graph, q1: &VertexSet) -> Result<DeficiencySplit, SplitError> {
    if !g.is_complete(q1) {
        return Err(SplitError::NotClique);
    }
    let nbhd = g.neighborhood_of_set(q1);
    let weight = q1.len() as i64 - 2 * nbhd.len() as i64;
    if weight < 2 {
        return Err(SplitError::NotHeavy(weight));
    }
    let left = nbhd.to_vec();
    let right = q1.to_vec();
    let bip = |cols: &[usize], rows: &[usize]| {
        let adj = rows
            .iter()
            .map(|&x| cols.iter().enumerate().filter(|(_, &q)| g.has_edge(x, q)).map(|(i, _)| i).collect())
            .collect();
        Bipartite::new(rows.len(), cols.len(), adj)
    };
    let (def, maximizer) = max_deficiency(&bip(&right, &left), &vec![2; left.len()]);
    let s_prime = if def == 0 { g.empty_set() } else { g.set_of(maximizer.iter().map(|&i| left[i])) };
    let s_dd = nbhd.difference(&s_prime);
    let nq_sp = g.neighborhood_of_set(&s_prime).intersection(q1);
    let d1_star = q1.difference(&nq_sp);
    let s_star = nq_sp.union(&s_dd);
    let centres = s_dd.to_vec();
    let pool = d1_star.to_vec();
    let matching = match star_matching(&bip(&pool, &centres), &vec![2; centres.len()]) {
        StarOutcome::Stars(m) => {
            centres.iter().zip(m.leaves).map(|(&c, ls)| (c, ls.into_iter().map(|i| pool[i]).collect())).collect()
        }
        StarOutcome::Deficient(xs) => return Err(SplitError::NoMatching(xs.into_iter().map(|i| centres[i]).collect())),
    };
    Ok(DeficiencySplit { q1: q1.clone(), s_prime, s_double_prime: s_dd, s_star, d1_star, matching })
}

/// Covers `G - (Q1 ∪ S*)` by paths whose two ends are distinct vertices of `S*`: a
/// `K_{1,2}`-matching assigns two private `S*` partners to each component, and each
/// component is traversed by a hamiltonian path between neighbours of its partners.
pub fn claim1_paths(g: &Graph, split: &DeficiencySplit) -> Result<Vec<Path>, String> {
    let rest = split.q1.union(&split.s_star).complement();
    let comps = g.components_within(&rest);
    let pool = split.s_star.to_vec();
    let adj = comps
        .iter()
        .map(|c| pool.iter().enumerate().filter(|(_, &x)| g.neighbors(x).intersects(c)).map(|(i, _)| i).collect())
        .collect();
    let leaves = match star_matching(&Bipartite::new(comps.len(), pool.len(), adj), &vec![2; comps.len()]) {
        StarOutcome::Stars(m) => m.leaves,
        StarOutcome::Deficient(xs) => return Err(format!("components {xs:?} lack two private S* partners")),
    };
    let mut paths = Vec::with_capacity(comps.len());
    for (c, ls) in comps.iter().zip(leaves) {
        let (x, y) = (pool[ls[0]], pool[ls[1]]);
        let (x, y) = if distinct_ends(g, c, x, y) { (x, y) } else { (y, x) };
        let inner =
            traverse(g, c, x, y).ok_or_else(|| format!("no path through {:?} between {x} and {y}", c.to_vec()))?;
        let mut seq = vec![x];
        seq.extend(inner);
        seq.push(y);
        paths.push(Path::new(g, seq).map_err(|e| e.to_string())?);
    }
    Ok(paths)
}

/// A hamiltonian path of `G[c]` starting next to `x` and ending next to `y`.
fn traverse(g: &Graph, c: &VertexSet, x: usize, y: usize) -> Option<Vec<usize>> {
    if g.is_complete(c) {
        if !distinct_ends(g, c, x, y) {
            return None;
        }
        return Some(order_component(g, c, Some(x), Some(y)));
    }
    if c.len() > oracle::DP_LIMIT {
        return None;
    }
    let sub = g.induced(c);
    for a in g.neighbors(x).intersection(c).iter() {
        for b in g.neighbors(y).intersection(c).iter() {
            if a == b {
                continue;
            }
            let (sa, sb) = (sub.from_host(a)?, sub.from_host(b)?);
            if let Ok(ans) = oracle::hamiltonian_path_oracle(&sub.graph, Some(sa), Some(sb)) {
                if let Some(p) = ans.into_witness() {
                    return Some(sub.path_to_host(p.vertices()));
                }
            }
        }
    }
    None
}

/// Threads paths with both ends in `S*` (plus every `S*` vertex they miss, as a one-vertex
/// path) through the complete component `D1*`: each path end is matched to its own contact
/// vertex in `D1*`, consecutive paths are joined inside `D1*`, and unused `D1*` vertices fill
/// the last gap. Fails when the contacts cannot be matched.
pub fn claim1_glue(g: &Graph, s_star: &VertexSet, d1_star: &VertexSet, f: &[Path]) -> Result<Cycle, String> {
    if !g.is_complete(d1_star) {
        return Err("D1* is not complete".into());
    }
    let mut covered = VertexSet::new(g.n());
    for p in f {
        if !s_star.contains(p.first()) || !s_star.contains(p.last()) {
            return Err(format!("path {:?} does not end in S*", p.vertices()));
        }
        for &v in p.vertices() {
            if covered.contains(v) || d1_star.contains(v) {
                return Err(format!("vertex {v} repeated or inside D1*"));
            }
            covered.insert(v);
        }
    }
    let mut units: Vec<Vec<usize>> = f.iter().map(|p| p.vertices().to_vec()).collect();
    units.extend(s_star.difference(&covered).iter().map(|v| vec![v]));
    let contacts = d1_star.to_vec();
    let slots: Vec<usize> = units.iter().flat_map(|u| [u[0], u[u.len() - 1]]).collect();
    let adj = slots
        .iter()
        .map(|&e| contacts.iter().enumerate().filter(|(_, &d)| g.has_edge(e, d)).map(|(i, _)| i).collect())
        .collect();
    let assign = match star_matching(&Bipartite::new(slots.len(), contacts.len(), adj), &vec![1; slots.len()]) {
        StarOutcome::Stars(m) => m.leaves,
        StarOutcome::Deficient(xs) => {
            return Err(format!(
                "{} path ends need distinct contacts in D1* (|D1*| = {}); ends {:?} cannot be served",
                slots.len(),
                contacts.len(),
                xs.iter().map(|&i| slots[i]).collect::<Vec<_>>()
            ))
        }
    };
    let mut used = VertexSet::new(g.n());
    let mut seq = Vec::with_capacity(g.n());
    for (i, unit) in units.iter().enumerate() {
        let (a, b) = (contacts[assign[2 * i][0]], contacts[assign[2 * i + 1][0]]);
        seq.push(a);
        seq.extend_from_slice(unit);
        seq.push(b);
        used.insert(a);
        used.insert(b);
    }
    seq.extend(d1_star.difference(&used).iter());
    Cycle::new(g, seq).map_err(|e| e.to_string())
}

/// Search limits for the constructive routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    pub chain_budget: u64,
    pub clique_budget: u64,
    /// Largest order for the exact-oracle fallback.
    pub oracle_limit: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { chain_budget: 200_000, clique_budget: 200_000, oracle_limit: oracle::BACKTRACK_LIMIT }
    }
}

/// Outcome of the many-components assembly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assembly {
    pub cycle: Cycle,
    pub connectors: Vec<usize>,
    pub rungs: Vec<InsertRung>,
    pub matching: GeneralizedStarMatching,
}

/// Builds a hamiltonian cycle when `G - S` has at least 5 components, three of them
/// nontrivial, and every vertex of `S` has more than `n/(t+1) - 1` neighbours outside `S`.
///
/// The components are chained into one cycle through distinct connector vertices of `S`,
/// each adjacent to the two components it joins at distinct attachment vertices; the partners
/// of a generalized `K_{1,2}`-matching are tried first as connectors. The remaining vertices of
/// `S` then each have all their outside neighbours on the cycle and are inserted one by one.
pub fn assemble_lemma27(
    g: &Graph,
    s: &VertexSet,
    t: Rational,
    opts: &PipelineOptions,
) -> Result<Result<Assembly, String>, HypothesisError> {
    let comps = g.components(s);
    let nontrivial = comps.iter().filter(|c| c.len() >= 2).count();
    if comps.len() < 5 || nontrivial < 3 {
        return Err(HypothesisError::Cutset(format!(
            "G - S has {} components ({} nontrivial); need at least 5 and 3",
            comps.len(),
            nontrivial
        )));
    }
    let threshold = Rational::degree_threshold(g.n(), t);
    let outside = s.complement();
    if let Some(x) = s
        .iter()
        .find(|&x| num_rational::Ratio::from_integer(g.neighbors(x).intersection_len(&outside) as i64) <= threshold)
    {
        return Err(HypothesisError::Cutset(format!("vertex {x} of S has at most n/(t+1) - 1 neighbours outside S")));
    }
    let matching = match generalized_matching(g, s, 1, MatchingOptions::default()) {
        Ok(m) => m,
        Err(e) => return Ok(Err(format!("generalized K_(1,2)-matching failed: {e}"))),
    };
    if let Some(c) = comps.iter().find(|c| !g.is_complete(c)) {
        return Ok(Err(format!("component {:?} is not complete", c.to_vec())));
    }
    let order = match chain_components(g, s, &comps, &matching, opts.chain_budget) {
        Some(o) => o,
        None => return Ok(Err("no connector cycle through the components of G - S".into())),
    };
    let m = comps.len();
    let mut seq = Vec::with_capacity(g.n());
    let mut connectors = Vec::with_capacity(m);
    for i in 0..m {
        let (ci, via) = order[i];
        let enter = order[(i + m - 1) % m].1;
        seq.extend(order_component(g, &comps[ci], Some(enter), Some(via)));
        seq.push(via);
        connectors.push(via);
    }
    let mut cycle = match Cycle::new(g, seq) {
        Ok(c) => c,
        Err(e) => return Ok(Err(format!("chained cycle invalid: {e}"))),
    };
    let mut rungs = Vec::new();
    let on = cycle.vertex_set(g.n());
    for x in s.difference(&on).iter() {
        match insert_vertex(g, &cycle, x, t) {
            Ok((c, rung)) => {
                cycle = c;
                rungs.push(rung);
            }
            Err(e) => return Ok(Err(format!("inserting {x}: {e}"))),
        }
    }
    Ok(Ok(Assembly { cycle, connectors, rungs, matching }))
}

/// A cyclic order of all components with a distinct connector after each: entries
/// `(component, connector to the next component)`.
fn chain_components(
    g: &Graph,
    s: &VertexSet,
    comps: &[VertexSet],
    matching: &GeneralizedStarMatching,
    budget: u64,
) -> Option<Vec<(usize, usize)>> {
    let m = comps.len();
    // Preferred connectors per component: its own partners first, then the rest of S.
    let prefs: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            let part = matching.parts.iter().find(|p| p.component == comps[i]);
            let mut v: Vec<usize> = part.map(|p| p.partners.to_vec()).unwrap_or_default();
            let own = v.clone();
            v.extend(s.iter().filter(|x| !own.contains(x)));
            v.retain(|&x| g.neighbors(x).intersects(&comps[i]));
            v
        })
        .collect();
    struct Search<'a> {
        g: &'a Graph,
        comps: &'a [VertexSet],
        prefs: &'a [Vec<usize>],
        used: VertexSet,
        visited: Vec<bool>,
        order: Vec<(usize, usize)>,
        nodes: u64,
        budget: u64,
    }
    impl Search<'_> {
        fn go(&mut self, cur: usize, enter: Option<usize>) -> bool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let m = self.comps.len();
            let last = self.order.len() + 1 == m;
            for &x in &self.prefs[cur] {
                if self.used.contains(x) {
                    continue;
                }
                if let Some(e) = enter {
                    if !distinct_ends(self.g, &self.comps[cur], e, x) {
                        continue;
                    }
                }
                let targets: Vec<usize> = if last { vec![0] } else { (1..m).filter(|&j| !self.visited[j]).collect() };
                for j in targets {
                    if !self.g.neighbors(x).intersects(&self.comps[j]) {
                        continue;
                    }
                    if last {
                        // Closing at component 0: its leave connector is the first one used.
                        let first_out = self.order.first().map(|o| o.1);
                        let ok = match first_out {
                            Some(f) => distinct_ends(self.g, &self.comps[0], x, f),
                            None => true,
                        };
                        if !ok {
                            continue;
                        }
                        self.order.push((cur, x));
                        return true;
                    }
                    self.used.insert(x);
                    self.visited[j] = true;
                    self.order.push((cur, x));
                    if self.go(j, Some(x)) {
                        return true;
                    }
                    self.order.pop();
                    self.visited[j] = false;
                    self.used.remove(x);
                }
            }
            false
        }
    }
    let mut search = Search {
        g,
        comps,
        prefs: &prefs,
        used: VertexSet::new(g.n()),
        visited: vec![false; m],
        order: Vec::with_capacity(m),
        nodes: 0,
        budget,
    };
    search.visited[0] = true;
    search.go(0, None).then_some(search.order)
}

/// Runs the whole construction. Always returns a trace (FAILURE included); the cycle, when
/// present, has been checked by the independent validator.
pub fn construct_hamiltonian_cycle(inst: &TheoremInstance) -> CycleTrace {
    construct_with(inst, &PipelineOptions::default())
}

pub fn construct_with(inst: &TheoremInstance, opts: &PipelineOptions) -> CycleTrace {
    let g = &inst.g;
    let mut tr = CycleTrace {
        result: None,
        branch_log: vec![BranchTag::HypothesesVerified],
        notes: Vec::new(),
        splice_log: None,
        toughness_provenance: inst.toughness.clone(),
        insert_rungs: Vec::new(),
        validated: false,
    };
    if g.is_complete_graph() {
        tr.branch_log.push(BranchTag::DiracCondition);
        tr.branch_log.push(BranchTag::DegreeSumCondition);
        let c = Cycle::from_vertices_unchecked((0..g.n()).collect());
        return finish(g, tr, c, BranchTag::DegreeSumShortcut);
    }
    let dirac = dirac_type_check(g, inst.t);
    if dirac {
        tr.branch_log.push(BranchTag::DiracCondition);
    }
    let (degree_sum, failing) = degree_sum_check(g, inst.t);
    if degree_sum {
        tr.branch_log.push(BranchTag::DegreeSumCondition);
    }
    let shortcut = dirac || degree_sum;
    let pair = if shortcut { min_degree_sum_pair(g).map(|(u, v, _)| (u, v)) } else { failing };

    if let Some((u, v)) = pair {
        match decompose_at(g, u, v) {
            Ok(d) => {
                tr.branch_log.push(BranchTag::Decomposed);
                if let Some((c, tag)) = structural_route(g, &d, inst.t, opts, &mut tr) {
                    return finish(g, tr, c, tag);
                }
            }
            Err(e) => {
                tr.branch_log.push(BranchTag::StructureUnavailable);
                tr.notes.push(format!("decomposition at ({u}, {v}): {e}"));
            }
        }
    }

    // Cycle extension, then the oracle.
    if let Some(start) = initial_cycle(g) {
        match extend_cycle(g, start) {
            Ok(ext) if ext.complete => {
                tr.splice_log = Some(ext.log);
                let tag = if shortcut { BranchTag::DegreeSumShortcut } else { BranchTag::CeExtension };
                return finish(g, tr, ext.cycle, tag);
            }
            Ok(ext) => tr.notes.push(format!("cycle extension stalled at {} of {} vertices", ext.cycle.len(), g.n())),
            Err(e) => tr.notes.push(format!("cycle extension error: {e}")),
        }
    }
    if g.n() <= opts.oracle_limit {
        match oracle::hamiltonian_cycle_oracle(g) {
            Ok(ans) => match ans.into_witness() {
                Some(c) => return finish(g, tr, c, BranchTag::OracleFallback),
                None => tr.notes.push("oracle: not hamiltonian".into()),
            },
            Err(e) => tr.notes.push(format!("oracle: {e}")),
        }
    } else {
        tr.notes.push(format!("oracle refused: n = {} > {}", g.n(), opts.oracle_limit));
    }
    tr.branch_log.push(BranchTag::Failure);
    tr
}

fn structural_route(
    g: &Graph,
    d: &DecompositionState,
    t: Rational,
    opts: &PipelineOptions,
    tr: &mut CycleTrace,
) -> Option<(Cycle, BranchTag)> {
    if many_components_regime(g, d, t) {
        tr.branch_log.push(BranchTag::ManyComponents);
        match assemble_lemma27(g, &d.s, t, opts) {
            Ok(Ok(a)) => {
                tr.insert_rungs = a.rungs.clone();
                return Some((a.cycle, BranchTag::Lemma27Assembly));
            }
            Ok(Err(why)) => tr.notes.push(format!("component chaining: {why}")),
            Err(e) => tr.notes.push(format!("component chaining hypotheses: {e}")),
        }
        return None;
    }
    let q1 = match heavy_clique_search(g, &d.d1, opts.clique_budget) {
        Some(q) => q,
        None => {
            tr.notes.push("no clique Q1 with |Q1| - 2|N(Q1)| >= 2 found in D1".into());
            return None;
        }
    };
    tr.branch_log.push(BranchTag::HeavyClique);
    let split = match deficiency_split(g, &q1) {
        Ok(s) => s,
        Err(e) => {
            tr.notes.push(format!("deficiency split: {e}"));
            return None;
        }
    };
    tr.branch_log.push(BranchTag::DeficiencySplit);
    let f = match claim1_paths(g, &split) {
        Ok(f) => f,
        Err(why) => {
            tr.notes.push(format!("path system: {why}"));
            return None;
        }
    };
    tr.branch_log.push(BranchTag::PathSystem);
    match claim1_glue(g, &split.s_star, &split.d1_star, &f) {
        Ok(c) => Some((c, BranchTag::Claim1Glue)),
        Err(why) => {
            tr.notes.push(format!("gluing through D1*: {why}"));
            None
        }
    }
}

fn finish(g: &Graph, mut tr: CycleTrace, c: Cycle, tag: BranchTag) -> CycleTrace {
    if validate_cycle(g, &c) {
        tr.validated = true;
        tr.result = Some(c);
        tr.branch_log.push(tag);
    } else {
        tr.notes.push(format!("{tag:?} produced an invalid cycle"));
        tr.branch_log.push(BranchTag::Failure);
    }
    tr
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique_join, complete_multipartite, planted_lemma_instance, PlantSpec};

    fn fifteen() -> Rational {
        Rational::int(15)
    }

    #[test]
    fn complete_graph_shortcut() {
        let inst = TheoremInstance::verify(Graph::complete(40), fifteen(), None).unwrap();
        let tr = construct_hamiltonian_cycle(&inst);
        assert_eq!(tr.terminal(), BranchTag::DegreeSumShortcut);
        assert!(tr.validated);
    }

    #[test]
    fn multipartite_shortcut() {
        let c = complete_multipartite(&[2; 32]).unwrap();
        let inst = TheoremInstance::from_certified(&c, fifteen()).unwrap();
        assert!(matches!(decompose(&inst).unwrap(), DecomposeOutcome::Shortcut(_)));
        let tr = construct_hamiltonian_cycle(&inst);
        assert!(tr.validated);
        assert_eq!(tr.terminal(), BranchTag::DegreeSumShortcut);
    }

    #[test]
    fn hypothesis_errors() {
        let c = complete_multipartite(&[2; 32]).unwrap();
        assert!(matches!(TheoremInstance::from_certified(&c, Rational::int(3)), Err(HypothesisError::TooWeak(_))));
        assert!(matches!(
            TheoremInstance::from_certified(&c, Rational::int(40)),
            Err(HypothesisError::NotTough { .. })
        ));
        // C_8 contains P3 ∪ 3P1? No: but its toughness is 1.
        assert!(matches!(
            TheoremInstance::verify(Graph::cycle(8), fifteen(), None),
            Err(HypothesisError::NotTough { .. })
        ));
        let g = Graph::complete(40).disjoint_union(&Graph::empty(1));
        assert!(TheoremInstance::verify(g, fifteen(), None).is_err());
    }

    #[test]
    fn planted_many_components() {
        let p =
            planted_lemma_instance(&PlantSpec::Components { s: 75, nontrivial: vec![8, 9, 10], trivial: 2 }).unwrap();
        let inst = TheoremInstance::from_certified(&p.certified, fifteen()).unwrap();
        let tr = construct_hamiltonian_cycle(&inst);
        assert_eq!(tr.terminal(), BranchTag::Lemma27Assembly, "{:?}", tr.notes);
        assert!(tr.validated);
    }

    #[test]
    fn planted_three_components() {
        let p = planted_lemma_instance(&PlantSpec::ThreeComponents { s: 45, big: 95, small: 3 }).unwrap();
        let inst = TheoremInstance::from_certified(&p.certified, fifteen()).unwrap();
        let tr = construct_hamiltonian_cycle(&inst);
        assert_eq!(tr.terminal(), BranchTag::Claim1Glue, "{:?}", tr.notes);
        assert!(tr.branch_log.contains(&BranchTag::HeavyClique));
    }

    #[test]
    fn three_component_regime() {
        let c = clique_join(45, &[689, 1, 1]).unwrap();
        let inst = TheoremInstance::from_certified(&c, fifteen()).unwrap();
        let DecomposeOutcome::Decomposed(d) = decompose(&inst).unwrap() else { panic!("expected decomposition") };
        assert_eq!(d.s.len(), 45);
        assert_eq!(d.components.len(), 3);
        let tr = construct_hamiltonian_cycle(&inst);
        assert_eq!(tr.terminal(), BranchTag::Claim1Glue, "{:?}", tr.notes);
        assert!(!tr.branch_log.contains(&BranchTag::DegreeSumCondition));
    }

    #[test]
    fn heavy_clique_examples() {
        // K_10 with 4 outside neighbours: 10 - 8 = 2.
        let p = planted_lemma_instance(&PlantSpec::HeavyClique {
            q: 10,
            attachments: vec![vec![0], vec![1], vec![2], vec![3]],
            rest: 1,
        })
        .unwrap();
        let q = p.clique.unwrap();
        assert_eq!(heavy_clique_search(&p.certified.graph, &q, 1000), Some(q.clone()));
        let p = planted_lemma_instance(&PlantSpec::HeavyClique {
            q: 6,
            attachments: vec![vec![0], vec![1], vec![2], vec![3]],
            rest: 1,
        })
        .unwrap();
        assert_eq!(heavy_clique_search(&p.certified.graph, &p.clique.unwrap(), 1000), None);
    }

    #[test]
    fn deficiency_split_examples() {
        let p = planted_lemma_instance(&PlantSpec::HeavyClique { q: 4, attachments: vec![vec![0]], rest: 2 }).unwrap();
        let g = &p.certified.graph;
        let sp = deficiency_split(g, p.clique.as_ref().unwrap()).unwrap();
        assert_eq!(sp.s_prime.to_vec(), vec![4]);
        assert!(sp.s_double_prime.is_empty());
        assert_eq!(sp.d1_star.to_vec(), vec![1, 2, 3]);

        let p = planted_lemma_instance(&PlantSpec::HeavyClique {
            q: 6,
            attachments: vec![vec![0, 1, 2], vec![3, 4, 5]],
            rest: 0,
        });
        // |Q1| - 2|N(Q1)| = 6 - 4 = 2.
        let p = p.unwrap();
        let sp = deficiency_split(&p.certified.graph, p.clique.as_ref().unwrap()).unwrap();
        assert!(sp.s_prime.is_empty());
        assert_eq!(sp.matching.len(), 2);
        let mut leaves: Vec<usize> = sp.matching.iter().flat_map(|(_, l)| l.clone()).collect();
        leaves.sort();
        leaves.dedup();
        assert_eq!(leaves.len(), 4);
    }

    #[test]
    fn glue_examples() {
        // D1* = K_5 on 0..5, S* = {5, 6}, one path 5-7-6 with both ends adjacent to D1*.
        let mut edges: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        edges.extend([(5, 7), (7, 6), (5, 0), (6, 1)]);
        let g = Graph::new(8, edges).unwrap();
        let s_star = g.set_of([5, 6]);
        let d1 = g.set_of(0..5);
        let f = vec![Path::new(&g, vec![5, 7, 6]).unwrap()];
        let c = claim1_glue(&g, &s_star, &d1, &f).unwrap();
        assert!(validate_cycle(&g, &c));
        // Two ends that both only see vertex 0: no distinct contacts.
        let mut edges: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        edges.extend([(5, 7), (7, 6), (5, 0), (6, 0)]);
        let g = Graph::new(8, edges).unwrap();
        let f = vec![Path::new(&g, vec![5, 7, 6]).unwrap()];
        assert!(claim1_glue(&g, &s_star, &d1, &f).is_err());
    }

    #[test]
    fn assembly_rejects_few_components() {
        let c = clique_join(60, &[5, 5, 5, 1]).unwrap();
        let s = VertexSet::from_vertices(c.graph.n(), 0..60);
        assert!(matches!(
            assemble_lemma27(&c.graph, &s, fifteen(), &PipelineOptions::default()),
            Err(HypothesisError::Cutset(_))
        ));
    }
}
