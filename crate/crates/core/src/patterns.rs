//! Induced-subgraph detection, the specialised `(P3 ∪ kP1)` test, and the
//! structure classifier for cutsets of `(P3 ∪ kP1)`-free graphs.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::invariants::has_independent_set;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern has {0} vertices; at most 8 are supported")]
    PatternTooLarge(usize),
    #[error("{0:?} is not a cutset")]
    NotCutset(VertexSet),
    #[error("graph is not (P3 ∪ {k}P1)-free: induced copy at {witness:?}")]
    NotFree { k: usize, witness: PatternWitness },
}

/// An induced embedding: `mapping[i]` is the host vertex playing pattern vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PatternWitness {
    pub mapping: Vec<usize>,
}

impl PatternWitness {
    /// Re-checks that the mapping is injective and preserves edges and non-edges.
    pub fn realizes(&self, g: &Graph, pattern: &Graph) -> bool {
        let m = &self.mapping;
        if m.len() != pattern.n() || m.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if m[i] == m[j] || pattern.has_edge(i, j) != g.has_edge(m[i], m[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// `P3 ∪ kP1`: the path `0 - 1 - 2` plus isolated vertices `3..3 + k`.
pub fn p3_union_kp1(k: usize) -> Graph {
    Graph::new(3 + k, [(0, 1), (1, 2)]).expect("valid pattern")
}

/// The lexicographically least induced embedding of `pattern` into `g`, if any.
///
/// Pattern vertices are placed in index order and host candidates tried in ascending order,
/// so the first embedding found is the least one as a tuple.
pub fn find_induced(g: &Graph, pattern: &Graph) -> Result<Option<PatternWitness>, PatternError> {
    if pattern.n() > 8 {
        return Err(PatternError::PatternTooLarge(pattern.n()));
    }
    let mut mapping = Vec::with_capacity(pattern.n());
    Ok(embed(g, pattern, &mut mapping).then_some(PatternWitness { mapping }))
}

fn embed(g: &Graph, pattern: &Graph, mapping: &mut Vec<usize>) -> bool {
    let i = mapping.len();
    if i == pattern.n() {
        return true;
    }
    let mut candidates = g.vertices();
    for (j, &hj) in mapping.iter().enumerate() {
        candidates.remove(hj);
        if pattern.has_edge(i, j) {
            candidates.intersect_with(g.neighbors(hj));
        } else {
            candidates.difference_with(g.neighbors(hj));
        }
    }
    for c in candidates.iter() {
        mapping.push(c);
        if embed(g, pattern, mapping) {
            return true;
        }
        mapping.pop();
    }
    false
}

/// Whether `g` is `(P3 ∪ kP1)`-free; if not, the same least witness `find_induced` returns
/// (`(a, b, c, i_1 < ... < i_k)` with `a - b - c` the induced path).
///
/// For each induced path `a - b - c` this asks whether `V - N[a] - N[b] - N[c]` holds `k`
/// pairwise nonadjacent vertices, pruning on `alpha(V - N[a]) >= k + 1` (the far end and the
/// isolated vertices are all nonadjacent to `a`) and `alpha(V - N[a] - N[b]) >= k`.
pub fn is_p3_kp1_free(g: &Graph, k: usize) -> (bool, Option<PatternWitness>) {
    match p3_kp1_witness(g, k) {
        Some(w) => (false, Some(w)),
        None => (true, None),
    }
}

fn p3_kp1_witness(g: &Graph, k: usize) -> Option<PatternWitness> {
    for a in 0..g.n() {
        let mut ra = g.neighbors(a).complement();
        ra.remove(a);
        if ra.is_empty() || !has_independent_set(g, &ra, k + 1) {
            continue;
        }
        for b in g.neighbors(a).iter() {
            let c_candidates = g.neighbors(b).intersection(&ra);
            if c_candidates.is_empty() {
                continue;
            }
            let rab = ra.difference(g.neighbors(b));
            if !has_independent_set(g, &rab, k) {
                continue;
            }
            for c in c_candidates.iter() {
                let mut r = rab.difference(g.neighbors(c));
                r.remove(c);
                if let Some(iso) = least_independent_subset(g, &r, k) {
                    let mut mapping = vec![a, b, c];
                    mapping.extend(iso);
                    return Some(PatternWitness { mapping });
                }
            }
        }
    }
    None
}

/// The lexicographically least `k`-element independent subset of `within`.
pub fn least_independent_subset(g: &Graph, within: &VertexSet, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    if within.len() < k || !has_independent_set(g, within, k) {
        return None;
    }
    for v in within.iter() {
        let mut rest = within.difference(g.neighbors(v));
        // Only later vertices, so the tuple stays ascending.
        for u in within.iter().take_while(|&u| u <= v) {
            rest.remove(u);
        }
        if let Some(mut tail) = least_independent_subset(g, &rest, k - 1) {
            tail.insert(0, v);
            return Some(tail);
        }
    }
    None
}

/// The partition of a cutset by how many components of `G - S` each vertex sees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutsetClassification {
    /// Vertices of `S` adjacent to exactly one component of `G - S`.
    pub s1: VertexSet,
    /// Vertices of `S` adjacent to at least two components of `G - S`.
    pub s2: VertexSet,
    /// Components of `G - S`, ordered by smallest vertex.
    pub components: Vec<VertexSet>,
    /// Index of the first noncomplete component, if any.
    pub noncomplete_index: Option<usize>,
}

pub fn classify_cutset(g: &Graph, s: &VertexSet) -> Result<CutsetClassification, PatternError> {
    let components = g.components(s);
    if components.len() < 2 {
        return Err(PatternError::NotCutset(s.clone()));
    }
    Ok(classify_any(g, s, components))
}

fn classify_any(g: &Graph, s: &VertexSet, components: Vec<VertexSet>) -> CutsetClassification {
    let mut s1 = g.empty_set();
    let mut s2 = g.empty_set();
    for v in s.iter() {
        let seen = components.iter().filter(|c| g.neighbors(v).intersects(c)).count();
        match seen {
            0 => {}
            1 => s1.insert(v),
            _ => s2.insert(v),
        }
    }
    let noncomplete_index = components.iter().position(|c| !g.is_complete(c));
    CutsetClassification { s1, s2, components, noncomplete_index }
}

/// Outcome of one clause of the cutset structure check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: &'static str,
    pub holds: bool,
    /// For a failure, what was expected and what was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ClauseCheck {
    fn new(clause: &'static str, holds: bool, detail: impl FnOnce() -> String) -> Self {
        ClauseCheck { clause, holds, detail: (!holds).then(detail) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub k: usize,
    pub w: usize,
    /// Empty when no clause applies (`w(G - S) < k`).
    pub clauses: Vec<ClauseCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseCheck> {
        self.clauses.iter().filter(|c| !c.holds)
    }
}

/// Verifies the structure a `(P3 ∪ kP1)`-free graph forces on `G - S`:
///
/// * `w = k`: at most one component is noncomplete, and for `k >= 2` that component is
///   `(P3 ∪ P1)`-free;
/// * `w >= k + 1`: every component is complete and every vertex of `S1 ∪ S2` dominates one;
/// * `w >= k + 2`: `w(G - S2) >= w`, each `S2` vertex dominates at least `w(G - S2) - k + 1`
///   components of `G - S2`, and any two `S2` vertices dominate at least `w - 2(k - 1)`
///   common components of `G - S`.
///
/// Freeness is checked first and reported as an error, as is a non-cutset `S`.
pub fn check_cutset_structure(g: &Graph, s: &VertexSet, k: usize) -> Result<StructureReport, PatternError> {
    if let (false, Some(witness)) = is_p3_kp1_free(g, k) {
        return Err(PatternError::NotFree { k, witness });
    }
    let cls = classify_cutset(g, s)?;
    Ok(structure_report(g, &cls, k))
}

/// The clause checks for an already-classified cutset; freeness is the caller's concern.
pub fn structure_report(g: &Graph, cls: &CutsetClassification, k: usize) -> StructureReport {
    let comps = &cls.components;
    let w = comps.len();
    let mut clauses = Vec::new();

    if w == k {
        let noncomplete: Vec<usize> = (0..w).filter(|&i| !g.is_complete(&comps[i])).collect();
        clauses.push(ClauseCheck::new("i.at_most_one_noncomplete", noncomplete.len() <= 1, || {
            format!("noncomplete components {noncomplete:?}")
        }));
        if k >= 2 {
            if let Some(&i) = noncomplete.first() {
                let sub = g.induced(&comps[i]);
                let (free, wit) = is_p3_kp1_free(&sub.graph, 1);
                clauses.push(ClauseCheck::new("i.noncomplete_is_p3_p1_free", free, || {
                    let host = wit.map(|w| sub.path_to_host(&w.mapping));
                    format!("component {i} contains P3 ∪ P1 at {host:?}")
                }));
            }
        }
    }

    if w > k {
        let noncomplete = comps.iter().position(|c| !g.is_complete(c));
        clauses.push(ClauseCheck::new("ii.components_complete", noncomplete.is_none(), || {
            format!("component {noncomplete:?} is noncomplete")
        }));
        let s12 = cls.s1.union(&cls.s2);
        let lonely: Vec<usize> = s12.iter().filter(|&v| !comps.iter().any(|c| g.dominates(v, c))).collect();
        clauses.push(ClauseCheck::new("ii.dominates_some_component", lonely.is_empty(), || {
            format!("vertices {lonely:?} dominate no component")
        }));
    }

    if w >= k + 2 {
        let comps_s2 = g.components(&cls.s2);
        let w2 = comps_s2.len();
        clauses.push(ClauseCheck::new("iii.w_without_s2", w2 >= w, || format!("w(G - S2) = {w2} < w(G - S) = {w}")));
        let need = (w2 + 1).saturating_sub(k);
        let short: Vec<(usize, usize)> = cls
            .s2
            .iter()
            .map(|v| (v, comps_s2.iter().filter(|c| g.dominates(v, c)).count()))
            .filter(|&(_, d)| d < need)
            .collect();
        clauses.push(ClauseCheck::new("iii.s2_dominates_many", short.is_empty(), || {
            format!("need {need} dominated components of G - S2; (vertex, count) = {short:?}")
        }));
        let need_common = w.saturating_sub(2 * (k - 1));
        let s2: Vec<usize> = cls.s2.to_vec();
        let mut bad = None;
        'pairs: for (i, &x) in s2.iter().enumerate() {
            for &y in &s2[i + 1..] {
                let common = comps.iter().filter(|c| g.dominates(x, c) && g.dominates(y, c)).count();
                if common < need_common {
                    bad = Some((x, y, common));
                    break 'pairs;
                }
            }
        }
        clauses.push(ClauseCheck::new("iii.common_components", bad.is_none(), || {
            format!("need {need_common} common dominated components; (x, y, count) = {bad:?}")
        }));
    }

    StructureReport { k, w, clauses }
}
