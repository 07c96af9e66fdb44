//! Graph sources: exhaustive small-graph enumeration, seeded random free graphs with edge-adding
//! repair, and structured families whose toughness is known by formula.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::canon;
use crate::graph::{Graph, VertexSet};
use crate::invariants::toughness;
use crate::patterns::is_p3_kp1_free;
use crate::rational::{Rational, INFINITY};

/// Largest order enumerated labelled (and, by default, unlabelled).
pub const ENUMERATION_LIMIT: usize = 8;
/// Largest order for which brute-force toughness certificates are issued.
pub const BRUTE_FORCE_LIMIT: usize = 18;
/// Largest order at which family freeness is re-verified by pattern search at build time.
pub const FREENESS_CHECK_LIMIT: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("n = {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("part list is empty")]
    NoParts,
    #[error("part sizes must be positive")]
    EmptyPart,
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("family freeness check failed for k = {0}")]
    FreenessCheck(usize),
}

/// Where a toughness bound comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    BruteForce,
    FamilyFormula(String),
    /// No information beyond `tau >= 0`.
    Trivial,
}

/// How freeness was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FreenessCheck {
    PatternSearch,
    /// A family argument: every induced `P3` has a dominating middle vertex, so no vertex can
    /// be independent of it. Validated exhaustively at small orders.
    Structural,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedGraph {
    pub graph: Graph,
    pub toughness_bound: Rational,
    pub provenance: Provenance,
    /// The graph is `(P3 ∪ kP1)`-free for this `k` (and every larger one).
    pub freeness_k: usize,
    pub freeness_check: FreenessCheck,
}

impl CertifiedGraph {
    /// Re-verifies the claims that are checkable at this size: freeness by pattern search and
    /// brute-force toughness by recomputation.
    pub fn reverify(&self) -> Result<(), String> {
        let (free, w) = is_p3_kp1_free(&self.graph, self.freeness_k);
        if !free {
            return Err(format!("not (P3 ∪ {}P1)-free: {:?}", self.freeness_k, w));
        }
        if self.provenance == Provenance::BruteForce {
            let tau = toughness(&self.graph).value;
            if tau != self.toughness_bound {
                return Err(format!("recorded toughness {} but computed {tau}", self.toughness_bound));
            }
        }
        Ok(())
    }
}

/// Smallest `k <= 3` with `g` `(P3 ∪ kP1)`-free, if any.
pub fn least_free_k(g: &Graph) -> Option<usize> {
    (1..=3).find(|&k| is_p3_kp1_free(g, k).0)
}

/// Certifies a small graph by exact computation.
pub fn certify_brute_force(g: &Graph) -> Result<CertifiedGraph, GenError> {
    if g.n() > BRUTE_FORCE_LIMIT {
        return Err(GenError::TooLarge { n: g.n(), limit: BRUTE_FORCE_LIMIT });
    }
    Ok(CertifiedGraph {
        graph: g.clone(),
        toughness_bound: toughness(g).value,
        provenance: Provenance::BruteForce,
        freeness_k: least_free_k(g).unwrap_or(usize::MAX),
        freeness_check: FreenessCheck::PatternSearch,
    })
}

/// Whether the enumeration should identify isomorphic graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Labeled,
    Unlabeled,
}

/// Every graph on `n <= 8` vertices: all `2^(n choose 2)` labelled graphs in edge-mask order,
/// or one canonical representative per isomorphism class in canonical-key order.
pub fn enumerate_small(n: usize, reduction: Reduction) -> Result<Box<dyn Iterator<Item = Graph>>, GenError> {
    if n > ENUMERATION_LIMIT {
        return Err(GenError::TooLarge { n, limit: ENUMERATION_LIMIT });
    }
    Ok(match reduction {
        Reduction::Labeled => Box::new(LabeledGraphs::new(n)),
        Reduction::Unlabeled => Box::new(canon::unlabeled_graphs(n).into_iter()),
    })
}

/// Iterator over all labelled graphs on `n` vertices.
pub struct LabeledGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    next: u64,
    end: u64,
}

impl LabeledGraphs {
    pub fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let end = 1u64 << pairs.len();
        LabeledGraphs { n, pairs, next: 0, end }
    }
}

impl Iterator for LabeledGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let edges = self.pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        Some(Graph::new(self.n, edges).expect("pairs are valid"))
    }
}

/// `tau` of a complete multipartite graph: `(n - m) / m` with `m` the largest part;
/// `INFINITY` when every part is a single vertex; `0` for a single part of size at least 2.
pub fn multipartite_toughness_formula(parts: &[usize]) -> Rational {
    let n: usize = parts.iter().sum();
    let m = parts.iter().copied().max().unwrap_or(0);
    if m <= 1 {
        return INFINITY;
    }
    if parts.len() == 1 {
        return Rational::ZERO;
    }
    Rational::frac((n - m) as i64, m as i64)
}

/// `tau` of `K_s ∨ (K_{c1} ∪ ... ∪ K_{cr})`: `s / r` for `r >= 2` (the join vertices must all
/// be removed and each clique leaves at most one component), `INFINITY` for `r <= 1`.
pub fn clique_join_toughness_formula(s: usize, cliques: &[usize]) -> Rational {
    if cliques.len() <= 1 {
        return INFINITY;
    }
    Rational::frac(s as i64, cliques.len() as i64)
}

fn family_freeness(g: &Graph) -> Result<FreenessCheck, GenError> {
    if g.n() <= FREENESS_CHECK_LIMIT {
        if !is_p3_kp1_free(g, 1).0 {
            return Err(GenError::FreenessCheck(1));
        }
        Ok(FreenessCheck::PatternSearch)
    } else {
        Ok(FreenessCheck::Structural)
    }
}

/// `K_{p1, ..., pr}`, parts on consecutive vertex ranges. `(P3 ∪ P1)`-free: the middle of every
/// induced `P3` lies in a different part from its ends, so no vertex misses all three.
pub fn complete_multipartite(parts: &[usize]) -> Result<CertifiedGraph, GenError> {
    if parts.is_empty() {
        return Err(GenError::NoParts);
    }
    if parts.contains(&0) {
        return Err(GenError::EmptyPart);
    }
    let g = multipartite_graph(parts);
    let check = family_freeness(&g)?;
    Ok(CertifiedGraph {
        toughness_bound: multipartite_toughness_formula(parts),
        provenance: Provenance::FamilyFormula("complete_multipartite".into()),
        freeness_k: 1,
        freeness_check: check,
        graph: g,
    })
}

fn multipartite_graph(parts: &[usize]) -> Graph {
    let mut label = Vec::new();
    for (i, &p) in parts.iter().enumerate() {
        label.extend(std::iter::repeat_n(i, p));
    }
    let n = label.len();
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges.filter(|&(u, v)| label[u] != label[v]).collect::<Vec<_>>()).expect("valid")
}

/// `K_s ∨ (K_{c1} ∪ ... ∪ K_{cr})`: join vertices `0..s`, then the cliques in order.
/// `(P3 ∪ P1)`-free because every induced `P3` has its middle among the join vertices.
pub fn clique_join(s: usize, cliques: &[usize]) -> Result<CertifiedGraph, GenError> {
    if cliques.contains(&0) {
        return Err(GenError::EmptyPart);
    }
    let rest = cliques.iter().fold(Graph::empty(0), |acc, &c| acc.disjoint_union(&Graph::complete(c)));
    let g = Graph::complete(s).join(&rest);
    let check = family_freeness(&g)?;
    Ok(CertifiedGraph {
        toughness_bound: clique_join_toughness_formula(s, cliques),
        provenance: Provenance::FamilyFormula("clique_join".into()),
        freeness_k: 1,
        freeness_check: check,
        graph: g,
    })
}

/// Recognises `K_s ∨ (disjoint cliques)` and returns `(s, clique sizes)`: the join part is the
/// set of universal vertices and the rest must split into at least two cliques.
pub fn recognize_clique_join(g: &Graph) -> Option<(usize, Vec<usize>)> {
    let n = g.n();
    let universal = g.set_of((0..n).filter(|&v| g.degree(v) == n - 1));
    let comps = g.components(&universal);
    if comps.len() < 2 || !comps.iter().all(|c| g.is_complete(c)) {
        return None;
    }
    Some((universal.len(), comps.iter().map(VertexSet::len).collect()))
}

/// Recognises a complete multipartite graph (non-adjacency is an equivalence relation) and
/// returns its part sizes.
pub fn recognize_complete_multipartite(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut part = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        if part[v] != usize::MAX {
            continue;
        }
        let class = g.neighbors(v).complement();
        if !g.is_independent(&class) {
            return None;
        }
        for u in class.iter() {
            if part[u] != usize::MAX {
                return None;
            }
            part[u] = sizes.len();
        }
        sizes.push(class.len());
    }
    // Every vertex must miss exactly its own class.
    (0..n).all(|v| g.degree(v) == n - sizes[part[v]]).then_some(sizes)
}

/// Instances built to satisfy a lemma's hypotheses by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum PlantSpec {
    /// `K_s ∨ (cliques ∪ trivial K_1's)`: a cutset with many components, each of whose
    /// vertices sees everything.
    Components { s: usize, nontrivial: Vec<usize>, trivial: usize },
    /// `K_s ∨ (K_big ∪ K_1 ∪ K_small)`: three components with one large clique.
    ThreeComponents { s: usize, big: usize, small: usize },
    /// Components of `G - S` (clique sizes given) with a private block of `2s` partners each
    /// in `S`, `extra` further vertices of `S`, and random extra adjacency with probability
    /// `density`, topped up until every component sees at least `4s` vertices of `S`.
    Partners { s: usize, components: Vec<usize>, extra: usize, density: f64, seed: u64 },
    /// A clique `Q` of size `q` on `0..q` and outside vertices `q, q + 1, ...`, the `i`-th
    /// adjacent to the listed clique vertices; the outside vertices form a clique joined to a
    /// further clique of size `rest`.
    HeavyClique { q: usize, attachments: Vec<Vec<usize>>, rest: usize },
}

/// A planted instance together with the structure it was built around.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantedInstance {
    pub certified: CertifiedGraph,
    /// The planted cutset (or the neighbourhood of the planted clique).
    pub cut: VertexSet,
    /// The planted components of `G - cut`, in vertex order.
    pub components: Vec<VertexSet>,
    /// The planted clique, for heavy-clique instances.
    pub clique: Option<VertexSet>,
}

pub fn planted_lemma_instance(spec: &PlantSpec) -> Result<PlantedInstance, GenError> {
    match spec {
        PlantSpec::Components { s, nontrivial, trivial } => {
            if nontrivial.iter().any(|&c| c < 2) {
                return Err(GenError::Infeasible("nontrivial components need at least 2 vertices".into()));
            }
            let mut sizes = nontrivial.clone();
            sizes.extend(std::iter::repeat_n(1, *trivial));
            join_instance(*s, &sizes)
        }
        PlantSpec::ThreeComponents { s, big, small } => join_instance(*s, &[*big, 1, *small]),
        PlantSpec::Partners { s, components, extra, density, seed } => {
            partner_instance(*s, components, *extra, *density, *seed)
        }
        PlantSpec::HeavyClique { q, attachments, rest } => heavy_clique_instance(*q, attachments, *rest),
    }
}

fn join_instance(s: usize, cliques: &[usize]) -> Result<PlantedInstance, GenError> {
    if s == 0 || cliques.len() < 2 {
        return Err(GenError::Infeasible("need a nonempty join part and at least two cliques".into()));
    }
    let certified = clique_join(s, cliques)?;
    let n = certified.graph.n();
    let cut = VertexSet::from_vertices(n, 0..s);
    let components = certified.graph.components(&cut);
    Ok(PlantedInstance { certified, cut, components, clique: None })
}

fn partner_instance(
    s: usize,
    sizes: &[usize],
    extra: usize,
    density: f64,
    seed: u64,
) -> Result<PlantedInstance, GenError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(GenError::Probability(density));
    }
    let l = sizes.len();
    let cut_size = 2 * s * l + extra;
    if s == 0 || l < 2 || sizes.contains(&0) {
        return Err(GenError::Infeasible("need s >= 1 and at least two nonempty components".into()));
    }
    if cut_size < 4 * s {
        return Err(GenError::Infeasible(format!("|S| = {cut_size} < 4s = {}", 4 * s)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cut_size + sizes.iter().sum::<usize>();
    let mut edges = Vec::new();
    // S occupies 0..cut_size; component blocks follow.
    for u in 0..cut_size {
        for v in u + 1..cut_size {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    let mut start = cut_size;
    let mut blocks = Vec::with_capacity(l);
    for &c in sizes {
        blocks.push(start..start + c);
        for u in start..start + c {
            for v in u + 1..start + c {
                edges.push((u, v));
            }
        }
        start += c;
    }
    for (i, block) in blocks.iter().enumerate() {
        let private = 2 * s * i..2 * s * (i + 1);
        let mut seen = VertexSet::new(n);
        for d in block.clone() {
            for x in 0..cut_size {
                if private.contains(&x) || rng.gen_bool(density) {
                    edges.push((x, d));
                    seen.insert(x);
                }
            }
        }
        // Top up to 4s neighbours in S.
        let mut missing: Vec<usize> = (0..cut_size).filter(|&x| !seen.contains(x)).collect();
        missing.shuffle(&mut rng);
        let need = (4 * s).saturating_sub(seen.len());
        for &x in missing.iter().take(need) {
            edges.push((x, block.start));
        }
    }
    let g = Graph::new(n, edges).expect("valid");
    let cut = VertexSet::from_vertices(n, 0..cut_size);
    let components = g.components(&cut);
    let certified = small_certificate(g);
    Ok(PlantedInstance { certified, cut, components, clique: None })
}

fn small_certificate(g: Graph) -> CertifiedGraph {
    if g.n() <= BRUTE_FORCE_LIMIT {
        return certify_brute_force(&g).expect("within limit");
    }
    CertifiedGraph {
        freeness_k: least_free_k(&g).unwrap_or(usize::MAX),
        graph: g,
        toughness_bound: Rational::ZERO,
        provenance: Provenance::Trivial,
        freeness_check: FreenessCheck::PatternSearch,
    }
}

fn heavy_clique_instance(q: usize, attachments: &[Vec<usize>], rest: usize) -> Result<PlantedInstance, GenError> {
    if q == 0 || attachments.iter().flatten().any(|&v| v >= q) {
        return Err(GenError::Infeasible("attachments must name clique vertices".into()));
    }
    let a = attachments.len();
    let n = q + a + rest;
    let mut edges = Vec::new();
    let clique_on = |r: std::ops::Range<usize>, edges: &mut Vec<(usize, usize)>| {
        for u in r.clone() {
            for v in u + 1..r.end {
                edges.push((u, v));
            }
        }
    };
    clique_on(0..q, &mut edges);
    clique_on(q..q + a, &mut edges);
    clique_on(q + a..n, &mut edges);
    for (i, att) in attachments.iter().enumerate() {
        for &v in att {
            edges.push((v, q + i));
        }
        for r in q + a..n {
            edges.push((q + i, r));
        }
    }
    let g = Graph::new(n, edges).expect("valid");
    let clique = VertexSet::from_vertices(n, 0..q);
    let cut = g.neighborhood_of_set(&clique);
    let components = g.components(&cut);
    let certified = small_certificate(g);
    Ok(PlantedInstance { certified, cut, components, clique: Some(clique) })
}

/// A seeded `G(n, p)` sample repaired into a `(P3 ∪ kP1)`-free graph: while an induced copy
/// exists, an edge is added between two vertices of its independent part (the path ends and
/// the isolated vertices), chosen uniformly by the same generator. Adding edges only ever
/// moves toward `K_n`, which is free, so the loop terminates.
pub fn random_free_graph(n: usize, p: f64, k: usize, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<VertexSet> = vec![VertexSet::new(n); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
    }
    let build = |rows: &[VertexSet]| {
        Graph::new(
            n,
            (0..n).flat_map(|u| rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect::<Vec<_>>(),
        )
        .expect("valid")
    };
    let mut g = build(&rows);
    while let (false, Some(w)) = is_p3_kp1_free(&g, k) {
        let m = &w.mapping;
        let mut independent = vec![m[0], m[2]];
        independent.extend_from_slice(&m[3..]);
        let i = rng.gen_range(0..independent.len());
        let mut j = rng.gen_range(0..independent.len() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = (independent[i], independent[j]);
        rows[a].insert(b);
        rows[b].insert(a);
        g = build(&rows);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_small(3, Reduction::Labeled).unwrap().count(), 8);
        assert_eq!(enumerate_small(3, Reduction::Unlabeled).unwrap().count(), 4);
        assert_eq!(enumerate_small(4, Reduction::Labeled).unwrap().count(), 64);
        assert_eq!(enumerate_small(4, Reduction::Unlabeled).unwrap().count(), 11);
        assert_eq!(enumerate_small(1, Reduction::Labeled).unwrap().count(), 1);
        assert!(matches!(enumerate_small(9, Reduction::Labeled), Err(GenError::TooLarge { .. })));
    }

    fn profiles(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in profiles(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn multipartite_formula_matches_brute_force() {
        for n in 1..=10 {
            for parts in profiles(n, n) {
                let c = complete_multipartite(&parts).unwrap();
                assert_eq!(toughness(&c.graph).value, c.toughness_bound, "parts {parts:?}");
                assert_eq!(recognize_complete_multipartite(&c.graph), Some(parts.clone()));
            }
        }
        assert_eq!(complete_multipartite(&[2, 4]).unwrap().toughness_bound, Rational::frac(1, 2));
        assert_eq!(complete_multipartite(&[1, 1]).unwrap().toughness_bound, INFINITY);
    }

    #[test]
    fn clique_join_formula_matches_brute_force() {
        for s in 1..=4 {
            for cl in [vec![1, 1], vec![2, 1, 3], vec![3, 3], vec![1, 2, 2, 1], vec![4, 1, 1, 2]] {
                let c = clique_join(s, &cl).unwrap();
                assert_eq!(toughness(&c.graph).value, c.toughness_bound, "s={s} {cl:?}");
                c.reverify().unwrap();
                let (rs, mut rc) = recognize_clique_join(&c.graph).unwrap();
                rc.sort();
                let mut want = cl.clone();
                want.sort();
                assert_eq!((rs, rc), (s, want));
            }
        }
    }

    #[test]
    fn random_free_graphs() {
        assert!(random_free_graph(7, 1.0, 3, 0).unwrap().is_complete_graph());
        assert_eq!(random_free_graph(6, 0.0, 3, 0).unwrap().edge_count(), 0);
        for seed in 0..40 {
            let k = 1 + (seed as usize % 3);
            let g = random_free_graph(11, 0.3, k, seed).unwrap();
            assert!(is_p3_kp1_free(&g, k).0);
            assert_eq!(g, random_free_graph(11, 0.3, k, seed).unwrap());
        }
        assert!(matches!(random_free_graph(3, 1.5, 1, 0), Err(GenError::Probability(_))));
    }

    #[test]
    fn planted_components_instance() {
        let p =
            planted_lemma_instance(&PlantSpec::Components { s: 75, nontrivial: vec![8, 9, 10], trivial: 2 }).unwrap();
        assert_eq!(p.components.len(), 5);
        assert_eq!(p.cut.len(), 75);
        assert_eq!(p.certified.toughness_bound, Rational::int(15));
        assert_eq!(p.certified.freeness_check, FreenessCheck::Structural);
    }

    #[test]
    fn planted_partner_instance() {
        use crate::star_matching::{generalized_matching, validate_generalized_matching, MatchingOptions};
        let spec = PlantSpec::Partners { s: 1, components: vec![1; 5], extra: 10, density: 0.2, seed: 9 };
        let p = planted_lemma_instance(&spec).unwrap();
        assert_eq!(p.cut.len(), 20);
        let m = generalized_matching(&p.certified.graph, &p.cut, 1, MatchingOptions::default()).unwrap();
        assert!(validate_generalized_matching(&p.certified.graph, &p.cut, &m).is_ok());
        // |S| = 3 is below 2s * w(G - S) = 10.
        let small = VertexSet::from_vertices(p.certified.graph.n(), 0..3);
        assert!(generalized_matching(&p.certified.graph, &small, 1, MatchingOptions::default()).is_err());
    }

    #[test]
    fn heavy_clique_instance_structure() {
        let spec = PlantSpec::HeavyClique { q: 4, attachments: vec![vec![0]], rest: 2 };
        let p = planted_lemma_instance(&spec).unwrap();
        assert_eq!(p.cut.to_vec(), vec![4]);
        assert_eq!(p.clique.unwrap().len(), 4);
    }
}
