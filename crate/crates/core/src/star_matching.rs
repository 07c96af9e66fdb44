//! Star matchings in bipartite graphs (degree-prescribed stars via max-flow), their
//! deficiency, and generalized `K_{1,2s}`-matchings centred at the components of `G - S`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSet};

/// A bipartite graph with left side `0..left` and right side `0..right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub left: usize,
    pub right: usize,
    /// `adj[x]` lists the right-side neighbours of left vertex `x`.
    pub adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(left: usize, right: usize, adj: Vec<Vec<usize>>) -> Bipartite {
        assert_eq!(adj.len(), left);
        assert!(adj.iter().flatten().all(|&y| y < right));
        Bipartite { left, right, adj }
    }

    /// `N(X)` for a set of left vertices.
    pub fn neighborhood(&self, xs: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.right];
        for &x in xs {
            for &y in &self.adj[x] {
                seen[y] = true;
            }
        }
        (0..self.right).filter(|&y| seen[y]).collect()
    }

    fn network(&self, f: &[usize]) -> (FlowNetwork, Vec<Vec<(usize, usize)>>) {
        let (l, r) = (self.left, self.right);
        let source = 0;
        let sink = l + r + 1;
        let big: i64 = f.iter().sum::<usize>() as i64 + 1;
        let mut net = FlowNetwork::new(l + r + 2);
        for (x, &fx) in f.iter().enumerate() {
            net.add_arc(source, 1 + x, fx as i64);
        }
        let mut arcs = vec![Vec::new(); l];
        for (x, out) in arcs.iter_mut().enumerate() {
            let mut ys = self.adj[x].clone();
            ys.sort_unstable();
            ys.dedup();
            for y in ys {
                out.push((y, net.add_arc(1 + x, 1 + l + y, big)));
            }
        }
        for y in 0..r {
            net.add_arc(1 + l + y, sink, 1);
        }
        (net, arcs)
    }
}

/// Disjoint stars: `leaves[x]` are the right vertices attached to left vertex `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarMatching {
    pub leaves: Vec<Vec<usize>>,
}

impl StarMatching {
    /// Checks sizes, adjacency and disjointness against `b` and `f`.
    pub fn is_valid(&self, b: &Bipartite, f: &[usize]) -> bool {
        let mut used = vec![false; b.right];
        self.leaves.len() == b.left
            && self.leaves.iter().enumerate().all(|(x, ls)| {
                ls.len() == f[x]
                    && ls.iter().all(|&y| {
                        let fresh = y < b.right && !used[y] && b.adj[x].contains(&y);
                        if fresh {
                            used[y] = true;
                        }
                        fresh
                    })
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StarOutcome {
    /// Every left vertex `x` received exactly `f(x)` private neighbours.
    Stars(StarMatching),
    /// A left set `X` with `|N(X)| < sum of f over X`.
    Deficient(Vec<usize>),
}

/// Stars with `f(x)` leaves at every left vertex `x` if `|N(X)| >= f(X)` for all `X`;
/// otherwise a set violating that condition, read off a minimum cut.
pub fn star_matching(b: &Bipartite, f: &[usize]) -> StarOutcome {
    assert_eq!(f.len(), b.left);
    let demand: usize = f.iter().sum();
    let (mut net, arcs) = b.network(f);
    let sink = b.left + b.right + 1;
    let flow = net.max_flow(0, sink) as usize;
    if flow == demand {
        let leaves =
            arcs.iter().map(|xs| xs.iter().filter(|&&(_, a)| net.flow_on(a) > 0).map(|&(y, _)| y).collect()).collect();
        StarOutcome::Stars(StarMatching { leaves })
    } else {
        let side = net.residual_reachable(0);
        StarOutcome::Deficient((0..b.left).filter(|&x| side[1 + x]).collect())
    }
}

/// `max over X of (f(X) - |N(X)|)` (at least 0, attained by `X = ∅`) together with the unique
/// inclusion-maximal maximizer. The map `X -> f(X) - |N(X)|` is supermodular, so maximizers are
/// closed under union; the maximal one is the source side of the maximal minimum cut.
pub fn max_deficiency(b: &Bipartite, f: &[usize]) -> (usize, Vec<usize>) {
    let demand: usize = f.iter().sum();
    let (mut net, _) = b.network(f);
    let sink = b.left + b.right + 1;
    let flow = net.max_flow(0, sink) as usize;
    let to_sink = net.residual_coreachable(sink);
    (demand - flow, (0..b.left).filter(|&x| !to_sink[1 + x]).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("{0:?} is not a cutset")]
    NotCutset(VertexSet),
    #[error("G - S has {0} components; at least 5 are required")]
    TooFewComponents(usize),
    #[error("|S| = {size} < 2s * w(G - S) = {need}")]
    CutsetTooSmall { size: usize, need: usize },
    #[error("component {component} has {size} neighbours in S; {need} are required")]
    NeighborhoodTooSmall { component: usize, size: usize, need: usize },
    #[error("component {0} has no balanced partition")]
    Unbalanced(usize),
    #[error("contracted bipartite graph has no K_(1,s)-matching; deficient contracted vertices {0:?}")]
    Deficient(Vec<usize>),
    #[error("s must be positive")]
    ZeroS,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("component must have at least 2 vertices")]
    Trivial,
    #[error("|W| = {size} < 4s = {need}")]
    NeighborhoodTooSmall { size: usize, need: usize },
    #[error("no partition with both partner sides of size at least 2s")]
    NotFound,
}

/// Partitions `{D1, D2}` of a component and `{W1, W2}` of its neighbourhood in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedPartition {
    pub d1: VertexSet,
    pub d2: VertexSet,
    pub w1: VertexSet,
    pub w2: VertexSet,
}

impl BalancedPartition {
    pub fn satisfies(&self, g: &Graph, d: &VertexSet, w: &VertexSet, s: usize) -> bool {
        self.d1.union(&self.d2) == *d
            && self.d1.is_disjoint(&self.d2)
            && self.w1.union(&self.w2) == *w
            && self.w1.is_disjoint(&self.w2)
            && self.w1.len().min(self.w2.len()) >= 2 * s
            && self.w1.is_subset(&g.neighborhood_of_set(&self.d1))
            && self.w2.is_subset(&g.neighborhood_of_set(&self.d2))
    }
}

/// Which rung of the partition search produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BalanceMethod {
    DisjointEdges,
    LocalSearch,
    Exhaustive,
}

/// Largest achievable `min(|W1|, |W2|)` for a fixed split of the component, and the split of `W`
/// achieving it (exclusive neighbours forced, shared ones handed to the smaller side).
fn best_w_split(g: &Graph, d1: &VertexSet, d2: &VertexSet, w: &VertexSet) -> (usize, VertexSet, VertexSet) {
    let n1 = g.neighbor_union(d1);
    let n2 = g.neighbor_union(d2);
    let mut w1 = g.empty_set();
    let mut w2 = g.empty_set();
    let mut shared = Vec::new();
    for x in w.iter() {
        match (n1.contains(x), n2.contains(x)) {
            (true, true) => shared.push(x),
            (true, false) => w1.insert(x),
            (false, true) => w2.insert(x),
            (false, false) => return (0, w1, w2),
        }
    }
    for x in shared {
        if w1.len() <= w2.len() {
            w1.insert(x);
        } else {
            w2.insert(x);
        }
    }
    (w1.len().min(w2.len()), w1, w2)
}

/// Splits a nontrivial component `D` (with `W = N_S(D)`) so that each side of the component
/// sees its own `2s` vertices of `W`.
///
/// Tries, in order: `4s` disjoint `D`-`W` edges split evenly; single-vertex moves from the
/// split that isolates the last vertex until no move improves `min(|W1|, |W2|)`; and, for
/// `|D| <= 12`, every split of `D`.
pub fn balance_component_partition(
    g: &Graph,
    d: &VertexSet,
    w: &VertexSet,
    s: usize,
) -> Result<(BalancedPartition, BalanceMethod), BalanceError> {
    if d.len() < 2 {
        return Err(BalanceError::Trivial);
    }
    if w.len() < 4 * s {
        return Err(BalanceError::NeighborhoodTooSmall { size: w.len(), need: 4 * s });
    }
    let target = 2 * s;
    let finish = |d1: VertexSet, d2: VertexSet| {
        let (_, w1, w2) = best_w_split(g, &d1, &d2, w);
        BalancedPartition { d1, d2, w1, w2 }
    };

    if d.len() >= 4 * s {
        if let Some(pairs) = disjoint_edges(g, d, w, 4 * s) {
            let mut d1 = g.set_of(pairs[..target].iter().map(|&(x, _)| x));
            let d2 = g.set_of(pairs[target..].iter().map(|&(x, _)| x));
            d1.union_with(&d.difference(&d2).difference(&d1));
            return Ok((finish(d1, d2), BalanceMethod::DisjointEdges));
        }
    }

    let verts = d.to_vec();
    let mut d2 = g.set_of([verts[verts.len() - 1]]);
    let mut d1 = d.difference(&d2);
    let mut score = best_w_split(g, &d1, &d2, w).0;
    while score < target {
        let mut improved = None;
        for &v in &verts {
            let (mut a, mut b) = (d1.clone(), d2.clone());
            if a.contains(v) {
                a.remove(v);
                b.insert(v);
            } else {
                b.remove(v);
                a.insert(v);
            }
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let sc = best_w_split(g, &a, &b, w).0;
            if sc > score {
                improved = Some((a, b, sc));
                break;
            }
        }
        match improved {
            Some((a, b, sc)) => {
                d1 = a;
                d2 = b;
                score = sc;
            }
            None => break,
        }
    }
    if score >= target {
        return Ok((finish(d1, d2), BalanceMethod::LocalSearch));
    }

    if verts.len() <= 12 {
        // The last vertex always sits in D2, which halves the search by symmetry.
        let k = verts.len() - 1;
        for mask in 0u32..(1 << k) {
            let d1 = g.set_of((0..k).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]));
            if d1.is_empty() {
                continue;
            }
            let d2 = d.difference(&d1);
            if best_w_split(g, &d1, &d2, w).0 >= target {
                return Ok((finish(d1, d2), BalanceMethod::Exhaustive));
            }
        }
    }
    Err(BalanceError::NotFound)
}

/// `count` pairwise disjoint edges between `a` and `b`, if a matching that large exists.
fn disjoint_edges(g: &Graph, a: &VertexSet, b: &VertexSet, count: usize) -> Option<Vec<(usize, usize)>> {
    let av = a.to_vec();
    let bv = b.to_vec();
    let index: std::collections::HashMap<usize, usize> = bv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj = av.iter().map(|&x| g.neighbors(x).intersection(b).iter().map(|y| index[&y]).collect()).collect();
    let bip = Bipartite::new(av.len(), bv.len(), adj);
    let (mut net, arcs) = bip.network(&vec![1; av.len()]);
    let sink = av.len() + bv.len() + 1;
    if (net.max_flow_bounded(0, sink, count as i64) as usize) < count {
        return None;
    }
    let mut pairs = Vec::new();
    for (x, xs) in arcs.iter().enumerate() {
        for &(y, arc) in xs {
            if net.flow_on(arc) > 0 {
                pairs.push((av[x], bv[y]));
            }
        }
    }
    Some(pairs)
}

/// Split of a nontrivial centre and its partners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterSplit {
    pub x1: VertexSet,
    pub x2: VertexSet,
    pub y1: VertexSet,
    pub y2: VertexSet,
}

/// The partners assigned to one component of `G - S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPartners {
    pub component: VertexSet,
    pub partners: VertexSet,
    /// Present iff the component has at least two vertices.
    pub split: Option<CenterSplit>,
}

/// A generalized `K_{1,2s}`-matching: components of `G - S` in order, each with `2s` private
/// partners in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizedStarMatching {
    pub s: usize,
    pub parts: Vec<ComponentPartners>,
    pub balance_methods: Vec<Option<BalanceMethod>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchingOptions {
    /// Accept cutsets with fewer than five components (the resource conditions are still
    /// checked).
    pub allow_few_components: bool,
}

/// Builds a generalized `K_{1,2s}`-matching centred at the components of `G - S`.
///
/// Preconditions (checked): `S` is a cutset with `w(G - S) >= 5`, `|S| >= 2s * w(G - S)` and
/// `|N_S(D)| >= 4s` for every component `D`. Each nontrivial component is balanced into two
/// halves and each half contracted to one vertex; each trivial component is duplicated into two
/// vertices with its full neighbourhood. A star matching with `s` leaves
/// per contracted vertex then yields the partners.
pub fn generalized_matching(
    g: &Graph,
    s_set: &VertexSet,
    s: usize,
    opts: MatchingOptions,
) -> Result<GeneralizedStarMatching, MatchingError> {
    if s == 0 {
        return Err(MatchingError::ZeroS);
    }
    let comps = g.components(s_set);
    let w = comps.len();
    if w < 2 {
        return Err(MatchingError::NotCutset(s_set.clone()));
    }
    if w < 5 && !opts.allow_few_components {
        return Err(MatchingError::TooFewComponents(w));
    }
    if s_set.len() < 2 * s * w {
        return Err(MatchingError::CutsetTooSmall { size: s_set.len(), need: 2 * s * w });
    }
    let nbhd: Vec<VertexSet> = comps.iter().map(|c| g.neighborhood_of_set(c)).collect();
    for (i, nb) in nbhd.iter().enumerate() {
        if nb.len() < 4 * s {
            return Err(MatchingError::NeighborhoodTooSmall { component: i, size: nb.len(), need: 4 * s });
        }
    }

    let sv = s_set.to_vec();
    let index: std::collections::HashMap<usize, usize> = sv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let to_idx = |set: &VertexSet| -> Vec<usize> { set.iter().map(|v| index[&v]).collect() };

    // Contracted vertices 2i (a_i) and 2i + 1 (b_i).
    let mut adj = Vec::with_capacity(2 * w);
    let mut halves = Vec::with_capacity(w);
    let mut methods = Vec::with_capacity(w);
    for (i, c) in comps.iter().enumerate() {
        if c.len() >= 2 {
            let (bp, method) =
                balance_component_partition(g, c, &nbhd[i], s).map_err(|_| MatchingError::Unbalanced(i))?;
            adj.push(to_idx(&g.neighborhood_of_set(&bp.d1).intersection(s_set)));
            adj.push(to_idx(&g.neighborhood_of_set(&bp.d2).intersection(s_set)));
            halves.push(Some((bp.d1, bp.d2)));
            methods.push(Some(method));
        } else {
            let nb = nbhd[i].to_vec();
            let slots: Vec<usize> = nb.iter().map(|v| index[v]).collect();
            adj.push(slots.clone());
            adj.push(slots);
            halves.push(None);
            methods.push(None);
        }
    }
    let bip = Bipartite::new(2 * w, sv.len(), adj);
    let stars = match star_matching(&bip, &vec![s; 2 * w]) {
        StarOutcome::Stars(m) => m,
        StarOutcome::Deficient(xs) => return Err(MatchingError::Deficient(xs)),
    };
    let host = |ys: &[usize]| g.set_of(ys.iter().map(|&y| sv[y]));
    let parts = comps
        .into_iter()
        .zip(halves)
        .enumerate()
        .map(|(i, (component, half))| {
            let y1 = host(&stars.leaves[2 * i]);
            let y2 = host(&stars.leaves[2 * i + 1]);
            let partners = y1.union(&y2);
            let split = half.map(|(x1, x2)| CenterSplit { x1, x2, y1, y2 });
            ComponentPartners { component, partners, split }
        })
        .collect();
    Ok(GeneralizedStarMatching { s, parts, balance_methods: methods })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingDefect {
    Components,
    PartnerCount(usize),
    PartnersOutsideS(usize),
    PartnerNotAdjacent(usize, usize),
    Disjointness(usize, usize),
    MissingSplit(usize),
    CenterPartition(usize),
    PartitionSize(usize),
    PartitionContainment(usize),
}

impl fmt::Display for MatchingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingDefect::Components => write!(f, "components: centres are not the components of G - S"),
            MatchingDefect::PartnerCount(i) => write!(f, "partner count: component {i} does not have 2s partners"),
            MatchingDefect::PartnersOutsideS(i) => write!(f, "partners of component {i} lie outside S"),
            MatchingDefect::PartnerNotAdjacent(i, y) => {
                write!(f, "adjacency: partner {y} sees no vertex of component {i}")
            }
            MatchingDefect::Disjointness(i, j) => {
                write!(f, "disjointness: components {i} and {j} share a partner")
            }
            MatchingDefect::MissingSplit(i) => write!(f, "partition missing for nontrivial component {i}"),
            MatchingDefect::CenterPartition(i) => write!(f, "centre partition of component {i} is invalid"),
            MatchingDefect::PartitionSize(i) => write!(f, "partition size: component {i} has |Y1| or |Y2| != s"),
            MatchingDefect::PartitionContainment(i) => {
                write!(f, "partition containment: component {i} has Y_j outside N(X_j)")
            }
        }
    }
}

/// Re-checks every defining condition of a generalized `K_{1,2s}`-matching from scratch.
pub fn validate_generalized_matching(
    g: &Graph,
    s_set: &VertexSet,
    m: &GeneralizedStarMatching,
) -> Result<(), MatchingDefect> {
    let comps = g.components(s_set);
    let centres: Vec<&VertexSet> = m.parts.iter().map(|p| &p.component).collect();
    if comps.iter().collect::<Vec<_>>() != centres {
        return Err(MatchingDefect::Components);
    }
    let s = m.s;
    for (i, p) in m.parts.iter().enumerate() {
        if p.partners.len() != 2 * s {
            return Err(MatchingDefect::PartnerCount(i));
        }
        if !p.partners.is_subset(s_set) {
            return Err(MatchingDefect::PartnersOutsideS(i));
        }
        if let Some(y) = p.partners.iter().find(|&y| !g.neighbors(y).intersects(&p.component)) {
            return Err(MatchingDefect::PartnerNotAdjacent(i, y));
        }
        for (j, q) in m.parts.iter().enumerate().skip(i + 1) {
            if p.partners.intersects(&q.partners) {
                return Err(MatchingDefect::Disjointness(i, j));
            }
        }
        if p.component.len() >= 2 {
            let Some(sp) = &p.split else {
                return Err(MatchingDefect::MissingSplit(i));
            };
            if sp.x1.is_empty() || sp.x2.is_empty() || !sp.x1.is_disjoint(&sp.x2) || sp.x1.union(&sp.x2) != p.component
            {
                return Err(MatchingDefect::CenterPartition(i));
            }
            if sp.y1.len() != s || sp.y2.len() != s || !sp.y1.is_disjoint(&sp.y2) || sp.y1.union(&sp.y2) != p.partners {
                return Err(MatchingDefect::PartitionSize(i));
            }
            if !sp.y1.is_subset(&g.neighbor_union(&sp.x1)) || !sp.y2.is_subset(&g.neighbor_union(&sp.x2)) {
                return Err(MatchingDefect::PartitionContainment(i));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Hall-type condition by enumerating every left subset.
    fn hall_holds(b: &Bipartite, f: &[usize]) -> bool {
        (0u32..(1 << b.left)).all(|mask| {
            let xs: Vec<usize> = (0..b.left).filter(|&x| mask >> x & 1 == 1).collect();
            b.neighborhood(&xs).len() >= xs.iter().map(|&x| f[x]).sum()
        })
    }

    fn random_bipartite(rng: &mut ChaCha8Rng) -> (Bipartite, Vec<usize>) {
        let l = rng.gen_range(1..=6);
        let r = rng.gen_range(1..=12);
        let p: f64 = rng.gen_range(0.1..0.9);
        let adj = (0..l).map(|_| (0..r).filter(|_| rng.gen_bool(p)).collect()).collect();
        let f = (0..l).map(|_| rng.gen_range(1..=3)).collect();
        (Bipartite::new(l, r, adj), f)
    }

    #[test]
    fn star_examples() {
        let b = Bipartite::new(1, 2, vec![vec![0, 1]]);
        assert_eq!(star_matching(&b, &[2]), StarOutcome::Stars(StarMatching { leaves: vec![vec![0, 1]] }));
        let b = Bipartite::new(2, 3, vec![vec![0, 1, 2], vec![0, 1, 2]]);
        assert_eq!(star_matching(&b, &[2, 2]), StarOutcome::Deficient(vec![0, 1]));
    }

    #[test]
    fn star_matching_agrees_with_hall() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let (b, f) = random_bipartite(&mut rng);
            match star_matching(&b, &f) {
                StarOutcome::Stars(m) => {
                    assert!(hall_holds(&b, &f));
                    assert!(m.is_valid(&b, &f));
                }
                StarOutcome::Deficient(xs) => {
                    assert!(!hall_holds(&b, &f));
                    let need: usize = xs.iter().map(|&x| f[x]).sum();
                    assert!(b.neighborhood(&xs).len() < need);
                }
            }
        }
    }

    #[test]
    fn max_deficiency_is_the_maximal_maximizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (b, f) = random_bipartite(&mut rng);
            let (def, maximal) = max_deficiency(&b, &f);
            let score = |xs: &[usize]| xs.iter().map(|&x| f[x] as i64).sum::<i64>() - b.neighborhood(xs).len() as i64;
            let mut best = 0i64;
            let mut union = 0u32;
            for mask in 0u32..(1 << b.left) {
                let xs: Vec<usize> = (0..b.left).filter(|&x| mask >> x & 1 == 1).collect();
                best = best.max(score(&xs));
            }
            for mask in 0u32..(1 << b.left) {
                let xs: Vec<usize> = (0..b.left).filter(|&x| mask >> x & 1 == 1).collect();
                if score(&xs) == best {
                    union |= mask;
                }
            }
            assert_eq!(def as i64, best);
            let expect: Vec<usize> = (0..b.left).filter(|&x| union >> x & 1 == 1).collect();
            assert_eq!(maximal, expect);
        }
    }

    #[test]
    fn balance_two_vertex_component() {
        // D = {a, b} = {0, 1}, W = 2..10 (s = 2); a sees 2..6, b sees 6..10.
        let s = 2;
        let mut edges = vec![(0, 1)];
        edges.extend((2..6).map(|w| (0, w)));
        edges.extend((6..10).map(|w| (1, w)));
        let g = Graph::new(10, edges).unwrap();
        let d = g.set_of([0, 1]);
        let w = g.set_of(2..10);
        let (bp, _) = balance_component_partition(&g, &d, &w, s).unwrap();
        assert!(bp.satisfies(&g, &d, &w, s));
        assert_eq!(balance_component_partition(&g, &g.set_of([0]), &w, s), Err(BalanceError::Trivial));
    }

    /// Whether any split of `d` balances, by full enumeration.
    fn exhaustive_balance_exists(g: &Graph, d: &VertexSet, w: &VertexSet, s: usize) -> bool {
        let verts = d.to_vec();
        (1u32..(1 << verts.len()) - 1).any(|mask| {
            let d1 = g.set_of((0..verts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]));
            let d2 = d.difference(&d1);
            let n1 = g.neighbor_union(&d1);
            let n2 = g.neighbor_union(&d2);
            // Try every assignment of W respecting containment.
            let wv = w.to_vec();
            (0u32..(1 << wv.len())).any(|side| {
                let mut c1 = 0;
                let mut c2 = 0;
                for (i, &x) in wv.iter().enumerate() {
                    if side >> i & 1 == 1 {
                        if !n1.contains(x) {
                            return false;
                        }
                        c1 += 1;
                    } else {
                        if !n2.contains(x) {
                            return false;
                        }
                        c2 += 1;
                    }
                }
                c1 >= 2 * s && c2 >= 2 * s
            })
        })
    }

    #[test]
    fn balancing_matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut successes = 0;
        for _ in 0..300 {
            let s = rng.gen_range(1..=2);
            let dn = rng.gen_range(2..=5.min(4 * s - 1).max(2));
            let wn = 4 * s;
            let n = dn + wn;
            let mut edges = Vec::new();
            for u in 0..dn {
                for v in u + 1..dn {
                    if v == u + 1 || rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            for x in dn..n {
                let owner = rng.gen_range(0..dn);
                edges.push((owner, x));
                for u in 0..dn {
                    if u != owner && rng.gen_bool(0.3) {
                        edges.push((u, x));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let d = g.set_of(0..dn);
            let w = g.set_of(dn..n);
            let expected = exhaustive_balance_exists(&g, &d, &w, s);
            match balance_component_partition(&g, &d, &w, s) {
                Ok((bp, _)) => {
                    assert!(expected);
                    assert!(bp.satisfies(&g, &d, &w, s));
                    successes += 1;
                }
                Err(e) => {
                    assert_eq!(e, BalanceError::NotFound);
                    assert!(!expected, "missed a balanced partition in {g:?}");
                }
            }
        }
        assert!(successes > 0);
    }

    #[test]
    fn generalized_matching_on_join() {
        // 5 isolated vertices 0..5 joined to K_20 on 5..25; S = the K_20 side, s = 2.
        let g = Graph::empty(5).join(&Graph::complete(20));
        let s_set = g.set_of(5..25);
        let m = generalized_matching(&g, &s_set, 2, MatchingOptions::default()).unwrap();
        assert_eq!(m.parts.len(), 5);
        assert!(m.parts.iter().all(|p| p.partners.len() == 4));
        assert_eq!(validate_generalized_matching(&g, &s_set, &m), Ok(()));
    }

    #[test]
    fn generalized_matching_rejects_four_components() {
        let g = Graph::empty(4).join(&Graph::complete(20));
        let s_set = g.set_of(4..24);
        assert_eq!(
            generalized_matching(&g, &s_set, 2, MatchingOptions::default()),
            Err(MatchingError::TooFewComponents(4))
        );
        let relaxed = MatchingOptions { allow_few_components: true };
        let m = generalized_matching(&g, &s_set, 2, relaxed).unwrap();
        assert_eq!(validate_generalized_matching(&g, &s_set, &m), Ok(()));
    }

    #[test]
    fn validator_catches_defects() {
        let g = Graph::empty(5).join(&Graph::complete(20));
        let s_set = g.set_of(5..25);
        let m = generalized_matching(&g, &s_set, 2, MatchingOptions::default()).unwrap();

        let mut overlap = m.clone();
        overlap.parts[1].partners = overlap.parts[0].partners.clone();
        let err = validate_generalized_matching(&g, &s_set, &overlap).unwrap_err();
        assert!(err.to_string().contains("disjointness"));

        // A nontrivial centre with an unbalanced partner split.
        let h = Graph::complete(2).disjoint_union(&Graph::empty(4)).join(&Graph::complete(12));
        let s_set = h.set_of(6..18);
        let m = generalized_matching(&h, &s_set, 1, MatchingOptions::default()).unwrap();
        assert_eq!(validate_generalized_matching(&h, &s_set, &m), Ok(()));
        let mut skew = m.clone();
        let sp = skew.parts[0].split.as_mut().unwrap();
        let moved = sp.y2.first().unwrap();
        sp.y2.remove(moved);
        sp.y1.insert(moved);
        let err = validate_generalized_matching(&h, &s_set, &skew).unwrap_err();
        assert!(err.to_string().contains("partition size"));
    }
}
