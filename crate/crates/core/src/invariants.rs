//! Exact graph invariants: toughness with a tough set, vertex connectivity,
//! independence number, and the degree predicates used as hamiltonicity shortcuts.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("{0:?} is not a cutset")]
    NotCutset(VertexSet),
}

/// The toughness of a graph together with a set attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToughnessCertificate {
    pub value: Rational,
    /// A cutset `S` with `|S| / w(G - S) = value`; empty for complete and disconnected graphs.
    pub tough_set: VertexSet,
}

/// Number of components of the graph induced on `left`, given row masks.
pub(crate) fn mask_component_count(rows: &[u64], mut left: u64) -> usize {
    let mut count = 0;
    while left != 0 {
        let seed = left & left.wrapping_neg();
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = rows[v] & left & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        left &= !comp;
        count += 1;
    }
    count
}

/// Candidate ordering for tough sets: smaller ratio, then larger `w(G - S)`,
/// then the lexicographically smaller vertex list.
#[derive(Clone, Copy)]
struct Best {
    size: usize,
    w: usize,
}

impl Best {
    /// True iff `(size, w)` beats `self` strictly on ratio, or ties on ratio with more components.
    /// `None` means "equal on both keys" — the caller resolves it lexicographically.
    fn improves(&self, size: usize, w: usize) -> Option<bool> {
        let lhs = size * self.w;
        let rhs = self.size * w;
        if lhs != rhs {
            return Some(lhs < rhs);
        }
        if w != self.w {
            return Some(w > self.w);
        }
        None
    }
}

fn mask_lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// `tau(G)`: the minimum of `|S| / w(G - S)` over all cutsets `S`.
///
/// Complete graphs give `INFINITY`; disconnected graphs give 0 with an empty tough set.
/// Among minimizing cutsets the one with the most components wins, then the lexicographically
/// smallest vertex list. Exponential in `n`; intended for `n` up to about 20.
pub fn toughness(g: &Graph) -> ToughnessCertificate {
    if g.is_complete_graph() {
        return ToughnessCertificate { value: Rational::Infinity, tough_set: g.empty_set() };
    }
    if !g.is_connected() {
        return ToughnessCertificate { value: Rational::ZERO, tough_set: g.empty_set() };
    }
    let (size, w, set) = match g.mask_rows() {
        Some(rows) => toughness_masks(&rows),
        None => toughness_sets(g),
    };
    ToughnessCertificate { value: Rational::frac(size as i64, w as i64), tough_set: set }
}

fn toughness_masks(rows: &[u64]) -> (usize, usize, VertexSet) {
    let n = rows.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<(Best, u64)> = None;
    for k in 1..=n.saturating_sub(2) {
        if let Some((b, _)) = best {
            // The best conceivable ratio at this size is k / (n - k), and it only grows with k.
            if k * b.w > b.size * (n - k) {
                break;
            }
        }
        let mut s: u64 = (1u64 << k) - 1;
        while s & !all == 0 {
            let w = mask_component_count(rows, all & !s);
            if w >= 2 {
                let better = match best {
                    None => true,
                    Some((b, bs)) => b.improves(k, w).unwrap_or_else(|| mask_lex_less(s, bs)),
                };
                if better {
                    best = Some((Best { size: k, w }, s));
                }
            }
            // Gosper's hack: next mask with the same popcount.
            let c = s & s.wrapping_neg();
            let r = s.wrapping_add(c);
            if r == 0 {
                break;
            }
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    let (b, s) = best.expect("a connected noncomplete graph has a cutset");
    (b.size, b.w, VertexSet::from_mask(n, s))
}

fn toughness_sets(g: &Graph) -> (usize, usize, VertexSet) {
    let n = g.n();
    let mut best: Option<(Best, VertexSet)> = None;
    for k in 1..=n.saturating_sub(2) {
        if let Some((b, _)) = &best {
            if k * b.w > b.size * (n - k) {
                break;
            }
        }
        for_each_combination(n, k, |combo| {
            let s = g.set_of(combo.iter().copied());
            let w = g.component_count(&s);
            if w < 2 {
                return;
            }
            // Combinations arrive in lexicographic order, so ties keep the earlier set.
            let better = match &best {
                None => true,
                Some((b, _)) => b.improves(k, w).unwrap_or(false),
            };
            if better {
                best = Some((Best { size: k, w }, s));
            }
        });
    }
    let (b, s) = best.expect("a connected noncomplete graph has a cutset");
    (b.size, b.w, s)
}

/// Calls `f` on every `k`-subset of `0..n` (as an ascending slice), in lexicographic order.
pub fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Rightmost position that can still advance.
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Whether every cutset `S` satisfies `|S| >= t * w(G - S)`; on failure, a violating cutset.
pub fn is_t_tough(g: &Graph, t: Rational) -> (bool, Option<VertexSet>) {
    let cert = toughness(g);
    if cert.value >= t {
        (true, None)
    } else {
        (false, Some(cert.tough_set))
    }
}

/// Vertex connectivity `kappa(G)` and a minimum separating set (`None` for complete graphs).
pub fn connectivity(g: &Graph) -> (usize, Option<VertexSet>) {
    let n = g.n();
    if g.is_complete_graph() {
        return (n.saturating_sub(1), None);
    }
    if !g.is_connected() {
        return (0, Some(g.empty_set()));
    }
    let mut best = n - 1;
    let mut witness: Option<VertexSet> = None;
    let mut i = 0;
    // Some vertex among the first kappa + 1 avoids a minimum cut; pairing it with every
    // nonadjacent vertex finds that cut.
    while i <= best && i < n {
        for y in 0..n {
            if y == i || g.has_edge(i, y) {
                continue;
            }
            if let Some(cut) = local_cut(g, i, y, best) {
                if cut.len() < best || witness.is_none() {
                    best = cut.len();
                    witness = Some(cut);
                }
            }
        }
        i += 1;
    }
    (best, witness)
}

/// A minimum `x`-`y` vertex separator if its size is at most `limit`.
fn local_cut(g: &Graph, x: usize, y: usize, limit: usize) -> Option<VertexSet> {
    let n = g.n();
    let big = n as i64 + 1;
    // Vertex v is split into v_in = 2v and v_out = 2v + 1.
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let cap = if v == x || v == y { big } else { 1 };
        net.add_arc(2 * v, 2 * v + 1, cap);
    }
    for (u, v) in g.edges() {
        net.add_arc(2 * u + 1, 2 * v, big);
        net.add_arc(2 * v + 1, 2 * u, big);
    }
    let flow = net.max_flow_bounded(2 * x + 1, 2 * y, limit as i64 + 1);
    if flow > limit as i64 {
        return None;
    }
    let side = net.residual_reachable(2 * x + 1);
    let cut = g.set_of((0..n).filter(|&v| side[2 * v] && !side[2 * v + 1]));
    debug_assert_eq!(cut.len() as i64, flow);
    Some(cut)
}

/// `alpha(G)` with a maximum independent set.
pub fn independence_number(g: &Graph) -> (usize, VertexSet) {
    let set = maximum_independent_set_within(g, &g.vertices());
    (set.len(), set)
}

/// A maximum independent set of `G[within]`, by branch and bound with a clique-cover bound.
pub fn maximum_independent_set_within(g: &Graph, within: &VertexSet) -> VertexSet {
    let mut search = MisSearch { g, best: g.empty_set(), current: Vec::new() };
    search.expand(within.clone());
    search.best
}

/// Whether `G[within]` has an independent set of size `k` (early exit).
pub fn has_independent_set(g: &Graph, within: &VertexSet, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let mut search = MisSearch { g, best: g.empty_set(), current: Vec::new() };
    search.expand_until(within.clone(), k)
}

struct MisSearch<'a> {
    g: &'a Graph,
    best: VertexSet,
    current: Vec<usize>,
}

impl MisSearch<'_> {
    /// Covers `p` greedily by cliques; returns vertices with their cumulative clique index, in
    /// ascending index order. Any independent set meets each clique at most once.
    fn cover(&self, p: &VertexSet) -> Vec<(usize, usize)> {
        let mut classes: Vec<VertexSet> = Vec::new();
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(p.len());
        for v in p.iter() {
            let nv = self.g.neighbors(v);
            match classes.iter().position(|c| c.is_subset(nv)) {
                Some(i) => classes[i].insert(v),
                None => classes.push(VertexSet::singleton(self.g.n(), v)),
            }
        }
        for (i, c) in classes.iter().enumerate() {
            out.extend(c.iter().map(|v| (v, i + 1)));
        }
        out
    }

    fn expand(&mut self, mut p: VertexSet) {
        let order = self.cover(&p);
        for &(v, bound) in order.iter().rev() {
            if self.current.len() + bound <= self.best.len() {
                return;
            }
            self.current.push(v);
            let mut next = p.difference(self.g.neighbors(v));
            next.remove(v);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.g.set_of(self.current.iter().copied());
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.remove(v);
        }
    }

    fn expand_until(&mut self, mut p: VertexSet, k: usize) -> bool {
        if self.current.len() >= k {
            return true;
        }
        let order = self.cover(&p);
        for &(v, bound) in order.iter().rev() {
            if self.current.len() + bound < k {
                return false;
            }
            self.current.push(v);
            let mut next = p.difference(self.g.neighbors(v));
            next.remove(v);
            let found = self.current.len() >= k || (!next.is_empty() && self.expand_until(next, k));
            self.current.pop();
            if found {
                return true;
            }
            p.remove(v);
        }
        false
    }
}

/// `delta(G)`; 0 for the empty graph.
pub fn min_degree(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0)
}

/// `delta(G) > n / (t + 1) - 1`, exactly.
pub fn dirac_type_check(g: &Graph, t: Rational) -> bool {
    let threshold = Rational::degree_threshold(g.n(), t);
    Ratio::from_integer(min_degree(g) as i64) > threshold
}

/// The nonadjacent pair of minimum degree sum (lexicographically least among minimizers).
pub fn min_degree_sum_pair(g: &Graph) -> Option<(usize, usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) {
                continue;
            }
            let sum = g.degree(u) + g.degree(v);
            if best.is_none_or(|(_, _, b)| sum < b) {
                best = Some((u, v, sum));
            }
        }
    }
    best
}

/// Whether every nonadjacent pair has degree sum `> 2n / (t + 1) - 2`; otherwise the failing
/// pair of minimum degree sum.
pub fn degree_sum_check(g: &Graph, t: Rational) -> (bool, Option<(usize, usize)>) {
    let threshold = Rational::degree_threshold(g.n(), t) * 2;
    match min_degree_sum_pair(g) {
        Some((u, v, sum)) if Ratio::from_integer(sum as i64) <= threshold => (false, Some((u, v))),
        _ => (true, None),
    }
}

/// Whether every vertex of the cutset `S` has neighbours in at least two components of `G - S`.
pub fn is_proper_cutset(g: &Graph, s: &VertexSet) -> Result<bool, InvariantError> {
    let comps = g.components(s);
    if comps.len() < 2 {
        return Err(InvariantError::NotCutset(s.clone()));
    }
    Ok(s.iter().all(|v| comps.iter().filter(|c| g.neighbors(v).intersects(c)).count() >= 2))
}
