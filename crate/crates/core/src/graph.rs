//! Immutable simple graphs over dense vertex ids `0..n`, bitset vertex sets,
//! and the path/cycle types every construction produces.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex sets are not disjoint (common vertex {0})")]
    NotDisjoint(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("empty vertex sequence")]
    Empty,
    #[error("a cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} repeated")]
    Repeated(usize),
    #[error("consecutive vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
}

type Words = SmallVec<[u64; 2]>;

#[inline]
fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

/// A subset of `0..universe`, stored as a bitset.
///
/// Ordering is lexicographic on the ascending vertex list, so `{0, 2} < {0, 2, 4} < {0, 3}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Words,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet { universe, words: smallvec![0; word_count(universe)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(universe);
            let bits = hi - lo;
            *w = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    pub fn singleton(universe: usize, v: usize) -> Self {
        let mut s = Self::new(universe);
        s.insert(v);
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(universe: usize, vertices: I) -> Self {
        let mut s = Self::new(universe);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Builds a set from the low `universe` bits of `mask` (`universe <= 64`).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "from_mask needs universe <= 64");
        let mut s = Self::new(universe);
        if universe > 0 {
            s.words[0] = mask;
        }
        s
    }

    /// The first word of the bitset; the whole set when `universe <= 64`.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && (self.words[v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.universe {
            self.words[v / 64] &= !(1u64 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> VertexIter<'_> {
        VertexIter { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_universe(&self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe, "mixed universes");
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.difference_with(other);
        r
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.universe).difference(self)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words.iter().zip(other.words.iter()).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

pub struct VertexIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for VertexIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![VertexSet::new(n); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let m = adj.iter().map(VertexSet::len).sum::<usize>() / 2;
        Ok(Graph { n, m, adj })
    }

    /// Builds a graph from row bitmasks (`n <= 64`). Rows must be symmetric and loop-free.
    pub fn from_mask_rows(rows: &[u64]) -> Result<Graph, GraphError> {
        let n = rows.len();
        assert!(n <= 64);
        let mut edges = Vec::new();
        for (u, &row) in rows.iter().enumerate() {
            if (row >> u) & 1 == 1 {
                return Err(GraphError::SelfLoop(u));
            }
            let mut r = row;
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                r &= r - 1;
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                edges.push((u, v));
            }
        }
        Graph::new(n, edges)
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, m: 0, adj: vec![VertexSet::new(n); n] }
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("valid complete graph")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs n >= 3");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::new(a + b, edges).expect("valid complete bipartite graph")
    }

    /// `K_{1,k}` with center 0.
    pub fn star(k: usize) -> Graph {
        Graph::complete_bipartite(1, k)
    }

    /// Wheel with rim `0..k` (a cycle) and hub `k`.
    pub fn wheel(k: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        edges.extend((0..k).map(|i| (i, k)));
        Graph::new(k + 1, edges).expect("valid wheel")
    }

    /// Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i+5`.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Graph::new(10, edges).expect("valid Petersen graph")
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + off, v + off)));
        Graph::new(self.n + other.n, edges).expect("valid union")
    }

    /// Join: disjoint union plus every edge between the two parts.
    pub fn join(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut edges: Vec<(usize, usize)> =
            self.edges().chain(other.edges().map(|(u, v)| (u + off, v + off))).collect();
        for u in 0..self.n {
            for v in 0..other.n {
                edges.push((u, v + off));
            }
        }
        Graph::new(self.n + other.n, edges).expect("valid join")
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.n, edges).expect("valid complement")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n)
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, vertices: I) -> VertexSet {
        VertexSet::from_vertices(self.n, vertices)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_complete_graph(&self) -> bool {
        self.m == self.n * self.n.saturating_sub(1) / 2
    }

    /// Row bitmasks, available when `n <= 64`.
    pub fn mask_rows(&self) -> Option<Vec<u64>> {
        (self.n <= 64).then(|| self.adj.iter().map(VertexSet::mask).collect())
    }

    /// `N_G(X)`: vertices outside `X` adjacent to some vertex of `X`.
    pub fn neighborhood_of_set(&self, x: &VertexSet) -> VertexSet {
        let mut r = VertexSet::new(self.n);
        for v in x.iter() {
            r.union_with(&self.adj[v]);
        }
        r.difference_with(x);
        r
    }

    /// Union of `N(v)` over `v` in `x`, without removing `x` itself.
    pub fn neighbor_union(&self, x: &VertexSet) -> VertexSet {
        let mut r = VertexSet::new(self.n);
        for v in x.iter() {
            r.union_with(&self.adj[v]);
        }
        r
    }

    /// Connected components of `G - removed`, ordered by smallest vertex.
    pub fn components(&self, removed: &VertexSet) -> Vec<VertexSet> {
        self.components_within(&removed.complement())
    }

    /// Connected components of `G[within]`, ordered by smallest vertex.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut left = within.clone();
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let comp = self.reach(start, &left);
            left.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    /// The vertices reachable from `start` inside `within` (which must contain `start`).
    pub fn reach(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(self.n, start);
        let mut frontier = comp.clone();
        loop {
            let mut next = self.neighbor_union(&frontier);
            next.intersect_with(within);
            next.difference_with(&comp);
            if next.is_empty() {
                return comp;
            }
            comp.union_with(&next);
            frontier = next;
        }
    }

    /// `w(G - removed)`.
    pub fn component_count(&self, removed: &VertexSet) -> usize {
        self.components(removed).len()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components(&self.empty_set()).len() == 1
    }

    /// True iff `removed` is a cutset: `G - removed` has at least two components.
    pub fn is_cutset(&self, removed: &VertexSet) -> bool {
        self.component_count(removed) >= 2
    }

    /// `G[X]` together with the map back to host vertices.
    pub fn induced(&self, x: &VertexSet) -> InducedSubgraph {
        let to_host = x.to_vec();
        let mut from_host = vec![usize::MAX; self.n];
        for (i, &v) in to_host.iter().enumerate() {
            from_host[v] = i;
        }
        let k = to_host.len();
        let mut adj = vec![VertexSet::new(k); k];
        for (i, &v) in to_host.iter().enumerate() {
            for w in self.adj[v].intersection(x).iter() {
                adj[i].insert(from_host[w]);
            }
        }
        let m = adj.iter().map(VertexSet::len).sum::<usize>() / 2;
        InducedSubgraph { graph: Graph { n: k, m, adj }, to_host, from_host }
    }

    /// True iff every pair in `x` is adjacent (vacuous for |x| <= 1).
    pub fn is_complete(&self, x: &VertexSet) -> bool {
        let size = x.len();
        x.iter().all(|v| self.adj[v].intersection_len(x) == size - 1)
    }

    /// True iff no two vertices in `x` are adjacent.
    pub fn is_independent(&self, x: &VertexSet) -> bool {
        x.iter().all(|v| self.adj[v].is_disjoint(x))
    }

    /// `E[X, Y]` for disjoint `X`, `Y`, as `(x, y)` pairs in lexicographic order.
    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet) -> Result<Vec<(usize, usize)>, GraphError> {
        if let Some(c) = x.intersection(y).first() {
            return Err(GraphError::NotDisjoint(c));
        }
        Ok(x.iter().flat_map(|u| self.adj[u].intersection(y).iter().map(move |v| (u, v)).collect::<Vec<_>>()).collect())
    }

    /// True iff `u` is adjacent to every vertex of `x` (`u ~ X`).
    pub fn dominates(&self, u: usize, x: &VertexSet) -> bool {
        let mut rest = x.clone();
        rest.remove(u);
        rest.is_subset(&self.adj[u])
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// An induced subgraph with its relabeling.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub to_host: Vec<usize>,
    from_host: Vec<usize>,
}

impl InducedSubgraph {
    pub fn from_host(&self, v: usize) -> Option<usize> {
        self.from_host.get(v).copied().filter(|&i| i != usize::MAX)
    }

    pub fn set_to_host(&self, s: &VertexSet, host_n: usize) -> VertexSet {
        VertexSet::from_vertices(host_n, s.iter().map(|i| self.to_host[i]))
    }

    pub fn set_from_host(&self, s: &VertexSet) -> VertexSet {
        VertexSet::from_vertices(self.graph.n(), s.iter().filter_map(|v| self.from_host(v)))
    }

    pub fn path_to_host(&self, verts: &[usize]) -> Vec<usize> {
        verts.iter().map(|&i| self.to_host[i]).collect()
    }
}

fn check_sequence(g: &Graph, verts: &[usize], closed: bool) -> Result<(), RouteError> {
    if verts.is_empty() {
        return Err(RouteError::Empty);
    }
    let mut seen = VertexSet::new(g.n());
    for &v in verts {
        if v >= g.n() {
            return Err(RouteError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if seen.contains(v) {
            return Err(RouteError::Repeated(v));
        }
        seen.insert(v);
    }
    for w in verts.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(RouteError::NotAdjacent(w[0], w[1]));
        }
    }
    if closed {
        let (a, b) = (verts[verts.len() - 1], verts[0]);
        if !g.has_edge(a, b) {
            return Err(RouteError::NotAdjacent(a, b));
        }
    }
    Ok(())
}

/// A path: an ordered sequence of distinct vertices, consecutive ones adjacent.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Path {
    verts: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, verts: Vec<usize>) -> Result<Path, RouteError> {
        check_sequence(g, &verts, false)?;
        Ok(Path { verts })
    }

    /// Wraps a sequence without checking it against a graph. `validate` can check it later.
    pub fn from_vertices_unchecked(verts: Vec<usize>) -> Path {
        Path { verts }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), RouteError> {
        check_sequence(g, &self.verts, false)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn first(&self) -> usize {
        self.verts[0]
    }

    pub fn last(&self) -> usize {
        self.verts[self.verts.len() - 1]
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.verts.clone();
        v.reverse();
        Path { verts: v }
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.verts.iter().copied())
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x == v)
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path{:?}", self.verts)
    }
}

/// A cycle: a cyclic sequence of at least three distinct vertices.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Cycle {
    verts: Vec<usize>,
}

impl Cycle {
    pub fn new(g: &Graph, verts: Vec<usize>) -> Result<Cycle, RouteError> {
        if verts.len() < 3 {
            return Err(RouteError::TooShort(verts.len()));
        }
        check_sequence(g, &verts, true)?;
        Ok(Cycle { verts })
    }

    pub fn from_vertices_unchecked(verts: Vec<usize>) -> Cycle {
        Cycle { verts }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), RouteError> {
        if self.verts.len() < 3 {
            return Err(RouteError::TooShort(self.verts.len()));
        }
        check_sequence(g, &self.verts, true)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.verts.iter().copied())
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x == v)
    }

    /// Successor `v+` along the stored direction.
    pub fn successor(&self, v: usize) -> Option<usize> {
        self.position(v).map(|i| self.verts[(i + 1) % self.verts.len()])
    }

    /// Predecessor `v-` along the stored direction.
    pub fn predecessor(&self, v: usize) -> Option<usize> {
        let k = self.verts.len();
        self.position(v).map(|i| self.verts[(i + k - 1) % k])
    }

    /// Rotation/reflection normal form: starts at the smallest vertex, second vertex the smaller
    /// of its two cycle neighbours.
    pub fn normalized(&self) -> Cycle {
        let k = self.verts.len();
        let (start, _) = self.verts.iter().enumerate().min_by_key(|&(_, &v)| v).expect("nonempty cycle");
        let fwd: Vec<usize> = (0..k).map(|i| self.verts[(start + i) % k]).collect();
        let bwd: Vec<usize> = (0..k).map(|i| self.verts[(start + k - i) % k]).collect();
        Cycle { verts: if fwd <= bwd { fwd } else { bwd } }
    }

    /// The cycle opened into a path starting at position `i`.
    pub fn path_from(&self, i: usize) -> Path {
        let k = self.verts.len();
        Path::from_vertices_unchecked((0..k).map(|j| self.verts[(i + j) % k]).collect())
    }
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle{:?}", self.verts)
    }
}
