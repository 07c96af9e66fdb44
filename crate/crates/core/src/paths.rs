//! Path covers of `(P3 ∪ 2P1)`-free graphs, constructive hamiltonian cycles under
//! `kappa >= alpha`, single-vertex cycle insertion, and replayable segment surgery.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cycle, Graph, Path, RouteError, VertexSet};
use crate::invariants::{connectivity, independence_number, toughness};
use crate::oracle::{self, OracleError};
use crate::patterns::{is_p3_kp1_free, PatternWitness};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("graph is not (P3 ∪ 2P1)-free: induced copy at {0:?}")]
    NotFree(PatternWitness),
    #[error("need at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("connectivity {kappa} is below independence number {alpha}")]
    ConnectivityBelowIndependence { kappa: usize, alpha: usize },
    #[error("vertices outside a longest path do not form a clique: {0:?}")]
    NonCliqueRemainder(VertexSet),
    #[error("vertex {0} already lies on the cycle")]
    VertexOnCycle(usize),
    #[error("d_C({x}) = {degree} does not exceed n/(t+1) - 1 = {threshold}")]
    DegreeTooLow { x: usize, degree: usize, threshold: Rational },
    #[error("graph is not hamiltonian")]
    NotHamiltonian,
    #[error("no insertion found for vertex {0}")]
    InsertionFailed(usize),
    #[error("old segment {0:?} is not a contiguous segment of the host")]
    NotASegment(Vec<usize>),
    #[error("segments have different endpoints: {old:?} vs {new:?}")]
    EndpointMismatch { old: (usize, usize), new: (usize, usize) },
    #[error("new segment reuses host vertex {0}")]
    InteriorCollision(usize),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Pairwise disjoint paths covering every vertex, with the cutset used to bound their number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCover {
    pub paths: Vec<Path>,
    /// A cutset `W` with `|paths| <= w(G - W) - |W|`, when the cover was built around one.
    pub witness: Option<VertexSet>,
}

impl PathCover {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// How a path cover was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoverRoute {
    /// The graph is complete.
    Complete,
    /// A longest path plus the clique left over.
    LongestPath,
    /// Complete components chained through the witness cutset.
    Chain,
    /// Components covered separately.
    PerComponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub cover: PathCover,
    pub tau: Rational,
    pub route: CoverRoute,
    /// `w(G - W) - |W|` for the witness, when there is one.
    pub bound: Option<usize>,
}

/// A small path cover of a `(P3 ∪ 2P1)`-free graph.
///
/// * `tau >= 1`: a longest path `P`; the remaining vertices must form a clique, so at most two
///   paths are needed. A non-clique remainder is reported as an error, not repaired.
/// * `0 < tau < 1`: built around a cutset `W` whose removal leaves complete components, which
///   are chained through the vertices of `W`; the result has at most `w(G - W) - |W|` paths.
/// * disconnected: each component separately, with the union of their cutsets as witness.
///
/// Uses exact toughness and longest-path search, so it is limited to `n <= 20`.
pub fn min_path_cover_p32p1free(g: &Graph) -> Result<CoverResult, PathError> {
    if let (false, Some(w)) = is_p3_kp1_free(g, 2) {
        return Err(PathError::NotFree(w));
    }
    if g.n() > oracle::DP_LIMIT {
        return Err(OracleError::TooLarge { n: g.n(), limit: oracle::DP_LIMIT }.into());
    }
    let tau = toughness(g).value;
    if g.n() == 0 {
        return Ok(CoverResult {
            cover: PathCover { paths: vec![], witness: None },
            tau,
            route: CoverRoute::Complete,
            bound: None,
        });
    }
    if !g.is_connected() {
        return cover_per_component(g, tau);
    }
    let (cover, route) = cover_connected(g)?;
    let bound = cover.witness.as_ref().map(|w| g.component_count(w) - w.len());
    Ok(CoverResult { cover, tau, route, bound })
}

fn cover_per_component(g: &Graph, tau: Rational) -> Result<CoverResult, PathError> {
    let mut paths = Vec::new();
    let mut witness = g.empty_set();
    for comp in g.components(&g.empty_set()) {
        let sub = g.induced(&comp);
        let (cover, _) = cover_connected(&sub.graph)?;
        for p in cover.paths {
            paths.push(Path::from_vertices_unchecked(sub.path_to_host(p.vertices())));
        }
        if let Some(w) = cover.witness {
            witness.union_with(&sub.set_to_host(&w, g.n()));
        }
    }
    let bound = g.component_count(&witness) - witness.len();
    Ok(CoverResult {
        cover: PathCover { paths, witness: Some(witness) },
        tau,
        route: CoverRoute::PerComponent,
        bound: Some(bound),
    })
}

/// Cover of a connected `(P3 ∪ 2P1)`-free graph.
fn cover_connected(g: &Graph) -> Result<(PathCover, CoverRoute), PathError> {
    if g.is_complete_graph() {
        let p = Path::from_vertices_unchecked((0..g.n()).collect());
        return Ok((PathCover { paths: vec![p], witness: None }, CoverRoute::Complete));
    }
    let cert = toughness(g);
    if cert.value >= Rational::ONE {
        return longest_path_cover(g).map(|c| (c, CoverRoute::LongestPath));
    }
    let s = cert.tough_set;
    let comps = g.components(&s);
    if let Some(d) = comps.iter().find(|c| !g.is_complete(c)) {
        // A noncomplete component forces exactly two components and |S| = 1.
        let d_graph = g.induced(d);
        let d_cert = toughness(&d_graph.graph);
        if d_cert.value >= Rational::ONE {
            if let Some(p) = path_through_single_cut(g, &s, &comps, d)? {
                return Ok((PathCover { paths: vec![p], witness: Some(s) }, CoverRoute::Chain));
            }
        } else {
            let t = d_graph.set_to_host(&d_cert.tough_set, g.n());
            let rest = d.difference(&t);
            let s1 = g.set_of(s.iter().filter(|&x| g.neighbors(x).intersects(&rest)));
            let t1 = s1.union(&t);
            let cover = chain_cover(g, &t1);
            return Ok((cover, CoverRoute::Chain));
        }
    }
    Ok((chain_cover(g, &s), CoverRoute::Chain))
}

fn longest_path_cover(g: &Graph) -> Result<PathCover, PathError> {
    let p = oracle::longest_path_oracle(g)?;
    let rest = g.vertices().difference(&p.vertex_set(g.n()));
    if rest.is_empty() {
        return Ok(PathCover { paths: vec![p], witness: None });
    }
    if !g.is_complete(&rest) {
        return Err(PathError::NonCliqueRemainder(rest));
    }
    let q = Path::from_vertices_unchecked(rest.to_vec());
    Ok(PathCover { paths: vec![p, q], witness: None })
}

/// One spanning path for `G - {s}` = (complete component) ∪ (hamiltonian component `d`),
/// threaded through the single cut vertex.
fn path_through_single_cut(
    g: &Graph,
    s: &VertexSet,
    comps: &[VertexSet],
    d: &VertexSet,
) -> Result<Option<Path>, PathError> {
    let x = s.first().expect("nonempty cut");
    let Some(other) = comps.iter().find(|c| *c != d) else {
        return Ok(None);
    };
    let sub = g.induced(d);
    let Some(cyc) = oracle::hamiltonian_cycle_oracle(&sub.graph)?.into_witness() else {
        // A single vertex or an edge has no cycle but is its own path.
        if d.len() <= 2 {
            let dv = d.to_vec();
            let start = dv.iter().position(|&v| g.has_edge(x, v));
            return Ok(start
                .map(|i| {
                    let mut seq = path_ending_at(g, other, x);
                    seq.push(x);
                    seq.push(dv[i]);
                    seq.extend(dv.iter().copied().filter(|&v| v != dv[i]));
                    Path::from_vertices_unchecked(seq)
                })
                .filter(|p| p.validate(g).is_ok()));
        }
        return Ok(None);
    };
    let host_cycle: Vec<usize> = sub.path_to_host(cyc.vertices());
    let Some(i) = host_cycle.iter().position(|&v| g.has_edge(x, v)) else {
        return Ok(None);
    };
    let mut seq = path_ending_at(g, other, x);
    seq.push(x);
    let k = host_cycle.len();
    seq.extend((0..k).map(|j| host_cycle[(i + j) % k]));
    let p = Path::from_vertices_unchecked(seq);
    Ok(p.validate(g).is_ok().then_some(p))
}

/// The vertices of the clique `c` ordered so the last one is adjacent to `x`.
fn path_ending_at(g: &Graph, c: &VertexSet, x: usize) -> Vec<usize> {
    let mut v = c.to_vec();
    if let Some(i) = v.iter().position(|&u| g.has_edge(u, x)) {
        let last = v.remove(i);
        v.push(last);
    }
    v
}

/// Chains the (complete) components of `G - W` through the vertices of `W`: each vertex of
/// `W` links two components, the links forming a linear forest; unused vertices of `W` are
/// inserted wherever they fit.
fn chain_cover(g: &Graph, w: &VertexSet) -> PathCover {
    let comps = g.components(w);
    let links = assign_links(g, w, &comps);
    let mut paths = build_chains(g, &comps, &links);
    let used: VertexSet = g.set_of(links.iter().map(|l| l.via));
    for x in w.difference(&used).iter() {
        place_vertex(g, &mut paths, x);
    }
    PathCover { paths, witness: Some(w.clone()) }
}

#[derive(Debug, Clone, Copy)]
struct Link {
    via: usize,
    a: usize,
    b: usize,
}

/// Chooses, for as many vertices of `W` as possible, a pair of components to link.
fn assign_links(g: &Graph, w: &VertexSet, comps: &[VertexSet]) -> Vec<Link> {
    let wv = w.to_vec();
    let seen: Vec<Vec<usize>> =
        wv.iter().map(|&x| (0..comps.len()).filter(|&i| g.neighbors(x).intersects(&comps[i])).collect()).collect();
    let mut search =
        LinkSearch { g, comps, wv: &wv, seen: &seen, current: Vec::new(), best: Vec::new(), budget: 200_000 };
    search.go(0);
    search.best
}

struct LinkSearch<'a> {
    g: &'a Graph,
    comps: &'a [VertexSet],
    wv: &'a [usize],
    seen: &'a [Vec<usize>],
    current: Vec<Link>,
    best: Vec<Link>,
    budget: u64,
}

impl LinkSearch<'_> {
    fn go(&mut self, i: usize) -> bool {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if i == self.wv.len() {
            return self.best.len() == self.wv.len();
        }
        if self.budget == 0 || self.current.len() + (self.wv.len() - i) <= self.best.len() {
            return false;
        }
        self.budget -= 1;
        let x = self.wv[i];
        let opts = &self.seen[i];
        for (p, &a) in opts.iter().enumerate() {
            for &b in &opts[p + 1..] {
                let link = Link { via: x, a, b };
                if self.fits(link) {
                    self.current.push(link);
                    if self.go(i + 1) {
                        return true;
                    }
                    self.current.pop();
                }
            }
        }
        // Leave x unused.
        self.go(i + 1)
    }

    /// Degree at most two per component, no cycles, and distinct attachment vertices.
    fn fits(&self, link: Link) -> bool {
        for c in [link.a, link.b] {
            let incident: Vec<usize> = self.current.iter().filter(|l| l.a == c || l.b == c).map(|l| l.via).collect();
            if incident.len() >= 2 {
                return false;
            }
            if let Some(&y) = incident.first() {
                if !distinct_ends(self.g, &self.comps[c], link.via, y) {
                    return false;
                }
            }
        }
        // Cycle check: is b already reachable from a through current links?
        let mut reach = vec![link.a];
        let mut seen = vec![false; self.comps.len()];
        seen[link.a] = true;
        while let Some(c) = reach.pop() {
            for l in &self.current {
                let other = if l.a == c {
                    l.b
                } else if l.b == c {
                    l.a
                } else {
                    continue;
                };
                if other == link.b {
                    return false;
                }
                if !seen[other] {
                    seen[other] = true;
                    reach.push(other);
                }
            }
        }
        true
    }
}

/// Whether a complete component can be entered next to `x` and left next to `y`.
pub(crate) fn distinct_ends(g: &Graph, d: &VertexSet, x: usize, y: usize) -> bool {
    let nx = g.neighbors(x).intersection(d);
    let ny = g.neighbors(y).intersection(d);
    if d.len() == 1 {
        return !nx.is_empty() && !ny.is_empty();
    }
    !nx.is_empty() && !ny.is_empty() && !(nx.len() == 1 && nx == ny)
}

/// Walks the linear forest of links and writes out one path per chain.
fn build_chains(g: &Graph, comps: &[VertexSet], links: &[Link]) -> Vec<Path> {
    let m = comps.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, l) in links.iter().enumerate() {
        incident[l.a].push(i);
        incident[l.b].push(i);
    }
    let mut visited = vec![false; m];
    let mut paths = Vec::new();
    for start in 0..m {
        if visited[start] || incident[start].len() > 1 {
            continue;
        }
        let mut seq = Vec::new();
        let mut comp = start;
        let mut came_via: Option<usize> = None;
        loop {
            visited[comp] = true;
            let out = incident[comp].iter().copied().find(|&li| Some(li) != came_via);
            let enter = came_via.map(|li| links[li].via);
            let leave = out.map(|li| links[li].via);
            seq.extend(order_component(g, &comps[comp], enter, leave));
            match out {
                Some(li) => {
                    seq.push(links[li].via);
                    let l = links[li];
                    comp = if l.a == comp { l.b } else { l.a };
                    came_via = Some(li);
                }
                None => break,
            }
        }
        paths.push(Path::from_vertices_unchecked(seq));
    }
    paths
}

/// A hamiltonian path of a complete component starting next to `enter` and ending next to
/// `leave`.
pub(crate) fn order_component(g: &Graph, d: &VertexSet, enter: Option<usize>, leave: Option<usize>) -> Vec<usize> {
    let verts = d.to_vec();
    if verts.len() == 1 {
        return verts;
    }
    let pick = |x: Option<usize>, avoid: Option<usize>| {
        x.and_then(|x| verts.iter().copied().find(|&v| g.has_edge(x, v) && Some(v) != avoid))
    };
    let tight_leave = leave.is_some_and(|y| g.neighbors(y).intersection_len(d) == 1);
    let (first, last) = if tight_leave {
        let last = pick(leave, None);
        (pick(enter, last), last)
    } else {
        let first = pick(enter, None);
        (first, pick(leave, first))
    };
    let mut out = Vec::with_capacity(verts.len());
    out.extend(first);
    out.extend(verts.iter().copied().filter(|&v| Some(v) != first && Some(v) != last));
    out.extend(last);
    out
}

/// Inserts `x` between two consecutive neighbours on some path, or at an end it is adjacent
/// to, or as a path of its own.
fn place_vertex(g: &Graph, paths: &mut Vec<Path>, x: usize) {
    for p in paths.iter_mut() {
        let v = p.vertices();
        if let Some(i) = v.windows(2).position(|w| g.has_edge(w[0], x) && g.has_edge(w[1], x)) {
            let mut seq = v.to_vec();
            seq.insert(i + 1, x);
            *p = Path::from_vertices_unchecked(seq);
            return;
        }
    }
    for p in paths.iter_mut() {
        if g.has_edge(p.last(), x) {
            let mut seq = p.vertices().to_vec();
            seq.push(x);
            *p = Path::from_vertices_unchecked(seq);
            return;
        }
        if g.has_edge(p.first(), x) {
            let mut seq = vec![x];
            seq.extend_from_slice(p.vertices());
            *p = Path::from_vertices_unchecked(seq);
            return;
        }
    }
    paths.push(Path::from_vertices_unchecked(vec![x]));
}

/// One surgery step: `old` (a contiguous stretch of the host) replaced by `new`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpliceStep {
    pub old: Vec<usize>,
    pub new: Vec<usize>,
    pub tag: SpliceTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpliceTag {
    /// An outside path inserted between two consecutive cycle vertices.
    ConsecutiveNeighbors,
    /// Exchange through an outside path using an edge between successors.
    CrossingSuccessors,
    /// A component routed around a missing adjacency.
    Reroute,
    /// Any other replacement with matching endpoints.
    Replace,
}

/// An initial route plus the splices applied to it, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpliceLog {
    pub initial: Vec<usize>,
    pub closed: bool,
    pub steps: Vec<SpliceStep>,
}

impl SpliceLog {
    pub fn new(initial: Vec<usize>, closed: bool) -> SpliceLog {
        SpliceLog { initial, closed, steps: Vec::new() }
    }

    /// Re-applies every step to the initial route.
    pub fn replay(&self, g: &Graph) -> Result<Vec<usize>, PathError> {
        let mut cur = self.initial.clone();
        for st in &self.steps {
            cur = splice_sequence(g, &cur, self.closed, &st.old, &st.new)?;
        }
        Ok(cur)
    }
}

/// Replaces the cycle segment `old` by `new`. Both must share endpoints, `old` must run along
/// the cycle in its stored direction, and interior vertices of `new` may only be vertices of
/// `old`'s interior or vertices not on the cycle at all.
pub fn splice_cycle(
    g: &Graph,
    c: &Cycle,
    old: &Path,
    new: &Path,
    tag: SpliceTag,
    log: Option<&mut SpliceLog>,
) -> Result<Cycle, PathError> {
    let seq = splice_sequence(g, c.vertices(), true, old.vertices(), new.vertices())?;
    if let Some(log) = log {
        log.steps.push(SpliceStep { old: old.vertices().to_vec(), new: new.vertices().to_vec(), tag });
    }
    Ok(Cycle::new(g, seq)?)
}

/// Path counterpart of [`splice_cycle`].
pub fn splice_path(
    g: &Graph,
    p: &Path,
    old: &Path,
    new: &Path,
    tag: SpliceTag,
    log: Option<&mut SpliceLog>,
) -> Result<Path, PathError> {
    let seq = splice_sequence(g, p.vertices(), false, old.vertices(), new.vertices())?;
    if let Some(log) = log {
        log.steps.push(SpliceStep { old: old.vertices().to_vec(), new: new.vertices().to_vec(), tag });
    }
    Ok(Path::new(g, seq)?)
}

fn splice_sequence(
    g: &Graph,
    host: &[usize],
    closed: bool,
    old: &[usize],
    new: &[usize],
) -> Result<Vec<usize>, PathError> {
    if old.is_empty() || new.is_empty() {
        return Err(PathError::NotASegment(old.to_vec()));
    }
    let ends = |s: &[usize]| (s[0], s[s.len() - 1]);
    if ends(old) != ends(new) {
        return Err(PathError::EndpointMismatch { old: ends(old), new: ends(new) });
    }
    let k = host.len();
    let start = host.iter().position(|&v| v == old[0]).ok_or_else(|| PathError::NotASegment(old.to_vec()))?;
    let contiguous = old.len() <= k
        && (0..old.len()).all(|j| {
            let idx = start + j;
            if closed {
                host[idx % k] == old[j]
            } else {
                idx < k && host[idx] == old[j]
            }
        });
    if !contiguous {
        return Err(PathError::NotASegment(old.to_vec()));
    }
    let old_interior: VertexSet = VertexSet::from_vertices(g.n(), old[1..old.len() - 1].iter().copied());
    let host_set = VertexSet::from_vertices(g.n(), host.iter().copied());
    let mut seen = VertexSet::new(g.n());
    for &v in &new[1..new.len().saturating_sub(1)] {
        if (host_set.contains(v) && !old_interior.contains(v)) || seen.contains(v) {
            return Err(PathError::InteriorCollision(v));
        }
        seen.insert(v);
    }
    Path::new(g, new.to_vec())?;
    let mut out = Vec::with_capacity(k - old.len() + new.len());
    if closed {
        out.extend_from_slice(new);
        // The rest of the cycle after old's last vertex, back to (excluding) old's first.
        let after = (start + old.len()) % k;
        let remaining = k - old.len();
        out.extend((0..remaining).map(|j| host[(after + j) % k]));
        // `old` spanning the whole cycle with equal ends leaves the start vertex duplicated.
        if old.len() == k + 1 {
            out.pop();
        }
    } else {
        out.extend_from_slice(&host[..start]);
        out.extend_from_slice(new);
        out.extend_from_slice(&host[start + old.len()..]);
    }
    Ok(out)
}

/// The outcome of the constructive `kappa >= alpha` cycle search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CeOutcome {
    pub cycle: Cycle,
    pub log: SpliceLog,
    /// Extension rounds performed.
    pub rounds: usize,
    /// True iff the extension stalled and the exact oracle supplied the cycle.
    pub fallback: bool,
}

/// A hamiltonian cycle of a graph with `kappa(G) >= alpha(G)`, built by repeatedly absorbing
/// an outside component `H`: either an `H`-path between two consecutive neighbours of `H` on the
/// cycle, or a crossing exchange through an `H`-path using an edge between their successors.
/// When neither applies, `{h} ∪ N_C(H)+` would be an independent set larger
/// than `kappa`, so a stall means the hypothesis failed; the oracle is then consulted and the
/// event recorded. Rounds are capped at `n^2`.
pub fn chvatal_erdos_cycle(g: &Graph) -> Result<CeOutcome, PathError> {
    let n = g.n();
    if n < 3 {
        return Err(PathError::TooSmall(n));
    }
    let (kappa, _) = connectivity(g);
    let (alpha, _) = independence_number(g);
    if kappa < alpha {
        return Err(PathError::ConnectivityBelowIndependence { kappa, alpha });
    }
    extend_to_hamiltonian(g, initial_cycle(g).expect("2-connected graphs have cycles"))
}

/// Result of running the extension loop without any fallback.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub cycle: Cycle,
    pub log: SpliceLog,
    pub rounds: usize,
    /// True iff the cycle spans the graph.
    pub complete: bool,
}

/// Repeatedly absorbs outside components into `start` until the cycle spans `g`, no
/// extension applies, or `n^2` rounds have run. No hypothesis is checked.
pub fn extend_cycle(g: &Graph, start: Cycle) -> Result<Extension, PathError> {
    let n = g.n();
    let mut log = SpliceLog::new(start.vertices().to_vec(), true);
    let mut c = start;
    let mut rounds = 0;
    while c.len() < n && rounds < n * n {
        let Some((old, new, tag)) = extension_step(g, &c) else {
            break;
        };
        rounds += 1;
        c = splice_cycle(g, &c, &old, &new, tag, Some(&mut log))?;
    }
    Ok(Extension { complete: c.len() == n, cycle: c, log, rounds })
}

/// The extension loop followed, if it stalls, by the exact oracle.
pub fn extend_to_hamiltonian(g: &Graph, start: Cycle) -> Result<CeOutcome, PathError> {
    let ext = extend_cycle(g, start)?;
    if ext.complete {
        return Ok(CeOutcome { cycle: ext.cycle, log: ext.log, rounds: ext.rounds, fallback: false });
    }
    match oracle::hamiltonian_cycle_oracle(g)?.into_witness() {
        Some(c) => Ok(CeOutcome {
            log: SpliceLog::new(c.vertices().to_vec(), true),
            cycle: c,
            rounds: ext.rounds,
            fallback: true,
        }),
        None => Err(PathError::NotHamiltonian),
    }
}

/// A cycle through vertex 0's DFS tree: the first back edge closes it.
pub fn initial_cycle(g: &Graph) -> Option<Cycle> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![(root, g.neighbors(root).to_vec(), 0usize)];
        while let Some((v, nbrs, idx)) = stack.last_mut() {
            let v = *v;
            if *idx >= nbrs.len() {
                stack.pop();
                continue;
            }
            let u = nbrs[*idx];
            *idx += 1;
            if depth[u] == usize::MAX {
                depth[u] = depth[v] + 1;
                parent[u] = v;
                stack.push((u, g.neighbors(u).to_vec(), 0));
            } else if u != parent[v] && depth[u] < depth[v] {
                let mut seq = vec![v];
                let mut w = v;
                while w != u {
                    w = parent[w];
                    seq.push(w);
                }
                seq.reverse();
                return Cycle::new(g, seq).ok();
            }
        }
    }
    None
}

/// A shortest path inside `within` from some vertex of `from` to some vertex of `to`.
fn path_inside(g: &Graph, within: &VertexSet, from: &VertexSet, to: &VertexSet) -> Option<Vec<usize>> {
    let n = g.n();
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in from.intersection(within).iter() {
        prev[s] = s;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        if to.contains(v) {
            let mut seq = vec![v];
            let mut w = v;
            while prev[w] != w {
                w = prev[w];
                seq.push(w);
            }
            seq.reverse();
            return Some(seq);
        }
        for u in g.neighbors(v).intersection(within).iter() {
            if prev[u] == usize::MAX {
                prev[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

/// `(old, new, tag)` for one extension of `c` by an outside component, if one is available.
fn extension_step(g: &Graph, c: &Cycle) -> Option<(Path, Path, SpliceTag)> {
    let on_cycle = c.vertex_set(g.n());
    let outside = on_cycle.complement();
    let h = g.components_within(&outside).into_iter().next()?;
    let v = c.vertices();
    let k = v.len();
    let attach: Vec<bool> = v.iter().map(|&x| g.neighbors(x).intersects(&h)).collect();
    let h_path = |a: usize, b: usize| -> Option<Vec<usize>> {
        let p = path_inside(g, &h, g.neighbors(a), g.neighbors(b))?;
        if a == b {
            return None;
        }
        Some(p)
    };

    // Consecutive neighbours of H.
    for i in 0..k {
        let j = (i + 1) % k;
        if attach[i] && attach[j] {
            let mid = h_path(v[i], v[j])?;
            let mut new = vec![v[i]];
            new.extend(mid);
            new.push(v[j]);
            return Some((
                Path::from_vertices_unchecked(vec![v[i], v[j]]),
                Path::from_vertices_unchecked(new),
                SpliceTag::ConsecutiveNeighbors,
            ));
        }
    }
    // Crossing exchange on successors: old = c1 c1+ .. c2 c2+, new = c1 Q c2 c2- .. c1+ c2+.
    let idx: Vec<usize> = (0..k).filter(|&i| attach[i]).collect();
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            let (i1, j1) = ((i + 1) % k, (j + 1) % k);
            if !g.has_edge(v[i1], v[j1]) {
                continue;
            }
            let q = h_path(v[i], v[j])?;
            let span = (j + k - i) % k; // steps from c1 to c2 along the cycle
            let old: Vec<usize> = (0..=span + 1).map(|s| v[(i + s) % k]).collect();
            let mut new = vec![v[i]];
            new.extend(q);
            // c2, c2-, ..., c1+
            new.extend((0..span).map(|s| v[(j + k - s) % k]));
            new.push(v[j1]);
            return Some((
                Path::from_vertices_unchecked(old),
                Path::from_vertices_unchecked(new),
                SpliceTag::CrossingSuccessors,
            ));
        }
    }
    None
}

/// Which rung of the insertion ladder placed the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InsertRung {
    Consecutive,
    Crossing,
    Exhaustive,
}

/// A cycle on `V(C) ∪ {x}`.
///
/// Requires `x` off the cycle and `d_C(x) > n/(t+1) - 1`; `t`-toughness is taken on trust.
/// Tries an insertion between consecutive neighbours, then a crossing exchange
/// `x u (backwards to v+) u+ (forwards to v) x` for neighbours `u, v` with `u+ v+` an edge
/// (or the mirror image on predecessors), and finally an exhaustive search on `V(C) ∪ {x}` if
/// that has at most 20 vertices.
pub fn insert_vertex(g: &Graph, c: &Cycle, x: usize, t: Rational) -> Result<(Cycle, InsertRung), PathError> {
    if c.position(x).is_some() {
        return Err(PathError::VertexOnCycle(x));
    }
    let v = c.vertices();
    let k = v.len();
    let nbr: Vec<bool> = v.iter().map(|&u| g.has_edge(u, x)).collect();
    let degree = nbr.iter().filter(|&&b| b).count();
    let threshold = Rational::degree_threshold(g.n(), t);
    if num_rational::Ratio::from_integer(degree as i64) <= threshold {
        return Err(PathError::DegreeTooLow { x, degree, threshold: threshold.into() });
    }
    for i in 0..k {
        if nbr[i] && nbr[(i + 1) % k] {
            let mut seq = v.to_vec();
            seq.insert(i + 1, x);
            return Ok((Cycle::new(g, seq)?, InsertRung::Consecutive));
        }
    }
    let idx: Vec<usize> = (0..k).filter(|&i| nbr[i]).collect();
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            if g.has_edge(v[(i + 1) % k], v[(j + 1) % k]) {
                // x u u- ... v+ u+ ... v
                let mut seq = vec![x];
                let back = (i + k - j) % k; // steps from u backwards to v+
                seq.extend((0..back).map(|s| v[(i + k - s) % k]));
                let fwd = (j + k - i) % k; // steps from u+ forwards to v
                seq.extend((1..=fwd).map(|s| v[(i + s) % k]));
                return Ok((Cycle::new(g, seq)?, InsertRung::Crossing));
            }
            if g.has_edge(v[(i + k - 1) % k], v[(j + k - 1) % k]) {
                // x u u+ ... v- u- ... v (mirror image)
                let mut seq = vec![x];
                let fwd = (j + k - i) % k;
                seq.extend((0..fwd).map(|s| v[(i + s) % k]));
                let back = (i + k - j) % k;
                seq.extend((1..=back).map(|s| v[(i + k - s) % k]));
                return Ok((Cycle::new(g, seq)?, InsertRung::Crossing));
            }
        }
    }
    if k < oracle::DP_LIMIT {
        let mut span = c.vertex_set(g.n());
        span.insert(x);
        let sub = g.induced(&span);
        if let Some(cyc) = oracle::hamiltonian_cycle_oracle(&sub.graph)?.into_witness() {
            return Ok((Cycle::new(g, sub.path_to_host(cyc.vertices()))?, InsertRung::Exhaustive));
        }
    }
    Err(PathError::InsertionFailed(x))
}

/// A hamiltonian path of `g`, by exact search.
pub fn hamiltonian_path_check(g: &Graph) -> Result<Option<Path>, PathError> {
    Ok(oracle::hamiltonian_path_oracle(g, None, None)?.into_witness())
}

/// A hamiltonian `u`-`v` path of `g`, by exact search.
pub fn hamiltonian_connected_check(g: &Graph, u: usize, v: usize) -> Result<Option<Path>, PathError> {
    Ok(oracle::hamiltonian_path_oracle(g, Some(u), Some(v))?.into_witness())
}

/// Whether every pair of distinct vertices is joined by a hamiltonian path.
pub fn is_hamiltonian_connected(g: &Graph) -> Result<bool, PathError> {
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if hamiltonian_connected_check(g, u, v)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{min_path_cover_oracle, validate_cycle, validate_path_cover};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cover_examples() {
        let k5 = Graph::complete(5);
        let r = min_path_cover_p32p1free(&k5).unwrap();
        assert_eq!(r.cover.len(), 1);
        let two = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let r = min_path_cover_p32p1free(&two).unwrap();
        assert_eq!(r.cover.len(), 2);
        assert!(r.cover.witness.as_ref().unwrap().is_empty());
        assert_eq!(r.bound, Some(2));
        assert!(matches!(min_path_cover_p32p1free(&Graph::cycle(8)), Err(PathError::NotFree(_))));
    }

    #[test]
    fn cover_of_a_star_uses_the_centre() {
        // K_{1,4}: tau = 1/4, W = {centre}, bound 4 - 1 = 3.
        let g = Graph::star(4);
        let r = min_path_cover_p32p1free(&g).unwrap();
        assert!(validate_path_cover(&g, &r.cover));
        assert_eq!(r.bound, Some(3));
        assert_eq!(r.cover.len(), 3);
        assert_eq!(min_path_cover_oracle(&g).unwrap().0, 3);
    }

    #[test]
    fn ce_examples() {
        let c4 = Graph::cycle(4);
        let out = chvatal_erdos_cycle(&c4).unwrap();
        assert!(validate_cycle(&c4, &out.cycle));
        let k33 = Graph::complete_bipartite(3, 3);
        let out = chvatal_erdos_cycle(&k33).unwrap();
        assert!(validate_cycle(&k33, &out.cycle));
        assert!(!out.fallback);
        assert_eq!(out.log.replay(&k33).unwrap(), out.cycle.vertices());
        assert_eq!(
            chvatal_erdos_cycle(&Graph::petersen()),
            Err(PathError::ConnectivityBelowIndependence { kappa: 3, alpha: 4 })
        );
    }

    #[test]
    fn ce_on_random_dense_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut tested = 0;
        for _ in 0..400 {
            let n = rng.gen_range(3..=11);
            let p = rng.gen_range(0.5..0.95);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            match chvatal_erdos_cycle(&g) {
                Ok(out) => {
                    tested += 1;
                    assert!(validate_cycle(&g, &out.cycle));
                    assert!(!out.fallback, "extension stalled on {g:?}");
                    assert_eq!(out.log.replay(&g).unwrap(), out.cycle.vertices());
                }
                Err(PathError::ConnectivityBelowIndependence { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(tested > 50);
    }

    #[test]
    fn insertion_examples() {
        let k5 = Graph::complete(5);
        let c = Cycle::new(&k5, vec![0, 1, 2, 3]).unwrap();
        let (c2, rung) = insert_vertex(&k5, &c, 4, Rational::ONE).unwrap();
        assert_eq!(rung, InsertRung::Consecutive);
        assert!(validate_cycle(&k5, &c2));

        let w6 = Graph::wheel(6);
        let rim = Cycle::new(&w6, (0..6).collect()).unwrap();
        let (c2, rung) = insert_vertex(&w6, &rim, 6, Rational::ONE).unwrap();
        assert_eq!(rung, InsertRung::Consecutive);
        assert!(validate_cycle(&w6, &c2));
    }

    #[test]
    fn crossing_insertion_fires() {
        // C = 0..6; x = 6 sees 0 and 2 only; chord 1-3 joins their successors.
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.extend([(6, 0), (6, 2), (1, 3)]);
        let g = Graph::new(7, edges).unwrap();
        let c = Cycle::new(&g, (0..6).collect()).unwrap();
        let (c2, rung) = insert_vertex(&g, &c, 6, Rational::int(3)).unwrap();
        assert_eq!(rung, InsertRung::Crossing);
        assert!(validate_cycle(&g, &c2));
        assert!(oracle::hamiltonian_cycle_oracle(&g).unwrap().is_yes());
    }

    #[test]
    fn insertion_rejects_low_degree() {
        let c6 = Graph::cycle(6).disjoint_union(&Graph::empty(1));
        let c = Cycle::new(&c6, (0..6).collect()).unwrap();
        assert!(matches!(insert_vertex(&c6, &c, 6, Rational::ONE), Err(PathError::DegreeTooLow { .. })));
        assert!(matches!(insert_vertex(&c6, &c, 0, Rational::ONE), Err(PathError::VertexOnCycle(0))));
    }

    #[test]
    fn splice_examples() {
        let k5 = Graph::complete(5);
        let c4 = Cycle::new(&k5, vec![0, 1, 2, 3]).unwrap();
        let mut log = SpliceLog::new(c4.vertices().to_vec(), true);
        let old = Path::from_vertices_unchecked(vec![0, 1]);
        let new = Path::from_vertices_unchecked(vec![0, 4, 1]);
        let c5 = splice_cycle(&k5, &c4, &old, &new, SpliceTag::Replace, Some(&mut log)).unwrap();
        assert!(validate_cycle(&k5, &c5));
        let bad = Path::from_vertices_unchecked(vec![0, 4, 2]);
        assert!(matches!(
            splice_cycle(&k5, &c4, &old, &bad, SpliceTag::Replace, None),
            Err(PathError::EndpointMismatch { .. })
        ));
        let collide = Path::from_vertices_unchecked(vec![0, 2, 1]);
        assert_eq!(
            splice_cycle(&k5, &c4, &old, &collide, SpliceTag::Replace, None),
            Err(PathError::InteriorCollision(2))
        );
        // A second splice, wrapping around the end of the stored sequence.
        let old2 = Path::from_vertices_unchecked(vec![3, 0, 4]);
        let new2 = Path::from_vertices_unchecked(vec![3, 4]);
        let c4b = splice_cycle(&k5, &c5, &old2, &new2, SpliceTag::Replace, Some(&mut log)).unwrap();
        assert_eq!(log.replay(&k5).unwrap(), c4b.vertices());
    }

    #[test]
    fn hamiltonian_connectivity_examples() {
        let p5 = Graph::path(5);
        assert_eq!(hamiltonian_connected_check(&p5, 0, 4).unwrap().unwrap().vertices(), &[0, 1, 2, 3, 4]);
        assert!(is_hamiltonian_connected(&Graph::complete(4)).unwrap());
        assert!(hamiltonian_connected_check(&Graph::cycle(6), 0, 2).unwrap().is_none());
        assert!(hamiltonian_path_check(&Graph::cycle(6)).unwrap().is_some());
    }
}
