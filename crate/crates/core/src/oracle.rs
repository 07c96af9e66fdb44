//! Exact brute-force ground truth: hamiltonian cycles and paths, minimum path covers
//! and longest paths, plus independent validators for anything claimed hamiltonian.
//!
//! Subset dynamic programming handles `n <= 20`; a pruned backtracking search takes over up to
//! `n <= 24`; anything larger is refused rather than attempted.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cycle, Graph, Path, VertexSet};
use crate::invariants::mask_component_count;
use crate::paths::PathCover;

pub const DP_LIMIT: usize = 20;
pub const BACKTRACK_LIMIT: usize = 24;
pub const PATH_COVER_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices; this oracle is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Dp,
    Backtrack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict<T> {
    Yes(T),
    No,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleAnswer<T> {
    #[serde(flatten)]
    pub verdict: Verdict<T>,
    pub nodes_explored: u64,
    pub method: Method,
}

impl<T> OracleAnswer<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self.verdict, Verdict::Yes(_))
    }

    pub fn witness(&self) -> Option<&T> {
        match &self.verdict {
            Verdict::Yes(w) => Some(w),
            Verdict::No => None,
        }
    }

    pub fn into_witness(self) -> Option<T> {
        match self.verdict {
            Verdict::Yes(w) => Some(w),
            Verdict::No => None,
        }
    }
}

/// Which algorithm to run; `Auto` picks DP up to its limit and backtracking above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Dp,
    Backtrack,
}

fn resolve(n: usize, strategy: Strategy) -> Result<Method, OracleError> {
    let method = match strategy {
        Strategy::Auto if n <= DP_LIMIT => Method::Dp,
        Strategy::Auto => Method::Backtrack,
        Strategy::Dp => Method::Dp,
        Strategy::Backtrack => Method::Backtrack,
    };
    let limit = match method {
        Method::Dp => DP_LIMIT,
        Method::Backtrack => BACKTRACK_LIMIT,
    };
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    Ok(method)
}

/// `T[mask]` = end vertices `x` of hamiltonian paths of `G[mask]` (starting at `start` if given).
struct PathTable {
    ends: Vec<u32>,
    work: u64,
}

impl PathTable {
    fn build(rows: &[u64], start: Option<usize>) -> PathTable {
        let n = rows.len();
        let mut ends = vec![0u32; 1 << n];
        let mut work = 0u64;
        for mask in 1usize..(1 << n) {
            if let Some(s) = start {
                if mask >> s & 1 == 0 {
                    continue;
                }
                if mask == 1 << s {
                    ends[mask] = 1 << s;
                    continue;
                }
            } else if mask & (mask - 1) == 0 {
                ends[mask] = mask as u32;
                continue;
            }
            let mut acc = 0u32;
            let mut m = mask;
            while m != 0 {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                if Some(x) == start {
                    continue;
                }
                work += 1;
                if u64::from(ends[mask ^ (1 << x)]) & rows[x] != 0 {
                    acc |= 1 << x;
                }
            }
            ends[mask] = acc;
        }
        PathTable { ends, work }
    }

    fn has_end(&self, mask: usize, x: usize) -> bool {
        self.ends[mask] >> x & 1 == 1
    }
}

fn rows32(g: &Graph) -> Vec<u64> {
    g.mask_rows().expect("oracle inputs fit in a mask")
}

/// Exact hamiltonian-cycle decision with the lexicographically least normalized witness.
pub fn hamiltonian_cycle_oracle(g: &Graph) -> Result<OracleAnswer<Cycle>, OracleError> {
    hamiltonian_cycle_with(g, Strategy::Auto)
}

pub fn hamiltonian_cycle_with(g: &Graph, strategy: Strategy) -> Result<OracleAnswer<Cycle>, OracleError> {
    let n = g.n();
    let method = resolve(n, strategy)?;
    if n < 3 {
        return Ok(OracleAnswer { verdict: Verdict::No, nodes_explored: 0, method });
    }
    match method {
        Method::Dp => Ok(cycle_dp(g)),
        Method::Backtrack => Ok(cycle_backtrack(g)),
    }
}

fn cycle_dp(g: &Graph) -> OracleAnswer<Cycle> {
    let n = g.n();
    let rows = rows32(g);
    let full = (1usize << n) - 1;
    let t = PathTable::build(&rows, Some(0));
    let mut answer = OracleAnswer { verdict: Verdict::No, nodes_explored: t.work, method: Method::Dp };
    if u64::from(t.ends[full]) & rows[0] == 0 {
        return answer;
    }
    // Greedy smallest continuation; a completion from `v` through the rest back to 0 exists iff
    // some path from 0 through {0} ∪ rest ends next to `v`.
    let mut seq = vec![0usize];
    let mut used = 1usize;
    while seq.len() < n {
        let last = *seq.last().unwrap();
        let next = (0..n)
            .find(|&v| {
                if used >> v & 1 == 1 || rows[last] >> v & 1 == 0 {
                    return false;
                }
                let rest = full & !used & !(1 << v);
                if rest == 0 {
                    rows[v] & 1 == 1
                } else {
                    u64::from(t.ends[rest | 1]) & rows[v] != 0
                }
            })
            .expect("table guarantees a continuation");
        seq.push(next);
        used |= 1 << next;
    }
    answer.verdict = Verdict::Yes(Cycle::from_vertices_unchecked(seq));
    answer
}

struct Backtracker<'a> {
    rows: &'a [u64],
    n: usize,
    nodes: u64,
}

impl Backtracker<'_> {
    /// Extends `seq` (visited set `used`) to a hamiltonian path ending at `end` (if pinned) or
    /// anywhere; when `close_to` is set the path must also end next to that vertex.
    fn extend(&mut self, seq: &mut Vec<usize>, used: u64, end: Option<usize>, close_to: Option<usize>) -> bool {
        self.nodes += 1;
        let n = self.n;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let last = *seq.last().unwrap();
        let left = full & !used;
        if left == 0 {
            return end.is_none_or(|e| e == last) && close_to.is_none_or(|c| self.rows[last] >> c & 1 == 1);
        }
        if end == Some(last) {
            return false;
        }
        // The rest must hang together with the current end.
        if mask_component_count(self.rows, left | 1 << last) != 1 {
            return false;
        }
        // A vertex with at most one available neighbour must be the final one.
        let mut forced_ends = 0;
        let mut m = left;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let mut avail = self.rows[v] & (left | 1 << last);
            if let Some(c) = close_to {
                avail |= self.rows[v] & (1 << c);
            }
            let d = avail.count_ones();
            if d == 0 {
                return false;
            }
            if d == 1 {
                forced_ends += 1;
            }
        }
        if forced_ends > 1 {
            return false;
        }
        let mut cand = self.rows[last] & left;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            seq.push(v);
            if self.extend(seq, used | 1 << v, end, close_to) {
                return true;
            }
            seq.pop();
        }
        false
    }
}

/// Colour classes `(A, B)` when the graph is bipartite.
fn bipartition(rows: &[u64]) -> Option<(u64, u64)> {
    let n = rows.len();
    let mut color = vec![u8::MAX; n];
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let mut m = rows[v];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
    }
    let a = (0..n).filter(|&v| color[v] == 0).fold(0u64, |m, v| m | 1 << v);
    Some((a, !a & if n == 64 { u64::MAX } else { (1u64 << n) - 1 }))
}

/// Parity obstruction for bipartite graphs: a hamiltonian path alternates colour classes.
fn bipartite_obstruction(rows: &[u64], u: Option<usize>, v: Option<usize>, closed: bool) -> bool {
    let Some((a, b)) = bipartition(rows) else {
        return false;
    };
    let (ca, cb) = (a.count_ones() as i64, b.count_ones() as i64);
    if closed {
        return ca != cb;
    }
    let side = |x: usize| a >> x & 1 == 1;
    match ca - cb {
        0 => matches!((u, v), (Some(x), Some(y)) if side(x) == side(y)),
        d if d.abs() == 1 => {
            let major_is_a = d > 0;
            [u, v].into_iter().flatten().any(|x| side(x) != major_is_a)
        }
        _ => true,
    }
}

fn cycle_backtrack(g: &Graph) -> OracleAnswer<Cycle> {
    let rows = rows32(g);
    if bipartite_obstruction(&rows, None, None, true) {
        return OracleAnswer { verdict: Verdict::No, nodes_explored: 0, method: Method::Backtrack };
    }
    let mut bt = Backtracker { rows: &rows, n: g.n(), nodes: 0 };
    let mut seq = vec![0];
    let found = bt.extend(&mut seq, 1, None, Some(0));
    OracleAnswer {
        verdict: if found { Verdict::Yes(Cycle::from_vertices_unchecked(seq)) } else { Verdict::No },
        nodes_explored: bt.nodes,
        method: Method::Backtrack,
    }
}

/// Exact hamiltonian-path decision with optionally pinned ends. The witness is the
/// lexicographically least path (starting at `u` when given, ending at `v` when given).
pub fn hamiltonian_path_oracle(
    g: &Graph,
    u: Option<usize>,
    v: Option<usize>,
) -> Result<OracleAnswer<Path>, OracleError> {
    hamiltonian_path_with(g, u, v, Strategy::Auto)
}

pub fn hamiltonian_path_with(
    g: &Graph,
    u: Option<usize>,
    v: Option<usize>,
    strategy: Strategy,
) -> Result<OracleAnswer<Path>, OracleError> {
    let n = g.n();
    for x in [u, v].into_iter().flatten() {
        if x >= n {
            return Err(OracleError::VertexOutOfRange(x));
        }
    }
    let method = resolve(n, strategy)?;
    if n == 0 || (u.is_some() && u == v && n > 1) {
        return Ok(OracleAnswer { verdict: Verdict::No, nodes_explored: 0, method });
    }
    // Only the end pinned: search from it and reverse.
    if let (None, Some(end)) = (u, v) {
        let mut ans = hamiltonian_path_with(g, Some(end), None, strategy)?;
        if let Verdict::Yes(p) = ans.verdict {
            ans.verdict = Verdict::Yes(p.reversed());
        }
        return Ok(ans);
    }
    match method {
        Method::Dp => Ok(path_dp(g, u, v)),
        Method::Backtrack => Ok(path_backtrack(g, u, v)),
    }
}

fn path_dp(g: &Graph, u: Option<usize>, v: Option<usize>) -> OracleAnswer<Path> {
    let n = g.n();
    let rows = rows32(g);
    let full = (1usize << n) - 1;
    // Anchored at the far end so completions can be looked up from any prefix.
    let t = PathTable::build(&rows, v);
    let mut answer = OracleAnswer { verdict: Verdict::No, nodes_explored: t.work, method: Method::Dp };
    let start = match u {
        Some(s) => t.has_end(full, s).then_some(s),
        None => (0..n).find(|&s| t.has_end(full, s)),
    };
    let Some(start) = start else {
        return answer;
    };
    let mut seq = vec![start];
    let mut used = 1usize << start;
    while seq.len() < n {
        let last = *seq.last().unwrap();
        let next = (0..n)
            .find(|&w| {
                if used >> w & 1 == 1 || rows[last] >> w & 1 == 0 {
                    return false;
                }
                let rest = full & !used;
                t.has_end(rest, w)
            })
            .expect("table guarantees a continuation");
        seq.push(next);
        used |= 1 << next;
    }
    answer.verdict = Verdict::Yes(Path::from_vertices_unchecked(seq));
    answer
}

fn path_backtrack(g: &Graph, u: Option<usize>, v: Option<usize>) -> OracleAnswer<Path> {
    let n = g.n();
    let rows = rows32(g);
    if bipartite_obstruction(&rows, u, v, false) {
        return OracleAnswer { verdict: Verdict::No, nodes_explored: 0, method: Method::Backtrack };
    }
    let mut bt = Backtracker { rows: &rows, n, nodes: 0 };
    let starts: Vec<usize> = match u {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    for s in starts {
        let mut seq = vec![s];
        if bt.extend(&mut seq, 1 << s, v, None) {
            return OracleAnswer {
                verdict: Verdict::Yes(Path::from_vertices_unchecked(seq)),
                nodes_explored: bt.nodes,
                method: Method::Backtrack,
            };
        }
    }
    OracleAnswer { verdict: Verdict::No, nodes_explored: bt.nodes, method: Method::Backtrack }
}

/// Greedy lexicographically least hamiltonian path of `G[mask]` using a free-ends table.
fn path_within(rows: &[u64], t: &PathTable, mask: usize) -> Vec<usize> {
    let start = (0..rows.len()).find(|&s| t.has_end(mask, s)).expect("mask has a path");
    let mut seq = vec![start];
    let mut rest = mask & !(1 << start);
    while rest != 0 {
        let last = *seq.last().unwrap();
        let next = (0..rows.len())
            .find(|&w| rest >> w & 1 == 1 && rows[last] >> w & 1 == 1 && t.has_end(rest, w))
            .expect("table guarantees a continuation");
        seq.push(next);
        rest &= !(1 << next);
    }
    seq
}

/// `k(G)`, the minimum number of vertex-disjoint paths covering `V(G)`, with an optimal cover.
pub fn min_path_cover_oracle(g: &Graph) -> Result<(usize, PathCover), OracleError> {
    let n = g.n();
    if n > PATH_COVER_LIMIT {
        return Err(OracleError::TooLarge { n, limit: PATH_COVER_LIMIT });
    }
    if n == 0 {
        return Ok((0, PathCover { paths: Vec::new(), witness: None }));
    }
    let rows = rows32(g);
    let t = PathTable::build(&rows, None);
    let full = (1usize << n) - 1;
    let mut best = vec![u8::MAX; 1 << n];
    let mut choice = vec![0usize; 1 << n];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // Submasks of `mask` containing its lowest vertex.
        let mut sub = rest;
        loop {
            let part = sub | low;
            if t.ends[part] != 0 {
                let cand = best[mask & !part].saturating_add(1);
                if cand < best[mask] {
                    best[mask] = cand;
                    choice[mask] = part;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut paths = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let part = choice[mask];
        paths.push(Path::from_vertices_unchecked(path_within(&rows, &t, part)));
        mask &= !part;
    }
    Ok((best[full] as usize, PathCover { paths, witness: None }))
}

/// A longest path of `g` (most vertices; among those, the lexicographically least).
pub fn longest_path_oracle(g: &Graph) -> Result<Path, OracleError> {
    let n = g.n();
    if n > DP_LIMIT {
        return Err(OracleError::TooLarge { n, limit: DP_LIMIT });
    }
    if n == 0 {
        return Ok(Path::from_vertices_unchecked(Vec::new()));
    }
    let rows = rows32(g);
    let t = PathTable::build(&rows, None);
    let mut best: Option<Vec<usize>> = None;
    for mask in 1..(1usize << n) {
        if t.ends[mask] == 0 {
            continue;
        }
        let size = mask.count_ones() as usize;
        if best.as_ref().is_some_and(|b| b.len() > size) {
            continue;
        }
        let p = path_within(&rows, &t, mask);
        let better = match &best {
            None => true,
            Some(b) => p.len() > b.len() || (p.len() == b.len() && p < *b),
        };
        if better {
            best = Some(p);
        }
    }
    Ok(Path::from_vertices_unchecked(best.unwrap_or_default()))
}

/// True iff `c` is a hamiltonian cycle of `g`: a permutation of `V(G)` with consecutive
/// (and closing) pairs adjacent.
pub fn validate_cycle(g: &Graph, c: &Cycle) -> bool {
    let v = c.vertices();
    v.len() == g.n() && v.len() >= 3 && spans_exactly(g, v) && {
        let k = v.len();
        (0..k).all(|i| g.has_edge(v[i], v[(i + 1) % k]))
    }
}

/// True iff `p` is a hamiltonian path of `g`.
pub fn validate_hamiltonian_path(g: &Graph, p: &Path) -> bool {
    let v = p.vertices();
    v.len() == g.n() && spans_exactly(g, v) && v.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

fn spans_exactly(g: &Graph, v: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    v.iter().all(|&x| x < g.n() && !std::mem::replace(&mut seen[x], true))
}

/// True iff the paths are valid, pairwise disjoint and cover every vertex.
pub fn validate_path_cover(g: &Graph, pc: &PathCover) -> bool {
    let mut seen = VertexSet::new(g.n());
    for p in &pc.paths {
        if p.is_empty() || p.validate(g).is_err() {
            return false;
        }
        for &v in p.vertices() {
            if seen.contains(v) {
                return false;
            }
            seen.insert(v);
        }
    }
    seen.len() == g.n()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).unwrap()
    }

    /// Permutation oracle: does any ordering starting at 0 close into a cycle?
    fn permutation_cycle(g: &Graph) -> bool {
        fn go(g: &Graph, seq: &mut Vec<usize>) -> bool {
            if seq.len() == g.n() {
                return g.has_edge(seq[seq.len() - 1], seq[0]);
            }
            for v in 0..g.n() {
                if !seq.contains(&v) && g.has_edge(*seq.last().unwrap(), v) {
                    seq.push(v);
                    if go(g, seq) {
                        return true;
                    }
                    seq.pop();
                }
            }
            false
        }
        g.n() >= 3 && go(g, &mut vec![0])
    }

    #[test]
    fn cycle_examples() {
        assert!(hamiltonian_cycle_oracle(&Graph::complete(4)).unwrap().is_yes());
        assert!(!hamiltonian_cycle_oracle(&Graph::petersen()).unwrap().is_yes());
        let c6 = hamiltonian_cycle_oracle(&Graph::cycle(6)).unwrap();
        assert_eq!(c6.witness().unwrap().vertices(), &[0, 1, 2, 3, 4, 5]);
        let big = Graph::complete(25);
        assert_eq!(hamiltonian_cycle_oracle(&big), Err(OracleError::TooLarge { n: 25, limit: BACKTRACK_LIMIT }));
    }

    #[test]
    fn path_examples() {
        let p6 = Graph::path(6);
        assert!(hamiltonian_path_oracle(&p6, None, None).unwrap().is_yes());
        assert!(!hamiltonian_path_oracle(&Graph::star(3), None, None).unwrap().is_yes());
        let c6 = Graph::cycle(6);
        // 0 and 3 are antipodal: any spanning path between them would have to leave 0 on one
        // side and return on the other, which is impossible.
        assert!(!hamiltonian_path_oracle(&c6, Some(0), Some(3)).unwrap().is_yes());
        let p = hamiltonian_path_oracle(&c6, Some(0), Some(1)).unwrap();
        assert_eq!(p.witness().unwrap().vertices(), &[0, 5, 4, 3, 2, 1]);
        let p5 = Graph::path(5);
        let p = hamiltonian_path_oracle(&p5, Some(0), Some(4)).unwrap();
        assert_eq!(p.witness().unwrap().vertices(), &[0, 1, 2, 3, 4]);
        let p = hamiltonian_path_oracle(&p5, None, Some(0)).unwrap();
        assert_eq!(p.witness().unwrap().vertices(), &[4, 3, 2, 1, 0]);
    }

    #[test]
    fn path_cover_examples() {
        assert_eq!(min_path_cover_oracle(&Graph::complete(5)).unwrap().0, 1);
        assert_eq!(min_path_cover_oracle(&Graph::empty(4)).unwrap().0, 4);
        let two = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let (k, pc) = min_path_cover_oracle(&two).unwrap();
        assert_eq!(k, 2);
        assert!(validate_path_cover(&two, &pc));
    }

    #[test]
    fn validators_reject_bad_witnesses() {
        let c5 = Graph::cycle(5);
        assert!(validate_cycle(&c5, &Cycle::from_vertices_unchecked(vec![0, 1, 2, 3, 4])));
        assert!(!validate_cycle(&c5, &Cycle::from_vertices_unchecked(vec![0, 1, 2, 3])));
        let overlap = PathCover {
            paths: vec![Path::from_vertices_unchecked(vec![0, 1, 2]), Path::from_vertices_unchecked(vec![2, 3, 4])],
            witness: None,
        };
        assert!(!validate_path_cover(&c5, &overlap));
    }

    #[test]
    fn dp_and_backtracking_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let n = rng.gen_range(3..=14);
            let p = rng.gen_range(0.2..0.8);
            let g = random_graph(&mut rng, n, p);
            let dp = hamiltonian_cycle_with(&g, Strategy::Dp).unwrap();
            let bt = hamiltonian_cycle_with(&g, Strategy::Backtrack).unwrap();
            assert_eq!(dp.is_yes(), bt.is_yes(), "{g:?}");
            // Both return the lexicographically least cycle starting at 0.
            assert_eq!(dp.witness(), bt.witness());
            if let Some(c) = dp.witness() {
                assert!(validate_cycle(&g, c));
                assert_eq!(c.normalized(), *c);
            }
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                let pd = hamiltonian_path_with(&g, Some(u), Some(v), Strategy::Dp).unwrap();
                let pb = hamiltonian_path_with(&g, Some(u), Some(v), Strategy::Backtrack).unwrap();
                assert_eq!(pd.witness(), pb.witness());
                if let Some(p) = pd.witness() {
                    assert!(validate_hamiltonian_path(&g, p));
                    assert_eq!((p.first(), p.last()), (u, v));
                }
            }
            let fd = hamiltonian_path_with(&g, None, None, Strategy::Dp).unwrap();
            let fb = hamiltonian_path_with(&g, None, None, Strategy::Backtrack).unwrap();
            assert_eq!(fd.witness(), fb.witness());
        }
    }

    #[test]
    fn dp_matches_permutation_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let n = rng.gen_range(3..=8);
            let p = rng.gen_range(0.2..0.7);
            let g = random_graph(&mut rng, n, p);
            assert_eq!(hamiltonian_cycle_oracle(&g).unwrap().is_yes(), permutation_cycle(&g));
        }
    }

    #[test]
    fn path_cover_is_optimal_and_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let n = rng.gen_range(1..=9);
            let p = rng.gen_range(0.1..0.6);
            let g = random_graph(&mut rng, n, p);
            let (k, pc) = min_path_cover_oracle(&g).unwrap();
            assert!(validate_path_cover(&g, &pc));
            assert_eq!(pc.paths.len(), k);
            let ham = hamiltonian_path_oracle(&g, None, None).unwrap().is_yes();
            assert_eq!(k == 1, ham);
            let longest = longest_path_oracle(&g).unwrap();
            assert!(longest.validate(&g).is_ok());
            assert_eq!(longest.len() == n, ham);
        }
    }

    #[test]
    fn backtracking_handles_the_upper_range() {
        let g = Graph::cycle(22);
        let ans = hamiltonian_cycle_oracle(&g).unwrap();
        assert_eq!(ans.method, Method::Backtrack);
        assert!(validate_cycle(&g, ans.witness().unwrap()));
        let k = Graph::complete_bipartite(11, 12);
        assert!(!hamiltonian_cycle_oracle(&k).unwrap().is_yes());
    }
}
