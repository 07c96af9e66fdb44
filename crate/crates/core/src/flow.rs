//! Dinic max-flow on small integer networks. Used for vertex connectivity,
//! star matchings and deficiency computations.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

/// A directed flow network; every arc is stored with its reverse residual arc.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    original: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            original: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    /// Adds `u -> v` with capacity `cap`; returns an arc handle for `flow_on`.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap });
        self.arcs.push(Arc { to: u, cap: 0 });
        self.original.push(cap);
        self.original.push(0);
        self.out[u].push(id);
        self.out[v].push(id + 1);
        id
    }

    /// Flow currently routed through the arc returned by `add_arc`.
    pub fn flow_on(&self, arc: usize) -> i64 {
        self.original[arc] - self.arcs[arc].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.out[u] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    q.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.out[u].len() {
            let a = self.out[u][self.iter[u]];
            let Arc { to, cap } = self.arcs[a];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0 {
                    self.arcs[a].cap -= d;
                    self.arcs[a ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    /// Maximum `s`-`t` flow, stopping early once `limit` units are routed.
    pub fn max_flow_bounded(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total < limit && self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, limit - total);
                if f == 0 {
                    break;
                }
                total += f;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        self.max_flow_bounded(s, t, i64::MAX)
    }

    /// Nodes reachable from `s` in the residual network (the source side of a minimum cut
    /// after `max_flow`).
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.out[u] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && !seen[to] {
                    seen[to] = true;
                    q.push_back(to);
                }
            }
        }
        seen
    }

    /// Nodes that can still reach `t` in the residual network.
    pub fn residual_coreachable(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[t] = true;
        let mut q = VecDeque::from([t]);
        while let Some(v) = q.pop_front() {
            // An arc u -> v has residual capacity iff arcs[a].cap > 0 where a is the arc u -> v;
            // out[v] holds the reverse of every arc entering v.
            for &rev in &self.out[v] {
                let fwd = rev ^ 1;
                let u = self.arcs[rev].to;
                if self.arcs[fwd].cap > 0 && !seen[u] {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS example network, max flow 23.
        let mut f = FlowNetwork::new(6);
        for (u, v, c) in
            [(0, 1, 16), (0, 2, 13), (1, 3, 12), (2, 1, 4), (2, 4, 14), (3, 2, 9), (3, 5, 20), (4, 3, 7), (4, 5, 4)]
        {
            f.add_arc(u, v, c);
        }
        assert_eq!(f.max_flow(0, 5), 23);
        let side = f.residual_reachable(0);
        assert!(side[0] && !side[5]);
    }

    #[test]
    fn bounded_flow_stops() {
        let mut f = FlowNetwork::new(2);
        f.add_arc(0, 1, 10);
        assert_eq!(f.max_flow_bounded(0, 1, 3), 3);
    }
}
