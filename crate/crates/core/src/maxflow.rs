//! Dinic max-flow on small integer networks.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); n],
            level: vec![0; n],
            next: vec![0; n],
        }
    }

    /// Adds an arc `u -> v`; returns its index (the residual twin is `index ^ 1`).
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> usize {
        self.add_pair(u, v, cap, 0)
    }

    /// Adds an undirected edge with capacity `cap` in both directions.
    pub fn add_undirected(&mut self, u: usize, v: usize, cap: i64) -> usize {
        self.add_pair(u, v, cap, cap)
    }

    fn add_pair(&mut self, u: usize, v: usize, cap: i64, back: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap });
        self.arcs.push(Arc { to: u, cap: back });
        self.out[u].push(id);
        self.out[v].push(id + 1);
        id
    }

    /// Residual capacity of arc `id`.
    pub fn residual(&self, id: usize) -> i64 {
        self.arcs[id].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &a in &self.out[v] {
                let w = self.arcs[a].to;
                if self.arcs[a].cap > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[v] + 1;
                    q.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: i64) -> i64 {
        if v == t {
            return pushed;
        }
        while self.next[v] < self.out[v].len() {
            let a = self.out[v][self.next[v]];
            let w = self.arcs[a].to;
            if self.arcs[a].cap > 0 && self.level[w] == self.level[v] + 1 {
                let got = self.dfs(w, t, pushed.min(self.arcs[a].cap));
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.next[v] += 1;
        }
        0
    }

    /// Maximum flow from `s` to `t`, stopping early once `limit` is reached.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        while total < limit && self.bfs(s, t) {
            self.next.iter_mut().for_each(|x| *x = 0);
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

    /// Vertices reachable from `s` in the residual network (source side of a min cut).
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &a in &self.out[v] {
                let w = self.arcs[a].to;
                if self.arcs[a].cap > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
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
    fn diamond() {
        let mut f = FlowNetwork::new(4);
        f.add_arc(0, 1, 3);
        f.add_arc(0, 2, 2);
        f.add_arc(1, 2, 5);
        f.add_arc(1, 3, 2);
        f.add_arc(2, 3, 3);
        assert_eq!(f.max_flow(0, 3, i64::MAX), 5);
        let side = f.source_side(0);
        assert!(side[0] && !side[3]);
    }

    #[test]
    fn undirected_cycle() {
        let mut f = FlowNetwork::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            f.add_undirected(u, v, 1);
        }
        assert_eq!(f.max_flow(0, 2, i64::MAX), 2);
    }

    #[test]
    fn limit_stops_early() {
        let mut f = FlowNetwork::new(2);
        f.add_arc(0, 1, 10);
        assert_eq!(f.max_flow(0, 1, 4), 4);
    }
}
