//! Structural queries: bridges, girth, small edge cuts, cyclic edge-connectivity,
//! hamiltonicity and suppression of divalent vertices.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::{Budget, BudgetExhausted};
use crate::graph::{as_cubic, CubicGraph, EdgeId, GraphError, MultiGraph, VertexId};
use crate::maxflow::FlowNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hamiltonicity {
    Hamiltonian,
    Hypohamiltonian,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureProfile {
    pub bridges: Vec<EdgeId>,
    pub girth: Girth,
    pub two_edge_cuts: Vec<(EdgeId, EdgeId)>,
    /// `None` when no two vertex-disjoint cycles exist.
    pub cyclic_edge_connectivity: Option<usize>,
    /// `None` when the circuit search ran out of budget.
    pub hamiltonicity: Option<Hamiltonicity>,
}

pub fn structure_profile(g: &CubicGraph, budget: &Budget) -> Result<StructureProfile, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(StructureProfile {
        bridges: bridges(g),
        girth: girth(g),
        two_edge_cuts: two_edge_cuts(g),
        cyclic_edge_connectivity: cyclic_edge_connectivity(g),
        hamiltonicity: hamiltonicity(g, budget).ok(),
    })
}

/// Bridges in increasing id order (low-link DFS keyed on edge ids, so parallel edges are handled).
pub fn bridges(g: &MultiGraph) -> Vec<EdgeId> {
    bridges_avoiding(g, None)
}

fn bridges_avoiding(g: &MultiGraph, skip: Option<EdgeId>) -> Vec<EdgeId> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut out = Vec::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // Stack frames: (vertex, parent edge, next incidence index).
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(v) {
                let inc = g.incident(v)[*idx];
                *idx += 1;
                if inc.edge == pe || Some(inc.edge) == skip {
                    continue;
                }
                let w = inc.other;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, inc.edge, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        out.push(pe);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn girth(g: &MultiGraph) -> Girth {
    if g.first_parallel_edge().is_some() {
        return Girth::Finite(2);
    }
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            if 2 * dist[v] + 1 >= best {
                break;
            }
            for inc in g.incident(v) {
                if inc.edge == via[v] && dist[v] > 0 {
                    continue;
                }
                let w = inc.other;
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    via[w] = inc.edge;
                    q.push_back(w);
                } else {
                    best = best.min(dist[v] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// A shortest cycle through edge `e`, as a vertex list starting at one endpoint of `e`.
pub fn shortest_cycle_through(g: &MultiGraph, e: EdgeId) -> Option<Vec<VertexId>> {
    let (u, v) = g.endpoints(e);
    let mut prev = vec![usize::MAX; g.n()];
    prev[u] = u;
    let mut q = std::collections::VecDeque::from([u]);
    while let Some(x) = q.pop_front() {
        for inc in g.incident(x) {
            if inc.edge == e || prev[inc.other] != usize::MAX {
                continue;
            }
            prev[inc.other] = x;
            if inc.other == v {
                let mut path = vec![v];
                let mut y = v;
                while y != u {
                    y = prev[y];
                    path.push(y);
                }
                path.reverse();
                return Some(path);
            }
            q.push_back(inc.other);
        }
    }
    None
}

/// Unordered pairs `{a, b}` of non-bridge edges whose joint removal disconnects the graph.
pub fn two_edge_cuts(g: &MultiGraph) -> Vec<(EdgeId, EdgeId)> {
    let base: BitSet = g.edge_set(bridges(g));
    let mut out = Vec::new();
    for a in 0..g.m() {
        if base.contains(a) {
            continue;
        }
        for b in bridges_avoiding(g, Some(a)) {
            if b > a && !base.contains(b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// True iff removing `cut` leaves at least two components that contain a cycle.
pub fn is_cyclic_cut(g: &MultiGraph, cut: &BitSet) -> bool {
    let comps = g.components_avoiding(cut);
    if comps.len() < 2 {
        return false;
    }
    let mut comp_of = vec![0; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut edges_in = vec![0usize; comps.len()];
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        if !cut.contains(e) {
            edges_in[comp_of[u]] += 1;
        }
    }
    comps.iter().zip(&edges_in).filter(|(c, &m)| m >= c.len()).count() >= 2
}

/// Minimum cut between two disjoint vertex sets contracted to terminals.
fn terminal_cut(g: &MultiGraph, a: &BitSet, b: &BitSet, limit: usize) -> usize {
    let n = g.n();
    let (s, t) = (n, n + 1);
    let node = |v: VertexId| {
        if a.contains(v) {
            s
        } else if b.contains(v) {
            t
        } else {
            v
        }
    };
    let mut net = FlowNetwork::new(n + 2);
    for &(u, v) in g.edges() {
        let (x, y) = (node(u), node(v));
        if x != y {
            net.add_undirected(x, y, 1);
        }
    }
    net.max_flow(s, t, limit as i64) as usize
}

/// Upper bound from disjoint pairs of seed cycles (a shortest cycle through each edge).
fn seeded_cyclic_cut(g: &MultiGraph) -> Option<usize> {
    let mut seeds: Vec<BitSet> = Vec::new();
    for e in 0..g.m() {
        if let Some(c) = shortest_cycle_through(g, e) {
            let s = g.vertex_set(c);
            if !seeds.contains(&s) {
                seeds.push(s);
            }
        }
    }
    let mut best: Option<usize> = None;
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            if !seeds[i].is_disjoint(&seeds[j]) {
                continue;
            }
            let limit = best.unwrap_or(g.m() + 1);
            let c = terminal_cut(g, &seeds[i], &seeds[j], limit);
            if c < limit {
                best = Some(c);
            }
        }
    }
    best
}

fn has_cyclic_cut_of_size(g: &MultiGraph, k: usize) -> bool {
    let m = g.m();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return false;
    }
    loop {
        if is_cyclic_cut(g, &g.edge_set(idx.iter().copied())) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Cap on edge subsets enumerated when certifying the seeded value from below.
const CERTIFY_LIMIT: f64 = 4.0e6;

/// Cyclic edge-connectivity, or `None` when no cyclic cut exists.
///
/// The seeded max-flow value is a genuine cyclic cut and hence an upper bound; when the
/// number of smaller edge subsets is modest they are enumerated to certify it.
pub fn cyclic_edge_connectivity(g: &MultiGraph) -> Option<usize> {
    let upper = seeded_cyclic_cut(g)?;
    let mut value = upper;
    for k in 0..upper {
        if binomial(g.m(), k) > CERTIFY_LIMIT {
            break;
        }
        if has_cyclic_cut_of_size(g, k) {
            value = k;
            break;
        }
    }
    Some(value)
}

/// Exhaustive reference: smallest `k` such that some `k` edges form a cyclic cut.
pub fn cyclic_edge_connectivity_brute(g: &MultiGraph) -> Option<usize> {
    (0..=g.m()).find(|&k| has_cyclic_cut_of_size(g, k))
}

struct HamSearch<'a> {
    g: &'a MultiGraph,
    visited: Vec<bool>,
    start: VertexId,
    path: Vec<VertexId>,
    budget: &'a Budget,
}

impl HamSearch<'_> {
    fn available(&self, x: VertexId, end: VertexId) -> usize {
        let mut seen: [usize; 8] = [usize::MAX; 8];
        let mut k = 0;
        for y in self.g.neighbors(x) {
            if (!self.visited[y] || y == self.start || y == end) && !seen[..k].contains(&y) {
                if k < 8 {
                    seen[k] = y;
                }
                k += 1;
            }
        }
        k
    }

    fn extend(&mut self) -> Result<bool, BudgetExhausted> {
        self.budget.tick()?;
        let cur = *self.path.last().unwrap();
        let n = self.g.n();
        if self.path.len() == n {
            return Ok(self.g.neighbors(cur).any(|w| w == self.start));
        }
        let mut next: Vec<VertexId> = self.g.neighbors(cur).filter(|&w| !self.visited[w]).collect();
        next.sort_unstable();
        next.dedup();
        for w in next {
            self.visited[w] = true;
            self.path.push(w);
            let ok = self
                .g
                .neighbors(cur)
                .filter(|&x| !self.visited[x])
                .all(|x| self.available(x, w) >= 2);
            if ok && self.extend()? {
                return Ok(true);
            }
            self.path.pop();
            self.visited[w] = false;
        }
        Ok(false)
    }
}

/// A Hamilton circuit as a vertex sequence, or `None` if none exists.
pub fn hamilton_circuit(g: &MultiGraph, budget: &Budget) -> Result<Option<Vec<VertexId>>, BudgetExhausted> {
    let n = g.n();
    if n == 0 {
        return Ok(None);
    }
    if n <= 2 {
        let ok = if n == 1 {
            false
        } else {
            g.edges_between(0, 1).len() >= 2
        };
        return Ok(ok.then(|| (0..n).collect()));
    }
    if (0..n).any(|v| g.degree(v) < 2) || !g.is_connected() {
        return Ok(None);
    }
    let mut s = HamSearch {
        g,
        visited: vec![false; n],
        start: 0,
        path: vec![0],
        budget,
    };
    s.visited[0] = true;
    Ok(if s.extend()? { Some(s.path) } else { None })
}

pub fn hamiltonicity(g: &MultiGraph, budget: &Budget) -> Result<Hamiltonicity, BudgetExhausted> {
    if hamilton_circuit(g, budget)?.is_some() {
        return Ok(Hamiltonicity::Hamiltonian);
    }
    for v in 0..g.n() {
        let (h, _, _) = g.delete_vertices(&g.vertex_set([v]));
        if hamilton_circuit(&h, budget)?.is_none() {
            return Ok(Hamiltonicity::Neither);
        }
    }
    Ok(Hamiltonicity::Hypohamiltonian)
}

/// Removes every divalent vertex, merging its two edges. Surviving vertices keep their
/// relative order; a merged edge takes the position of the first edge of its chain.
pub fn suppress_divalent(g: &MultiGraph) -> Result<CubicGraph, GraphError> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| !matches!(g.degree(v), 2 | 3)) {
        return Err(GraphError::NotSubcubic {
            vertex: v,
            degree: g.degree(v),
        });
    }
    let mut new_id = vec![usize::MAX; n];
    let mut k = 0;
    for v in 0..n {
        if g.degree(v) == 3 {
            new_id[v] = k;
            k += 1;
        }
    }
    let mut used = vec![false; g.m()];
    let mut out = MultiGraph::new(k);
    // Walks from `from` along edge `e` through divalent vertices to a cubic end.
    let walk = |from: VertexId, e: EdgeId, used: &mut Vec<bool>| -> Result<VertexId, GraphError> {
        let (mut prev_e, mut x) = (e, g.other_end(e, from));
        used[e] = true;
        while g.degree(x) == 2 {
            let inc = g
                .incident(x)
                .iter()
                .find(|i| i.edge != prev_e)
                .copied()
                .expect("divalent vertex has a second edge");
            if used[inc.edge] {
                return Err(GraphError::LoopCreated(x));
            }
            used[inc.edge] = true;
            prev_e = inc.edge;
            x = inc.other;
        }
        Ok(x)
    };
    for e in 0..g.m() {
        if used[e] {
            continue;
        }
        let (u, v) = g.endpoints(e);
        let (a, b) = match (g.degree(u) == 3, g.degree(v) == 3) {
            (true, _) => (u, walk(u, e, &mut used)?),
            (false, true) => (v, walk(v, e, &mut used)?),
            (false, false) => {
                used[e] = true;
                let a = walk(u, e, &mut used)?;
                let other = g
                    .incident(u)
                    .iter()
                    .find(|i| i.edge != e)
                    .expect("divalent vertex has a second edge")
                    .edge;
                if used[other] {
                    return Err(GraphError::LoopCreated(u));
                }
                (walk(u, other, &mut used)?, a)
            }
        };
        if a == b {
            return Err(GraphError::LoopCreated(a));
        }
        out.add_edge(new_id[a], new_id[b])?;
    }
    as_cubic(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn prism() -> MultiGraph {
        MultiGraph::from_edges(
            6,
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    #[test]
    fn k4_basics() {
        let g = k4();
        assert!(bridges(&g).is_empty());
        assert_eq!(girth(&g), Girth::Finite(3));
        assert_eq!(cyclic_edge_connectivity(&g), None);
        assert_eq!(
            hamiltonicity(&g, &Budget::unlimited()).unwrap(),
            Hamiltonicity::Hamiltonian
        );
    }

    #[test]
    fn prism_has_cyclic_three_cut() {
        let g = prism();
        assert_eq!(cyclic_edge_connectivity(&g), Some(3));
        assert_eq!(cyclic_edge_connectivity_brute(&g), Some(3));
        assert!(two_edge_cuts(&g).is_empty());
    }

    #[test]
    fn path_girth_infinite_and_bridges() {
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(girth(&g), Girth::Infinite);
        assert_eq!(bridges(&g), vec![0, 1]);
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = MultiGraph::from_edges(3, [(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(bridges(&g), vec![2]);
        assert_eq!(girth(&g), Girth::Finite(2));
    }

    #[test]
    fn cycle_has_all_two_cuts() {
        let g = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(two_edge_cuts(&g).len(), 6);
    }

    #[test]
    fn suppress_restores_k4() {
        let (h, _) = k4().subdivide_edge(3).unwrap();
        let (h, _) = h.subdivide_edge(0).unwrap();
        assert_eq!(suppress_divalent(&h).unwrap().as_multigraph(), &k4());
    }

    #[test]
    fn suppress_rejects_bad_degrees() {
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            suppress_divalent(&g),
            Err(GraphError::NotSubcubic { vertex: 0, degree: 1 })
        ));
        // Two divalent vertices hanging between 0 and 1 leave a theta graph.
        let theta = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)]).unwrap();
        let t = suppress_divalent(&theta).unwrap();
        assert_eq!((t.n(), t.m()), (2, 3));
        let looped = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        assert!(matches!(suppress_divalent(&looped), Err(GraphError::LoopCreated(_))));
    }
}
