//! Perfect matchings, even factors, oddness, weak oddness, gamma2, mu_k, excessive index
//! and cores.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::budget::{Budget, BudgetExhausted};
use crate::graph::{CubicGraph, EdgeId, MultiGraph, VertexId};
use crate::search::{tait_coloring, CoverCost, Engine, Rule, INF};
use crate::structure::{bridges, two_edge_cuts};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("graph has no perfect matching, hence no 2-factor")]
    NoTwoFactor,
    #[error("budget exhausted; value is at least {lower}{}", upper.map(|u| format!(" and at most {u}")).unwrap_or_default())]
    BudgetExhausted { lower: u32, upper: Option<u32> },
    #[error("graph has a bridge")]
    BridgeDetected,
    #[error("edge set {0} is not a perfect matching")]
    NotAMatching(usize),
    #[error("k = {0} is outside the supported range 1..=6")]
    UnsupportedK(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerfectMatching {
    pub edges: Vec<EdgeId>,
}

impl PerfectMatching {
    pub fn from_set(s: &BitSet) -> Self {
        PerfectMatching { edges: s.to_vec() }
    }

    pub fn to_set(&self, m: usize) -> BitSet {
        BitSet::from_indices(m, self.edges.iter().copied())
    }
}

pub fn is_perfect_matching(g: &MultiGraph, edges: &BitSet) -> bool {
    let mut deg = vec![0u8; g.n()];
    for e in edges.iter() {
        if e >= g.m() {
            return false;
        }
        let (a, b) = g.endpoints(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.iter().all(|&d| d == 1)
}

struct PmSearch<'a> {
    g: &'a MultiGraph,
    covered: Vec<bool>,
    chosen: BitSet,
}

impl PmSearch<'_> {
    /// `w` can still be matched using edges with id `>= next`.
    fn viable(&self, w: VertexId, next: EdgeId) -> bool {
        self.covered[w]
            || self
                .g
                .incident(w)
                .iter()
                .any(|i| i.edge >= next && !self.covered[i.other])
    }

    fn run<F: FnMut(&BitSet) -> ControlFlow<()>>(&mut self, e: EdgeId, f: &mut F) -> ControlFlow<()> {
        if e == self.g.m() {
            if self.covered.iter().all(|&c| c) {
                return f(&self.chosen);
            }
            return ControlFlow::Continue(());
        }
        let (u, v) = self.g.endpoints(e);
        if !self.covered[u] && !self.covered[v] {
            self.covered[u] = true;
            self.covered[v] = true;
            self.chosen.insert(e);
            let ok = [u, v]
                .iter()
                .flat_map(|&x| self.g.neighbors(x))
                .all(|w| self.viable(w, e + 1));
            if ok {
                self.run(e + 1, f)?;
            }
            self.chosen.remove(e);
            self.covered[u] = false;
            self.covered[v] = false;
        }
        if self.viable(u, e + 1) && self.viable(v, e + 1) {
            self.run(e + 1, f)?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `f` on every perfect matching, in lexicographic order of sorted edge ids.
pub fn for_each_perfect_matching<F>(g: &MultiGraph, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&BitSet) -> ControlFlow<()>,
{
    if g.n() % 2 == 1 {
        return ControlFlow::Continue(());
    }
    let mut s = PmSearch {
        g,
        covered: vec![false; g.n()],
        chosen: BitSet::new(g.m()),
    };
    s.run(0, &mut f)
}

/// All perfect matchings in lexicographic order.
pub fn perfect_matchings(g: &MultiGraph) -> Vec<BitSet> {
    let mut out = Vec::new();
    let _ = for_each_perfect_matching(g, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Number of perfect matchings, stopping at `cap`.
pub fn count_perfect_matchings(g: &MultiGraph, cap: usize) -> usize {
    let mut c = 0;
    let _ = for_each_perfect_matching(g, |_| {
        c += 1;
        if c >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorComponent {
    pub vertices: usize,
    /// False for an isolated vertex.
    pub circuit: bool,
}

impl FactorComponent {
    pub fn odd(&self) -> bool {
        self.vertices % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenFactor {
    pub edges: Vec<EdgeId>,
    pub components: Vec<FactorComponent>,
}

impl EvenFactor {
    /// Analyzes an edge set; `None` unless every vertex has degree 0 or 2 in it.
    pub fn from_edges(g: &MultiGraph, edges: &BitSet) -> Option<EvenFactor> {
        let deg: Vec<usize> = (0..g.n())
            .map(|v| g.incident(v).iter().filter(|i| edges.contains(i.edge)).count())
            .collect();
        if deg.iter().any(|&d| d != 0 && d != 2) {
            return None;
        }
        let mut seen = vec![false; g.n()];
        let mut components = Vec::new();
        for s in 0..g.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            if deg[s] == 0 {
                components.push(FactorComponent {
                    vertices: 1,
                    circuit: false,
                });
                continue;
            }
            let mut count = 1;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for inc in g.incident(x) {
                    if edges.contains(inc.edge) && !seen[inc.other] {
                        seen[inc.other] = true;
                        count += 1;
                        stack.push(inc.other);
                    }
                }
            }
            components.push(FactorComponent {
                vertices: count,
                circuit: true,
            });
        }
        Some(EvenFactor {
            edges: edges.to_vec(),
            components,
        })
    }

    pub fn odd_components(&self) -> usize {
        self.components.iter().filter(|c| c.odd()).count()
    }

    pub fn is_two_factor(&self) -> bool {
        self.components.iter().all(|c| c.circuit)
    }
}

/// Smallest number of odd circuits in a 2-factor, by folding over complements of
/// perfect matchings.
pub fn oddness(g: &CubicGraph, budget: &Budget) -> Result<(u32, EvenFactor), FactorError> {
    let class1 = tait_coloring(g, budget)
        .map_err(|_| FactorError::BudgetExhausted { lower: 0, upper: None })?
        .is_some();
    let floor = if class1 { 0 } else { 2 };
    let mut best: Option<(u32, BitSet)> = None;
    let mut exhausted = false;
    let _ = for_each_perfect_matching(g, |m| {
        if budget.tick().is_err() {
            exhausted = true;
            return ControlFlow::Break(());
        }
        let f = m.complement();
        let odd = EvenFactor::from_edges(g, &f)
            .expect("complement of a perfect matching in a cubic graph is a 2-factor")
            .odd_components() as u32;
        if best.as_ref().is_none_or(|(b, _)| odd < *b) {
            best = Some((odd, f));
        }
        if odd <= floor {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match best {
        None => Err(FactorError::NoTwoFactor),
        Some((v, _)) if exhausted => Err(FactorError::BudgetExhausted {
            lower: floor,
            upper: Some(v),
        }),
        Some((v, f)) => Ok((v, EvenFactor::from_edges(g, &f).unwrap())),
    }
}

#[derive(Debug, Clone)]
struct Choice {
    cost: u32,
    edges: BitSet,
}

/// Optimal completions of one side of a 2-edge-cut, seen through the edge that replaces it.
#[derive(Debug, Clone, Default)]
struct Profile {
    /// The replacing edge is unused.
    none: Option<Choice>,
    /// The replacing edge lies on a circuit whose vertices on this side have the given
    /// parity; cost excludes that circuit.
    through: [Option<Choice>; 2],
}

#[derive(Debug, Clone)]
enum PieceEdge {
    Real(EdgeId),
    Virtual(usize),
    /// The edge the piece reports its profile through; stands for these real edges.
    Out(Vec<EdgeId>),
}

struct Piece {
    g: MultiGraph,
    kinds: Vec<PieceEdge>,
    out: Option<EdgeId>,
}

struct Decomposer<'a> {
    orig_m: usize,
    two_factor: bool,
    budget: &'a Budget,
    profiles: Vec<Profile>,
}

/// Cost bookkeeping for one circuit.
#[derive(Debug, Default)]
struct CircuitCost {
    base: u32,
    nat: u8,
    min_delta: u32,
    flip: Option<usize>,
    infeasible: bool,
}

impl CircuitCost {
    fn new(vertices: usize) -> Self {
        CircuitCost {
            base: 0,
            nat: (vertices % 2) as u8,
            min_delta: INF,
            flip: None,
            infeasible: false,
        }
    }

    fn add_virtual(&mut self, idx: usize, p: &Profile) {
        let c0 = p.through[0].as_ref().map(|c| c.cost);
        let c1 = p.through[1].as_ref().map(|c| c.cost);
        match (c0, c1) {
            (None, None) => self.infeasible = true,
            (Some(a), None) => self.base += a,
            (None, Some(b)) => {
                self.base += b;
                self.nat ^= 1;
            }
            (Some(a), Some(b)) => {
                self.base += a.min(b);
                if b < a {
                    self.nat ^= 1;
                }
                let d = a.abs_diff(b);
                if d < self.min_delta {
                    self.min_delta = d;
                    self.flip = Some(idx);
                }
            }
        }
    }

    /// Cost of making the circuit's total vertex parity equal `p`.
    fn at_parity(&self, p: u8) -> u32 {
        if self.infeasible {
            INF
        } else if self.nat == p {
            self.base
        } else {
            self.base.saturating_add(self.min_delta).min(INF)
        }
    }
}

impl Decomposer<'_> {
    fn solve(&mut self, piece: Piece) -> Result<Profile, BudgetExhausted> {
        self.budget.tick()?;
        let g = &piece.g;
        let n = g.n();
        let mut best_cut: Option<(usize, EdgeId, EdgeId, Vec<VertexId>)> = None;
        for (a, b) in two_edge_cuts(g) {
            let real = |e: EdgeId| matches!(piece.kinds[e], PieceEdge::Real(_));
            if !real(a) || !real(b) {
                continue;
            }
            let removed = g.edge_set([a, b]);
            let comps = g.components_avoiding(&removed);
            if comps.len() != 2 {
                continue;
            }
            let side = match piece.out {
                Some(o) => {
                    let (x, _) = g.endpoints(o);
                    if comps[0].contains(&x) {
                        comps[1].clone()
                    } else {
                        comps[0].clone()
                    }
                }
                None => {
                    if comps[0].len() <= comps[1].len() {
                        comps[0].clone()
                    } else {
                        comps[1].clone()
                    }
                }
            };
            // Next to a bridge both cut edges can share an endpoint; joining them would make a loop.
            let (a0, a1) = g.endpoints(a);
            let (b0, b1) = g.endpoints(b);
            if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
                continue;
            }
            let score = side.len().min(n - side.len());
            if best_cut.as_ref().is_none_or(|(s, ..)| score > *s) {
                best_cut = Some((score, a, b, side));
            }
        }
        let Some((_, a, b, side)) = best_cut else {
            return self.leaf(&piece);
        };
        let in_side = g.vertex_set(side.iter().copied());
        let end_in = |e: EdgeId, inside: bool| {
            let (x, y) = g.endpoints(e);
            if in_side.contains(x) == inside {
                x
            } else {
                y
            }
        };
        let real_of = |e: EdgeId| match piece.kinds[e] {
            PieceEdge::Real(o) => o,
            _ => unreachable!("cut edges are real"),
        };

        let (sg, svmap, semap) = g.induced_subgraph(&in_side);
        let local = |vmap: &[VertexId], v: VertexId| vmap.iter().position(|&x| x == v).unwrap();
        let mut s_graph = sg;
        let mut s_kinds: Vec<PieceEdge> = semap.iter().map(|&e| piece.kinds[e].clone()).collect();
        let w = s_graph
            .add_edge(local(&svmap, end_in(a, true)), local(&svmap, end_in(b, true)))
            .expect("cut endpoints are distinct in a bridgeless piece");
        s_kinds.push(PieceEdge::Out(vec![real_of(a), real_of(b)]));
        let prof = self.solve(Piece {
            g: s_graph,
            kinds: s_kinds,
            out: Some(w),
        })?;
        let idx = self.profiles.len();
        self.profiles.push(prof);

        let rest = in_side.complement();
        let (rg, rvmap, remap) = g.induced_subgraph(&rest);
        let mut r_graph = rg;
        let mut r_kinds: Vec<PieceEdge> = remap.iter().map(|&e| piece.kinds[e].clone()).collect();
        r_graph
            .add_edge(local(&rvmap, end_in(a, false)), local(&rvmap, end_in(b, false)))
            .expect("cut endpoints are distinct in a bridgeless piece");
        r_kinds.push(PieceEdge::Virtual(idx));
        let out = piece.out.map(|o| remap.iter().position(|&e| e == o).unwrap());
        self.solve(Piece {
            g: r_graph,
            kinds: r_kinds,
            out,
        })
    }

    /// Fundamental cycles of a spanning forest, as edge bitsets.
    fn cycle_basis(g: &MultiGraph) -> Vec<BitSet> {
        let n = g.n();
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree = BitSet::new(g.m());
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut q = std::collections::VecDeque::from([root]);
            while let Some(v) = q.pop_front() {
                for inc in g.incident(v) {
                    if depth[inc.other] == usize::MAX {
                        depth[inc.other] = depth[v] + 1;
                        parent_edge[inc.other] = inc.edge;
                        tree.insert(inc.edge);
                        q.push_back(inc.other);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for e in 0..g.m() {
            if tree.contains(e) {
                continue;
            }
            let mut c = BitSet::new(g.m());
            c.insert(e);
            let (mut x, mut y) = g.endpoints(e);
            while x != y {
                if depth[x] < depth[y] {
                    std::mem::swap(&mut x, &mut y);
                }
                let pe = parent_edge[x];
                c.insert(pe);
                x = g.other_end(pe, x);
            }
            basis.push(c);
        }
        basis
    }

    /// Walks the components of even subgraph `f`, returning per-circuit costs,
    /// isolated-vertex count and the out-circuit (if any).
    fn evaluate(&self, piece: &Piece, f: &BitSet) -> Option<Evaluation> {
        let g = &piece.g;
        let n = g.n();
        let mut seen = vec![false; n];
        let mut ev = Evaluation::default();
        for (e, kind) in piece.kinds.iter().enumerate() {
            if let PieceEdge::Virtual(idx) = kind {
                if !f.contains(e) {
                    let c = self.profiles[*idx].none.as_ref()?;
                    ev.rest += c.cost;
                }
            }
        }
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let on: Vec<_> = g.incident(s).iter().filter(|i| f.contains(i.edge)).collect();
            if on.is_empty() {
                if self.two_factor {
                    return None;
                }
                ev.rest += 1;
                continue;
            }
            // Walk the circuit through s.
            let mut verts = 1;
            let mut virtuals = Vec::new();
            let mut has_out = false;
            let mut prev_edge = on[0].edge;
            let mut x = on[0].other;
            let mut edges_on = vec![prev_edge];
            while x != s {
                seen[x] = true;
                verts += 1;
                let next = g
                    .incident(x)
                    .iter()
                    .find(|i| f.contains(i.edge) && i.edge != prev_edge)
                    .expect("degree two in an even subgraph");
                prev_edge = next.edge;
                edges_on.push(prev_edge);
                x = next.other;
            }
            for &e in &edges_on {
                match &piece.kinds[e] {
                    PieceEdge::Virtual(idx) => virtuals.push(*idx),
                    PieceEdge::Out(_) => has_out = true,
                    PieceEdge::Real(_) => {}
                }
            }
            let mut cc = CircuitCost::new(verts);
            for &idx in &virtuals {
                cc.add_virtual(idx, &self.profiles[idx]);
            }
            if has_out {
                ev.out = Some(cc);
            } else {
                let c = cc.at_parity(0).min(cc.at_parity(1).saturating_add(1));
                if c >= INF {
                    return None;
                }
                ev.rest += c;
            }
        }
        Some(ev)
    }

    fn leaf(&mut self, piece: &Piece) -> Result<Profile, BudgetExhausted> {
        let basis = Self::cycle_basis(&piece.g);
        let mut cur = BitSet::new(piece.g.m());
        // best (cost, set) for none / through0 / through1 (or whole when no out)
        let mut best: [Option<(u32, BitSet)>; 3] = [None, None, None];
        let total = 1u64 << basis.len();
        for i in 0..total {
            if i & 0xff == 0 {
                self.budget.tick()?;
            }
            if i > 0 {
                cur.xor_with(&basis[(i.trailing_zeros()) as usize]);
            }
            let Some(ev) = self.evaluate(piece, &cur) else {
                continue;
            };
            let mut offer = |slot: usize, cost: u32| {
                if cost < INF && best[slot].as_ref().is_none_or(|(b, _)| cost < *b) {
                    best[slot] = Some((cost, cur.clone()));
                }
            };
            match (&ev.out, piece.out) {
                (Some(cc), _) => {
                    offer(1, ev.rest.saturating_add(cc.at_parity(0)));
                    offer(2, ev.rest.saturating_add(cc.at_parity(1)));
                }
                (None, _) => offer(0, ev.rest),
            }
        }
        let mut prof = Profile::default();
        if let Some((c, f)) = &best[0] {
            prof.none = Some(Choice {
                cost: *c,
                edges: self.realize(piece, f, None),
            });
        }
        for p in 0..2 {
            if let Some((c, f)) = &best[p + 1] {
                prof.through[p] = Some(Choice {
                    cost: *c,
                    edges: self.realize(piece, f, Some(p as u8)),
                });
            }
        }
        Ok(prof)
    }

    /// Expands an even subgraph of a piece into original edges, choosing each virtual
    /// edge's option exactly as `evaluate` priced it.
    fn realize(&self, piece: &Piece, f: &BitSet, out_parity: Option<u8>) -> BitSet {
        let g = &piece.g;
        let mut edges = BitSet::new(self.orig_m);
        let mut seen_edge = vec![false; g.m()];
        for (e, kind) in piece.kinds.iter().enumerate() {
            match kind {
                PieceEdge::Real(o) if f.contains(e) => edges.insert(*o),
                PieceEdge::Out(list) if f.contains(e) => list.iter().for_each(|&o| edges.insert(o)),
                PieceEdge::Virtual(idx) if !f.contains(e) => {
                    edges.union_with(&self.profiles[*idx].none.as_ref().unwrap().edges)
                }
                _ => {}
            }
        }
        for s in 0..g.m() {
            if !f.contains(s) || seen_edge[s] {
                continue;
            }
            // Collect the circuit containing edge s.
            let mut circuit = vec![s];
            seen_edge[s] = true;
            let (start, mut x) = g.endpoints(s);
            let mut prev = s;
            let mut verts = 1;
            while x != start {
                verts += 1;
                let next = g
                    .incident(x)
                    .iter()
                    .find(|i| f.contains(i.edge) && i.edge != prev)
                    .unwrap();
                prev = next.edge;
                seen_edge[prev] = true;
                circuit.push(prev);
                x = next.other;
            }
            let mut cc = CircuitCost::new(verts);
            let mut has_out = false;
            let mut virtuals = Vec::new();
            for &e in &circuit {
                match &piece.kinds[e] {
                    PieceEdge::Virtual(idx) => {
                        virtuals.push(*idx);
                        cc.add_virtual(*idx, &self.profiles[*idx]);
                    }
                    PieceEdge::Out(_) => has_out = true,
                    PieceEdge::Real(_) => {}
                }
            }
            let target = if has_out {
                out_parity.expect("out circuit priced with a parity")
            } else if cc.at_parity(0) <= cc.at_parity(1).saturating_add(1) {
                0
            } else {
                1
            };
            let flip = (cc.nat != target).then_some(cc.flip).flatten();
            for idx in virtuals {
                let p = &self.profiles[idx];
                let c0 = p.through[0].as_ref().map(|c| c.cost);
                let c1 = p.through[1].as_ref().map(|c| c.cost);
                let mut parity = match (c0, c1) {
                    (Some(a), Some(b)) => (b < a) as usize,
                    (Some(_), None) => 0,
                    _ => 1,
                };
                if flip == Some(idx) {
                    parity ^= 1;
                }
                edges.union_with(&p.through[parity].as_ref().unwrap().edges);
            }
        }
        edges
    }
}

#[derive(Debug, Default)]
struct Evaluation {
    rest: u32,
    out: Option<CircuitCost>,
}

fn decompose(
    g: &MultiGraph,
    two_factor: bool,
    out: Option<EdgeId>,
    budget: &Budget,
) -> Result<Profile, BudgetExhausted> {
    let mut kinds: Vec<PieceEdge> = (0..g.m()).map(PieceEdge::Real).collect();
    if let Some(e) = out {
        kinds[e] = PieceEdge::Out(vec![e]);
    }
    let mut d = Decomposer {
        orig_m: g.m(),
        two_factor,
        budget,
        profiles: Vec::new(),
    };
    d.solve(Piece {
        g: g.clone(),
        kinds,
        out,
    })
}

/// Smallest number of odd components over all even factors.
pub fn weak_oddness(g: &CubicGraph, budget: &Budget) -> Result<(u32, EvenFactor), FactorError> {
    let prof = decompose(g, false, None, budget).map_err(|_| FactorError::BudgetExhausted { lower: 0, upper: None })?;
    let c = prof.none.expect("the empty even factor always exists");
    let f = EvenFactor::from_edges(g, &c.edges).expect("decomposition yields an even factor");
    debug_assert_eq!(f.odd_components() as u32, c.cost);
    Ok((c.cost, f))
}

/// Oddness computed by the 2-edge-cut decomposition instead of the matching fold.
pub fn oddness_decomposed(g: &CubicGraph, budget: &Budget) -> Result<(u32, EvenFactor), FactorError> {
    let prof = decompose(g, true, None, budget).map_err(|_| FactorError::BudgetExhausted { lower: 0, upper: None })?;
    let c = prof.none.ok_or(FactorError::NoTwoFactor)?;
    let f = EvenFactor::from_edges(g, &c.edges).expect("decomposition yields a 2-factor");
    debug_assert!(f.is_two_factor());
    debug_assert_eq!(f.odd_components() as u32, c.cost);
    Ok((c.cost, f))
}

/// Optimal factors relative to one edge `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFactorProfile {
    /// Fewest odd components over factors avoiding `e`.
    pub avoiding: Option<u32>,
    /// Fewest odd components over factors where `e` lies on an even circuit.
    pub on_even_circuit: Option<u32>,
    /// Fewest odd components over factors where `e` lies on an odd circuit.
    pub on_odd_circuit: Option<u32>,
}

impl EdgeFactorProfile {
    pub fn overall(&self) -> Option<u32> {
        [self.avoiding, self.on_even_circuit, self.on_odd_circuit]
            .into_iter()
            .flatten()
            .min()
    }

    pub fn containing(&self) -> Option<u32> {
        [self.on_even_circuit, self.on_odd_circuit].into_iter().flatten().min()
    }
}

/// Even-factor (or 2-factor when `two_factor`) optima split by how they use edge `e`.
pub fn edge_factor_profile(
    g: &CubicGraph,
    e: EdgeId,
    two_factor: bool,
    budget: &Budget,
) -> Result<EdgeFactorProfile, FactorError> {
    let prof = decompose(g, two_factor, Some(e), budget)
        .map_err(|_| FactorError::BudgetExhausted { lower: 0, upper: None })?;
    Ok(EdgeFactorProfile {
        avoiding: prof.none.map(|c| c.cost),
        on_even_circuit: prof.through[0].as_ref().map(|c| c.cost),
        on_odd_circuit: prof.through[1].as_ref().map(|c| c.cost + 1),
    })
}

fn require_bridgeless(g: &MultiGraph) -> Result<(), FactorError> {
    if bridges(g).is_empty() {
        Ok(())
    } else {
        Err(FactorError::BridgeDetected)
    }
}

/// Above this many perfect matchings, gamma2 and mu_k switch to the labelling search.
pub const MATERIALIZE_LIMIT: usize = 5000;
/// Largest number of k-multisets scanned exhaustively.
const MULTISET_LIMIT: f64 = 2.0e7;

fn cover_search(
    g: &MultiGraph,
    k: usize,
    cost: CoverCost,
    budget: &Budget,
) -> Result<(u32, Vec<BitSet>), BudgetExhausted> {
    let eng = Engine::new(g, Rule::Cover { k: k as u8, cost }, budget);
    let (v, vals) = eng.solve(INF)?.expect("a bridgeless cubic graph has perfect matchings");
    let ms = (0..k)
        .map(|i| BitSet::from_indices(g.m(), (0..g.m()).filter(|&e| vals[e] & (1 << i) != 0)))
        .collect();
    Ok((v, ms))
}

/// Minimum `|M1 ∩ M2|` over pairs of perfect matchings (equal pairs allowed).
pub fn gamma2(g: &CubicGraph, budget: &Budget) -> Result<(u32, (PerfectMatching, PerfectMatching)), FactorError> {
    require_bridgeless(g)?;
    let exhausted = |_| FactorError::BudgetExhausted { lower: 0, upper: None };
    if count_perfect_matchings(g, MATERIALIZE_LIMIT + 1) <= MATERIALIZE_LIMIT {
        let pms = perfect_matchings(g);
        let mut best = (u32::MAX, 0, 0);
        for i in 0..pms.len() {
            budget.tick().map_err(exhausted)?;
            for j in i..pms.len() {
                let c = pms[i].intersection_count(&pms[j]) as u32;
                if c < best.0 {
                    best = (c, i, j);
                }
            }
        }
        let (c, i, j) = best;
        return Ok((
            c,
            (PerfectMatching::from_set(&pms[i]), PerfectMatching::from_set(&pms[j])),
        ));
    }
    let (v, ms) = cover_search(g, 2, CoverCost::Shared, budget).map_err(exhausted)?;
    Ok((
        v,
        (PerfectMatching::from_set(&ms[0]), PerfectMatching::from_set(&ms[1])),
    ))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn mu_exhaustive(
    g: &MultiGraph,
    pms: &[BitSet],
    k: usize,
    budget: &Budget,
) -> Result<(u32, Vec<usize>), BudgetExhausted> {
    struct St<'a> {
        pms: &'a [BitSet],
        k: usize,
        m: usize,
        best: (u32, Vec<usize>),
        pick: Vec<usize>,
        budget: &'a Budget,
    }
    fn rec(st: &mut St, start: usize, covered: &BitSet) -> Result<(), BudgetExhausted> {
        let uncovered = (st.m - covered.count()) as u32;
        if st.pick.len() == st.k {
            st.budget.tick()?;
            if uncovered < st.best.0 {
                st.best = (uncovered, st.pick.clone());
            }
            return Ok(());
        }
        // Each further matching covers at most n/2 new edges.
        let left = (st.k - st.pick.len()) as u32;
        let reach = left * (st.pms[0].count() as u32);
        if uncovered.saturating_sub(reach) >= st.best.0 {
            return Ok(());
        }
        for i in start..st.pms.len() {
            let mut c = covered.clone();
            c.union_with(&st.pms[i]);
            st.pick.push(i);
            rec(st, i, &c)?;
            st.pick.pop();
            if st.best.0 == 0 {
                break;
            }
        }
        Ok(())
    }
    let mut st = St {
        pms,
        k,
        m: g.m(),
        best: (u32::MAX, Vec::new()),
        pick: Vec::new(),
        budget,
    };
    rec(&mut st, 0, &BitSet::new(g.m()))?;
    Ok(st.best)
}

/// Fewest edges left uncovered by a list of `k` perfect matchings (repetition allowed).
pub fn mu_k(g: &CubicGraph, k: usize, budget: &Budget) -> Result<(u32, Vec<PerfectMatching>), FactorError> {
    if !(1..=6).contains(&k) {
        return Err(FactorError::UnsupportedK(k));
    }
    require_bridgeless(g)?;
    let exhausted = |_| FactorError::BudgetExhausted { lower: 0, upper: None };
    let count = count_perfect_matchings(g, MATERIALIZE_LIMIT + 1);
    if count <= MATERIALIZE_LIMIT && binomial(count + k - 1, k) <= MULTISET_LIMIT {
        let pms = perfect_matchings(g);
        let (v, pick) = mu_exhaustive(g, &pms, k, budget).map_err(exhausted)?;
        return Ok((v, pick.iter().map(|&i| PerfectMatching::from_set(&pms[i])).collect()));
    }
    let (v, ms) = cover_search(g, k, CoverCost::Uncovered, budget).map_err(exhausted)?;
    Ok((v, ms.iter().map(PerfectMatching::from_set).collect()))
}

/// Same as [`mu_k`] but always through the labelling search (used as a cross-check).
pub fn mu_k_search(g: &CubicGraph, k: usize, budget: &Budget) -> Result<u32, FactorError> {
    if !(1..=6).contains(&k) {
        return Err(FactorError::UnsupportedK(k));
    }
    require_bridgeless(g)?;
    cover_search(g, k, CoverCost::Uncovered, budget)
        .map(|(v, _)| v)
        .map_err(|_| FactorError::BudgetExhausted { lower: 0, upper: None })
}

/// `m_k = 1 - mu_k / |E|` as a reduced fraction `(numerator, denominator)`.
pub fn m_k_fraction(mu: u32, edges: usize) -> (u64, u64) {
    let (num, den) = ((edges as u64) - mu as u64, edges as u64);
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcessiveIndex {
    Value(usize),
    Exceeds(usize),
}

/// Smallest `k` with `mu_k = 0`, searched for `k = 3..=cap` (at most 6).
pub fn excessive_index(g: &CubicGraph, cap: usize, budget: &Budget) -> Result<ExcessiveIndex, FactorError> {
    require_bridgeless(g)?;
    for k in 3..=cap.min(6) {
        if mu_k(g, k, budget)?.0 == 0 {
            return Ok(ExcessiveIndex::Value(k));
        }
    }
    Ok(ExcessiveIndex::Exceeds(cap))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreDecomposition {
    pub matchings: [Vec<EdgeId>; 3],
    /// `by_multiplicity[i]` holds the edges in exactly `i` of the three matchings.
    pub by_multiplicity: [Vec<EdgeId>; 4],
    /// Edges of the core `E0 ∪ E2 ∪ E3`.
    pub core_edges: Vec<EdgeId>,
    /// The core is not all of G.
    pub is_proper: bool,
    /// Every vertex of the core has degree 2 in it.
    pub is_cyclic: bool,
}

pub fn core_of(g: &CubicGraph, ms: [&BitSet; 3]) -> Result<CoreDecomposition, FactorError> {
    for (i, m) in ms.iter().enumerate() {
        if !is_perfect_matching(g, m) {
            return Err(FactorError::NotAMatching(i));
        }
    }
    let mut by: [Vec<EdgeId>; 4] = Default::default();
    for e in 0..g.m() {
        let c = ms.iter().filter(|m| m.contains(e)).count();
        by[c].push(e);
    }
    let mut core_edges: Vec<EdgeId> = by[0].iter().chain(&by[2]).chain(&by[3]).copied().collect();
    core_edges.sort_unstable();
    let mut deg = vec![0usize; g.n()];
    for &e in &core_edges {
        let (a, b) = g.endpoints(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    let is_cyclic = !core_edges.is_empty() && deg.iter().all(|&d| d == 0 || d == 2);
    Ok(CoreDecomposition {
        matchings: [ms[0].to_vec(), ms[1].to_vec(), ms[2].to_vec()],
        is_proper: !by[1].is_empty(),
        by_multiplicity: by,
        core_edges,
        is_cyclic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flower_snark, k33, k4, petersen};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(&k4()).len(), 3);
        assert_eq!(perfect_matchings(&petersen()).len(), 6);
        assert_eq!(perfect_matchings(&k33()).len(), 6);
        let pms = perfect_matchings(&petersen());
        let lists: Vec<Vec<usize>> = pms.iter().map(BitSet::to_vec).collect();
        let mut sorted = lists.clone();
        sorted.sort();
        assert_eq!(lists, sorted);
        assert!(pms.iter().all(|m| is_perfect_matching(&petersen(), m)));
    }

    #[test]
    fn petersen_factors() {
        let p = petersen();
        assert_eq!(oddness(&p, &b()).unwrap().0, 2);
        assert_eq!(oddness_decomposed(&p, &b()).unwrap().0, 2);
        let (w, f) = weak_oddness(&p, &b()).unwrap();
        assert_eq!((w, f.odd_components()), (2, 2));
        assert_eq!(gamma2(&p, &b()).unwrap().0, 1);
        assert_eq!(mu_k(&p, 2, &b()).unwrap().0, 6);
        assert_eq!(mu_k(&p, 3, &b()).unwrap().0, 3);
        assert_eq!(mu_k(&p, 4, &b()).unwrap().0, 1);
        assert_eq!(mu_k(&p, 5, &b()).unwrap().0, 0);
        assert_eq!(mu_k_search(&p, 3, &b()).unwrap(), 3);
        assert_eq!(mu_k_search(&p, 5, &b()).unwrap(), 0);
        assert_eq!(excessive_index(&p, 6, &b()).unwrap(), ExcessiveIndex::Value(5));
        assert_eq!(m_k_fraction(6, 15), (3, 5));
    }

    #[test]
    fn petersen_two_factors_are_two_pentagons() {
        let p = petersen();
        for m in perfect_matchings(&p) {
            let f = EvenFactor::from_edges(&p, &m.complement()).unwrap();
            let mut sizes: Vec<usize> = f.components.iter().map(|c| c.vertices).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![5, 5]);
        }
    }

    #[test]
    fn class_one_factors() {
        let g = k33();
        assert_eq!(oddness(&g, &b()).unwrap().0, 0);
        assert_eq!(weak_oddness(&g, &b()).unwrap().0, 0);
        assert_eq!(gamma2(&g, &b()).unwrap().0, 0);
        assert_eq!(mu_k(&g, 3, &b()).unwrap().0, 0);
        assert_eq!(excessive_index(&g, 6, &b()).unwrap(), ExcessiveIndex::Value(3));
    }

    #[test]
    fn flower_oddness() {
        let j5 = flower_snark(5).unwrap();
        assert_eq!(oddness(&j5, &b()).unwrap().0, 2);
        assert_eq!(weak_oddness(&j5, &b()).unwrap().0, 2);
    }

    #[test]
    fn cores() {
        let p = petersen();
        let pms = perfect_matchings(&p);
        let same = core_of(&p, [&pms[0], &pms[0], &pms[0]]).unwrap();
        assert!(!same.is_proper);
        assert_eq!(same.core_edges.len(), 15);
        let (mu, list) = mu_k(&p, 3, &b()).unwrap();
        let sets: Vec<BitSet> = list.iter().map(|m| m.to_set(15)).collect();
        let core = core_of(&p, [&sets[0], &sets[1], &sets[2]]).unwrap();
        assert!(core.is_proper);
        assert_eq!(core.by_multiplicity[0].len() as u32, mu);
        assert_eq!(
            core_of(&p, [&pms[0], &BitSet::new(15), &pms[1]]).unwrap_err(),
            FactorError::NotAMatching(1)
        );
    }

    #[test]
    fn bridge_rejected() {
        // two K4s with one edge subdivided, joined by a bridge between the new vertices
        let g = MultiGraph::from_edges(
            10,
            [
                (0, 4),
                (4, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (5, 9),
                (9, 6),
                (5, 7),
                (5, 8),
                (6, 7),
                (6, 8),
                (7, 8),
                (4, 9),
            ],
        )
        .unwrap();
        let g = crate::graph::as_cubic(g).unwrap();
        assert_eq!(gamma2(&g, &b()).unwrap_err(), FactorError::BridgeDetected);
        assert_eq!(mu_k(&g, 3, &b()).unwrap_err(), FactorError::BridgeDetected);
        assert_eq!(mu_k(&petersen(), 7, &b()).unwrap_err(), FactorError::UnsupportedK(7));
    }
}
