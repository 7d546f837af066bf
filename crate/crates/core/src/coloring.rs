//! Edge colorings: chromatic index, the deletion measures d, r and rho, the
//! 2-colorable defect r2, Kempe switches and Boole colors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::budget::{Budget, BudgetExhausted};
use crate::graph::{CubicGraph, EdgeId, MultiGraph, VertexId};
use crate::search::{tait_coloring, Engine, Rule, INF};
use crate::structure::bridges;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("budget exhausted; value is at least {lower}{}", upper.map(|u| format!(" and at most {u}")).unwrap_or_default())]
    BudgetExhausted { lower: u32, upper: Option<u32> },
    #[error("graph has a bridge")]
    BridgeDetected,
    #[error("vertex {vertex} has degree {degree}, expected at most 3")]
    NotSubcubic { vertex: VertexId, degree: usize },
    #[error("no edge at vertex {0} carries a color of the pair")]
    NoChainAtVertex(VertexId),
    #[error("edge at vertex {0} is uncolored")]
    UncoloredEdgeAtVertex(VertexId),
    #[error("invalid color pair ({0}, {1})")]
    InvalidPair(u8, u8),
}

impl ColoringError {
    fn exhausted(lower: u32, upper: Option<u32>) -> impl FnOnce(BudgetExhausted) -> Self {
        move |_| ColoringError::BudgetExhausted { lower, upper }
    }
}

/// An element of the Klein four-group of Boole colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BooleColor {
    Zero,
    One1,
    One2,
    One3,
}

impl BooleColor {
    pub const ALL: [BooleColor; 4] = [BooleColor::Zero, BooleColor::One1, BooleColor::One2, BooleColor::One3];

    /// `0` for the identity, `a` for `1_a`.
    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> BooleColor {
        BooleColor::ALL[(i & 3) as usize]
    }

    /// Boole color of a single edge with Tait color `c` in 1..=3.
    pub fn of_color(c: u8) -> BooleColor {
        debug_assert!((1..=3).contains(&c));
        BooleColor::from_index(c)
    }
}

impl std::ops::Add for BooleColor {
    type Output = BooleColor;
    fn add(self, rhs: BooleColor) -> BooleColor {
        klein_add(self, rhs)
    }
}

/// Klein group addition: `1_a + 1_a = 0`, `1_a + 1_b = 1_c`.
pub fn klein_add(a: BooleColor, b: BooleColor) -> BooleColor {
    BooleColor::from_index(a.index() ^ b.index())
}

/// Boole color of a color multiset.
pub fn boole_of_colors(colors: impl IntoIterator<Item = u8>) -> BooleColor {
    colors
        .into_iter()
        .fold(BooleColor::Zero, |acc, c| acc + BooleColor::of_color(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palette {
    /// Every edge colored from 1..=3.
    Tait,
    /// Colors 0..=3, with 0 the extra class; must be proper.
    Proper4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub colors: Vec<u8>,
    pub palette: Palette,
}

impl EdgeColoring {
    pub fn tait(colors: Vec<u8>) -> Self {
        EdgeColoring {
            colors,
            palette: Palette::Tait,
        }
    }

    pub fn proper4(colors: Vec<u8>) -> Self {
        EdgeColoring {
            colors,
            palette: Palette::Proper4,
        }
    }

    /// Edges of color class 0 (proper4 mode).
    pub fn class_zero(&self) -> Vec<EdgeId> {
        (0..self.colors.len()).filter(|&e| self.colors[e] == 0).collect()
    }
}

/// True iff adjacent edges get distinct colors and colors lie in the palette.
pub fn is_proper(g: &MultiGraph, col: &EdgeColoring) -> bool {
    let lo = match col.palette {
        Palette::Tait => 1,
        Palette::Proper4 => 0,
    };
    col.colors.len() == g.m()
        && col.colors.iter().all(|&c| (lo..=3).contains(&c))
        && (0..g.n()).all(|v| {
            let mut seen = 0u8;
            g.incident(v).iter().all(|i| {
                let bit = 1 << col.colors[i.edge];
                let fresh = seen & bit == 0;
                seen |= bit;
                fresh
            })
        })
}

/// Boole color of vertex `v`: the Klein sum of its incident edge colors.
pub fn boole_value(g: &MultiGraph, col: &EdgeColoring, v: VertexId) -> Result<BooleColor, ColoringError> {
    let mut acc = BooleColor::Zero;
    for inc in g.incident(v) {
        let c = col.colors[inc.edge];
        if !(1..=3).contains(&c) {
            return Err(ColoringError::UncoloredEdgeAtVertex(v));
        }
        acc = acc + BooleColor::of_color(c);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictWitness {
    pub coloring: EdgeColoring,
    pub conflicts: Vec<VertexId>,
    /// Boole color of each conflicting vertex, aligned with `conflicts`.
    pub types: Vec<BooleColor>,
    /// Exactly one repeated color at every conflict.
    pub normalized: bool,
}

impl ConflictWitness {
    /// Derives conflicts from a Tait-palette coloring (colors 1..=3 on every edge).
    pub fn from_coloring(g: &MultiGraph, colors: Vec<u8>) -> Result<Self, ColoringError> {
        let coloring = EdgeColoring::tait(colors);
        let mut conflicts = Vec::new();
        let mut types = Vec::new();
        let mut normalized = true;
        for v in 0..g.n() {
            let mut seen = 0u8;
            for inc in g.incident(v) {
                seen |= 1 << coloring.colors[inc.edge];
            }
            let distinct = seen.count_ones() as usize;
            if distinct < g.degree(v) {
                conflicts.push(v);
                types.push(boole_value(g, &coloring, v)?);
                normalized &= distinct + 1 == g.degree(v);
            }
        }
        Ok(ConflictWitness {
            coloring,
            conflicts,
            types,
            normalized,
        })
    }

    /// Counts of conflicts of type 1_1, 1_2, 1_3.
    pub fn type_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for t in &self.types {
            if *t != BooleColor::Zero {
                c[t.index() as usize - 1] += 1;
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticIndex {
    pub index: u8,
    /// A Tait coloring when `index == 3`.
    pub witness: Option<EdgeColoring>,
}

fn check_subcubic(g: &MultiGraph) -> Result<(), ColoringError> {
    match (0..g.n()).find(|&v| g.degree(v) > 3) {
        Some(v) => Err(ColoringError::NotSubcubic {
            vertex: v,
            degree: g.degree(v),
        }),
        None => Ok(()),
    }
}

/// 3 with a Tait coloring, or 4.
pub fn chromatic_index(g: &CubicGraph, budget: &Budget) -> Result<ChromaticIndex, ColoringError> {
    let col = tait_coloring(g, budget).map_err(ColoringError::exhausted(3, Some(4)))?;
    Ok(match col {
        Some(c) => ChromaticIndex {
            index: 3,
            witness: Some(EdgeColoring::tait(c)),
        },
        None => ChromaticIndex {
            index: 4,
            witness: None,
        },
    })
}

/// Whether a graph of maximum degree at most 3 has a proper 3-edge-coloring.
pub fn is_3_edge_colorable(g: &MultiGraph, budget: &Budget) -> Result<bool, BudgetExhausted> {
    Ok(tait_coloring(g, budget)?.is_some())
}

fn colorable_induced(g: &MultiGraph, keep: &BitSet, budget: &Budget) -> Result<bool, BudgetExhausted> {
    let (h, _, _) = g.induced_subgraph(keep);
    is_3_edge_colorable(&h, budget)
}

/// Shrinks an uncolorable induced subgraph on `start` to an inclusion-minimal one,
/// removing vertices far from `seed` first.
fn shrink_zone(g: &MultiGraph, start: &BitSet, seed: VertexId, budget: &Budget) -> Result<BitSet, BudgetExhausted> {
    let (h, vmap, _) = g.induced_subgraph(start);
    let local_seed = vmap.iter().position(|&v| v == seed).unwrap_or(0);
    let dist = h.bfs_distances(local_seed);
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(dist[i]), i));
    let mut zone = start.clone();
    for i in order {
        let v = vmap[i];
        zone.remove(v);
        if colorable_induced(g, &zone, budget)? {
            zone.insert(v);
        }
    }
    Ok(zone)
}

const ZONE_SEEDS: usize = 24;

/// Vertex-disjoint vertex sets, each inducing a non-3-edge-colorable subgraph, found
/// greedily by shrinking from several seeds and packing the smallest candidates first.
pub fn conflict_zones(g: &MultiGraph, budget: &Budget) -> Result<Vec<Vec<VertexId>>, BudgetExhausted> {
    let mut free = BitSet::full(g.n());
    let mut zones = Vec::new();
    loop {
        if colorable_induced(g, &free, budget)? {
            break;
        }
        let members = free.to_vec();
        let step = members.len().div_ceil(ZONE_SEEDS).max(1);
        let mut cands: Vec<BitSet> = Vec::new();
        for &seed in members.iter().step_by(step) {
            let z = shrink_zone(g, &free, seed, budget)?;
            if !cands.contains(&z) {
                cands.push(z);
            }
        }
        cands.sort_by_key(|z| (z.count(), z.to_vec()));
        let mut taken = BitSet::new(g.n());
        for z in cands {
            if z.is_disjoint(&taken) {
                taken.union_with(&z);
                zones.push(z.to_vec());
            }
        }
        free.difference_with(&taken);
    }
    Ok(zones)
}

/// Greedy coloring minimizing conflicts edge by edge; an upper bound for d.
fn greedy_conflicts(g: &MultiGraph) -> u32 {
    let mut colors = vec![0u8; g.m()];
    for v in g.bfs_order(0) {
        for inc in g.incident(v) {
            if colors[inc.edge] != 0 {
                continue;
            }
            let (a, b) = g.endpoints(inc.edge);
            let best = (1..=3)
                .min_by_key(|&c| {
                    [a, b]
                        .iter()
                        .flat_map(|&w| g.incident(w))
                        .filter(|i| colors[i.edge] == c)
                        .count()
                })
                .unwrap();
            colors[inc.edge] = best;
        }
    }
    ConflictWitness::from_coloring(g, colors)
        .map(|w| w.conflicts.len() as u32)
        .unwrap_or(u32::MAX)
}

/// Minimum number of conflicting vertices over all 3-edge-colorings, with a
/// normalized witness.
pub fn min_conflict_coloring(g: &MultiGraph, budget: &Budget) -> Result<(u32, ConflictWitness), ColoringError> {
    check_subcubic(g)?;
    let upper = greedy_conflicts(g);
    let zones = conflict_zones(g, budget).map_err(ColoringError::exhausted(0, Some(upper)))?;
    let mut lower = zones.len() as u32;
    let mut eng = Engine::new(g, Rule::Conflict, budget);
    eng.set_zones(zones);
    loop {
        match eng.optimum(lower + 1) {
            Ok(Some(d)) => {
                let ok = eng
                    .realize(d)
                    .map_err(ColoringError::exhausted(d, Some(upper.min(d))))?;
                assert!(ok, "optimum must be realizable");
                let w = ConflictWitness::from_coloring(g, eng.values().to_vec())?;
                debug_assert_eq!(w.conflicts.len() as u32, d);
                return Ok((d, w));
            }
            Ok(None) => lower += 1,
            Err(_) => {
                return Err(ColoringError::BudgetExhausted {
                    lower,
                    upper: Some(upper),
                })
            }
        }
    }
}

struct HittingSearch<'a> {
    g: &'a MultiGraph,
    zones: Vec<BitSet>,
    budget: &'a Budget,
    /// Edge mode deletes a matching; vertex mode deletes vertices.
    edges: bool,
}

impl HittingSearch<'_> {
    fn remaining(&self, deleted: &BitSet) -> (MultiGraph, Vec<VertexId>) {
        if self.edges {
            let (h, _) = self.g.delete_edges(deleted);
            (h, (0..self.g.n()).collect())
        } else {
            let (h, vmap, _) = self.g.delete_vertices(deleted);
            (h, vmap)
        }
    }

    fn zone_hit(&self, z: &BitSet, deleted: &BitSet) -> bool {
        if self.edges {
            deleted.iter().any(|e| {
                let (a, b) = self.g.endpoints(e);
                z.contains(a) && z.contains(b)
            })
        } else {
            !z.is_disjoint(deleted)
        }
    }

    fn lower_bound(&self, deleted: &BitSet) -> usize {
        deleted.count() + self.zones.iter().filter(|z| !self.zone_hit(z, deleted)).count()
    }

    /// Candidates that must contain an element of any completion.
    fn branch_set(&self, deleted: &BitSet) -> Result<Option<Vec<usize>>, BudgetExhausted> {
        let witness = match self.zones.iter().find(|z| !self.zone_hit(z, deleted)) {
            Some(z) => z.clone(),
            None => {
                let (h, vmap) = self.remaining(deleted);
                if is_3_edge_colorable(&h, self.budget)? {
                    return Ok(None);
                }
                let all = BitSet::full(h.n());
                let local = shrink_zone(&h, &all, 0, self.budget)?;
                BitSet::from_indices(self.g.n(), local.iter().map(|v| vmap[v]))
            }
        };
        let out = if self.edges {
            (0..self.g.m())
                .filter(|&e| {
                    let (a, b) = self.g.endpoints(e);
                    !deleted.contains(e) && witness.contains(a) && witness.contains(b)
                })
                .collect()
        } else {
            witness.iter().collect()
        };
        Ok(Some(out))
    }

    fn allowed(&self, x: usize, deleted: &BitSet, banned: &BitSet) -> bool {
        if banned.contains(x) || deleted.contains(x) {
            return false;
        }
        if self.edges {
            let (a, b) = self.g.endpoints(x);
            !deleted.iter().any(|f| {
                let (c, d) = self.g.endpoints(f);
                a == c || a == d || b == c || b == d
            })
        } else {
            true
        }
    }

    fn dfs(&self, deleted: &mut BitSet, banned: &mut BitSet, k: usize) -> Result<bool, BudgetExhausted> {
        self.budget.tick()?;
        if self.lower_bound(deleted) > k {
            return Ok(false);
        }
        let Some(cands) = self.branch_set(deleted)? else {
            return Ok(true);
        };
        if deleted.count() == k {
            return Ok(false);
        }
        let mut newly_banned = Vec::new();
        let mut found = false;
        for x in cands {
            if !self.allowed(x, deleted, banned) {
                continue;
            }
            deleted.insert(x);
            if self.dfs(deleted, banned, k)? {
                found = true;
                break;
            }
            deleted.remove(x);
            banned.insert(x);
            newly_banned.push(x);
        }
        for x in newly_banned {
            banned.remove(x);
        }
        Ok(found)
    }

    fn run(&self) -> Result<(usize, BitSet), ColoringError> {
        let universe = if self.edges { self.g.m() } else { self.g.n() };
        let mut k = self.zones.len();
        loop {
            let mut deleted = BitSet::new(universe);
            let mut banned = BitSet::new(universe);
            match self.dfs(&mut deleted, &mut banned, k) {
                Ok(true) => return Ok((k, deleted)),
                Ok(false) => k += 1,
                Err(_) => {
                    return Err(ColoringError::BudgetExhausted {
                        lower: k as u32,
                        upper: None,
                    })
                }
            }
        }
    }
}

fn zone_sets(g: &MultiGraph, budget: &Budget) -> Result<Vec<BitSet>, ColoringError> {
    let zones = conflict_zones(g, budget).map_err(ColoringError::exhausted(0, None))?;
    Ok(zones.into_iter().map(|z| g.vertex_set(z)).collect())
}

/// Minimum size of color class 0 over proper 4-edge-colorings, with a minimal coloring.
pub fn resistance(g: &CubicGraph, budget: &Budget) -> Result<(u32, EdgeColoring), ColoringError> {
    let zones = conflict_zones(g, budget).map_err(ColoringError::exhausted(0, None))?;
    let mut lower = zones.len() as u32;
    let mut eng = Engine::new(g, Rule::Proper4, budget);
    eng.set_zones(zones);
    loop {
        match eng.optimum(lower + 1) {
            Ok(Some(r)) => {
                let ok = eng.realize(r).map_err(ColoringError::exhausted(r, Some(r)))?;
                assert!(ok, "optimum must be realizable");
                let col = EdgeColoring::proper4(eng.values().to_vec());
                debug_assert_eq!(col.class_zero().len() as u32, r);
                return Ok((r, col));
            }
            Ok(None) => lower += 1,
            Err(_) => return Err(ColoringError::BudgetExhausted { lower, upper: None }),
        }
    }
}

/// Resistance computed independently as the fewest pairwise non-adjacent edges whose
/// deletion leaves a 3-edge-colorable graph.
pub fn resistance_by_deletion(g: &CubicGraph, budget: &Budget) -> Result<u32, ColoringError> {
    let s = HittingSearch {
        g,
        zones: zone_sets(g, budget)?,
        budget,
        edges: true,
    };
    Ok(s.run()?.0 as u32)
}

/// Fewest vertices whose deletion leaves a 3-edge-colorable graph.
pub fn vertex_resistance(g: &CubicGraph, budget: &Budget) -> Result<(u32, Vec<VertexId>), ColoringError> {
    let s = HittingSearch {
        g,
        zones: zone_sets(g, budget)?,
        budget,
        edges: false,
    };
    let (k, deleted) = s.run()?;
    Ok((k as u32, deleted.to_vec()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoColorable {
    pub c2: u32,
    pub r2: u32,
    pub edges: Vec<EdgeId>,
}

/// Largest 2-edge-colorable subgraph; `r2 = (2/3)|E| - c2`.
pub fn max_2_colorable(g: &CubicGraph, budget: &Budget) -> Result<TwoColorable, ColoringError> {
    if !bridges(g).is_empty() {
        return Err(ColoringError::BridgeDetected);
    }
    let eng = Engine::new(g, Rule::TwoColor, budget);
    let (ends, vals) = eng
        .solve(INF)
        .map_err(ColoringError::exhausted(0, None))?
        .expect("the empty subgraph is always feasible");
    let r2 = ends / 2;
    let edges: Vec<EdgeId> = (0..g.m()).filter(|&e| vals[e] != 0).collect();
    let c2 = edges.len() as u32;
    debug_assert_eq!(c2 + r2, g.n() as u32);
    Ok(TwoColorable { c2, r2, edges })
}

/// Exchanges colors `a` and `b` on the connected `{a, b}`-colored subgraph through `v`.
pub fn kempe_switch(
    g: &MultiGraph,
    col: &EdgeColoring,
    v: VertexId,
    pair: (u8, u8),
) -> Result<EdgeColoring, ColoringError> {
    let (a, b) = pair;
    if a == b || a > 3 || b > 3 {
        return Err(ColoringError::InvalidPair(a, b));
    }
    let in_pair = |e: EdgeId| col.colors[e] == a || col.colors[e] == b;
    if !g.incident(v).iter().any(|i| in_pair(i.edge)) {
        return Err(ColoringError::NoChainAtVertex(v));
    }
    let mut out = col.clone();
    let mut seen = vec![false; g.n()];
    let mut done = vec![false; g.m()];
    let mut stack = vec![v];
    seen[v] = true;
    while let Some(x) = stack.pop() {
        for inc in g.incident(x) {
            if !in_pair(inc.edge) || done[inc.edge] {
                continue;
            }
            done[inc.edge] = true;
            out.colors[inc.edge] = if col.colors[inc.edge] == a { b } else { a };
            if !seen[inc.other] {
                seen[inc.other] = true;
                stack.push(inc.other);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flower_snark, k33, k4, petersen};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn klein_table() {
        use BooleColor::*;
        assert_eq!(One1 + One2, One3);
        assert_eq!(One2 + One3, One1);
        assert_eq!(One3 + One3, Zero);
        for x in BooleColor::ALL {
            assert_eq!(x + x, Zero);
            assert_eq!(x + Zero, x);
        }
        assert_eq!(boole_of_colors([1, 2, 3]), Zero);
        assert_eq!(boole_of_colors([2, 2]), Zero);
    }

    #[test]
    fn boole_value_needs_colors() {
        let g = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        let col = EdgeColoring::proper4(vec![0]);
        assert_eq!(boole_value(&g, &col, 0), Err(ColoringError::UncoloredEdgeAtVertex(0)));
    }

    #[test]
    fn chromatic_indices() {
        assert_eq!(chromatic_index(&k4(), &b()).unwrap().index, 3);
        assert_eq!(chromatic_index(&petersen(), &b()).unwrap().index, 4);
        let c = chromatic_index(&k33(), &b()).unwrap();
        assert!(is_proper(&k33(), c.witness.as_ref().unwrap()));
        assert_eq!(chromatic_index(&flower_snark(5).unwrap(), &b()).unwrap().index, 4);
    }

    #[test]
    fn petersen_measures() {
        let p = petersen();
        let (d, w) = min_conflict_coloring(&p, &b()).unwrap();
        assert_eq!(d, 2);
        assert!(w.normalized);
        let (r, col) = resistance(&p, &b()).unwrap();
        assert_eq!(r, 2);
        assert!(is_proper(&p, &col));
        assert_eq!(col.class_zero().len(), 2);
        assert_eq!(resistance_by_deletion(&p, &b()).unwrap(), 2);
        let (rho, vs) = vertex_resistance(&p, &b()).unwrap();
        assert_eq!((rho, vs.len()), (2, 2));
        assert_eq!(max_2_colorable(&p, &b()).unwrap().r2, 1);
    }

    #[test]
    fn class_one_measures_vanish() {
        let g = k33();
        assert_eq!(min_conflict_coloring(&g, &b()).unwrap().0, 0);
        assert_eq!(resistance(&g, &b()).unwrap().0, 0);
        assert_eq!(vertex_resistance(&g, &b()).unwrap(), (0, vec![]));
        assert_eq!(max_2_colorable(&g, &b()).unwrap().r2, 0);
    }

    #[test]
    fn subcubic_with_leaves() {
        let star = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(min_conflict_coloring(&star, &b()).unwrap().0, 0);
        let triangle = MultiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(min_conflict_coloring(&triangle, &b()).unwrap().0, 0);
        let k4_4 = MultiGraph::from_edges(2, [(0, 1), (0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(matches!(
            min_conflict_coloring(&k4_4, &b()),
            Err(ColoringError::NotSubcubic { .. })
        ));
    }

    #[test]
    fn kempe_involution() {
        let g = k4();
        let col = chromatic_index(&g, &b()).unwrap().witness.unwrap();
        let once = kempe_switch(&g, &col, 0, (1, 2)).unwrap();
        assert!(is_proper(&g, &once));
        assert_eq!(kempe_switch(&g, &once, 0, (1, 2)).unwrap(), col);
        assert_eq!(
            kempe_switch(&g, &col, 0, (2, 2)).unwrap_err(),
            ColoringError::InvalidPair(2, 2)
        );
    }
}
