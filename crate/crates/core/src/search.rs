//! Exact edge-labelling search with constraint propagation and component caching.
//!
//! Every solver that assigns one small value per edge (Tait colorings, conflict-counting
//! colorings, Z_k flows, Klein flows) runs on this engine. After each assignment the
//! unassigned edges split into connected regions which are solved independently; region
//! optima are memoized by the region's vertex set plus the values already sitting on its
//! incident edges, with color symmetry factored out where the rule allows it.

use std::collections::HashMap;

use crate::budget::{Budget, BudgetExhausted};
use crate::graph::{EdgeId, MultiGraph, VertexId};

pub(crate) const UNSET: u8 = u8::MAX;
pub(crate) const INF: u32 = u32::MAX / 4;
const CACHE_LIMIT: usize = 3_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rule {
    /// Proper colorings with colors 1..=3.
    Tait,
    /// Proper colorings with colors 0..=3; each edge of color 0 costs 1.
    Proper4,
    /// Colors 1..=3, cost 1 per vertex where a color repeats; no color thrice at a vertex.
    Conflict,
    /// Z_k flow on the reference orientation (lower id -> higher id) with every value in
    /// `lo..=k-lo`; `lo = 1` is a nowhere-zero flow.
    Zk { k: u8, lo: u8 },
    /// Klein four-group flow with values 0..=3 (XOR); zeros cost 1 when allowed.
    Klein { allow_zero: bool },
    /// Value 0 leaves an edge out; 1 and 2 properly 2-color the chosen subgraph.
    /// Cost counts path ends (twice the number of path components).
    TwoColor,
    /// Label = set of indices among `k` perfect matchings containing the edge.
    Cover { k: u8, cost: CoverCost },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoverCost {
    /// Edges in no matching cost 1.
    Uncovered,
    /// Edges in two or more matchings cost 1.
    Shared,
}

#[derive(Debug, Clone, Copy)]
enum Bound {
    Exact(u32),
    AtLeast(u32),
}

pub(crate) struct Engine<'a> {
    g: &'a MultiGraph,
    rule: Rule,
    values: Vec<u8>,
    vcost: Vec<u8>,
    total: u32,
    trail: Vec<EdgeId>,
    cache: HashMap<Vec<u8>, Bound>,
    budget: &'a Budget,
    zones: Vec<Vec<VertexId>>,
    vstamp: Vec<u32>,
    estamp: Vec<u32>,
    epoch: u32,
}

impl<'a> Engine<'a> {
    pub fn new(g: &'a MultiGraph, rule: Rule, budget: &'a Budget) -> Self {
        Engine {
            g,
            rule,
            values: vec![UNSET; g.m()],
            vcost: vec![0; g.n()],
            total: 0,
            trail: Vec::new(),
            cache: HashMap::new(),
            budget,
            zones: Vec::new(),
            vstamp: vec![0; g.n()],
            estamp: vec![0; g.m()],
            epoch: 0,
        }
    }

    /// Vertex-disjoint vertex sets each forcing cost at least 1 (Conflict and Proper4 rules).
    pub fn set_zones(&mut self, zones: Vec<Vec<VertexId>>) {
        self.zones = zones;
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    fn sign(&self, e: EdgeId, v: VertexId) -> i32 {
        let (a, b) = self.g.endpoints(e);
        if v == a.min(b) {
            1
        } else {
            -1
        }
    }

    /// Bitmask of values still admissible at `v` for its unassigned edges, or `None` if
    /// the assigned values at `v` already violate the rule.
    fn vertex_mask(&self, v: VertexId) -> Option<u64> {
        let mut n_unset = 0;
        let mut last_unset = usize::MAX;
        match self.rule {
            Rule::Tait => {
                let mut used = 0u8;
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x == UNSET {
                        n_unset += 1;
                    } else if used & (1 << x) != 0 {
                        return None;
                    } else {
                        used |= 1 << x;
                    }
                }
                let allowed = 0b1110 & !used;
                (n_unset <= allowed.count_ones()).then_some(allowed as u64)
            }
            Rule::Proper4 => {
                let mut used = 0u8;
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x == UNSET {
                        continue;
                    } else if used & (1 << x) != 0 {
                        return None;
                    }
                    used |= 1 << x;
                }
                Some((0b1111 & !used) as u64)
            }
            Rule::Conflict => {
                let mut counts = [0u8; 4];
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x != UNSET {
                        counts[x as usize] += 1;
                    }
                }
                let mut allowed = 0b1110;
                for c in 1..4 {
                    match counts[c] {
                        0 | 1 => {}
                        2 => allowed &= !(1 << c),
                        _ => return None,
                    }
                }
                Some(allowed as u64)
            }
            Rule::Zk { k, lo } => {
                let range = ((1u64 << (k - lo + 1)) - 1) & !((1u64 << lo) - 1);
                let k = k as i32;
                let mut s = 0;
                let mut first_unset = usize::MAX;
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x == UNSET {
                        n_unset += 1;
                        if first_unset == usize::MAX {
                            first_unset = inc.edge;
                        }
                        last_unset = inc.edge;
                    } else {
                        s += self.sign(inc.edge, v) * x as i32;
                    }
                }
                match n_unset {
                    0 => (s.rem_euclid(k) == 0).then_some(0),
                    1 => {
                        let x = (-self.sign(last_unset, v) * s).rem_euclid(k);
                        (range >> x & 1 == 1).then_some(1 << x)
                    }
                    2 if first_unset != last_unset => {
                        // values of either edge whose partner is forced into range
                        let (s1, s2) = (self.sign(first_unset, v), self.sign(last_unset, v));
                        let mut mask = 0u64;
                        for x in lo as i32..=k - lo as i32 {
                            let y = (-s2 * (s + s1 * x)).rem_euclid(k);
                            if range >> y & 1 == 1 {
                                mask |= 1 << x | 1 << y;
                            }
                        }
                        (mask != 0).then_some(mask)
                    }
                    _ => Some(range),
                }
            }
            Rule::TwoColor => {
                let mut used = 0u8;
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x != UNSET && x != 0 {
                        if used & (1 << x) != 0 {
                            return None;
                        }
                        used |= 1 << x;
                    }
                }
                Some(0b111 & !used as u64)
            }
            Rule::Cover { k, .. } => {
                let full = (1u64 << k) - 1;
                let mut union = 0u64;
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x == UNSET {
                        n_unset += 1;
                    } else if union & x as u64 != 0 {
                        return None;
                    } else {
                        union |= x as u64;
                    }
                }
                let free = full & !union;
                match n_unset {
                    0 => (free == 0).then_some(0),
                    1 => Some(1u64 << free),
                    _ => {
                        // every subset of `free` is admissible
                        let mut mask = 0u64;
                        let mut sub = free;
                        loop {
                            mask |= 1u64 << sub;
                            if sub == 0 {
                                break;
                            }
                            sub = (sub - 1) & free;
                        }
                        Some(mask)
                    }
                }
            }
            Rule::Klein { allow_zero } => {
                let mut s = 0u8;
                for inc in self.g.incident(v) {
                    let x = self.values[inc.edge];
                    if x == UNSET {
                        n_unset += 1;
                    } else {
                        s ^= x;
                    }
                }
                match n_unset {
                    0 => (s == 0).then_some(0),
                    1 => (allow_zero || s != 0).then_some(1 << s),
                    _ => Some(if allow_zero { 0b1111 } else { 0b1110 }),
                }
            }
        }
    }

    fn vertex_cost(&self, v: VertexId) -> u8 {
        if self.rule == Rule::TwoColor {
            let zeros = self.g.incident(v).iter().filter(|i| self.values[i.edge] == 0).count();
            return (zeros + 2).saturating_sub(self.g.degree(v)) as u8;
        }
        if self.rule != Rule::Conflict {
            return 0;
        }
        let mut counts = [0u8; 4];
        for inc in self.g.incident(v) {
            let x = self.values[inc.edge];
            if x != UNSET {
                counts[x as usize] += 1;
            }
        }
        counts.iter().any(|&c| c >= 2) as u8
    }

    fn edge_cost(&self, x: u8) -> u32 {
        match self.rule {
            Rule::Klein { allow_zero: true } | Rule::Proper4 => (x == 0) as u32,
            Rule::Cover {
                cost: CoverCost::Uncovered,
                ..
            } => (x == 0) as u32,
            Rule::Cover {
                cost: CoverCost::Shared,
                ..
            } => (x.count_ones() >= 2) as u32,
            _ => 0,
        }
    }

    fn refresh(&mut self, v: VertexId) {
        let c = self.vertex_cost(v);
        self.total = self.total + c as u32 - self.vcost[v] as u32;
        self.vcost[v] = c;
    }

    fn set(&mut self, e: EdgeId, x: u8) {
        self.values[e] = x;
        self.trail.push(e);
        self.total += self.edge_cost(x);
        let (u, v) = self.g.endpoints(e);
        self.refresh(u);
        self.refresh(v);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().unwrap();
            self.total -= self.edge_cost(self.values[e]);
            self.values[e] = UNSET;
            let (u, v) = self.g.endpoints(e);
            self.refresh(u);
            self.refresh(v);
        }
    }

    /// Assigns `x` to `e` and propagates forced values. On `false` the caller must undo.
    fn assign(&mut self, e: EdgeId, x: u8) -> bool {
        self.set(e, x);
        let (u, v) = self.g.endpoints(e);
        let mut queue = vec![u, v];
        'outer: while let Some(v) = queue.pop() {
            let Some(mask) = self.vertex_mask(v) else {
                return false;
            };
            for inc in self.g.incident(v) {
                if self.values[inc.edge] != UNSET {
                    continue;
                }
                let Some(other) = self.vertex_mask(inc.other) else {
                    return false;
                };
                let dom = mask & other;
                if dom == 0 {
                    return false;
                }
                if dom.count_ones() == 1 {
                    self.set(inc.edge, dom.trailing_zeros() as u8);
                    queue.push(v);
                    queue.push(inc.other);
                    continue 'outer;
                }
            }
        }
        true
    }

    /// Fixes a value before solving; `false` if it contradicts earlier fixes.
    pub fn fix(&mut self, e: EdgeId, x: u8) -> bool {
        if self.values[e] != UNSET {
            return self.values[e] == x;
        }
        let mark = self.trail.len();
        if self.assign(e, x) {
            self.cache.clear();
            true
        } else {
            self.undo_to(mark);
            false
        }
    }

    fn domain(&self, e: EdgeId) -> u64 {
        let (u, v) = self.g.endpoints(e);
        match (self.vertex_mask(u), self.vertex_mask(v)) {
            (Some(a), Some(b)) => a & b,
            _ => 0,
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.vstamp.iter_mut().for_each(|s| *s = 0);
            self.estamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Splits the unassigned edges among `edges` into connected regions, smallest first.
    fn regions(&mut self, edges: &[EdgeId]) -> Vec<Vec<EdgeId>> {
        let ep = self.next_epoch();
        let mut out = Vec::new();
        for &e in edges {
            if self.values[e] != UNSET || self.estamp[e] == ep {
                continue;
            }
            let mut comp = vec![e];
            self.estamp[e] = ep;
            let mut i = 0;
            while i < comp.len() {
                let f = comp[i];
                i += 1;
                let (a, b) = self.g.endpoints(f);
                for w in [a, b] {
                    for inc in self.g.incident(w) {
                        if self.values[inc.edge] == UNSET && self.estamp[inc.edge] != ep {
                            self.estamp[inc.edge] = ep;
                            comp.push(inc.edge);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out.sort_by_key(Vec::len);
        out
    }

    fn region_vertices(&mut self, region: &[EdgeId]) -> Vec<VertexId> {
        let ep = self.next_epoch();
        let mut vs = Vec::with_capacity(region.len() + 2);
        for &e in region {
            let (a, b) = self.g.endpoints(e);
            for w in [a, b] {
                if self.vstamp[w] != ep {
                    self.vstamp[w] = ep;
                    vs.push(w);
                }
            }
        }
        vs.sort_unstable();
        vs
    }

    /// Necessary condition on the values already around a region (the Parity Lemma for
    /// colorings, flow conservation across the boundary for flows).
    fn boundary_ok(&self, vs: &[VertexId]) -> bool {
        match self.rule {
            Rule::Conflict | Rule::TwoColor | Rule::Proper4 => true,
            Rule::Tait | Rule::Klein { .. } => {
                if self.rule == Rule::Tait && vs.iter().any(|&v| self.g.degree(v) != 3) {
                    return true;
                }
                let mut s = 0u8;
                for &v in vs {
                    for inc in self.g.incident(v) {
                        let x = self.values[inc.edge];
                        if x != UNSET {
                            s ^= x;
                        }
                    }
                }
                s == 0
            }
            Rule::Cover { k, .. } => {
                let mut s = 0u8;
                for &v in vs {
                    for inc in self.g.incident(v) {
                        let x = self.values[inc.edge];
                        if x != UNSET {
                            s ^= x;
                        }
                    }
                }
                let full = ((1u16 << k) - 1) as u8;
                s == if vs.len() % 2 == 1 { full } else { 0 }
            }
            Rule::Zk { k, .. } => {
                let mut s = 0i32;
                for &v in vs {
                    for inc in self.g.incident(v) {
                        let x = self.values[inc.edge];
                        if x != UNSET {
                            s += self.sign(inc.edge, v) * x as i32;
                        }
                    }
                }
                s.rem_euclid(k as i32) == 0
            }
        }
    }

    fn key(&self, vs: &[VertexId]) -> Vec<u8> {
        let n = self.g.n();
        let mut key = vec![0u8; n.div_ceil(8)];
        for &v in vs {
            key[v >> 3] |= 1 << (v & 7);
        }
        match self.rule {
            Rule::Zk { .. } => {
                for &v in vs {
                    key.extend(self.g.incident(v).iter().map(|i| self.values[i.edge]));
                }
            }
            Rule::Cover { .. } => {
                // relabel matching indices in order of first appearance
                let mut map = [u8::MAX; 8];
                let mut next = 0;
                for &v in vs {
                    for inc in self.g.incident(v) {
                        let x = self.values[inc.edge];
                        if x == UNSET {
                            key.push(x);
                            continue;
                        }
                        let mut y = 0u8;
                        for bit in 0..8 {
                            if x & (1 << bit) != 0 {
                                if map[bit] == u8::MAX {
                                    map[bit] = next;
                                    next += 1;
                                }
                                y |= 1 << map[bit];
                            }
                        }
                        key.push(y);
                    }
                }
            }
            _ => {
                let mut map = [0u8, 0, 0, 0];
                let mut next = 1;
                for &v in vs {
                    for inc in self.g.incident(v) {
                        let x = self.values[inc.edge];
                        if x == UNSET || x == 0 {
                            key.push(x);
                        } else {
                            if map[x as usize] == 0 {
                                map[x as usize] = next;
                                next += 1;
                            }
                            key.push(map[x as usize]);
                        }
                    }
                }
            }
        }
        key
    }

    fn zone_bound(&mut self, vs: &[VertexId]) -> u32 {
        if self.zones.is_empty() {
            return 0;
        }
        let ep = self.next_epoch();
        for &v in vs {
            self.vstamp[v] = ep;
        }
        let mut lb = 0;
        for z in &self.zones {
            let mut any_open = false;
            let mut ok = true;
            for &v in z {
                let hit = match self.rule {
                    Rule::Proper4 => self.g.incident(v).iter().any(|i| self.values[i.edge] == 0),
                    _ => self.vcost[v] != 0,
                };
                if hit {
                    ok = false;
                    break;
                }
                let open = self.g.incident(v).iter().any(|i| self.values[i.edge] == UNSET);
                if open {
                    if self.vstamp[v] != ep {
                        ok = false;
                        break;
                    }
                    any_open = true;
                }
            }
            if ok && any_open {
                lb += 1;
            }
        }
        lb
    }

    fn choose(&self, region: &[EdgeId]) -> (EdgeId, u64) {
        let mut best = (u32::MAX, 0usize, usize::MAX, 0u64);
        for &e in region {
            if self.values[e] != UNSET {
                continue;
            }
            let dom = self.domain(e);
            let size = dom.count_ones();
            let (a, b) = self.g.endpoints(e);
            let sat = [a, b]
                .iter()
                .flat_map(|&w| self.g.incident(w))
                .filter(|i| self.values[i.edge] != UNSET)
                .count();
            let cand = (size, usize::MAX - sat, e, dom);
            if (cand.0, cand.1, cand.2) < (best.0, best.1, best.2) {
                best = cand;
            }
        }
        (best.2, best.3)
    }

    /// Candidate values for `e` ordered by immediate cost.
    fn ordered_values(&self, e: EdgeId, dom: u64) -> Vec<u8> {
        let mut vals: Vec<u8> = (0..64).filter(|x| dom & (1u64 << x) != 0).collect();
        match self.rule {
            Rule::Conflict => {
                let (a, b) = self.g.endpoints(e);
                let used = |w: VertexId, x: u8| self.g.incident(w).iter().any(|i| self.values[i.edge] == x);
                vals.sort_by_key(|&x| used(a, x) as u8 + used(b, x) as u8);
            }
            Rule::Klein { allow_zero: true } | Rule::TwoColor | Rule::Proper4 => vals.sort_by_key(|&x| (x == 0) as u8),
            Rule::Cover { .. } => vals.sort_by_key(|&x| self.edge_cost(x)),
            _ => {}
        }
        vals
    }

    /// Minimum additional cost to complete `region`, or some value `>= cap` if that minimum
    /// is at least `cap`.
    fn region_min(&mut self, region: &[EdgeId], cap: u32) -> Result<u32, BudgetExhausted> {
        if region.is_empty() {
            return Ok(0);
        }
        self.budget.tick()?;
        let vs = self.region_vertices(region);
        if !self.boundary_ok(&vs) {
            return Ok(INF);
        }
        let key = self.key(&vs);
        let mut lb = 0;
        match self.cache.get(&key) {
            Some(&Bound::Exact(v)) => return Ok(v),
            Some(&Bound::AtLeast(b)) if b >= cap => return Ok(b),
            Some(&Bound::AtLeast(b)) => lb = b,
            None => {}
        }
        lb = lb.max(self.zone_bound(&vs));
        if lb >= cap {
            self.store(key, Bound::AtLeast(lb));
            return Ok(lb);
        }
        let (e, dom) = self.choose(region);
        let mut best = cap;
        for x in self.ordered_values(e, dom) {
            let mark = self.trail.len();
            let before = self.total;
            if self.assign(e, x) {
                let delta = self.total - before;
                if delta < best {
                    let mut sum = delta;
                    for comp in self.regions(region) {
                        let sub = self.region_min(&comp, best - sum)?;
                        sum = sum.saturating_add(sub);
                        if sum >= best {
                            break;
                        }
                    }
                    best = best.min(sum);
                }
            }
            self.undo_to(mark);
            if best <= lb {
                break;
            }
        }
        let bound = if best < cap {
            Bound::Exact(best)
        } else {
            Bound::AtLeast(cap.max(lb))
        };
        self.store(key, bound);
        Ok(best)
    }

    fn store(&mut self, key: Vec<u8>, bound: Bound) {
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(key, bound);
    }

    fn unset_edges(&self) -> Vec<EdgeId> {
        (0..self.g.m()).filter(|&e| self.values[e] == UNSET).collect()
    }

    /// Minimum total cost of a completion, or `None` if no completion costs less than `cap`.
    pub fn optimum(&mut self, cap: u32) -> Result<Option<u32>, BudgetExhausted> {
        let all = self.unset_edges();
        let mut sum = self.total;
        if sum >= cap {
            return Ok(None);
        }
        for comp in self.regions(&all) {
            let sub = self.region_min(&comp, cap - sum)?;
            sum = sum.saturating_add(sub);
            if sum >= cap {
                return Ok(None);
            }
        }
        Ok(Some(sum))
    }

    fn extract(&mut self, region: &[EdgeId], target: u32) -> Result<bool, BudgetExhausted> {
        if region.iter().all(|&e| self.values[e] != UNSET) {
            return Ok(target == 0);
        }
        let (e, dom) = self.choose(region);
        for x in self.ordered_values(e, dom) {
            let mark = self.trail.len();
            let before = self.total;
            if self.assign(e, x) {
                let delta = self.total - before;
                if delta <= target {
                    let comps = self.regions(region);
                    let mut subs = Vec::with_capacity(comps.len());
                    let mut sum = delta;
                    for comp in &comps {
                        let sub = self.region_min(comp, target - sum + 1)?;
                        sum = sum.saturating_add(sub);
                        subs.push(sub);
                        if sum > target {
                            break;
                        }
                    }
                    if sum == target {
                        for (comp, sub) in comps.iter().zip(subs) {
                            let ok = self.extract(comp, sub)?;
                            debug_assert!(ok, "cached region optimum must be realizable");
                        }
                        return Ok(true);
                    }
                }
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    /// Completes the assignment with total cost exactly `target` (as returned by `optimum`).
    pub fn realize(&mut self, target: u32) -> Result<bool, BudgetExhausted> {
        let all = self.unset_edges();
        let base = self.total;
        if target < base {
            return Ok(false);
        }
        let comps = self.regions(&all);
        let mut subs = Vec::new();
        let mut sum = base;
        for comp in &comps {
            let sub = self.region_min(comp, target - sum + 1)?;
            sum = sum.saturating_add(sub);
            subs.push(sub);
            if sum > target {
                return Ok(false);
            }
        }
        if sum != target {
            return Ok(false);
        }
        for (comp, sub) in comps.iter().zip(subs) {
            if !self.extract(comp, sub)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Minimizes and returns `(cost, values)`, or `None` when nothing beats `cap`.
    pub fn solve(mut self, cap: u32) -> Result<Option<(u32, Vec<u8>)>, BudgetExhausted> {
        match self.optimum(cap)? {
            None => Ok(None),
            Some(v) => {
                let ok = self.realize(v)?;
                assert!(ok, "optimum {v} could not be realized");
                Ok(Some((v, self.values)))
            }
        }
    }
}

/// A proper 3-edge-coloring (colors 1..=3) of a graph with maximum degree at most 3.
pub(crate) fn tait_coloring(g: &MultiGraph, budget: &Budget) -> Result<Option<Vec<u8>>, BudgetExhausted> {
    if g.max_degree() > 3 {
        return Ok(None);
    }
    let mut eng = Engine::new(g, Rule::Tait, budget);
    if g.m() > 0 {
        // Colors are symmetric: fix the edges at one maximum-degree vertex.
        let v = (0..g.n()).max_by_key(|&v| (g.degree(v), usize::MAX - v)).unwrap();
        for (i, inc) in g.incident(v).iter().enumerate() {
            if !eng.fix(inc.edge, i as u8 + 1) {
                return Ok(None);
            }
        }
    }
    Ok(eng.solve(1)?.map(|(_, vals)| vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn petersen() -> MultiGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        MultiGraph::from_edges(10, edges).unwrap()
    }

    fn proper(g: &MultiGraph, col: &[u8]) -> bool {
        (0..g.n()).all(|v| {
            let mut seen = 0u8;
            g.incident(v).iter().all(|i| {
                let c = col[i.edge];
                let ok = (1..=3).contains(&c) && seen & (1 << c) == 0;
                seen |= 1 << c;
                ok
            })
        })
    }

    #[test]
    fn k4_is_tait_colorable() {
        let b = Budget::unlimited();
        let col = tait_coloring(&k4(), &b).unwrap().unwrap();
        assert!(proper(&k4(), &col));
    }

    #[test]
    fn petersen_is_not() {
        let b = Budget::unlimited();
        assert!(tait_coloring(&petersen(), &b).unwrap().is_none());
    }

    #[test]
    fn petersen_conflicts() {
        let g = petersen();
        let b = Budget::unlimited();
        let (d, vals) = Engine::new(&g, Rule::Conflict, &b).solve(INF).unwrap().unwrap();
        assert_eq!(d, 2);
        assert!(vals.iter().all(|&x| (1..=3).contains(&x)));
    }

    #[test]
    fn klein_flows() {
        let b = Budget::unlimited();
        let g = k4();
        assert!(Engine::new(&g, Rule::Klein { allow_zero: false }, &b)
            .solve(1)
            .unwrap()
            .is_some());
        let p = petersen();
        assert!(Engine::new(&p, Rule::Klein { allow_zero: false }, &b)
            .solve(1)
            .unwrap()
            .is_none());
        let (z, _) = Engine::new(&p, Rule::Klein { allow_zero: true }, &b)
            .solve(INF)
            .unwrap()
            .unwrap();
        assert!(z >= 1);
    }

    #[test]
    fn zk_flows() {
        let b = Budget::unlimited();
        let k33 = MultiGraph::from_edges(
            6,
            [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(Engine::new(&k33, Rule::Zk { k: 3, lo: 1 }, &b)
            .solve(1)
            .unwrap()
            .is_some());
        assert!(Engine::new(&k4(), Rule::Zk { k: 3, lo: 1 }, &b)
            .solve(1)
            .unwrap()
            .is_none());
        let p = petersen();
        assert!(Engine::new(&p, Rule::Zk { k: 4, lo: 1 }, &b)
            .solve(1)
            .unwrap()
            .is_none());
        assert!(Engine::new(&p, Rule::Zk { k: 5, lo: 1 }, &b)
            .solve(1)
            .unwrap()
            .is_some());
    }
}
