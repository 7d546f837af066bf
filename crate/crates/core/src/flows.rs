//! Nowhere-zero group and integer flows, the flow number, the circular flow number,
//! flow resistance, extension numbers and 4-flow-criticality.
//!
//! Every flow is expressed on the reference orientation: edge `e = {a, b}` points from
//! `min(a, b)` to `max(a, b)`.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::budget::{Budget, BudgetExhausted};
use crate::coloring::BooleColor;
use crate::factors::{for_each_perfect_matching, EvenFactor};
use crate::graph::{CubicGraph, EdgeId, MultiGraph, VertexId};
use crate::maxflow::FlowNetwork;
use crate::search::{tait_coloring, Engine, Rule, INF};
use crate::structure::{bridges, cyclic_edge_connectivity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("graph has a bridge")]
    BridgeDetected,
    #[error("budget exhausted; value is at least {lower}{}", upper.map(|u| format!(" and at most {u}")).unwrap_or_default())]
    BudgetExhausted { lower: u32, upper: Option<u32> },
    #[error("graph is 3-edge-colorable")]
    NotClass2,
    #[error("unsupported parameter {0}")]
    Unsupported(u32),
}

fn exhausted(lower: u32, upper: Option<u32>) -> impl FnOnce(BudgetExhausted) -> FlowError {
    move |_| FlowError::BudgetExhausted { lower, upper }
}

/// Tail of `e` in the reference orientation.
pub fn tail(g: &MultiGraph, e: EdgeId) -> VertexId {
    let (a, b) = g.endpoints(e);
    a.min(b)
}

/// A `Z_k`-valued flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFlow {
    pub modulus: u8,
    pub values: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinFlow {
    pub values: Vec<BooleColor>,
}

impl KleinFlow {
    pub fn zeros(&self) -> usize {
        self.values.iter().filter(|&&v| v == BooleColor::Zero).count()
    }
}

/// An integer flow; a negative value flows against the reference orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerFlow {
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flow {
    Group(GroupFlow),
    Klein(KleinFlow),
    Integer(IntegerFlow),
}

/// What a flow is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowSpec {
    /// Conservation only.
    Any,
    NowhereZero,
    /// Integer flow with `1 <= |value| <= k - 1`.
    KFlow(i64),
    /// Integer flow with `q <= |value| <= p - q`, a scaled nowhere-zero `p/q`-flow.
    Circular {
        p: i64,
        q: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FlowViolation {
    #[error("flow has {got} values for {expected} edges")]
    Length { expected: usize, got: usize },
    #[error("conservation fails at vertex {0}")]
    Conservation(VertexId),
    #[error("value on edge {0} is out of range")]
    Range(EdgeId),
    #[error("specification does not apply to this kind of flow")]
    Kind,
}

pub fn verify_flow(g: &MultiGraph, flow: &Flow, spec: FlowSpec) -> Result<(), FlowViolation> {
    let len = match flow {
        Flow::Group(f) => f.values.len(),
        Flow::Klein(f) => f.values.len(),
        Flow::Integer(f) => f.values.len(),
    };
    if len != g.m() {
        return Err(FlowViolation::Length {
            expected: g.m(),
            got: len,
        });
    }
    for v in 0..g.n() {
        let ok = match flow {
            Flow::Group(f) => {
                let k = f.modulus as i64;
                let s: i64 = g
                    .incident(v)
                    .iter()
                    .map(|i| sign(g, i.edge, v) * f.values[i.edge] as i64)
                    .sum();
                s.rem_euclid(k) == 0
            }
            Flow::Klein(f) => g.incident(v).iter().fold(0u8, |s, i| s ^ f.values[i.edge].index()) == 0,
            Flow::Integer(f) => {
                g.incident(v)
                    .iter()
                    .map(|i| sign(g, i.edge, v) * f.values[i.edge])
                    .sum::<i64>()
                    == 0
            }
        };
        if !ok {
            return Err(FlowViolation::Conservation(v));
        }
    }
    for e in 0..g.m() {
        let ok = match (flow, spec) {
            (_, FlowSpec::Any) => true,
            (Flow::Group(f), FlowSpec::NowhereZero) => f.values[e] % f.modulus != 0,
            (Flow::Klein(f), FlowSpec::NowhereZero) => f.values[e] != BooleColor::Zero,
            (Flow::Integer(f), FlowSpec::NowhereZero) => f.values[e] != 0,
            (Flow::Integer(f), FlowSpec::KFlow(k)) => (1..k).contains(&f.values[e].abs()),
            (Flow::Integer(f), FlowSpec::Circular { p, q }) => (q..=p - q).contains(&f.values[e].abs()),
            _ => return Err(FlowViolation::Kind),
        };
        if !ok {
            return Err(FlowViolation::Range(e));
        }
    }
    Ok(())
}

/// +1 when `e` leaves `v` in the reference orientation, -1 when it enters.
fn sign(g: &MultiGraph, e: EdgeId, v: VertexId) -> i64 {
    if tail(g, e) == v {
        1
    } else {
        -1
    }
}

fn require_bridgeless(g: &MultiGraph) -> Result<(), FlowError> {
    if bridges(g).is_empty() {
        Ok(())
    } else {
        Err(FlowError::BridgeDetected)
    }
}

fn zk_search(g: &MultiGraph, k: u8, lo: u8, budget: &Budget) -> Result<Option<Vec<u8>>, BudgetExhausted> {
    if g.m() == 0 {
        return Ok(Engine::new(g, Rule::Zk { k, lo }, budget).solve(1)?.map(|(_, v)| v));
    }
    // Negating a flow keeps it in range, so edge 0 may be taken in the lower half.
    for x in lo..=k / 2 {
        let mut eng = Engine::new(g, Rule::Zk { k, lo }, budget);
        if eng.fix(0, x) {
            if let Some((_, v)) = eng.solve(1)? {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

fn klein_search(g: &MultiGraph, budget: &Budget) -> Result<Option<KleinFlow>, BudgetExhausted> {
    let mut eng = Engine::new(g, Rule::Klein { allow_zero: false }, budget);
    // The three nonzero elements are interchangeable: fix one edge.
    if g.m() > 0 && !eng.fix(0, 1) {
        return Ok(None);
    }
    Ok(eng.solve(1)?.map(|(_, v)| KleinFlow {
        values: v.into_iter().map(BooleColor::from_index).collect(),
    }))
}

/// A nowhere-zero Klein-group flow, if one exists.
pub fn nowhere_zero_klein_flow(g: &MultiGraph, budget: &Budget) -> Result<Option<KleinFlow>, FlowError> {
    if !bridges(g).is_empty() {
        return Ok(None);
    }
    klein_search(g, budget).map_err(exhausted(0, None))
}

/// A nowhere-zero `Z_k`-flow for `2 <= k <= 63`, which exists iff a nowhere-zero
/// integer `k`-flow does.
pub fn has_nowhere_zero_flow(g: &MultiGraph, k: u32, budget: &Budget) -> Result<Option<GroupFlow>, FlowError> {
    if !(2..=63).contains(&k) {
        return Err(FlowError::Unsupported(k));
    }
    require_bridgeless(g)?;
    Ok(zk_search(g, k as u8, 1, budget)
        .map_err(exhausted(0, None))?
        .map(|values| GroupFlow {
            modulus: k as u8,
            values,
        }))
}

/// Smallest `k <= 6` with a nowhere-zero `k`-flow.
pub fn flow_number(g: &MultiGraph, budget: &Budget) -> Result<u32, FlowError> {
    require_bridgeless(g)?;
    for k in 2..=6 {
        let found = if k == 4 {
            klein_search(g, budget).map_err(exhausted(k, None))?.is_some()
        } else {
            zk_search(g, k as u8, 1, budget).map_err(exhausted(k, None))?.is_some()
        };
        if found {
            return Ok(k);
        }
    }
    unreachable!("every bridgeless graph has a nowhere-zero 6-flow")
}

/// Turns a `Z_p`-flow with values in `q..=p-q` into an integer flow with the same
/// residues and `q <= |value| <= p - q`.
fn lift_modular(g: &MultiGraph, p: i64, phi: &[u8]) -> Option<IntegerFlow> {
    let n = g.n();
    // psi(e) = phi(e) - p * t(e) with t(e) in {0, 1}; conservation fixes the net
    // outflow of t at each vertex.
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    let arcs: Vec<usize> = (0..g.m())
        .map(|e| {
            let (a, b) = g.endpoints(e);
            net.add_arc(a.min(b), a.max(b), 1)
        })
        .collect();
    let mut need = 0;
    for v in 0..n {
        let out: i64 = g
            .incident(v)
            .iter()
            .map(|i| sign(g, i.edge, v) * phi[i.edge] as i64)
            .sum();
        debug_assert_eq!(out.rem_euclid(p), 0);
        let b = out / p;
        if b > 0 {
            net.add_arc(s, v, b);
            need += b;
        } else if b < 0 {
            net.add_arc(v, t, -b);
        }
    }
    if net.max_flow(s, t, i64::MAX) != need {
        return None;
    }
    let values = (0..g.m())
        .map(|e| phi[e] as i64 - p * (1 - net.residual(arcs[e])))
        .collect();
    Some(IntegerFlow { values })
}

/// A nowhere-zero `p/q`-flow in scaled integer form (`q <= |value| <= p - q`).
///
/// Searched as a `Z_p`-flow with values in `q..=p-q`, then lifted to the integers.
pub fn circular_flow(g: &MultiGraph, p: u32, q: u32, budget: &Budget) -> Result<Option<IntegerFlow>, FlowError> {
    if p > 63 || q == 0 || 2 * q > p {
        return Err(FlowError::Unsupported(p));
    }
    require_bridgeless(g)?;
    let Some(phi) = zk_search(g, p as u8, q as u8, budget).map_err(exhausted(0, None))? else {
        return Ok(None);
    };
    let flow = lift_modular(g, p as i64, &phi).expect("modular circular flows lift to integer flows");
    debug_assert!(verify_flow(
        g,
        &Flow::Integer(flow.clone()),
        FlowSpec::Circular {
            p: p as i64,
            q: q as i64
        }
    )
    .is_ok());
    Ok(Some(flow))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularFlowNumber {
    pub p: u32,
    pub q: u32,
    /// The largest tested value below `p/q` that admits no flow; the true value lies in
    /// `(below, p/q]` and equals `p/q` whenever its denominator is at most the cap.
    pub infeasible_below: Option<(u32, u32)>,
    pub witness: Option<IntegerFlow>,
}

impl CircularFlowNumber {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Reduced fractions in `(lo, hi]` with denominator at most `q_cap`, in increasing order.
pub fn farey_candidates(lo: u32, hi: u32, q_cap: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for q in 1..=q_cap {
        for p in lo * q + 1..=hi * q {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_by(|a, b| (a.0 as u64 * b.1 as u64).cmp(&(b.0 as u64 * a.1 as u64)));
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Circular flow number of a bridgeless cubic graph, searched over denominators up to
/// `q_cap`.
pub fn circular_flow_number(g: &CubicGraph, q_cap: u32, budget: &Budget) -> Result<CircularFlowNumber, FlowError> {
    let (c, reached) = circular_flow_deepening(g, q_cap, budget)?;
    if reached < q_cap.max(1) {
        return Err(FlowError::BudgetExhausted {
            lower: 4,
            upper: Some(c.p.div_ceil(c.q)),
        });
    }
    Ok(c)
}

/// Circular flow number with the denominator cap raised one step at a time, together
/// with the largest cap fully decided before the budget ran out.
///
/// Feasibility is monotone in `p/q`. The search keeps the least feasible value found and
/// the largest refuted one; each new cap only tests the fractions between them, in
/// decreasing order, and stops at the first refutation.
pub fn circular_flow_deepening(
    g: &CubicGraph,
    q_cap: u32,
    budget: &Budget,
) -> Result<(CircularFlowNumber, u32), FlowError> {
    require_bridgeless(g)?;
    let q_cap = q_cap.max(1);
    if g.is_bipartite() {
        let c = CircularFlowNumber {
            p: 3,
            q: 1,
            infeasible_below: None,
            witness: circular_flow(g, 3, 1, budget)?,
        };
        return Ok((c, q_cap));
    }
    if tait_coloring(g, budget).map_err(exhausted(4, None))?.is_some() {
        let c = CircularFlowNumber {
            p: 4,
            q: 1,
            infeasible_below: None,
            witness: circular_flow(g, 4, 1, budget)?,
        };
        return Ok((c, q_cap));
    }
    let f = if zk_search(g, 5, 1, budget).map_err(exhausted(5, None))?.is_some() {
        5
    } else {
        6
    };
    let mut best = (f, 1);
    let mut witness = circular_flow(g, f, 1, budget)?.expect("a nowhere-zero F-flow is an F/1-flow");
    let mut refuted = (4, 1);
    let below = |a: (u32, u32), b: (u32, u32)| (a.0 as u64 * b.1 as u64) < (b.0 as u64 * a.1 as u64);
    let mut reached = 0;
    for cap in 1..=q_cap {
        let candidates: Vec<(u32, u32)> = farey_candidates(4, f, cap)
            .into_iter()
            .filter(|&c| c.0 <= 63 && below(refuted, c))
            .collect();
        for i in (0..candidates.len()).rev() {
            let c = candidates[i];
            // Candidates the current witness already attains need no search; only the
            // smallest of them is searched for a witness of its own.
            if !below(c, best) || (i > 0 && attains(&witness, candidates[i - 1])) {
                continue;
            }
            match circular_flow(g, c.0, c.1, budget) {
                Ok(Some(w)) => {
                    best = c;
                    witness = w;
                }
                Ok(None) => {
                    refuted = c;
                    break;
                }
                Err(FlowError::BudgetExhausted { .. }) if reached > 0 => {
                    return Ok((result(best, refuted, witness), reached));
                }
                Err(FlowError::BudgetExhausted { .. }) => {
                    return Err(FlowError::BudgetExhausted {
                        lower: 4,
                        upper: Some(best.0.div_ceil(best.1)),
                    })
                }
                Err(e) => return Err(e),
            }
        }
        reached = cap;
    }
    Ok((result(best, refuted, witness), reached))
}

fn result(best: (u32, u32), refuted: (u32, u32), witness: IntegerFlow) -> CircularFlowNumber {
    CircularFlowNumber {
        p: best.0,
        q: best.1,
        infeasible_below: (refuted != (4, 1)).then_some(refuted),
        witness: Some(witness),
    }
}

/// Whether a flow with `lo <= |value| <= hi` certifies `p/q`, i.e. `(hi + lo)/lo <= p/q`.
fn attains(witness: &IntegerFlow, (p, q): (u32, u32)) -> bool {
    let lo = witness
        .values
        .iter()
        .map(|v| v.unsigned_abs())
        .min()
        .unwrap_or(1)
        .max(1);
    let hi = witness.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(1);
    (hi + lo) * q as u64 <= p as u64 * lo
}

/// Dimension of the cycle space.
pub fn cycle_space_dimension(g: &MultiGraph) -> usize {
    g.m() + g.components().len() - g.n()
}

/// Largest cycle-space dimension handled by the pair scan in [`flow_resistance`].
pub const PAIR_SCAN_MAX_DIM: usize = 12;

fn even_subgraphs_u128(g: &MultiGraph) -> Vec<u128> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; g.m()];
    for r in 0..n {
        if depth[r] != usize::MAX {
            continue;
        }
        depth[r] = 0;
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            for inc in g.incident(v) {
                if depth[inc.other] == usize::MAX {
                    depth[inc.other] = depth[v] + 1;
                    parent[inc.other] = inc.edge;
                    tree[inc.edge] = true;
                    stack.push(inc.other);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for e in 0..g.m() {
        if tree[e] {
            continue;
        }
        let mut c = 1u128 << e;
        let (mut x, mut y) = g.endpoints(e);
        while x != y {
            if depth[x] < depth[y] {
                std::mem::swap(&mut x, &mut y);
            }
            c ^= 1 << parent[x];
            x = g.other_end(parent[x], x);
        }
        basis.push(c);
    }
    let mut all = vec![0u128];
    for b in basis {
        let more: Vec<u128> = all.iter().map(|&s| s ^ b).collect();
        all.extend(more);
    }
    all
}

/// Flow resistance by scanning pairs of even subgraphs (the two coordinates of a Klein
/// flow). Needs at most 128 edges.
pub fn flow_resistance_pair_scan(g: &MultiGraph, budget: &Budget) -> Result<(u32, KleinFlow), FlowError> {
    if g.m() > 128 {
        return Err(FlowError::Unsupported(g.m() as u32));
    }
    let evens = even_subgraphs_u128(g);
    let full = if g.m() == 128 { u128::MAX } else { (1u128 << g.m()) - 1 };
    let mut best = (u32::MAX, 0u128, 0u128);
    'outer: for (i, &a) in evens.iter().enumerate() {
        budget.tick().map_err(exhausted(0, Some(best.0)))?;
        for &b in &evens[i..] {
            let zeros = (full & !(a | b)).count_ones();
            if zeros < best.0 {
                best = (zeros, a, b);
                if zeros == 0 {
                    break 'outer;
                }
            }
        }
    }
    let (z, a, b) = best;
    let values = (0..g.m())
        .map(|e| BooleColor::from_index(((a >> e & 1) | (b >> e & 1) << 1) as u8))
        .collect();
    Ok((z, KleinFlow { values }))
}

/// Flow resistance by minimizing zero edges over Klein flows with the labelling search.
pub fn flow_resistance_search(g: &MultiGraph, budget: &Budget) -> Result<(u32, KleinFlow), FlowError> {
    let eng = Engine::new(g, Rule::Klein { allow_zero: true }, budget);
    let (z, vals) = eng
        .solve(INF)
        .map_err(exhausted(0, None))?
        .expect("the zero flow always exists");
    Ok((
        z,
        KleinFlow {
            values: vals.into_iter().map(BooleColor::from_index).collect(),
        },
    ))
}

/// Fewest zero edges in a 4-flow, computed on Klein flows.
pub fn flow_resistance(g: &CubicGraph, budget: &Budget) -> Result<(u32, KleinFlow), FlowError> {
    if cycle_space_dimension(g) <= PAIR_SCAN_MAX_DIM && g.m() <= 128 {
        flow_resistance_pair_scan(g, budget)
    } else {
        flow_resistance_search(g, budget)
    }
}

/// Upper bound on the number of added edges from the Mohar–Škrekovski extension theorem.
pub fn phi_plus_bound(n: usize, k: u32) -> usize {
    match k {
        3 => n / 4,
        _ => (n / 5).div_ceil(2),
    }
}

fn has_nz_flow_quiet(g: &MultiGraph, k: u32, budget: &Budget) -> Result<bool, BudgetExhausted> {
    if !bridges(g).is_empty() {
        return Ok(false);
    }
    if k == 4 {
        klein_search(g, budget).map(|f| f.is_some())
    } else {
        zk_search(g, k as u8, 1, budget).map(|f| f.is_some())
    }
}

/// Fewest edges (no loops, parallels allowed) whose addition yields a nowhere-zero
/// `k`-flow, `k` in 3..=5, with the added edges.
pub fn phi_plus(g: &CubicGraph, k: u32, budget: &Budget) -> Result<(u32, Vec<(VertexId, VertexId)>), FlowError> {
    if !(3..=5).contains(&k) {
        return Err(FlowError::Unsupported(k));
    }
    let n = g.n();
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let bound = phi_plus_bound(n, 4).max(phi_plus_bound(n, 3));
    for t in 0..=bound {
        let mut idx = vec![0usize; t];
        loop {
            let mut h = g.as_multigraph().clone();
            for &i in &idx {
                h.add_edge(pairs[i].0, pairs[i].1).expect("pairs are distinct vertices");
            }
            if has_nz_flow_quiet(&h, k, budget).map_err(exhausted(t as u32, None))? {
                return Ok((t as u32, idx.iter().map(|&i| pairs[i]).collect()));
            }
            // next multiset in lexicographic order
            let mut j = t;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                if idx[j] + 1 < pairs.len() {
                    idx[j] += 1;
                    for l in j + 1..t {
                        idx[l] = idx[j];
                    }
                    break;
                }
                if j == 0 {
                    j = usize::MAX;
                    break;
                }
            }
            if t == 0 || j == usize::MAX {
                break;
            }
        }
    }
    Err(FlowError::BudgetExhausted {
        lower: bound as u32 + 1,
        upper: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowCriticality {
    /// Verdict of the deletion test.
    pub critical: bool,
    /// Per edge: `G - e` has a nowhere-zero 4-flow.
    pub deletion: Vec<bool>,
    /// Verdict of the characterization by cyclic connectivity and 2-factors.
    pub characterization: bool,
    pub cyclically_4_edge_connected: bool,
    /// Per edge: some 2-factor has exactly two odd circuits, joined by the edge.
    pub joins_two_odd_circuits: Vec<bool>,
}

impl FlowCriticality {
    pub fn agree(&self) -> bool {
        self.critical == self.characterization
    }
}

/// Decides 4-flow-criticality of a snark by deleting each edge, and independently by
/// the 2-factor characterization.
pub fn is_4_flow_critical(g: &CubicGraph, budget: &Budget) -> Result<FlowCriticality, FlowError> {
    if tait_coloring(g, budget).map_err(exhausted(0, None))?.is_some() {
        return Err(FlowError::NotClass2);
    }
    let mut deletion = Vec::with_capacity(g.m());
    for e in 0..g.m() {
        let (h, _) = g.delete_edges(&g.edge_set([e]));
        deletion.push(has_nz_flow_quiet(&h, 4, budget).map_err(exhausted(0, None))?);
    }
    let critical = deletion.iter().all(|&d| d);

    let cyclic4 = cyclic_edge_connectivity(g).is_none_or(|c| c >= 4);
    let mut joins = vec![false; g.m()];
    let mut exhausted_flag = false;
    let _ = for_each_perfect_matching(g, |m| {
        if budget.tick().is_err() {
            exhausted_flag = true;
            return ControlFlow::Break(());
        }
        let f = m.complement();
        let comp = circuit_labels(g, &f);
        let odd_labels: Vec<usize> = comp
            .sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s % 2 == 1)
            .map(|(i, _)| i)
            .collect();
        if odd_labels.len() == 2 {
            for e in m.iter() {
                let (a, b) = g.endpoints(e);
                let (la, lb) = (comp.label[a], comp.label[b]);
                if la != lb && odd_labels.contains(&la) && odd_labels.contains(&lb) {
                    joins[e] = true;
                }
            }
        }
        if joins.iter().all(|&j| j) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if exhausted_flag {
        return Err(FlowError::BudgetExhausted { lower: 0, upper: None });
    }
    let characterization = cyclic4 && joins.iter().all(|&j| j);
    Ok(FlowCriticality {
        critical,
        deletion,
        characterization,
        cyclically_4_edge_connected: cyclic4,
        joins_two_odd_circuits: joins,
    })
}

struct CircuitLabels {
    label: Vec<usize>,
    sizes: Vec<usize>,
}

fn circuit_labels(g: &MultiGraph, f: &BitSet) -> CircuitLabels {
    let mut label = vec![usize::MAX; g.n()];
    let mut sizes = Vec::new();
    for s in 0..g.n() {
        if label[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[s] = id;
        let mut count = 1;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for inc in g.incident(x) {
                if f.contains(inc.edge) && label[inc.other] == usize::MAX {
                    label[inc.other] = id;
                    count += 1;
                    stack.push(inc.other);
                }
            }
        }
        sizes.push(count);
    }
    debug_assert!(EvenFactor::from_edges(g, f).is_some());
    CircuitLabels { label, sizes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flower_snark, k33, k4, petersen};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn flow_numbers() {
        assert_eq!(flow_number(&k33(), &b()).unwrap(), 3);
        assert_eq!(flow_number(&k4(), &b()).unwrap(), 4);
        assert_eq!(flow_number(&petersen(), &b()).unwrap(), 5);
        let f = has_nowhere_zero_flow(&petersen(), 5, &b()).unwrap().unwrap();
        assert!(verify_flow(&petersen(), &Flow::Group(f), FlowSpec::NowhereZero).is_ok());
    }

    #[test]
    fn circular() {
        let c = circular_flow_number(&k33(), 10, &b()).unwrap();
        assert_eq!((c.p, c.q), (3, 1));
        let c = circular_flow_number(&k4(), 10, &b()).unwrap();
        assert_eq!((c.p, c.q), (4, 1));
        let p = petersen();
        let c = circular_flow_number(&p, 4, &b()).unwrap();
        assert_eq!((c.p, c.q), (5, 1));
        assert_eq!(c.infeasible_below, Some((19, 4)));
        let w = Flow::Integer(c.witness.unwrap());
        assert!(verify_flow(&p, &w, FlowSpec::KFlow(5)).is_ok());
        assert!(circular_flow(&p, 9, 2, &b()).unwrap().is_none());
    }

    #[test]
    fn farey_order() {
        let c = farey_candidates(4, 5, 3);
        assert_eq!(c, vec![(13, 3), (9, 2), (14, 3), (5, 1)]);
    }

    #[test]
    fn resistance_scan_and_search() {
        for g in [petersen(), k4(), k33(), flower_snark(3).unwrap()] {
            let (a, fa) = flow_resistance_pair_scan(&g, &b()).unwrap();
            let (s, fs) = flow_resistance_search(&g, &b()).unwrap();
            assert_eq!(a, s);
            assert_eq!(fa.zeros() as u32, a);
            assert!(verify_flow(&g, &Flow::Klein(fa), FlowSpec::Any).is_ok());
            assert!(verify_flow(&g, &Flow::Klein(fs), FlowSpec::Any).is_ok());
        }
        assert_eq!(flow_resistance(&petersen(), &b()).unwrap().0, 1);
        assert_eq!(flow_resistance(&k4(), &b()).unwrap().0, 0);
    }

    #[test]
    fn extension_numbers() {
        let p = petersen();
        assert_eq!(phi_plus(&k4(), 4, &b()).unwrap().0, 0);
        let (t, added) = phi_plus(&p, 4, &b()).unwrap();
        assert_eq!((t, added.len()), (1, 1));
        assert_eq!(phi_plus(&p, 5, &b()).unwrap().0, 0);
    }

    #[test]
    fn criticality() {
        let c = is_4_flow_critical(&petersen(), &b()).unwrap();
        assert!(c.critical && c.characterization);
        let j5 = flower_snark(5).unwrap();
        let c = is_4_flow_critical(&j5, &b()).unwrap();
        assert!(c.critical && c.agree());
        assert_eq!(is_4_flow_critical(&k4(), &b()).unwrap_err(), FlowError::NotClass2);
    }

    #[test]
    fn verify_rejects() {
        let g = k4();
        let zero = Flow::Integer(IntegerFlow { values: vec![0; 6] });
        assert!(verify_flow(&g, &zero, FlowSpec::Any).is_ok());
        assert_eq!(
            verify_flow(&g, &zero, FlowSpec::NowhereZero),
            Err(FlowViolation::Range(0))
        );
        let c = circular_flow(&g, 4, 1, &b()).unwrap().unwrap();
        let mut bad = c.clone();
        bad.values[2] = -bad.values[2];
        let (a, bb) = g.endpoints(2);
        let err = verify_flow(&g, &Flow::Integer(bad), FlowSpec::Any).unwrap_err();
        assert!(err == FlowViolation::Conservation(a.min(bb)));
    }
}
