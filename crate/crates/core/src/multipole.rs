//! Multipoles: cubic graph fragments with dangling semiedges, their boundary colorings,
//! joins and splits, reducibility, and the NOT gate.
//!
//! Text format (`Multipole::to_text` / `Multipole::parse_text`):
//!
//! ```text
//! multipole <vertices> <edges> <semiedges>
//! <u> <v>            one line per internal edge
//! v <vertex>         one line per semiedge, in order: attached to a vertex
//! p <semiedge>       or paired with another semiedge (an isolated edge)
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{Budget, BudgetExhausted};
use crate::coloring::{BooleColor, ConflictWitness};
use crate::graph::{as_cubic, CubicGraph, EdgeId, GraphError, MultiGraph, VertexId};
use crate::search::{Engine, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultipoleError {
    #[error("multipoles have {0} and {1} semiedges")]
    ArityMismatch(usize, usize),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("edge set does not split the graph into two sides")]
    NotACut,
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: VertexId, degree: usize },
    #[error("malformed multipole text: {0}")]
    Malformed(String),
    #[error("budget exhausted")]
    BudgetExhausted,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Semiedge {
    /// Dangles from a vertex.
    Attached(VertexId),
    /// Other half of an isolated edge (index into the semiedge list).
    Paired(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multipole {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub semiedges: Vec<Semiedge>,
}

impl Multipole {
    /// Validates the cubic convention and the pairing structure.
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>, semiedges: Vec<Semiedge>) -> Result<Self, MultipoleError> {
        let mut deg = vec![0usize; n];
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n }.into());
            }
            if a == b {
                return Err(GraphError::LoopRejected(a).into());
            }
            deg[a] += 1;
            deg[b] += 1;
        }
        for (i, s) in semiedges.iter().enumerate() {
            match *s {
                Semiedge::Attached(v) => {
                    if v >= n {
                        return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
                    }
                    deg[v] += 1;
                }
                Semiedge::Paired(j) => {
                    if j == i || semiedges.get(j) != Some(&Semiedge::Paired(i)) {
                        return Err(MultipoleError::InvalidPairing(format!(
                            "semiedge {i} is paired with {j}, which does not pair back"
                        )));
                    }
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| deg[v] != 3) {
            return Err(MultipoleError::NotCubic {
                vertex: v,
                degree: deg[v],
            });
        }
        Ok(Multipole { n, edges, semiedges })
    }

    pub fn m(&self) -> usize {
        self.semiedges.len()
    }

    /// The 3-pole consisting of one vertex.
    pub fn vertex() -> Self {
        Multipole::new(1, vec![], (0..3).map(|_| Semiedge::Attached(0)).collect()).unwrap()
    }

    /// The 2-pole consisting of one isolated edge.
    pub fn isolated_edge() -> Self {
        Multipole::new(0, vec![], vec![Semiedge::Paired(1), Semiedge::Paired(0)]).unwrap()
    }

    /// The graph with one pendant vertex per attached semiedge; returns it with the
    /// pendant edge of each attached semiedge.
    fn with_pendants(&self) -> (MultiGraph, Vec<Option<EdgeId>>) {
        let mut g = MultiGraph::from_edges(self.n, self.edges.iter().copied()).expect("validated");
        let pend = self
            .semiedges
            .iter()
            .map(|s| match *s {
                Semiedge::Attached(v) => {
                    let p = g.add_vertex();
                    Some(g.add_edge(v, p).expect("pendant edge"))
                }
                Semiedge::Paired(_) => None,
            })
            .collect();
        (g, pend)
    }

    /// The cubic graph of a multipole without semiedges.
    pub fn into_graph(self) -> Result<CubicGraph, MultipoleError> {
        if !self.semiedges.is_empty() {
            return Err(MultipoleError::InvalidPairing(format!(
                "{} semiedges left unjoined",
                self.semiedges.len()
            )));
        }
        Ok(as_cubic(MultiGraph::from_edges(self.n, self.edges)?)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("multipole {} {} {}\n", self.n, self.edges.len(), self.m());
        for &(a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        for se in &self.semiedges {
            match se {
                Semiedge::Attached(v) => s.push_str(&format!("v {v}\n")),
                Semiedge::Paired(j) => s.push_str(&format!("p {j}\n")),
            }
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, MultipoleError> {
        let bad = |m: &str| MultipoleError::Malformed(m.to_string());
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("empty input"))?
            .split_whitespace()
            .collect();
        if header.len() != 4 || header[0] != "multipole" {
            return Err(bad("expected `multipole <n> <edges> <semiedges>`"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("not a number: {s}")));
        let (n, ne, ns) = (num(header[1])?, num(header[2])?, num(header[3])?);
        let mut edges = Vec::with_capacity(ne);
        for _ in 0..ne {
            let l: Vec<&str> = lines
                .next()
                .ok_or_else(|| bad("missing edge line"))?
                .split_whitespace()
                .collect();
            if l.len() != 2 {
                return Err(bad("edge line needs two vertices"));
            }
            edges.push((num(l[0])?, num(l[1])?));
        }
        let mut semiedges = Vec::with_capacity(ns);
        for _ in 0..ns {
            let l: Vec<&str> = lines
                .next()
                .ok_or_else(|| bad("missing semiedge line"))?
                .split_whitespace()
                .collect();
            match l.as_slice() {
                ["v", x] => semiedges.push(Semiedge::Attached(num(x)?)),
                ["p", x] => semiedges.push(Semiedge::Paired(num(x)?)),
                _ => return Err(bad("semiedge line must be `v <vertex>` or `p <semiedge>`")),
            }
        }
        if lines.next().is_some() {
            return Err(bad("trailing content"));
        }
        Multipole::new(n, edges, semiedges)
    }
}

/// Realizable boundary colorings, as sorted tuples over colors 1..=3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColSet {
    pub m: usize,
    pub tuples: Vec<Vec<u8>>,
}

impl ColSet {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[u8]) -> bool {
        self.tuples.binary_search_by(|x| x.as_slice().cmp(t)).is_ok()
    }

    pub fn is_subset(&self, other: &ColSet) -> bool {
        self.m == other.m && self.tuples.iter().all(|t| other.contains(t))
    }

    /// Reorders coordinates: new position `i` takes old coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ColSet {
        let mut tuples: Vec<Vec<u8>> = self
            .tuples
            .iter()
            .map(|t| perm.iter().map(|&j| t[j]).collect())
            .collect();
        tuples.sort();
        ColSet { m: self.m, tuples }
    }
}

/// Tuples over {1,2,3} of length `m` whose color counts all have the parity of `m`.
pub fn parity_universe(m: usize) -> ColSet {
    let mut tuples = Vec::new();
    let mut t = vec![1u8; m];
    loop {
        let mut c = [0usize; 3];
        for &x in &t {
            c[x as usize - 1] += 1;
        }
        if parity_check(c, m) {
            tuples.push(t.clone());
        }
        let mut i = m;
        loop {
            if i == 0 {
                tuples.sort();
                return ColSet { m, tuples };
            }
            i -= 1;
            if t[i] < 3 {
                t[i] += 1;
                break;
            }
            t[i] = 1;
        }
    }
}

/// `m1 ≡ m2 ≡ m3 ≡ m (mod 2)`.
pub fn parity_check(counts: [usize; 3], m: usize) -> bool {
    counts.iter().all(|&c| c % 2 == m % 2)
}

/// The Boole parity congruences for the conflicts of a 3-edge-coloring.
pub fn boole_parity_check(w: &ConflictWitness) -> bool {
    let [n1, n2, n3] = w.type_counts();
    let n_prime = w.types.iter().filter(|&&t| t != BooleColor::Zero).count();
    n1 % 2 == n2 % 2 && n2 % 2 == n3 % 2 && n3 % 2 == n_prime % 2
}

/// Canonical tuples: colors appear first in the order 1, 2, 3.
fn canonical_tuples(m: usize) -> Vec<Vec<u8>> {
    fn rec(t: &mut Vec<u8>, m: usize, max: u8, out: &mut Vec<Vec<u8>>) {
        if t.len() == m {
            out.push(t.clone());
            return;
        }
        for c in 1..=(max + 1).min(3) {
            t.push(c);
            rec(t, m, max.max(c), out);
            t.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), m, 0, &mut out);
    out
}

const PERMS: [[u8; 3]; 6] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];

/// Every boundary tuple realized by a Tait coloring.
///
/// Each tuple up to color permutation is tested by fixing the semiedge colors and
/// searching for an extension; no parity filtering is applied.
pub fn tait_colorings(mp: &Multipole, budget: &Budget) -> Result<ColSet, BudgetExhausted> {
    let (g, pend) = mp.with_pendants();
    let mut found = BTreeSet::new();
    'tuples: for t in canonical_tuples(mp.m()) {
        for (i, s) in mp.semiedges.iter().enumerate() {
            if let Semiedge::Paired(j) = *s {
                if t[i] != t[j] {
                    continue 'tuples;
                }
            }
        }
        let mut eng = Engine::new(&g, Rule::Tait, budget);
        let mut ok = true;
        for (i, p) in pend.iter().enumerate() {
            if let Some(e) = p {
                ok &= eng.fix(*e, t[i]);
                if !ok {
                    break;
                }
            }
        }
        if ok && eng.solve(1)?.is_some() {
            for perm in PERMS {
                found.insert(t.iter().map(|&c| perm[c as usize - 1]).collect::<Vec<u8>>());
            }
        }
    }
    Ok(ColSet {
        m: mp.m(),
        tuples: found.into_iter().collect(),
    })
}

pub fn is_color_complete(mp: &Multipole, budget: &Budget) -> Result<bool, BudgetExhausted> {
    Ok(tait_colorings(mp, budget)? == parity_universe(mp.m()))
}

pub fn are_color_disjoint(a: &Multipole, b: &Multipole, budget: &Budget) -> Result<bool, MultipoleError> {
    if a.m() != b.m() {
        return Err(MultipoleError::ArityMismatch(a.m(), b.m()));
    }
    let ca = tait_colorings(a, budget).map_err(|_| MultipoleError::BudgetExhausted)?;
    let cb = tait_colorings(b, budget).map_err(|_| MultipoleError::BudgetExhausted)?;
    Ok(ca.tuples.iter().all(|t| !cb.contains(t)))
}

/// Joins semiedge `i` of `a` with semiedge `j` of `b` for each `(i, j)` in `pairing`.
///
/// Vertices of `b` follow those of `a`. New edges follow the internal edges of both, in
/// order of their first semiedge. Unjoined semiedges of `a` then of `b` keep their order.
pub fn join(a: &Multipole, b: &Multipole, pairing: &[(usize, usize)]) -> Result<Multipole, MultipoleError> {
    #[derive(Clone, Copy)]
    enum End {
        Vertex(VertexId),
        Free(usize),
    }
    let ma = a.m();
    let total = ma + b.m();
    let own: Vec<Semiedge> = a
        .semiedges
        .iter()
        .copied()
        .chain(b.semiedges.iter().map(|s| match *s {
            Semiedge::Attached(v) => Semiedge::Attached(v + a.n),
            Semiedge::Paired(j) => Semiedge::Paired(j + ma),
        }))
        .collect();
    let mut partner = vec![None; total];
    for &(i, j) in pairing {
        if i >= ma || j >= b.m() {
            return Err(MultipoleError::InvalidPairing(format!("({i}, {j}) out of range")));
        }
        if partner[i].is_some() || partner[ma + j].is_some() {
            return Err(MultipoleError::InvalidPairing(format!("semiedge reused in ({i}, {j})")));
        }
        partner[i] = Some(ma + j);
        partner[ma + j] = Some(i);
    }
    let mut visited = vec![false; total];
    // Enters semiedge `k` from its own side and follows the chain outwards.
    let trace = |mut k: usize, visited: &mut Vec<bool>| -> End {
        loop {
            visited[k] = true;
            let Some(p) = partner[k] else { return End::Free(k) };
            visited[p] = true;
            match own[p] {
                Semiedge::Attached(w) => return End::Vertex(w),
                Semiedge::Paired(j) => k = j,
            }
        }
    };
    let mut edges: Vec<(VertexId, VertexId)> = a.edges.clone();
    edges.extend(b.edges.iter().map(|&(x, y)| (x + a.n, y + a.n)));
    let mut free_end: HashMap<usize, End> = HashMap::new();
    for k in 0..total {
        if visited[k] {
            continue;
        }
        if let Semiedge::Attached(v) = own[k] {
            match trace(k, &mut visited) {
                End::Vertex(w) => edges.push((v, w)),
                End::Free(u) => {
                    free_end.insert(u, End::Vertex(v));
                }
            }
        }
    }
    for u in 0..total {
        if visited[u] || partner[u].is_some() {
            continue;
        }
        visited[u] = true;
        let Semiedge::Paired(j) = own[u] else {
            unreachable!("attached chains already traced")
        };
        match trace(j, &mut visited) {
            End::Free(u2) => {
                free_end.insert(u, End::Free(u2));
                free_end.insert(u2, End::Free(u));
            }
            End::Vertex(_) => unreachable!("attached chains already traced"),
        }
    }
    if visited.iter().any(|&x| !x) {
        return Err(MultipoleError::InvalidPairing(
            "joining closes an edge without vertices".into(),
        ));
    }
    let order: Vec<usize> = (0..total).filter(|&k| partner[k].is_none()).collect();
    let index_of: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let semiedges = order
        .iter()
        .map(|k| match free_end[k] {
            End::Vertex(v) => Semiedge::Attached(v),
            End::Free(u) => Semiedge::Paired(index_of[&u]),
        })
        .collect();
    Multipole::new(a.n + b.n, edges, semiedges)
}

/// The two sides of an edge cut, with the vertex maps back into the graph.
#[derive(Debug, Clone)]
pub struct Split {
    pub first: Multipole,
    pub second: Multipole,
    /// Original vertex of each vertex of `first` / `second`.
    pub first_vertices: Vec<VertexId>,
    pub second_vertices: Vec<VertexId>,
}

/// Cuts every edge of `cut` into two semiedges; semiedge `i` of both sides comes from
/// `cut[i]`. The first side contains the smaller endpoint of `cut[0]`.
pub fn split(g: &MultiGraph, cut: &[EdgeId]) -> Result<Split, MultipoleError> {
    if cut.is_empty() || cut.iter().any(|&e| e >= g.m()) {
        return Err(MultipoleError::NotACut);
    }
    let removed = g.edge_set(cut.iter().copied());
    if removed.count() != cut.len() {
        return Err(MultipoleError::NotACut);
    }
    let comps = g.components_avoiding(&removed);
    let mut comp_of = vec![0usize; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    // Two-color the components along the cut edges.
    let mut side = vec![u8::MAX; comps.len()];
    let (a0, b0) = g.endpoints(cut[0]);
    side[comp_of[a0.min(b0)]] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for &e in cut {
            let (a, b) = g.endpoints(e);
            let (ca, cb) = (comp_of[a], comp_of[b]);
            if ca == cb {
                return Err(MultipoleError::NotACut);
            }
            for (x, y) in [(ca, cb), (cb, ca)] {
                if side[x] != u8::MAX {
                    if side[y] == u8::MAX {
                        side[y] = 1 - side[x];
                        changed = true;
                    } else if side[y] == side[x] {
                        return Err(MultipoleError::NotACut);
                    }
                }
            }
        }
    }
    if side.contains(&u8::MAX) {
        return Err(MultipoleError::NotACut);
    }
    let in_first = |v: VertexId| side[comp_of[v]] == 0;
    let first_vertices: Vec<VertexId> = (0..g.n()).filter(|&v| in_first(v)).collect();
    let second_vertices: Vec<VertexId> = (0..g.n()).filter(|&v| !in_first(v)).collect();
    let build = |verts: &[VertexId]| -> Result<Multipole, MultipoleError> {
        let local: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = (0..g.m())
            .filter(|e| !removed.contains(*e))
            .map(|e| g.endpoints(e))
            .filter(|(a, _)| local.contains_key(a))
            .map(|(a, b)| (local[&a], local[&b]))
            .collect();
        let semiedges = cut
            .iter()
            .map(|&e| {
                let (a, b) = g.endpoints(e);
                Semiedge::Attached(if local.contains_key(&a) { local[&a] } else { local[&b] })
            })
            .collect();
        Multipole::new(verts.len(), edges, semiedges)
    };
    Ok(Split {
        first: build(&first_vertices)?,
        second: build(&second_vertices)?,
        first_vertices,
        second_vertices,
    })
}

/// Semiedge order of the NOT gate: `[X1, X1, X2, X2, e]`.
pub const NOT_GATE_GROUPS: [&str; 5] = ["X1", "X1", "X2", "X2", "e"];

/// Grouping of the semiedges of [`petersen_minus_path`] as `(X1, X2, e)`. It is the only
/// one of the 15 groupings that passes [`check_not_gate`].
pub const NOT_GATE_GROUPING: ([usize; 2], [usize; 2], usize) = ([0, 1], [2, 3], 4);

/// The Petersen graph minus the path from vertex 0 through its smallest neighbor to that
/// neighbor's next smallest neighbor. Semiedges follow edge-id order of the cut.
pub fn petersen_minus_path() -> Multipole {
    let p = crate::constructions::petersen();
    let a = 0;
    let b = p.neighbors(a).min().unwrap();
    let c = p.neighbors(b).filter(|&x| x != a).min().unwrap();
    let path = [a, b, c];
    let keep: Vec<VertexId> = (0..p.n()).filter(|v| !path.contains(v)).collect();
    let local = |v: VertexId| keep.iter().position(|&x| x == v);
    let mut edges = Vec::new();
    let mut semis = Vec::new();
    for e in 0..p.m() {
        let (x, y) = p.endpoints(e);
        match (local(x), local(y)) {
            (Some(i), Some(j)) => edges.push((i, j)),
            (Some(i), None) | (None, Some(i)) => semis.push(Semiedge::Attached(i)),
            (None, None) => {}
        }
    }
    Multipole::new(keep.len(), edges, semis).unwrap()
}

fn with_grouping(base: &Multipole, (x1, x2, e): ([usize; 2], [usize; 2], usize)) -> Multipole {
    let order = [x1[0], x1[1], x2[0], x2[1], e];
    Multipole {
        n: base.n,
        edges: base.edges.clone(),
        semiedges: order.iter().map(|&i| base.semiedges[i]).collect(),
    }
}

/// The NOT gate: 7 vertices, semiedges ordered `[X1, X1, X2, X2, e]`.
pub fn not_gate() -> Multipole {
    with_grouping(&petersen_minus_path(), NOT_GATE_GROUPING)
}

/// Every grouping of the five semiedges of [`petersen_minus_path`] that passes
/// [`check_not_gate`], in lexicographic order.
pub fn search_not_gate_groupings(budget: &Budget) -> Result<Vec<([usize; 2], [usize; 2], usize)>, BudgetExhausted> {
    let base = petersen_minus_path();
    let mut out = Vec::new();
    for e in 0..5 {
        let rest: Vec<usize> = (0..5).filter(|&i| i != e).collect();
        for partner in 1..4 {
            let x1 = [rest[0], rest[partner]];
            let x2: Vec<usize> = rest.iter().copied().filter(|i| !x1.contains(i)).collect();
            let grouping = (x1, [x2[0], x2[1]], e);
            if check_not_gate(&with_grouping(&base, grouping), budget)?.is_ok() {
                out.push(grouping);
            }
        }
    }
    Ok(out)
}

fn pair_boole(a: u8, b: u8) -> BooleColor {
    BooleColor::of_color(a) + BooleColor::of_color(b)
}

/// Checks the NOT-gate behavior over the whole ColSet: semiedges `[0, 1]` form X1,
/// `[2, 3]` form X2, and X2 has Boole value 0 exactly when X1 does not. Also requires
/// the gate to be Tait colorable. Returns a counterexample tuple on failure.
pub fn check_not_gate(mp: &Multipole, budget: &Budget) -> Result<Result<(), Vec<u8>>, BudgetExhausted> {
    if !(4..=5).contains(&mp.m()) {
        return Ok(Err(Vec::new()));
    }
    let col = tait_colorings(mp, budget)?;
    if col.is_empty() {
        return Ok(Err(Vec::new()));
    }
    for t in &col.tuples {
        let x1 = pair_boole(t[0], t[1]);
        let x2 = pair_boole(t[2], t[3]);
        if (x2 == BooleColor::Zero) == (x1 == BooleColor::Zero) {
            return Ok(Err(t.clone()));
        }
    }
    Ok(Ok(()))
}

/// Klein form of the NOT-gate behavior: `Bc(X1) + Bc(X2)` is nonzero on every tuple.
pub fn not_gate_klein_sum_nonzero(col: &ColSet) -> bool {
    col.tuples
        .iter()
        .all(|t| pair_boole(t[0], t[1]) + pair_boole(t[2], t[3]) != BooleColor::Zero)
}

/// All cubic `m`-poles with exactly `v` vertices, up to semiedge order.
fn structures(v: usize, m: usize) -> Vec<Multipole> {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut mult = vec![0usize; pairs.len()];
    let mut deg = vec![0usize; v];
    fn rec(
        i: usize,
        pairs: &[(usize, usize)],
        mult: &mut Vec<usize>,
        deg: &mut Vec<usize>,
        v: usize,
        m: usize,
        out: &mut Vec<Multipole>,
    ) {
        if i == pairs.len() {
            let attached: usize = deg.iter().map(|d| 3 - d).sum();
            if attached > m || (m - attached) % 2 == 1 {
                return;
            }
            let mut edges = Vec::new();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                edges.extend(std::iter::repeat_n((a, b), mult[k]));
            }
            let mut semis = Vec::new();
            for (x, &d) in deg.iter().enumerate() {
                semis.extend(std::iter::repeat_n(Semiedge::Attached(x), 3 - d));
            }
            let iso = (m - attached) / 2;
            for _ in 0..iso {
                let s = semis.len();
                semis.push(Semiedge::Paired(s + 1));
                semis.push(Semiedge::Paired(s));
            }
            out.push(Multipole::new(v, edges, semis).expect("degrees checked"));
            return;
        }
        let (a, b) = pairs[i];
        for k in 0..=3 {
            if deg[a] + k > 3 || deg[b] + k > 3 {
                break;
            }
            deg[a] += k;
            deg[b] += k;
            mult[i] = k;
            rec(i + 1, pairs, mult, deg, v, m, out);
            deg[a] -= k;
            deg[b] -= k;
        }
        mult[i] = 0;
    }
    rec(0, &pairs, &mut mult, &mut deg, v, m, &mut out);
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// A Tait-colorable multipole `N` with fewer vertices (and at most `vertex_budget`) and
/// `Col(N) ⊆ Col(M)`, with its semiedges reordered to match `M`, if one exists.
pub fn is_reducible(
    mp: &Multipole,
    vertex_budget: usize,
    budget: &Budget,
) -> Result<Option<Multipole>, MultipoleError> {
    let m = mp.m();
    if m > 6 {
        return Err(MultipoleError::ArityMismatch(m, 6));
    }
    let target = tait_colorings(mp, budget).map_err(|_| MultipoleError::BudgetExhausted)?;
    let perms = permutations(m);
    let limit = vertex_budget.min(mp.n.saturating_sub(1));
    if mp.n == 0 {
        return Ok(None);
    }
    let mut seen: Vec<ColSet> = Vec::new();
    for v in 0..=limit {
        for cand in structures(v, m) {
            let col = tait_colorings(&cand, budget).map_err(|_| MultipoleError::BudgetExhausted)?;
            if col.is_empty() || seen.contains(&col) {
                continue;
            }
            for perm in &perms {
                if col.permuted(perm).is_subset(&target) {
                    let reordered = Multipole {
                        n: cand.n,
                        edges: cand.edges.clone(),
                        semiedges: reorder_semiedges(&cand.semiedges, perm),
                    };
                    return Ok(Some(reordered));
                }
            }
            seen.push(col);
        }
    }
    Ok(None)
}

/// New semiedge `i` is old semiedge `perm[i]`; pair references follow.
fn reorder_semiedges(s: &[Semiedge], perm: &[usize]) -> Vec<Semiedge> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    perm.iter()
        .map(|&old| match s[old] {
            Semiedge::Attached(v) => Semiedge::Attached(v),
            Semiedge::Paired(j) => Semiedge::Paired(inv[j]),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::petersen;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn small_colsets() {
        let v = tait_colorings(&Multipole::vertex(), &b()).unwrap();
        assert_eq!(v.len(), 6);
        let e = tait_colorings(&Multipole::isolated_edge(), &b()).unwrap();
        assert_eq!(e.tuples, vec![vec![1, 1], vec![2, 2], vec![3, 3]]);
        assert!(is_color_complete(&Multipole::vertex(), &b()).unwrap());
        assert!(is_color_complete(&Multipole::isolated_edge(), &b()).unwrap());
    }

    #[test]
    fn universe_sizes() {
        // (a,a,a,a) three ways, patterns (a,a,b,b),(a,b,a,b),(a,b,b,a) six ways each
        assert_eq!(parity_universe(4).len(), 3 + 3 * 6);
        assert_eq!(parity_universe(3).len(), 6);
        assert_eq!(parity_universe(2).len(), 3);
        assert_eq!(parity_universe(1).len(), 0);
    }

    #[test]
    fn theta_from_vertices() {
        let v = Multipole::vertex();
        let j = join(&v, &v, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(j.n, 2);
        assert_eq!(j.edges, vec![(0, 1), (0, 1), (0, 1)]);
        let g = j.into_graph().unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn join_through_isolated_edge() {
        let v = Multipole::vertex();
        let e = Multipole::isolated_edge();
        // the isolated edge extends a semiedge of the vertex
        let j = join(&v, &e, &[(0, 0)]).unwrap();
        assert_eq!(
            j.semiedges,
            vec![Semiedge::Attached(0), Semiedge::Attached(0), Semiedge::Attached(0)]
        );
        assert!(join(&e, &e, &[(0, 0), (1, 1)]).is_err());
        assert!(join(&v, &v, &[(0, 0), (0, 1)]).is_err());
    }

    #[test]
    fn one_pole_uncolorable() {
        // K4 with one edge subdivided, the new vertex carrying the semiedge
        let mp = Multipole::new(
            5,
            vec![(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            vec![Semiedge::Attached(4)],
        )
        .unwrap();
        assert!(tait_colorings(&mp, &b()).unwrap().is_empty());
    }

    #[test]
    fn split_and_rejoin() {
        let p = petersen();
        assert_eq!(split(&p, &[0]).err(), Some(MultipoleError::NotACut));
        assert_eq!(split(&p, &[]).err(), Some(MultipoleError::NotACut));
        let cut = p.incident(0).iter().map(|i| i.edge).collect::<Vec<_>>();
        let sp = split(&p, &cut).unwrap();
        assert_eq!(sp.first.n, 1);
        assert_eq!(sp.second.n, 9);
        assert!(are_color_disjoint(&sp.first, &sp.second, &b()).unwrap());
        let joined = join(&sp.first, &sp.second, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let back: Vec<VertexId> = sp.first_vertices.iter().chain(&sp.second_vertices).copied().collect();
        let mut got: Vec<(usize, usize)> = joined
            .edges
            .iter()
            .map(|&(a, c)| (back[a].min(back[c]), back[a].max(back[c])))
            .collect();
        got.sort();
        assert_eq!(got, p.edge_multiset());
    }

    #[test]
    fn not_gate_behaves() {
        let g = not_gate();
        assert_eq!((g.n, g.m()), (7, 5));
        assert_eq!(check_not_gate(&g, &b()).unwrap(), Ok(()));
        assert_eq!(search_not_gate_groupings(&b()).unwrap(), vec![NOT_GATE_GROUPING]);
        let col = tait_colorings(&g, &b()).unwrap();
        assert!(not_gate_klein_sum_nonzero(&col));
        // a color-complete 4-pole realizes X1 = X2 = 0
        let two_edges = Multipole::new(
            0,
            vec![],
            vec![
                Semiedge::Paired(1),
                Semiedge::Paired(0),
                Semiedge::Paired(3),
                Semiedge::Paired(2),
            ],
        )
        .unwrap();
        assert!(check_not_gate(&two_edges, &b()).unwrap().is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = not_gate();
        let t = g.to_text();
        assert_eq!(Multipole::parse_text(&t).unwrap(), g);
        assert!(Multipole::parse_text("multipole 1 0 2\nv 0\nv 0\n").is_err());
        assert!(Multipole::parse_text("nonsense").is_err());
        let e = Multipole::isolated_edge();
        assert_eq!(Multipole::parse_text(&e.to_text()).unwrap(), e);
    }

    #[test]
    fn reducibility() {
        assert_eq!(is_reducible(&Multipole::vertex(), 5, &b()).unwrap(), None);
        assert_eq!(is_reducible(&Multipole::isolated_edge(), 5, &b()).unwrap(), None);
        // a Tait colorable 4-pole with 4 vertices reduces to one with at most 2
        let four = Multipole::new(
            4,
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            (0..4).map(Semiedge::Attached).collect(),
        )
        .unwrap();
        let red = is_reducible(&four, 5, &b()).unwrap().unwrap();
        assert!(red.n <= 2);
        let c_red = tait_colorings(&red, &b()).unwrap();
        assert!(c_red.is_subset(&tait_colorings(&four, &b()).unwrap()));
    }

    #[test]
    fn parity_checks() {
        assert!(!parity_check([2, 1, 1], 4));
        assert!(parity_check([3, 1, 1], 5));
    }
}
