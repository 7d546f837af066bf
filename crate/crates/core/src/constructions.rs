//! Deterministic builders for the named graphs, glueing, and the derived constructions.

use thiserror::Error;

use crate::budget::Budget;
use crate::coloring::resistance;
use crate::graph::{as_cubic, CubicGraph, EdgeId, GraphError, MultiGraph, VertexId};
use crate::multipole::{not_gate, Semiedge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("parameter k = {0} must be odd")]
    EvenK(usize),
    #[error("parameter k = {k} is below the minimum {min}")]
    TooSmall { k: usize, min: usize },
    #[error("edge {0} not found")]
    EdgeNotFound(EdgeId),
    #[error("no 3-edge maximal matching of the Petersen graph passes validation")]
    MatchingValidationFailed,
    #[error("no minimal 4-edge-coloring puts a class-0 edge inside the designated block")]
    NoColorZeroEdgeInBlock,
    #[error("search budget exhausted while building")]
    BudgetExhausted,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The 2-subsets of {1..5} in lexicographic order; vertex `i` is the `i`-th subset.
pub fn petersen_labels() -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for a in 1..=5 {
        for b in a + 1..=5 {
            out.push((a, b));
        }
    }
    out
}

/// The Petersen graph as the Kneser graph KG(5,2), edges in lexicographic order.
pub fn petersen() -> CubicGraph {
    let labels = petersen_labels();
    let mut g = MultiGraph::new(10);
    for i in 0..10 {
        for j in i + 1..10 {
            let (a, b) = labels[i];
            let (c, d) = labels[j];
            if a != c && a != d && b != c && b != d {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    as_cubic(g).unwrap()
}

/// Petersen graph minus vertex 0, with its three divalent vertices.
#[derive(Debug, Clone)]
pub struct PetersenMinusVertex {
    pub graph: MultiGraph,
    pub x: VertexId,
    pub y: VertexId,
    pub z: VertexId,
}

pub fn petersen_minus_vertex() -> PetersenMinusVertex {
    let p = petersen();
    let (graph, _, _) = p.delete_vertices(&p.vertex_set([0]));
    let mut div: Vec<VertexId> = (0..graph.n()).filter(|&v| graph.degree(v) == 2).collect();
    div.sort_unstable();
    PetersenMinusVertex {
        graph,
        x: div[0],
        y: div[1],
        z: div[2],
    }
}

pub fn k4() -> CubicGraph {
    as_cubic(MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()).unwrap()
}

/// K_{3,3} with sides {0,1,2} and {3,4,5}.
pub fn k33() -> CubicGraph {
    let mut g = MultiGraph::new(6);
    for a in 0..3 {
        for b in 3..6 {
            g.add_edge(a, b).unwrap();
        }
    }
    as_cubic(g).unwrap()
}

/// Flower snark J_k: hubs `a_i = i`, `b_i = k+i`, `c_i = 2k+i`, `d_i = 3k+i`.
/// Each hub meets b_i, c_i, d_i; the b_i form a k-cycle; c_0..c_{k-1} d_0..d_{k-1} a 2k-cycle.
pub fn flower_snark(k: usize) -> Result<CubicGraph, ConstructionError> {
    if k.is_multiple_of(2) {
        return Err(ConstructionError::EvenK(k));
    }
    if k < 3 {
        return Err(ConstructionError::TooSmall { k, min: 3 });
    }
    let (a, b, c, d) = (0, k, 2 * k, 3 * k);
    let mut g = MultiGraph::new(4 * k);
    for i in 0..k {
        g.add_edge(a + i, b + i)?;
        g.add_edge(a + i, c + i)?;
        g.add_edge(a + i, d + i)?;
    }
    for i in 0..k {
        g.add_edge(b + i, b + (i + 1) % k)?;
    }
    for i in 0..k - 1 {
        g.add_edge(c + i, c + i + 1)?;
    }
    g.add_edge(c + k - 1, d)?;
    for i in 0..k - 1 {
        g.add_edge(d + i, d + i + 1)?;
    }
    g.add_edge(d + k - 1, c)?;
    Ok(as_cubic(g)?)
}

/// Result of glueing two graphs along one edge each.
#[derive(Debug, Clone)]
pub struct Glued {
    pub graph: CubicGraph,
    /// The two new edges `xu` and `yv`; together they form a 2-edge-cut.
    pub clones: (EdgeId, EdgeId),
    /// Offset added to vertex ids of the second graph.
    pub offset: usize,
    /// New id of each surviving edge of the first graph (`None` for `xy`).
    pub first_edges: Vec<Option<EdgeId>>,
    /// New id of each surviving edge of the second graph (`None` for `uv`).
    pub second_edges: Vec<Option<EdgeId>>,
}

/// Removes `xy` from `g` and `uv` from `h`, then joins `x` to `u` and `y` to `v`.
pub fn glue(g: &CubicGraph, xy: EdgeId, h: &CubicGraph, uv: EdgeId) -> Result<Glued, ConstructionError> {
    if xy >= g.m() {
        return Err(ConstructionError::EdgeNotFound(xy));
    }
    if uv >= h.m() {
        return Err(ConstructionError::EdgeNotFound(uv));
    }
    let offset = g.n();
    let mut out = MultiGraph::new(g.n() + h.n());
    let mut first_edges = vec![None; g.m()];
    let mut second_edges = vec![None; h.m()];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if e != xy {
            first_edges[e] = Some(out.add_edge(a, b)?);
        }
    }
    for (e, &(a, b)) in h.edges().iter().enumerate() {
        if e != uv {
            second_edges[e] = Some(out.add_edge(a + offset, b + offset)?);
        }
    }
    let (x, y) = g.endpoints(xy);
    let (u, v) = h.endpoints(uv);
    let c1 = out.add_edge(x, u + offset)?;
    let c2 = out.add_edge(y, v + offset)?;
    Ok(Glued {
        graph: as_cubic(out)?,
        clones: (c1, c2),
        offset,
        first_edges,
        second_edges,
    })
}

/// Glues a fresh Petersen graph (its edge 0) onto edge `xy` of `g`.
pub fn glue_petersen(g: &CubicGraph, xy: EdgeId) -> Result<Glued, ConstructionError> {
    glue(g, xy, &petersen(), 0)
}

/// The canonical maximal matching `{e1, e2, e3}` of the Petersen graph used for K.
///
/// Taken as the lexicographically least 3-edge maximal matching such that every 2-factor
/// meets it in two edges, one on each 5-circuit, and some even factor with two odd
/// components contains all three edges.
pub fn petersen_canonical_matching() -> Result<[EdgeId; 3], ConstructionError> {
    let p = petersen();
    let m = p.m();
    let even: Vec<u32> = (0u32..1 << m)
        .filter(|&s| {
            (0..p.n()).all(|v| {
                let d = p.incident(v).iter().filter(|i| s >> i.edge & 1 == 1).count();
                d == 0 || d == 2
            })
        })
        .collect();
    let circuits = |s: u32| -> Vec<u32> {
        // edge sets of the components of an even subgraph
        let mut out = Vec::new();
        let mut left = s;
        while left != 0 {
            let e0 = left.trailing_zeros() as usize;
            let mut comp = 1u32 << e0;
            let mut frontier = vec![e0];
            while let Some(e) = frontier.pop() {
                let (a, b) = p.endpoints(e);
                for x in [a, b] {
                    for inc in p.incident(x) {
                        if s >> inc.edge & 1 == 1 && comp >> inc.edge & 1 == 0 {
                            comp |= 1 << inc.edge;
                            frontier.push(inc.edge);
                        }
                    }
                }
            }
            left &= !comp;
            out.push(comp);
        }
        out
    };
    let odd_components = |s: u32| -> usize {
        let covered: Vec<bool> = (0..p.n())
            .map(|v| p.incident(v).iter().any(|i| s >> i.edge & 1 == 1))
            .collect();
        let isolated = covered.iter().filter(|&&c| !c).count();
        isolated + circuits(s).iter().filter(|c| c.count_ones() % 2 == 1).count()
    };
    let two_factors: Vec<u32> = even
        .iter()
        .copied()
        .filter(|&s| s.count_ones() as usize == p.n())
        .collect();
    let min_odd = even.iter().map(|&s| odd_components(s)).min().unwrap();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let mut used = vec![false; p.n()];
                let mut matching = true;
                for e in [a, b, c] {
                    let (x, y) = p.endpoints(e);
                    matching &= !used[x] && !used[y];
                    used[x] = true;
                    used[y] = true;
                }
                let maximal = p.edges().iter().all(|&(x, y)| used[x] || used[y]);
                if !matching || !maximal {
                    continue;
                }
                let mask = (1u32 << a) | (1 << b) | (1 << c);
                let splits = two_factors.iter().all(|&f| {
                    (f & mask).count_ones() == 2 && circuits(f).iter().all(|&c| (c & mask).count_ones() == 1)
                });
                let covered = even.iter().any(|&s| s & mask == mask && odd_components(s) == min_odd);
                if splits && covered {
                    return Ok([a, b, c]);
                }
            }
        }
    }
    Err(ConstructionError::MatchingValidationFailed)
}

/// K together with the image of `e1` in it.
#[derive(Debug, Clone)]
pub struct KGraph {
    pub graph: CubicGraph,
    pub e1: EdgeId,
}

/// Glues two Petersen copies in series onto edge `e` of `g`; returns the new graph and
/// the map from old edge ids.
fn glue_two_in_series(g: &CubicGraph, e: EdgeId) -> Result<(CubicGraph, Vec<Option<EdgeId>>), ConstructionError> {
    let first = glue_petersen(g, e)?;
    let second = glue_petersen(&first.graph, first.clones.0)?;
    let map = first
        .first_edges
        .iter()
        .map(|x| x.and_then(|y| second.first_edges[y]))
        .collect();
    Ok((second.graph, map))
}

/// The Petersen graph with two further copies glued in series on each of `e2` and `e3`.
pub fn build_k_detailed() -> Result<KGraph, ConstructionError> {
    let [e1, e2, e3] = petersen_canonical_matching()?;
    let (g, map2) = glue_two_in_series(&petersen(), e2)?;
    let e3 = map2[e3].unwrap();
    let e1 = map2[e1].unwrap();
    let (g, map3) = glue_two_in_series(&g, e3)?;
    Ok(KGraph {
        graph: g,
        e1: map3[e1].unwrap(),
    })
}

pub fn build_k() -> Result<CubicGraph, ConstructionError> {
    Ok(build_k_detailed()?.graph)
}

/// K with one more Petersen copy glued on `e1`.
pub fn build_k_star() -> Result<CubicGraph, ConstructionError> {
    let k = build_k_detailed()?;
    Ok(glue_petersen(&k.graph, k.e1)?.graph)
}

/// Three Petersen-minus-a-vertex blocks `P_i` (vertices `9i..9i+9`) and a hub `v = 27`,
/// with edges `y_i v`, `x_1 z_2`, `x_2 z_3`, `x_3 z_1`.
pub fn build_h28() -> CubicGraph {
    let pm = petersen_minus_vertex();
    let mut g = MultiGraph::new(28);
    for i in 0..3 {
        for &(a, b) in pm.graph.edges() {
            g.add_edge(9 * i + a, 9 * i + b).unwrap();
        }
    }
    let hub = 27;
    for i in 0..3 {
        g.add_edge(9 * i + pm.y, hub).unwrap();
    }
    for i in 0..3 {
        g.add_edge(9 * i + pm.x, 9 * ((i + 1) % 3) + pm.z).unwrap();
    }
    as_cubic(g).unwrap()
}

/// The class-0 edge of a minimal 4-edge-coloring of H28 that lies inside the third block.
pub fn h28_block_edge(budget: &Budget) -> Result<EdgeId, ConstructionError> {
    let h = build_h28();
    let (_, col) = resistance(&h, budget).map_err(|_| ConstructionError::BudgetExhausted)?;
    col.class_zero()
        .into_iter()
        .find(|&e| {
            let (a, b) = h.endpoints(e);
            (18..27).contains(&a) && (18..27).contains(&b)
        })
        .ok_or(ConstructionError::NoColorZeroEdgeInBlock)
}

/// Two copies of H28 with the edge `v_i w_i` from [`h28_block_edge`] removed, joined by
/// `v_1 v_2` and `w_1 w_2`.
pub fn build_g56() -> Result<CubicGraph, ConstructionError> {
    let h = build_h28();
    let e = h28_block_edge(&Budget::default())?;
    Ok(glue(&h, e, &h, e)?.graph)
}

/// Loupekhine snark from `k` NOT gates in a ring, X2 of gate `i` joined to X1 of gate
/// `i + 1`. The `e` semiedges end on a connector path of `k - 2` vertices (one vertex
/// for `k = 3`), giving `8k - 2` vertices.
pub fn loupekhine(k: usize) -> Result<CubicGraph, ConstructionError> {
    if k.is_multiple_of(2) {
        return Err(ConstructionError::EvenK(k));
    }
    if k < 3 {
        return Err(ConstructionError::TooSmall { k, min: 3 });
    }
    let gate = not_gate();
    let attach = |i: usize, s: usize| match gate.semiedges[s] {
        Semiedge::Attached(v) => 7 * i + v,
        Semiedge::Paired(_) => unreachable!("the NOT gate has no isolated edges"),
    };
    let conn = 7 * k;
    let mut g = MultiGraph::new(8 * k - 2);
    for i in 0..k {
        for &(a, b) in &gate.edges {
            g.add_edge(7 * i + a, 7 * i + b)?;
        }
        let j = (i + 1) % k;
        g.add_edge(attach(i, 2), attach(j, 0))?;
        g.add_edge(attach(i, 3), attach(j, 1))?;
    }
    let path = k - 2;
    for c in 0..path - 1 {
        g.add_edge(conn + c, conn + c + 1)?;
    }
    for i in 0..k {
        let c = i.saturating_sub(1).min(path - 1);
        g.add_edge(attach(i, 4), conn + c)?;
    }
    Ok(as_cubic(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{bridges, girth, Girth};

    #[test]
    fn petersen_shape() {
        let p = petersen();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert_eq!(girth(&p), Girth::Finite(5));
        assert!(p.is_simple());
    }

    #[test]
    fn petersen_minus_vertex_divalent() {
        let pm = petersen_minus_vertex();
        assert_eq!(pm.graph.n(), 9);
        assert_eq!((pm.x, pm.y, pm.z), (6, 7, 8));
        for v in [pm.x, pm.y, pm.z] {
            assert_eq!(pm.graph.degree(v), 2);
        }
    }

    #[test]
    fn flower_shape() {
        let j5 = flower_snark(5).unwrap();
        assert_eq!(j5.n(), 20);
        assert_eq!(girth(&j5), Girth::Finite(5));
        assert!(bridges(&j5).is_empty());
        assert_eq!(flower_snark(4).unwrap_err(), ConstructionError::EvenK(4));
    }

    #[test]
    fn glue_counts() {
        let p = petersen();
        let gl = glue(&p, 3, &p, 0).unwrap();
        assert_eq!(gl.graph.n(), 20);
        assert_eq!(gl.graph.m(), 30);
        assert!(bridges(&gl.graph).is_empty());
        let (a, b) = gl.clones;
        assert_eq!(gl.graph.endpoints(a), (p.endpoints(3).0, 10 + p.endpoints(0).0));
        assert_eq!(gl.graph.endpoints(b), (p.endpoints(3).1, 10 + p.endpoints(0).1));
        assert_eq!(glue(&p, 99, &p, 0).unwrap_err(), ConstructionError::EdgeNotFound(99));
    }

    #[test]
    fn canonical_matching() {
        let m = petersen_canonical_matching().unwrap();
        let p = petersen();
        let mut seen = std::collections::HashSet::new();
        for e in m {
            let (a, b) = p.endpoints(e);
            assert!(seen.insert(a) && seen.insert(b));
        }
    }

    #[test]
    fn derived_sizes() {
        let k = build_k_detailed().unwrap();
        assert_eq!((k.graph.n(), k.graph.m()), (50, 75));
        assert!(bridges(&k.graph).is_empty());
        assert_eq!(build_k_star().unwrap().n(), 60);
        let h = build_h28();
        assert_eq!(h.n(), 28);
        assert!(bridges(&h).is_empty());
        let g = build_g56().unwrap();
        assert_eq!(g.n(), 56);
        assert!(bridges(&g).is_empty());
    }

    #[test]
    fn loupekhine_snarks() {
        use crate::coloring::is_3_edge_colorable;
        use crate::structure::girth;
        for k in [3, 5, 7] {
            let g = loupekhine(k).unwrap();
            assert_eq!(g.n(), 8 * k - 2);
            assert!(bridges(&g).is_empty());
            assert!(!is_3_edge_colorable(&g, &Budget::default()).unwrap(), "k = {k}");
            assert!(matches!(girth(&g), Girth::Finite(x) if x >= 4));
        }
        assert_eq!(loupekhine(4).err(), Some(ConstructionError::EvenK(4)));
        assert_eq!(loupekhine(1).err(), Some(ConstructionError::TooSmall { k: 1, min: 3 }));
    }
}
