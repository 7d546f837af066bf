//! Serializable certificates for reported values, each re-checkable against the graph.

use serde::{Deserialize, Serialize};
use snark_core::coloring::{is_3_edge_colorable, is_proper, ConflictWitness, EdgeColoring, Palette};
use snark_core::factors::{is_perfect_matching, EvenFactor};
use snark_core::flows::{has_nowhere_zero_flow, verify_flow, Flow, FlowSpec};
use snark_core::{BitSet, Budget, EdgeId, MultiGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingCount {
    /// Size of the intersection of two matchings.
    Intersection,
    /// Edges in none of the matchings.
    Uncovered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A proper coloring; in the 4-color palette `claimed` counts edges of color 0.
    Coloring { coloring: EdgeColoring, claimed: u32 },
    /// A 3-edge-coloring with `claimed` conflicting vertices.
    Conflicts { colors: Vec<u8>, claimed: u32 },
    /// Deleting these vertices leaves a 3-edge-colorable graph.
    VertexDeletion { vertices: Vec<VertexId> },
    /// A 2-edge-colorable subgraph with `claimed` edges.
    TwoColorable { edges: Vec<EdgeId>, claimed: u32 },
    /// An even factor (2-factor when `two_factor`) with `claimed` odd components.
    EvenFactor {
        edges: Vec<EdgeId>,
        two_factor: bool,
        claimed: u32,
    },
    /// Perfect matchings with the claimed intersection or uncovered count.
    Matchings {
        matchings: Vec<Vec<EdgeId>>,
        count: MatchingCount,
        claimed: u32,
    },
    /// A flow satisfying `spec`; for Klein flows `zeros` is the claimed number of zero edges.
    Flow {
        flow: Flow,
        spec: FlowSpec,
        zeros: Option<u32>,
    },
    /// Adding these edges yields a nowhere-zero `k`-flow.
    AddedEdges { edges: Vec<(VertexId, VertexId)>, k: u32 },
}

fn claim(what: &str, got: usize, claimed: u32) -> Result<(), String> {
    if got == claimed as usize {
        Ok(())
    } else {
        Err(format!("{what}: found {got}, claimed {claimed}"))
    }
}

impl Witness {
    /// Re-derives the claim from the certificate. Deletion and augmentation certificates
    /// re-run a colorability or flow search.
    pub fn check(&self, g: &MultiGraph) -> Result<(), String> {
        match self {
            Witness::Coloring { coloring, claimed } => {
                if !is_proper(g, coloring) {
                    return Err("coloring is not proper".into());
                }
                let zeros = match coloring.palette {
                    Palette::Tait => 0,
                    Palette::Proper4 => coloring.class_zero().len(),
                };
                claim("edges of color 0", zeros, *claimed)
            }
            Witness::Conflicts { colors, claimed } => {
                if colors.len() != g.m() || colors.iter().any(|c| !(1..=3).contains(c)) {
                    return Err("colors must be 1..=3 on every edge".into());
                }
                let w = ConflictWitness::from_coloring(g, colors.clone()).map_err(|e| e.to_string())?;
                claim("conflicting vertices", w.conflicts.len(), *claimed)
            }
            Witness::VertexDeletion { vertices } => {
                if vertices.iter().any(|&v| v >= g.n()) {
                    return Err("vertex out of range".into());
                }
                let (rest, _, _) = g.delete_vertices(&g.vertex_set(vertices.iter().copied()));
                match is_3_edge_colorable(&rest, &Budget::default()) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err("remainder is not 3-edge-colorable".into()),
                    Err(e) => Err(e.to_string()),
                }
            }
            Witness::TwoColorable { edges, claimed } => {
                let set = edge_set(g, edges)?;
                let mut deg = vec![0usize; g.n()];
                for e in set.iter() {
                    let (a, b) = g.endpoints(e);
                    deg[a] += 1;
                    deg[b] += 1;
                }
                if deg.iter().any(|&d| d > 2) {
                    return Err("subgraph has a vertex of degree 3".into());
                }
                let (sub, _) = g.delete_edges(&set.complement());
                for comp in sub.components() {
                    let cyc_edges: usize = comp.iter().map(|&v| sub.degree(v)).sum::<usize>() / 2;
                    if cyc_edges == comp.len() && comp.len() % 2 == 1 {
                        return Err("subgraph contains an odd circuit".into());
                    }
                }
                claim("edges", set.count(), *claimed)
            }
            Witness::EvenFactor {
                edges,
                two_factor,
                claimed,
            } => {
                let set = edge_set(g, edges)?;
                let f = EvenFactor::from_edges(g, &set).ok_or("not an even factor")?;
                if *two_factor && !f.is_two_factor() {
                    return Err("even factor has isolated vertices".into());
                }
                claim("odd components", f.odd_components(), *claimed)
            }
            Witness::Matchings {
                matchings,
                count,
                claimed,
            } => {
                let sets = matchings
                    .iter()
                    .map(|m| edge_set(g, m))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(i) = sets.iter().position(|s| !is_perfect_matching(g, s)) {
                    return Err(format!("matching {i} is not perfect"));
                }
                let got = match count {
                    MatchingCount::Intersection => {
                        let mut acc = BitSet::full(g.m());
                        sets.iter().for_each(|s| acc.intersect_with(s));
                        acc.count()
                    }
                    MatchingCount::Uncovered => {
                        let mut acc = BitSet::new(g.m());
                        sets.iter().for_each(|s| acc.union_with(s));
                        g.m() - acc.count()
                    }
                };
                claim("matching count", got, *claimed)
            }
            Witness::Flow { flow, spec, zeros } => {
                verify_flow(g, flow, *spec).map_err(|e| e.to_string())?;
                match (flow, zeros) {
                    (Flow::Klein(f), Some(z)) => claim("zero edges", f.zeros(), *z),
                    (_, Some(_)) => Err("zero count applies to Klein flows only".into()),
                    _ => Ok(()),
                }
            }
            Witness::AddedEdges { edges, k } => {
                let mut h = g.clone();
                for &(a, b) in edges {
                    h.add_edge(a, b).map_err(|e| e.to_string())?;
                }
                match has_nowhere_zero_flow(&h, *k, &Budget::default()) {
                    Ok(Some(_)) => Ok(()),
                    Ok(None) => Err(format!("augmented graph has no nowhere-zero {k}-flow")),
                    Err(e) => Err(e.to_string()),
                }
            }
        }
    }
}

fn edge_set(g: &MultiGraph, edges: &[EdgeId]) -> Result<BitSet, String> {
    if let Some(&e) = edges.iter().find(|&&e| e >= g.m()) {
        return Err(format!("edge {e} out of range"));
    }
    let set = g.edge_set(edges.iter().copied());
    if set.count() != edges.len() {
        return Err("repeated edge".into());
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use snark_core::constructions::{k4, petersen};

    #[test]
    fn coloring_witnesses() {
        let g = k4();
        // K4 edges: perfect matchings get one color each
        let mut colors = vec![0u8; 6];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            colors[e] = match (a.min(b), a.max(b)) {
                (0, 1) | (2, 3) => 1,
                (0, 2) | (1, 3) => 2,
                _ => 3,
            };
        }
        let ok = Witness::Coloring {
            coloring: EdgeColoring::tait(colors.clone()),
            claimed: 0,
        };
        assert_eq!(ok.check(&g), Ok(()));
        let conflicts = Witness::Conflicts {
            colors: vec![1; 6],
            claimed: 4,
        };
        assert_eq!(conflicts.check(&g), Ok(()));
        colors[0] = colors[1];
        let bad = Witness::Coloring {
            coloring: EdgeColoring::tait(colors),
            claimed: 0,
        };
        assert!(bad.check(&g).is_err());
    }

    #[test]
    fn structural_witnesses() {
        let p = petersen();
        assert!(Witness::VertexDeletion { vertices: vec![] }.check(&p).is_err());
        assert!(Witness::VertexDeletion { vertices: vec![0] }.check(&p).is_err());
        let (_, vertices) = snark_core::coloring::vertex_resistance(&p, &Budget::default()).unwrap();
        assert_eq!(Witness::VertexDeletion { vertices }.check(&p), Ok(()));
        let bad = Witness::EvenFactor {
            edges: vec![0],
            two_factor: false,
            claimed: 0,
        };
        assert!(bad.check(&p).is_err());
        let empty = Witness::EvenFactor {
            edges: vec![],
            two_factor: false,
            claimed: 10,
        };
        assert_eq!(empty.check(&p), Ok(()));
        assert!(Witness::AddedEdges { edges: vec![], k: 4 }.check(&p).is_err());
        assert_eq!(Witness::AddedEdges { edges: vec![], k: 5 }.check(&p), Ok(()));
        assert!(Witness::TwoColorable {
            edges: vec![99],
            claimed: 1
        }
        .check(&p)
        .is_err());
    }
}
