use proptest::prelude::*;
use snark_core::coloring::{chromatic_index, is_proper, kempe_switch};
use snark_core::factors::weak_oddness;
use snark_core::io::{parse_graph6, write_graph6};
use snark_core::multipole::{join, parity_check, parity_universe, split, tait_colorings};
use snark_core::{as_cubic, Budget, CubicGraph, MultiGraph};

const N10: &str = include_str!("../../harness/fixtures/cubic_n10.g6");
const N12: &str = include_str!("../../harness/fixtures/cubic_n12.g6");

fn corpus() -> Vec<CubicGraph> {
    N10.lines()
        .chain(N12.lines())
        .map(|l| as_cubic(parse_graph6(l).unwrap()).unwrap())
        .collect()
}

fn sorted_edges(g: &MultiGraph) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    e.sort();
    e
}

/// Edges with exactly one end in the vertex set given by `mask`.
fn boundary(g: &MultiGraph, mask: u32) -> Vec<usize> {
    (0..g.m())
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            (mask >> a & 1) != (mask >> b & 1)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trip(n in 1usize..=24, bits in proptest::collection::vec(any::<bool>(), 276)) {
        let mut g = MultiGraph::new(n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits[k] {
                    g.add_edge(a, b).unwrap();
                }
                k += 1;
            }
        }
        let text = write_graph6(&g).unwrap();
        let h = parse_graph6(&text).unwrap();
        prop_assert_eq!(h.n(), n);
        prop_assert_eq!(sorted_edges(&h), sorted_edges(&g));
    }

    #[test]
    fn boundary_colorings_obey_parity(idx in 0usize..104, mask in 1u32..(1 << 12)) {
        let graphs = corpus();
        let g = graphs[idx % graphs.len()].as_multigraph();
        let mask = mask & ((1u32 << g.n()) - 1);
        let cut = boundary(g, mask);
        prop_assume!(!cut.is_empty() && cut.len() <= 7);
        let Ok(s) = split(g, &cut) else { return Ok(()) };
        let universe = parity_universe(cut.len());
        for side in [&s.first, &s.second] {
            let col = tait_colorings(side, &Budget::default()).unwrap();
            prop_assert!(col.is_subset(&universe));
            for t in &col.tuples {
                let mut c = [0usize; 3];
                t.iter().for_each(|&x| c[x as usize - 1] += 1);
                prop_assert!(parity_check(c, t.len()));
            }
        }
    }

    #[test]
    fn join_inverts_split(idx in 0usize..104, mask in 1u32..(1 << 12)) {
        let graphs = corpus();
        let g = graphs[idx % graphs.len()].as_multigraph();
        let mask = mask & ((1u32 << g.n()) - 1);
        let cut = boundary(g, mask);
        prop_assume!(!cut.is_empty());
        let Ok(s) = split(g, &cut) else { return Ok(()) };
        let pairing: Vec<_> = (0..cut.len()).map(|i| (i, i)).collect();
        let joined = join(&s.first, &s.second, &pairing).unwrap();
        prop_assert!(joined.semiedges.is_empty());
        prop_assert_eq!(joined.n, g.n());
        let back: Vec<usize> = s.first_vertices.iter().chain(&s.second_vertices).copied().collect();
        let h = MultiGraph::from_edges(g.n(), joined.edges.iter().map(|&(a, b)| (back[a], back[b]))).unwrap();
        prop_assert_eq!(sorted_edges(&h), sorted_edges(g));
    }

    #[test]
    fn kempe_switch_is_an_involution(idx in 0usize..104, v in 0usize..12, pair in 0usize..3) {
        let graphs = corpus();
        let g = &graphs[idx % graphs.len()];
        let Some(col) = chromatic_index(g, &Budget::default()).unwrap().witness else { return Ok(()) };
        let g = g.as_multigraph();
        let v = v % g.n();
        let pair = [(1, 2), (1, 3), (2, 3)][pair];
        let once = kempe_switch(g, &col, v, pair).unwrap();
        prop_assert!(is_proper(g, &once));
        prop_assert_ne!(&once.colors, &col.colors);
        let twice = kempe_switch(g, &once, v, pair).unwrap();
        prop_assert_eq!(twice.colors, col.colors);
    }
}

/// Fewest odd components (isolated vertices included) over all even subgraphs.
fn weak_oddness_by_enumeration(g: &MultiGraph) -> u32 {
    let (n, m) = (g.n(), g.m());
    let mut best = u32::MAX;
    for mask in 0u32..(1 << m) {
        let mut deg = vec![0u8; n];
        for e in (0..m).filter(|&e| mask >> e & 1 == 1) {
            let (a, b) = g.endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|d| d % 2 == 1) {
            continue;
        }
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            if c[x] != x {
                c[x] = find(c, c[x]);
            }
            c[x]
        }
        for e in (0..m).filter(|&e| mask >> e & 1 == 1) {
            let (a, b) = g.endpoints(e);
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            comp[ra] = rb;
        }
        let mut size = vec![0u32; n];
        for v in 0..n {
            size[find(&mut comp, v)] += 1;
        }
        best = best.min(size.iter().filter(|&&s| s % 2 == 1).count() as u32);
    }
    best
}

#[test]
fn weak_oddness_matches_enumeration_with_bridges() {
    for g in corpus() {
        let (w, f) = weak_oddness(&g, &Budget::default()).unwrap();
        assert_eq!(f.odd_components() as u32, w);
        assert_eq!(
            w,
            weak_oddness_by_enumeration(g.as_multigraph()),
            "{:?}",
            g.as_multigraph().edges()
        );
    }
}
