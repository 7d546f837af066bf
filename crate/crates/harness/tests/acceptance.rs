//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.
//!
//! Criteria run one at a time so wall-clock limits are measured without contention.

use std::io::Write;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snark_core::coloring::{
    chromatic_index, is_3_edge_colorable, is_proper, min_conflict_coloring, resistance, resistance_by_deletion,
    vertex_resistance,
};
use snark_core::constructions::{
    build_g56, build_h28, build_k_detailed, build_k_star, flower_snark, k33, k4, loupekhine, petersen,
};
use snark_core::factors::{edge_factor_profile, m_k_fraction, oddness, weak_oddness};
use snark_core::flows::{
    circular_flow, circular_flow_number, flow_number, flow_resistance, flow_resistance_pair_scan,
    flow_resistance_search, is_4_flow_critical, verify_flow, Flow, FlowSpec,
};
use snark_core::multipole::{
    are_color_disjoint, check_not_gate, is_color_complete, not_gate, parity_check, parity_universe, split,
    tait_colorings, Multipole, Semiedge,
};
use snark_core::structure::{bridges, cyclic_edge_connectivity, girth, Girth};
use snark_core::{as_cubic, Budget, CubicGraph, MultiGraph};
use snark_harness::checks::{Outcome, CHECKS};
use snark_harness::corpus::{builder_input, PAPER_SUITE};
use snark_harness::measures::measure_graph;
use snark_harness::verify::isomorphic;
use snark_harness::{
    read_graph6_file, run_measures, verify_records, BudgetSpec, Input, Measure, MeasureConfig, MeasureName, Value,
};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, title: &str, started: Instant, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "acceptance {id} {status}: {title} [{:.1?}]", started.elapsed()).unwrap();
    for f in failures.iter().take(12) {
        writeln!(out, "    {f}").unwrap();
    }
    drop(out);
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn b() -> Budget {
    Budget::default()
}

fn fixture(n: usize) -> Vec<(String, CubicGraph)> {
    let path = format!("{}/fixtures/cubic_n{n}.g6", env!("CARGO_MANIFEST_DIR"));
    read_graph6_file(&path)
        .unwrap()
        .into_iter()
        .map(|i| (i.id, as_cubic(i.graph.unwrap()).unwrap()))
        .collect()
}

fn corpus(ns: &[usize]) -> Vec<(String, CubicGraph)> {
    ns.iter().flat_map(|&n| fixture(n)).collect()
}

fn bridgeless(ns: &[usize]) -> Vec<(String, CubicGraph)> {
    corpus(ns).into_iter().filter(|(_, g)| bridges(g).is_empty()).collect()
}

fn class2(g: &MultiGraph) -> bool {
    !is_3_edge_colorable(g, &b()).unwrap()
}

#[test]
fn criterion_1_petersen_profile() {
    use MeasureName::*;
    let _guard = serial();
    let start = Instant::now();
    let p = petersen();
    let r = measure_graph("petersen", &p, &MeasureConfig::default());
    let elapsed = start.elapsed();
    let mut fails = Vec::new();
    if chromatic_index(&p, &b()).unwrap().index != 4 {
        fails.push("chromatic index is not 4".to_string());
    }
    let ints = [
        (Class, 2),
        (D, 2),
        (R, 2),
        (Rho, 2),
        (Omega, 2),
        (OmegaWeak, 2),
        (Gamma2, 1),
        (Mu2, 6),
        (Mu3, 3),
        (ExcessiveIndex, 5),
        (FlowResistance, 1),
        (FlowNumber, 5),
        (Phi4, 1),
    ];
    for (m, v) in ints {
        if r.exact(m) != Some(v) {
            fails.push(format!("{m}: expected {v}, got {:?}", r.get(m)));
        }
    }
    if let Some(mu2) = r.exact(Mu2) {
        if m_k_fraction(mu2, p.m()) != (3, 5) {
            fails.push(format!("m2 = {:?}", m_k_fraction(mu2, p.m())));
        }
    }
    match r.get(CircularFlow) {
        Some(Measure::Exact {
            value: Value::Ratio { p: 5, q: 1, .. },
        }) => {}
        other => fails.push(format!("circular flow number: {other:?}")),
    }
    for m in [Hypohamiltonian, FlowCritical] {
        if r.flag(m) != Some(true) {
            fails.push(format!("{m}: {:?}", r.get(m)));
        }
    }
    if r.girth != Girth::Finite(5) || r.cyclic_edge_connectivity != Some(5) {
        fails.push(format!(
            "girth {:?}, cyclic connectivity {:?}",
            r.girth, r.cyclic_edge_connectivity
        ));
    }
    for (m, w) in &r.witnesses {
        if let Err(e) = w.check(&p) {
            fails.push(format!("{m} witness: {e}"));
        }
    }
    if !r.violations.is_empty() {
        fails.push(format!("violated checks {:?}", r.violations));
    }
    if elapsed >= Duration::from_secs(5) {
        fails.push(format!("profile took {elapsed:?}"));
    }
    report(1, "Petersen profile", start, &fails);
}

#[test]
fn criterion_2_d_r_rho() {
    let _guard = serial();
    let start = Instant::now();
    let mut graphs: Vec<(String, CubicGraph)> = vec![
        ("petersen".into(), petersen()),
        ("flower_snark:5".into(), flower_snark(5).unwrap()),
        ("flower_snark:7".into(), flower_snark(7).unwrap()),
        ("h28".into(), build_h28()),
        ("g56".into(), build_g56().unwrap()),
    ];
    let class2_corpus: Vec<_> = corpus(&[4, 6, 8, 10, 12, 14, 16])
        .into_iter()
        .filter(|(_, g)| class2(g))
        .collect();
    let corpus_count = class2_corpus.len();
    graphs.extend(class2_corpus);
    let mut fails = Vec::new();
    for (id, g) in &graphs {
        let (d, cw) = min_conflict_coloring(g, &b()).unwrap();
        let (r, col) = resistance(g, &b()).unwrap();
        let (rho, deleted) = vertex_resistance(g, &b()).unwrap();
        if d != r || r != rho {
            fails.push(format!("{id}: d = {d}, r = {r}, rho = {rho}"));
        }
        if cw.conflicts.len() as u32 != d || !is_proper(g, &col) || col.class_zero().len() as u32 != r {
            fails.push(format!("{id}: witness does not certify d or r"));
        }
        let (rest, _, _) = g.delete_vertices(&g.vertex_set(deleted.iter().copied()));
        if deleted.len() as u32 != rho || class2(&rest) {
            fails.push(format!("{id}: deletion witness does not certify rho"));
        }
    }
    if corpus_count == 0 {
        fails.push("no class-2 graphs in the corpus".into());
    }
    let title = format!("d = r = rho on 5 named graphs and {corpus_count} class-2 corpus graphs");
    report(2, &title, start, &fails);
}

#[test]
fn criterion_3_k_and_k_star() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let k = build_k_detailed().unwrap();
    let ks = build_k_star().unwrap();
    let (w_k, w_k_weak) = (
        oddness(&k.graph, &b()).unwrap().0,
        weak_oddness(&k.graph, &b()).unwrap().0,
    );
    let (w_s, w_s_weak) = (oddness(&ks, &b()).unwrap().0, weak_oddness(&ks, &b()).unwrap().0);
    if (w_k, w_k_weak) != (6, 6) {
        fails.push(format!("K: omega = {w_k}, omega' = {w_k_weak}"));
    }
    if (w_s, w_s_weak) != (8, 6) {
        fails.push(format!("K*: omega = {w_s}, omega' = {w_s_weak}"));
    }
    let even = edge_factor_profile(&k.graph, k.e1, false, &b()).unwrap();
    if even.on_odd_circuit != Some(w_k_weak) {
        fails.push(format!("e1 is on no odd circuit of a minimal even factor: {even:?}"));
    }
    let two = edge_factor_profile(&k.graph, k.e1, true, &b()).unwrap();
    if two.containing().is_some_and(|c| c <= w_k) {
        fails.push(format!("e1 lies in a minimal 2-factor: {two:?}"));
    }
    report(
        3,
        "K has omega = omega' = 6; K* has omega = 8, omega' = 6; (K, e1) meets the glueing hypotheses",
        start,
        &fails,
    );
}

#[test]
fn criterion_4_resistance_constructions() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    for (id, g, r, w) in [("H28", build_h28(), 3, 4), ("G56", build_g56().unwrap(), 4, 6)] {
        let got = (
            resistance(&g, &b()).unwrap().0,
            oddness(&g, &b()).unwrap().0,
            weak_oddness(&g, &b()).unwrap().0,
        );
        if got != (r, w, w) {
            fails.push(format!("{id}: (r, omega, omega') = {got:?}, expected ({r}, {w}, {w})"));
        }
    }
    report(
        4,
        "H28 has r = 3, omega = omega' = 4; G56 has r = 4, omega = omega' = 6",
        start,
        &fails,
    );
}

/// Checks that must be evaluated on at least one graph.
const INEQUALITIES: [&str; 17] = [
    "weak_oddness_le_oddness",
    "oddness_vs_d",
    "weak_bound",
    "omega_mu3",
    "mu3_class2",
    "m2_bound",
    "m3_bound",
    "r2_vs_r",
    "r2_vs_omega",
    "r_f_gamma2",
    "phi3_extension",
    "phi4_extension",
    "phi4_bound",
    "phi5_bound",
    "snark_order",
    "d_r_rho",
    "mu2_identity",
];

#[test]
fn criterion_5_inequality_suite() {
    let _guard = serial();
    let start = Instant::now();
    let mut inputs: Vec<Input> = PAPER_SUITE.iter().map(|s| builder_input(s).unwrap()).collect();
    inputs.extend(
        corpus(&[4, 6, 8, 10, 12])
            .into_iter()
            .map(|(id, g)| Input::from_cubic(id, g)),
    );
    let cfg = MeasureConfig {
        budget: "nodes=1e8,time=60s".parse::<BudgetSpec>().unwrap(),
        ..MeasureConfig::default()
    };
    let records = run_measures(&inputs, &cfg);
    let mut fails = Vec::new();
    let mut tested = 0;
    for check in CHECKS.iter().filter(|c| !c.observation) {
        let mut evaluated = 0;
        for r in records.iter().filter_map(|r| r.report()) {
            match check.evaluate(r) {
                Outcome::Pass => evaluated += 1,
                Outcome::Fail(e) => fails.push(format!("{} on {}: {e}", check.id, r.id)),
                Outcome::Inconclusive | Outcome::NotApplicable => {}
            }
        }
        if INEQUALITIES.contains(&check.id) && evaluated == 0 {
            fails.push(format!("{} never evaluated", check.id));
        }
        tested += evaluated;
    }
    let rep = verify_records(&inputs, &records);
    for e in rep.entries.iter().filter(|e| !e.passed && !e.observation) {
        fails.push(format!("{}: {:?}", e.id, e.failures.first().map(|f| &f.detail)));
    }
    let title = format!(
        "inequality suite on {} graphs, {tested} exact evaluations",
        inputs.len()
    );
    report(5, &title, start, &fails);
}

fn circular(p: u32, q: u32) -> FlowSpec {
    FlowSpec::Circular {
        p: p as i64,
        q: q as i64,
    }
}

#[test]
fn criterion_6_flows() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let c = circular_flow_number(&k33(), 10, &b()).unwrap();
    if (c.p, c.q) != (3, 1) {
        fails.push(format!("F_c(K33) = {}/{}", c.p, c.q));
    }
    if flow_number(&k4(), &b()).unwrap() != 4 {
        fails.push("F(K4) != 4".into());
    }
    let graphs = bridgeless(&[4, 6, 8, 10, 12, 14, 16]);
    let mut class1 = 0;
    for (id, g) in &graphs {
        let c = circular_flow_number(g, 10, &b()).unwrap();
        if 3 * c.q < c.p && c.p < 4 * c.q {
            fails.push(format!("{id}: F_c = {}/{} lies in (3, 4)", c.p, c.q));
        }
        if class2(g) {
            continue;
        }
        class1 += 1;
        match circular_flow(g, 4, 1, &b()).unwrap() {
            Some(f) if verify_flow(g, &Flow::Integer(f.clone()), circular(4, 1)).is_ok() => {}
            _ => fails.push(format!("{id}: class 1 without a verified 4-flow")),
        }
        let (rf, kf) = flow_resistance(g, &b()).unwrap();
        if rf != 0 || verify_flow(g, &Flow::Klein(kf), FlowSpec::NowhereZero).is_err() {
            fails.push(format!("{id}: class 1 with r_f = {rf}"));
        }
        if !g.is_bipartite() && g.n() <= 12 {
            for (p, q) in [(7, 2), (11, 3), (15, 4)] {
                if circular_flow(g, p, q, &b()).unwrap().is_some() {
                    fails.push(format!("{id}: non-bipartite with a {p}/{q}-flow"));
                }
            }
        }
    }
    let mut hard: Vec<(String, CubicGraph)> = vec![
        ("petersen".into(), petersen()),
        ("flower_snark:5".into(), flower_snark(5).unwrap()),
        ("flower_snark:7".into(), flower_snark(7).unwrap()),
        ("loupekhine:5".into(), loupekhine(5).unwrap()),
    ];
    hard.extend(graphs.into_iter().filter(|(_, g)| class2(g)));
    for (id, g) in &hard {
        let fc = is_4_flow_critical(g, &b()).unwrap();
        if !fc.agree() {
            fails.push(format!(
                "{id}: deletion test {} vs characterization {}",
                fc.critical, fc.characterization
            ));
        }
        if id.starts_with("flower_snark") && !fc.critical {
            fails.push(format!("{id} is not 4-flow-critical"));
        }
    }
    let title = format!(
        "flow characterizations on {class1} class-1 graphs; criticality agrees on {} class-2 graphs",
        hard.len()
    );
    report(6, &title, start, &fails);
}

/// A connected vertex set grown at random; its boundary is an edge cut.
fn random_cut(g: &MultiGraph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let target = rng.gen_range(1..g.n());
    let mut inside = vec![false; g.n()];
    let start = rng.gen_range(0..g.n());
    inside[start] = true;
    let mut members = vec![start];
    while members.len() < target {
        let frontier: Vec<usize> = members
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|&w| !inside[w])
            .collect();
        let Some(&w) = frontier.choose(rng) else { break };
        inside[w] = true;
        members.push(w);
    }
    (0..g.m())
        .filter(|&e| {
            let (a, c) = g.endpoints(e);
            inside[a] != inside[c]
        })
        .collect()
}

/// The multipole left after cutting `edges`, each into two semiedges.
fn cut_edges(g: &MultiGraph, edges: &[usize]) -> Multipole {
    let kept = (0..g.m())
        .filter(|e| !edges.contains(e))
        .map(|e| g.endpoints(e))
        .collect();
    let semiedges = edges
        .iter()
        .flat_map(|&e| {
            let (a, c) = g.endpoints(e);
            [Semiedge::Attached(a), Semiedge::Attached(c)]
        })
        .collect();
    Multipole::new(g.n(), kept, semiedges).unwrap()
}

/// Whether the edges within `side` contain a circuit.
fn has_cycle(g: &MultiGraph, side: &[usize]) -> bool {
    let inner = (0..g.m())
        .filter(|&e| {
            let (a, c) = g.endpoints(e);
            side.contains(&a) && side.contains(&c)
        })
        .count();
    inner >= side.len()
}

fn subsets(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for e in start..m {
        cur.push(e);
        subsets(m, k, e + 1, cur, out);
        cur.pop();
    }
}

#[test]
fn criterion_7_multipoles() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let graphs = bridgeless(&[4, 6, 8, 10, 12]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut colorings, mut poles) = (0usize, 0usize);
    while colorings < 10_000 || poles < 200 {
        let (_, g) = graphs.choose(&mut rng).unwrap();
        let mps = if rng.gen_bool(0.5) {
            let cut = random_cut(g, &mut rng);
            if cut.is_empty() || cut.len() > 6 {
                continue;
            }
            match split(g, &cut) {
                Ok(s) => vec![s.first, s.second],
                Err(_) => continue,
            }
        } else {
            let k = rng.gen_range(1..=3);
            let mut edges: Vec<usize> = (0..g.m()).collect();
            edges.shuffle(&mut rng);
            vec![cut_edges(g, &edges[..k])]
        };
        for mp in mps {
            let col = tait_colorings(&mp, &b()).unwrap();
            let universe = parity_universe(mp.m());
            for t in &col.tuples {
                let mut counts = [0usize; 3];
                for &c in t {
                    counts[c as usize - 1] += 1;
                }
                if !parity_check(counts, mp.m()) || !universe.contains(t) {
                    fails.push(format!("tuple {t:?} breaks parity"));
                }
            }
            colorings += col.len();
            poles += 1;
        }
    }

    let (v, e) = (Multipole::vertex(), Multipole::isolated_edge());
    for (name, mp, count) in [("3-pole", &v, 6), ("2-pole", &e, 3)] {
        let col = tait_colorings(mp, &b()).unwrap();
        if col.len() != count || !is_color_complete(mp, &b()).unwrap() {
            fails.push(format!("{name}: {} colorings", col.len()));
        }
    }
    if check_not_gate(&not_gate(), &b()).unwrap() != Ok(()) {
        fails.push("NOT gate check fails".into());
    }
    for k in [5, 7] {
        if !class2(&loupekhine(k).unwrap()) {
            fails.push(format!("loupekhine({k}) is 3-edge-colorable"));
        }
    }

    let p = petersen();
    let mut cyclic_cuts = 0;
    for size in 1..=5 {
        let mut all = Vec::new();
        subsets(p.m(), size, 0, &mut Vec::new(), &mut all);
        for cut in all {
            let removed = p.edge_set(cut.iter().copied());
            let comps = p.delete_edges(&removed).0.components();
            let crossing = cut.iter().all(|&e| {
                let (a, c) = p.endpoints(e);
                comps.iter().all(|comp| comp.contains(&a) != comp.contains(&c))
            });
            if comps.len() != 2 || !crossing || !comps.iter().all(|c| has_cycle(&p, c)) {
                continue;
            }
            cyclic_cuts += 1;
            let s = split(&p, &cut).unwrap();
            if !are_color_disjoint(&s.first, &s.second, &b()).unwrap() {
                fails.push(format!("cut {cut:?} sides share a coloring"));
            }
        }
    }
    if cyclic_cuts == 0 {
        fails.push("no cyclic cuts found in Petersen".into());
    }
    let title = format!(
        "parity over {colorings} colorings of {poles} multipoles; small poles, NOT gate, Loupekhine snarks; {cyclic_cuts} Petersen cyclic cuts color-disjoint"
    );
    report(7, &title, start, &fails);
}

#[test]
fn criterion_8_small_snarks() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let is_snark = |g: &CubicGraph| {
        matches!(girth(g), Girth::Finite(x) if x >= 5)
            && cyclic_edge_connectivity(g).is_some_and(|c| c >= 4)
            && class2(g)
    };
    let mut scanned = 0;
    for n in [12, 14, 16] {
        for (id, g) in fixture(n) {
            scanned += 1;
            if is_snark(&g) {
                fails.push(format!("{id} is a snark"));
            }
        }
    }
    let n10: Vec<_> = fixture(10).into_iter().filter(|(_, g)| is_snark(g)).collect();
    if n10.len() != 1 || !isomorphic(&n10[0].1, &petersen()) {
        fails.push(format!(
            "snarks on 10 vertices: {:?}",
            n10.iter().map(|x| &x.0).collect::<Vec<_>>()
        ));
    }

    let mut inputs: Vec<Input> = Vec::new();
    for n in [10, 12, 14, 16] {
        inputs.extend(fixture(n).into_iter().map(|(id, g)| Input::from_cubic(id, g)));
    }
    let records = run_measures(&inputs, &MeasureConfig::with_measures([MeasureName::Class]));
    let rep = verify_records(&inputs, &records);
    for id in ["no_snark_12_14_16", "petersen_unique_n10"] {
        match rep.entry(id) {
            Some(e) if e.passed && e.inconclusive.is_empty() && e.graphs_tested > 0 => {}
            other => fails.push(format!("{id}: {other:?}")),
        }
    }
    let title = format!("no snarks among {scanned} graphs on 12, 14, 16 vertices; Petersen is the only one on 10");
    report(8, &title, start, &fails);
}

/// Fewest odd circuits over all 2-factors, by scanning every edge subset.
fn oddness_by_enumeration(g: &MultiGraph) -> Option<u32> {
    assert!(g.m() < 32);
    let inc: Vec<u32> = (0..g.n())
        .map(|v| g.incident(v).iter().fold(0u32, |acc, i| acc | 1 << i.edge))
        .collect();
    let mut best = None;
    for mask in 0u32..1 << g.m() {
        if mask.count_ones() as usize != g.n() || inc.iter().any(|&m| (mask & m).count_ones() != 2) {
            continue;
        }
        let chosen = g.edge_set((0..g.m()).filter(|&e| mask >> e & 1 == 1));
        let rest = g.delete_edges(&chosen.complement()).0;
        let odd = rest.components().iter().filter(|c| c.len() % 2 == 1).count() as u32;
        best = Some(best.map_or(odd, |b: u32| b.min(odd)));
    }
    best
}

#[test]
fn criterion_9_cross_oracles() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let graphs = bridgeless(&[4, 6, 8, 10, 12]);
    for (id, g) in &graphs {
        let w = oddness(g, &b()).unwrap().0;
        let direct = oddness_by_enumeration(g);
        if direct != Some(w) {
            fails.push(format!("{id}: oddness {w} vs enumeration {direct:?}"));
        }
        let d = min_conflict_coloring(g, &b()).unwrap().0;
        let r = resistance_by_deletion(g, &b()).unwrap();
        if d != r {
            fails.push(format!("{id}: d = {d}, r by deletion = {r}"));
        }
        let scan = flow_resistance_pair_scan(g, &b()).unwrap().0;
        let search = flow_resistance_search(g, &b()).unwrap().0;
        if scan != search {
            fails.push(format!("{id}: r_f pair scan {scan} vs search {search}"));
        }
    }
    let title = format!(
        "oddness, resistance and flow resistance oracles agree on {} bridgeless graphs",
        graphs.len()
    );
    report(9, &title, start, &fails);
}
