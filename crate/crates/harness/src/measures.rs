use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use log::{debug, info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use snark_core::coloring::{
    chromatic_index, max_2_colorable, min_conflict_coloring, resistance, vertex_resistance, ColoringError,
};
use snark_core::factors::{excessive_index, gamma2, mu_k, oddness, weak_oddness, ExcessiveIndex, FactorError};
use snark_core::flows::{
    circular_flow_deepening, flow_number, flow_resistance, has_nowhere_zero_flow, is_4_flow_critical, phi_plus,
    CircularFlowNumber, Flow, FlowCriticality, FlowError, FlowSpec,
};
use snark_core::structure::{bridges, cyclic_edge_connectivity, girth, hamiltonicity, Girth, Hamiltonicity};
use snark_core::{as_cubic, CubicGraph};

use crate::checks;
use crate::config::{MeasureConfig, MeasureName};
use crate::corpus::Input;
use crate::witness::{MatchingCount, Witness};

pub const MEASURES_SCHEMA: &str = "snark-measures/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(u32),
    Flag(bool),
    /// `p/q`; `q_cap` is the largest denominator searched when the value came from a
    /// Farey search rather than a theorem.
    Ratio {
        p: u32,
        q: u32,
        q_cap: Option<u32>,
    },
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Flag(b) => write!(f, "{b}"),
            Value::Ratio { p, q, .. } => write!(f, "{p}/{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Measure {
    Exact { value: Value },
    Bounded { lower: u32, upper: Option<u32> },
    Skipped { reason: String },
}

impl Measure {
    fn int(v: u32) -> Self {
        Measure::Exact { value: Value::Int(v) }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Measure::Skipped { reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub schema: String,
    pub id: String,
    pub n: usize,
    pub edges: usize,
    pub bridgeless: bool,
    pub bipartite: bool,
    pub girth: Girth,
    /// `None` when no two vertex-disjoint cycles exist.
    pub cyclic_edge_connectivity: Option<usize>,
    pub measures: BTreeMap<MeasureName, Measure>,
    pub witnesses: BTreeMap<MeasureName, Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow_criticality: Option<FlowCriticality>,
    /// Ids of inequality checks that fail on this report's exact values.
    pub violations: Vec<String>,
    /// Per-measure wall time in milliseconds, only when requested.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub wall_ms: BTreeMap<MeasureName, u64>,
}

impl MeasureReport {
    pub fn get(&self, name: MeasureName) -> Option<&Measure> {
        self.measures.get(&name)
    }

    /// The exact integer value of a measure, if computed.
    pub fn exact(&self, name: MeasureName) -> Option<u32> {
        match self.measures.get(&name) {
            Some(Measure::Exact { value: Value::Int(v) }) => Some(*v),
            _ => None,
        }
    }

    pub fn flag(&self, name: MeasureName) -> Option<bool> {
        match self.measures.get(&name) {
            Some(Measure::Exact { value: Value::Flag(b) }) => Some(*b),
            _ => None,
        }
    }

    /// The class (1 or 2) when decided.
    pub fn class(&self) -> Option<u32> {
        self.exact(MeasureName::Class)
    }

    /// Class 2, girth at least 5 and cyclically 4-edge-connected.
    pub fn is_snark(&self) -> Option<bool> {
        let class2 = self.class()? == 2;
        let girth5 = matches!(self.girth, Girth::Finite(g) if g >= 5);
        let cyc4 = self.cyclic_edge_connectivity.is_some_and(|c| c >= 4);
        Some(class2 && girth5 && cyc4)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Report(MeasureReport),
    Rejected { id: String, reason: String },
}

impl Record {
    pub fn report(&self) -> Option<&MeasureReport> {
        match self {
            Record::Report(r) => Some(r),
            Record::Rejected { .. } => None,
        }
    }
}

fn from_coloring_error(e: ColoringError) -> Measure {
    match e {
        ColoringError::BudgetExhausted { lower, upper } => Measure::Bounded { lower, upper },
        ColoringError::BridgeDetected => Measure::skipped("graph has a bridge"),
        e => Measure::skipped(e.to_string()),
    }
}

fn from_factor_error(e: FactorError) -> Measure {
    match e {
        FactorError::BudgetExhausted { lower, upper } => Measure::Bounded { lower, upper },
        FactorError::BridgeDetected => Measure::skipped("graph has a bridge"),
        e => Measure::skipped(e.to_string()),
    }
}

fn from_flow_error(e: FlowError) -> Measure {
    match e {
        FlowError::BudgetExhausted { lower, upper } => Measure::Bounded { lower, upper },
        FlowError::BridgeDetected => Measure::skipped("graph has a bridge"),
        FlowError::NotClass2 => Measure::skipped("graph is class 1"),
        e => Measure::skipped(e.to_string()),
    }
}

type Computed = (Measure, Option<Witness>);

/// Values 3 and 4 are decided by bipartiteness and colorability, not by the capped search.
fn by_farey_search(c: &CircularFlowNumber) -> bool {
    !(c.q == 1 && c.p <= 4)
}

fn compute(g: &CubicGraph, name: MeasureName, cfg: &MeasureConfig) -> (Computed, Option<FlowCriticality>) {
    let budget = cfg.budget.budget();
    let b = &budget;
    let out = match name {
        MeasureName::Class => match chromatic_index(g, b) {
            Ok(ci) => (
                Measure::int(ci.index as u32 - 2),
                ci.witness.map(|c| Witness::Coloring {
                    coloring: c,
                    claimed: 0,
                }),
            ),
            Err(ColoringError::BudgetExhausted { .. }) => (
                Measure::Bounded {
                    lower: 1,
                    upper: Some(2),
                },
                None,
            ),
            Err(e) => (from_coloring_error(e), None),
        },
        MeasureName::D => match min_conflict_coloring(g, b) {
            Ok((d, w)) => (
                Measure::int(d),
                Some(Witness::Conflicts {
                    colors: w.coloring.colors,
                    claimed: d,
                }),
            ),
            Err(e) => (from_coloring_error(e), None),
        },
        MeasureName::R => match resistance(g, b) {
            Ok((r, c)) => (
                Measure::int(r),
                Some(Witness::Coloring {
                    coloring: c,
                    claimed: r,
                }),
            ),
            Err(e) => (from_coloring_error(e), None),
        },
        MeasureName::Rho => match vertex_resistance(g, b) {
            Ok((rho, vs)) => (Measure::int(rho), Some(Witness::VertexDeletion { vertices: vs })),
            Err(e) => (from_coloring_error(e), None),
        },
        MeasureName::R2 => match max_2_colorable(g, b) {
            Ok(t) => (
                Measure::int(t.r2),
                Some(Witness::TwoColorable {
                    edges: t.edges,
                    claimed: t.c2,
                }),
            ),
            Err(e) => (from_coloring_error(e), None),
        },
        MeasureName::Omega | MeasureName::OmegaWeak => {
            let two_factor = name == MeasureName::Omega;
            let res = if two_factor { oddness(g, b) } else { weak_oddness(g, b) };
            match res {
                Ok((w, f)) => (
                    Measure::int(w),
                    Some(Witness::EvenFactor {
                        edges: f.edges,
                        two_factor,
                        claimed: w,
                    }),
                ),
                Err(e) => (from_factor_error(e), None),
            }
        }
        MeasureName::Gamma2 => match gamma2(g, b) {
            Ok((v, (m1, m2))) => (
                Measure::int(v),
                Some(Witness::Matchings {
                    matchings: vec![m1.edges, m2.edges],
                    count: MatchingCount::Intersection,
                    claimed: v,
                }),
            ),
            Err(e) => (from_factor_error(e), None),
        },
        MeasureName::Mu2 | MeasureName::Mu3 => {
            let k = if name == MeasureName::Mu2 { 2 } else { 3 };
            match mu_k(g, k, b) {
                Ok((v, ms)) => (
                    Measure::int(v),
                    Some(Witness::Matchings {
                        matchings: ms.into_iter().map(|m| m.edges).collect(),
                        count: MatchingCount::Uncovered,
                        claimed: v,
                    }),
                ),
                Err(e) => (from_factor_error(e), None),
            }
        }
        MeasureName::ExcessiveIndex => match excessive_index(g, cfg.excessive_cap, b) {
            Ok(ExcessiveIndex::Value(k)) => (Measure::int(k as u32), None),
            Ok(ExcessiveIndex::Exceeds(cap)) => (
                Measure::Bounded {
                    lower: cap as u32 + 1,
                    upper: None,
                },
                None,
            ),
            Err(e) => (from_factor_error(e), None),
        },
        MeasureName::FlowNumber => match flow_number(g, b) {
            Ok(f) => {
                let w = has_nowhere_zero_flow(g, f, &cfg.budget.budget())
                    .ok()
                    .flatten()
                    .map(|flow| Witness::Flow {
                        flow: Flow::Group(flow),
                        spec: FlowSpec::NowhereZero,
                        zeros: None,
                    });
                (Measure::int(f), w)
            }
            Err(e) => (from_flow_error(e), None),
        },
        MeasureName::CircularFlow => match circular_flow_deepening(g, cfg.q_cap, b) {
            Ok((c, cap)) => {
                let by_search = by_farey_search(&c);
                let w = c.witness.map(|f| Witness::Flow {
                    flow: Flow::Integer(f),
                    spec: FlowSpec::Circular {
                        p: c.p as i64,
                        q: c.q as i64,
                    },
                    zeros: None,
                });
                let value = Value::Ratio {
                    p: c.p,
                    q: c.q,
                    q_cap: by_search.then_some(cap),
                };
                (Measure::Exact { value }, w)
            }
            Err(e) => (from_flow_error(e), None),
        },
        MeasureName::FlowResistance => match flow_resistance(g, b) {
            Ok((v, f)) => (
                Measure::int(v),
                Some(Witness::Flow {
                    flow: Flow::Klein(f),
                    spec: FlowSpec::Any,
                    zeros: Some(v),
                }),
            ),
            Err(e) => (from_flow_error(e), None),
        },
        MeasureName::Phi3 | MeasureName::Phi4 | MeasureName::Phi5 => {
            let k = match name {
                MeasureName::Phi3 => 3,
                MeasureName::Phi4 => 4,
                _ => 5,
            };
            if g.n() > cfg.phi_max_vertices {
                (
                    Measure::skipped(format!("more than {} vertices", cfg.phi_max_vertices)),
                    None,
                )
            } else {
                match phi_plus(g, k, b) {
                    Ok((v, added)) => (Measure::int(v), Some(Witness::AddedEdges { edges: added, k })),
                    Err(e) => (from_flow_error(e), None),
                }
            }
        }
        MeasureName::FlowCritical => {
            return match is_4_flow_critical(g, b) {
                Ok(fc) => (
                    (
                        Measure::Exact {
                            value: Value::Flag(fc.critical),
                        },
                        None,
                    ),
                    Some(fc),
                ),
                Err(e) => ((from_flow_error(e), None), None),
            }
        }
        MeasureName::Hypohamiltonian => match hamiltonicity(g, b) {
            Ok(h) => (
                Measure::Exact {
                    value: Value::Flag(h == Hamiltonicity::Hypohamiltonian),
                },
                None,
            ),
            Err(_) => (
                Measure::Bounded {
                    lower: 0,
                    upper: Some(1),
                },
                None,
            ),
        },
    };
    (out, None)
}

/// Measures one cubic graph.
pub fn measure_graph(id: &str, g: &CubicGraph, cfg: &MeasureConfig) -> MeasureReport {
    let mut report = MeasureReport {
        schema: MEASURES_SCHEMA.to_string(),
        id: id.to_string(),
        n: g.n(),
        edges: g.m(),
        bridgeless: bridges(g).is_empty(),
        bipartite: g.is_bipartite(),
        girth: girth(g),
        cyclic_edge_connectivity: cyclic_edge_connectivity(g),
        measures: BTreeMap::new(),
        witnesses: BTreeMap::new(),
        flow_criticality: None,
        violations: Vec::new(),
        wall_ms: BTreeMap::new(),
    };
    for &name in &cfg.measures {
        let start = Instant::now();
        let ((m, w), fc) = compute(g, name, cfg);
        let elapsed = start.elapsed();
        debug!("{id}: {name} = {m:?} in {elapsed:?}");
        if cfg.timings {
            report.wall_ms.insert(name, elapsed.as_millis() as u64);
        }
        report.measures.insert(name, m);
        if let Some(w) = w {
            report.witnesses.insert(name, w);
        }
        if fc.is_some() {
            report.flow_criticality = fc;
        }
    }
    report.violations = checks::violations(&report);
    if !report.violations.is_empty() {
        warn!("{id}: inconsistent report, failing checks {:?}", report.violations);
    }
    report
}

/// Measures every input in parallel; records keep input order.
pub fn run_measures(inputs: &[Input], cfg: &MeasureConfig) -> Vec<Record> {
    info!("measuring {} graphs", inputs.len());
    inputs
        .par_iter()
        .map(|input| {
            let g = match &input.graph {
                Ok(g) => g.clone(),
                Err(e) => {
                    warn!("{}: {e}", input.id);
                    return Record::Rejected {
                        id: input.id.clone(),
                        reason: e.clone(),
                    };
                }
            };
            match as_cubic(g) {
                Ok(c) => Record::Report(measure_graph(&input.id, &c, cfg)),
                Err(e) => {
                    warn!("{}: skipped, {e}", input.id);
                    Record::Rejected {
                        id: input.id.clone(),
                        reason: e.to_string(),
                    }
                }
            }
        })
        .collect()
}

fn cell(m: Option<&Measure>) -> String {
    match m {
        None => String::new(),
        Some(Measure::Exact { value }) => value.to_string(),
        Some(Measure::Bounded { lower, upper }) => match upper {
            Some(u) => format!("[{lower},{u}]"),
            None => format!(">={lower}"),
        },
        Some(Measure::Skipped { .. }) => "skipped".to_string(),
    }
}

/// Flattens records to CSV, one column per measure.
pub fn to_csv(records: &[Record]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = [
        "schema",
        "id",
        "status",
        "n",
        "edges",
        "girth",
        "cyclic_edge_connectivity",
    ]
    .map(String::from)
    .to_vec();
    header.extend(MeasureName::ALL.iter().map(|m| m.to_string()));
    header.push("violations".into());
    w.write_record(&header)?;
    for rec in records {
        let row: Vec<String> = match rec {
            Record::Rejected { id, reason } => {
                let mut row = vec![MEASURES_SCHEMA.to_string(), id.clone(), format!("rejected: {reason}")];
                row.resize(header.len(), String::new());
                row
            }
            Record::Report(r) => {
                let mut row = vec![
                    r.schema.clone(),
                    r.id.clone(),
                    "ok".into(),
                    r.n.to_string(),
                    r.edges.to_string(),
                    match r.girth {
                        Girth::Finite(g) => g.to_string(),
                        Girth::Infinite => "inf".into(),
                    },
                    r.cyclic_edge_connectivity.map(|c| c.to_string()).unwrap_or_default(),
                ];
                row.extend(MeasureName::ALL.iter().map(|&m| cell(r.get(m))));
                row.push(r.violations.join(" "));
                row
            }
        };
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
