//! Cross-measure identities and inequalities evaluated on a single report.

use crate::config::MeasureName::{self, *};
use crate::measures::{Measure, MeasureReport, Value};

pub type Verdict = Option<Result<(), String>>;

pub struct Check {
    pub id: &'static str,
    pub statement: &'static str,
    pub operands: &'static [MeasureName],
    /// Conjectural: reported, never a failure.
    pub observation: bool,
    /// `None` when an operand is missing or the hypothesis does not hold.
    pub eval: fn(&MeasureReport) -> Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    NotApplicable,
    /// An operand was only bounded.
    Inconclusive,
}

impl Check {
    pub fn evaluate(&self, r: &MeasureReport) -> Outcome {
        match (self.eval)(r) {
            Some(Ok(())) => Outcome::Pass,
            Some(Err(e)) => Outcome::Fail(e),
            None if self
                .operands
                .iter()
                .any(|&m| matches!(r.get(m), Some(Measure::Bounded { .. }))) =>
            {
                Outcome::Inconclusive
            }
            None => Outcome::NotApplicable,
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Verdict {
    Some(if cond { Ok(()) } else { Err(msg()) })
}

fn ratio(r: &MeasureReport) -> Option<(u32, u32)> {
    match r.get(CircularFlow) {
        Some(Measure::Exact {
            value: Value::Ratio { p, q, .. },
        }) => Some((*p, *q)),
        _ => None,
    }
}

fn class2(r: &MeasureReport) -> Option<()> {
    (r.class()? == 2).then_some(())
}

fn bridgeless(r: &MeasureReport) -> Option<()> {
    r.bridgeless.then_some(())
}

pub const CHECKS: &[Check] = &[
    Check {
        id: "handshake",
        statement: "2|E| = 3n",
        operands: &[],
        observation: false,
        eval: |r| ensure(2 * r.edges == 3 * r.n, || format!("|E| = {}, n = {}", r.edges, r.n)),
    },
    Check {
        id: "d_r_rho",
        statement: "d = r = rho",
        operands: &[D, R, Rho],
        observation: false,
        eval: |r| {
            let (d, res, rho) = (r.exact(D)?, r.exact(R)?, r.exact(Rho)?);
            ensure(d == res && res == rho, || format!("d = {d}, r = {res}, rho = {rho}"))
        },
    },
    Check {
        id: "class_vs_d",
        statement: "class 2 iff d >= 2; d != 1",
        operands: &[Class, D],
        observation: false,
        eval: |r| {
            let (c, d) = (r.class()?, r.exact(D)?);
            ensure((c == 2) == (d >= 2) && d != 1, || format!("class {c}, d = {d}"))
        },
    },
    Check {
        id: "class1_zero",
        statement: "class 1 implies d, r, rho, r2, omega, omega', r_f, phi4 all 0",
        operands: &[Class, D, R, Rho, R2, Omega, OmegaWeak, FlowResistance, Phi4],
        observation: false,
        eval: |r| {
            (r.class()? == 1).then_some(())?;
            let nonzero: Vec<String> = [D, R, Rho, R2, Omega, OmegaWeak, FlowResistance, Phi4]
                .into_iter()
                .filter_map(|m| r.exact(m).filter(|&v| v != 0).map(|v| format!("{m} = {v}")))
                .collect();
            ensure(nonzero.is_empty(), || nonzero.join(", "))
        },
    },
    Check {
        id: "snark_order",
        statement: "a snark with d = d0 has n >= 10 floor((d0 + 1) / 2)",
        operands: &[Class, D],
        observation: false,
        eval: |r| {
            r.is_snark()?.then_some(())?;
            let d = r.exact(D)? as usize;
            ensure(r.n >= 10 * d.div_ceil(2), || format!("n = {}, d = {d}", r.n))
        },
    },
    Check {
        id: "r2_vs_r",
        statement: "r2 = 1 iff r = 2; r / 2 <= r2 <= 2r / 3",
        operands: &[R2, R],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (r2, res) = (r.exact(R2)?, r.exact(R)?);
            ensure((r2 == 1) == (res == 2) && res <= 2 * r2 && 3 * r2 <= 2 * res, || {
                format!("r2 = {r2}, r = {res}")
            })
        },
    },
    Check {
        id: "r2_vs_omega",
        statement: "r2 <= omega / 2",
        operands: &[R2, Omega],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (r2, w) = (r.exact(R2)?, r.exact(Omega)?);
            ensure(2 * r2 <= w, || format!("r2 = {r2}, omega = {w}"))
        },
    },
    Check {
        id: "weak_oddness_le_oddness",
        statement: "omega' <= omega; omega' = 2 implies omega = 2",
        operands: &[OmegaWeak, Omega],
        observation: false,
        eval: |r| {
            let (ww, w) = (r.exact(OmegaWeak)?, r.exact(Omega)?);
            ensure(ww <= w && (ww != 2 || w == 2), || format!("omega' = {ww}, omega = {w}"))
        },
    },
    Check {
        id: "oddness_even",
        statement: "omega and omega' are even",
        operands: &[Omega, OmegaWeak],
        observation: false,
        eval: |r| {
            let vals: Vec<u32> = [r.exact(Omega), r.exact(OmegaWeak)].into_iter().flatten().collect();
            (!vals.is_empty()).then_some(())?;
            ensure(vals.iter().all(|v| v % 2 == 0), || format!("values {vals:?}"))
        },
    },
    Check {
        id: "oddness_vs_d",
        statement: "omega >= d; d <= 1 implies omega = d; d = 2 implies omega = 2",
        operands: &[Omega, D],
        observation: false,
        eval: |r| {
            let (w, d) = (r.exact(Omega)?, r.exact(D)?);
            ensure(w >= d && (d > 1 || w == d) && (d != 2 || w == 2), || {
                format!("omega = {w}, d = {d}")
            })
        },
    },
    Check {
        id: "weak_bound",
        statement: "class 2: omega <= 2 gamma2 <= mu3 - 1",
        operands: &[Class, Omega, Gamma2, Mu3],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            class2(r)?;
            let (w, g2, m3) = (r.exact(Omega)?, r.exact(Gamma2)?, r.exact(Mu3)?);
            ensure(w <= 2 * g2 && 2 * g2 < m3, || {
                format!("omega = {w}, gamma2 = {g2}, mu3 = {m3}")
            })
        },
    },
    Check {
        id: "omega_mu3",
        statement: "omega <= (2/3) mu3",
        operands: &[Omega, Mu3],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (w, m3) = (r.exact(Omega)?, r.exact(Mu3)?);
            ensure(3 * w <= 2 * m3, || format!("omega = {w}, mu3 = {m3}"))
        },
    },
    Check {
        id: "mu3_class2",
        statement: "class 2 implies mu3 >= 3",
        operands: &[Class, Mu3],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            class2(r)?;
            let m3 = r.exact(Mu3)?;
            ensure(m3 >= 3, || format!("mu3 = {m3}"))
        },
    },
    Check {
        id: "m2_bound",
        statement: "m2 >= 3/5",
        operands: &[Mu2],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (mu, m) = (r.exact(Mu2)? as usize, r.edges);
            ensure(5 * (m - mu) >= 3 * m, || format!("mu2 = {mu}, |E| = {m}"))
        },
    },
    Check {
        id: "m3_bound",
        statement: "m3 >= 27/35",
        operands: &[Mu3],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (mu, m) = (r.exact(Mu3)? as usize, r.edges);
            ensure(35 * (m - mu) >= 27 * m, || format!("mu3 = {mu}, |E| = {m}"))
        },
    },
    Check {
        id: "mu2_identity",
        statement: "mu2 = gamma2 + |E| / 3",
        operands: &[Mu2, Gamma2],
        observation: false,
        eval: |r| {
            let (mu, g2) = (r.exact(Mu2)? as usize, r.exact(Gamma2)? as usize);
            ensure(3 * mu == 3 * g2 + r.edges, || {
                format!("mu2 = {mu}, gamma2 = {g2}, |E| = {}", r.edges)
            })
        },
    },
    Check {
        id: "excessive_vs_mu3",
        statement: "excessive index 3 iff mu3 = 0 iff class 1",
        operands: &[ExcessiveIndex, Mu3, Class],
        observation: false,
        eval: |r| {
            let (x, m3, c) = (r.exact(ExcessiveIndex)?, r.exact(Mu3)?, r.class()?);
            ensure((x == 3) == (m3 == 0) && (m3 == 0) == (c == 1), || {
                format!("excessive index {x}, mu3 = {m3}, class {c}")
            })
        },
    },
    Check {
        id: "r3_weak_oddness",
        statement: "r = 3 implies omega' = 4",
        operands: &[R, OmegaWeak],
        observation: false,
        eval: |r| {
            (r.exact(R)? == 3).then_some(())?;
            let ww = r.exact(OmegaWeak)?;
            ensure(ww == 4, || format!("omega' = {ww}"))
        },
    },
    Check {
        id: "tutte_character",
        statement: "class 1 iff F <= 4 iff F_c <= 4",
        operands: &[Class, FlowNumber, CircularFlow],
        observation: false,
        eval: |r| {
            let c = r.class()?;
            let f = r.exact(FlowNumber);
            let fc = ratio(r);
            (f.is_some() || fc.is_some()).then_some(())?;
            ensure(
                f.is_none_or(|f| (c == 1) == (f <= 4)) && fc.is_none_or(|(p, q)| (c == 1) == (p <= 4 * q)),
                || format!("class {c}, F = {f:?}, F_c = {fc:?}"),
            )
        },
    },
    Check {
        id: "circular_spectrum",
        statement: "F_c is not in (3, 4)",
        operands: &[CircularFlow],
        observation: false,
        eval: |r| {
            let (p, q) = ratio(r)?;
            ensure(!(3 * q < p && p < 4 * q), || format!("F_c = {p}/{q}"))
        },
    },
    Check {
        id: "circular_ceiling",
        statement: "F = ceil(F_c)",
        operands: &[FlowNumber, CircularFlow],
        observation: false,
        eval: |r| {
            let ((p, q), f) = (ratio(r)?, r.exact(FlowNumber)?);
            ensure(f == p.div_ceil(q), || format!("F = {f}, F_c = {p}/{q}"))
        },
    },
    Check {
        id: "circular_bipartite",
        statement: "F_c = 3 iff bipartite",
        operands: &[CircularFlow],
        observation: false,
        eval: |r| {
            let (p, q) = ratio(r)?;
            ensure((p == 3 * q) == r.bipartite, || {
                format!("F_c = {p}/{q}, bipartite {}", r.bipartite)
            })
        },
    },
    Check {
        id: "r_f_class",
        statement: "r_f = 0 iff class 1",
        operands: &[FlowResistance, Class],
        observation: false,
        eval: |r| {
            let (rf, c) = (r.exact(FlowResistance)?, r.class()?);
            ensure((rf == 0) == (c == 1), || format!("r_f = {rf}, class {c}"))
        },
    },
    Check {
        id: "r_f_gamma2",
        statement: "r_f <= gamma2",
        operands: &[FlowResistance, Gamma2],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (rf, g2) = (r.exact(FlowResistance)?, r.exact(Gamma2)?);
            ensure(rf <= g2, || format!("r_f = {rf}, gamma2 = {g2}"))
        },
    },
    Check {
        id: "phi3_extension",
        statement: "phi3 <= floor(n / 4)",
        operands: &[Phi3],
        observation: false,
        eval: |r| {
            let p = r.exact(Phi3)? as usize;
            ensure(p <= r.n / 4, || format!("phi3 = {p}, n = {}", r.n))
        },
    },
    Check {
        id: "phi4_extension",
        statement: "phi4 <= ceil(floor(n / 5) / 2)",
        operands: &[Phi4],
        observation: false,
        eval: |r| {
            let p = r.exact(Phi4)? as usize;
            ensure(p <= (r.n / 5).div_ceil(2), || format!("phi4 = {p}, n = {}", r.n))
        },
    },
    Check {
        id: "phi4_bound",
        statement: "phi4 <= min(omega / 2, r_f)",
        operands: &[Phi4, Omega, FlowResistance],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            let (p, w, rf) = (r.exact(Phi4)?, r.exact(Omega)?, r.exact(FlowResistance)?);
            ensure(2 * p <= w && p <= rf, || format!("phi4 = {p}, omega = {w}, r_f = {rf}"))
        },
    },
    Check {
        id: "phi5_bound",
        statement: "class 2: phi5 <= min(omega / 2 - 1, r_f - 1)",
        operands: &[Class, Phi5, Omega, FlowResistance],
        observation: false,
        eval: |r| {
            bridgeless(r)?;
            class2(r)?;
            let (p, w, rf) = (r.exact(Phi5)?, r.exact(Omega)?, r.exact(FlowResistance)?);
            ensure(2 * p + 2 <= w && p < rf, || {
                format!("phi5 = {p}, omega = {w}, r_f = {rf}")
            })
        },
    },
    Check {
        id: "five_flow_connectivity",
        statement: "cyclic connectivity >= (5/2) omega - 3 implies F <= 5",
        operands: &[Omega, FlowNumber],
        observation: false,
        eval: |r| {
            let (w, f) = (r.exact(Omega)? as usize, r.exact(FlowNumber)?);
            let k = r.cyclic_edge_connectivity?;
            (2 * k + 6 >= 5 * w).then_some(())?;
            ensure(f <= 5, || format!("cyclic connectivity {k}, omega = {w}, F = {f}"))
        },
    },
    Check {
        id: "flow_critical_agree",
        statement: "deletion test and characterization of 4-flow-criticality agree",
        operands: &[FlowCritical],
        observation: false,
        eval: |r| {
            let fc = r.flow_criticality.as_ref()?;
            ensure(fc.agree(), || {
                format!("deletion {}, characterization {}", fc.critical, fc.characterization)
            })
        },
    },
    Check {
        id: "hypohamiltonian_snark",
        statement: "hypohamiltonian class 2 implies r = omega = 2",
        operands: &[Hypohamiltonian, Class, R, Omega],
        observation: false,
        eval: |r| {
            r.flag(Hypohamiltonian)?.then_some(())?;
            class2(r)?;
            let (res, w) = (r.exact(R), r.exact(Omega));
            (res.is_some() || w.is_some()).then_some(())?;
            ensure(res.is_none_or(|x| x == 2) && w.is_none_or(|x| x == 2), || {
                format!("r = {res:?}, omega = {w:?}")
            })
        },
    },
    Check {
        id: "hypohamiltonian_mu3",
        statement: "hypohamiltonian class 2 implies mu3 = 3 (conjectured)",
        operands: &[Hypohamiltonian, Class, Mu3],
        observation: true,
        eval: |r| {
            r.flag(Hypohamiltonian)?.then_some(())?;
            class2(r)?;
            let m3 = r.exact(Mu3)?;
            ensure(m3 == 3, || format!("mu3 = {m3}"))
        },
    },
];

/// Ids of non-observation checks that fail on `r`.
pub fn violations(r: &MeasureReport) -> Vec<String> {
    CHECKS
        .iter()
        .filter(|c| !c.observation && matches!(c.evaluate(r), Outcome::Fail(_)))
        .map(|c| c.id.to_string())
        .collect()
}
