use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::MeasureName;
use crate::measures::Record;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("no graph in the corpus has an exact {tau} >= {k}")]
    NoQualifyingGraph { tau: MeasureName, k: u32 },
    #[error("{0} is not an integer measure")]
    NotIntegerMeasure(MeasureName),
}

/// Largest `k / n` over corpus graphs with `tau >= k`: a lower bound for the supremum
/// over all graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStat {
    pub tau: MeasureName,
    pub k: u32,
    pub numerator: u32,
    pub denominator: usize,
    pub value: f64,
    /// The graph attaining the maximum (first in corpus order).
    pub graph: String,
    pub qualifying_graphs: usize,
    pub label: String,
}

pub fn ratio_stats(records: &[Record], tau: MeasureName, k: u32) -> Result<RatioStat, StatsError> {
    if matches!(
        tau,
        MeasureName::CircularFlow | MeasureName::FlowCritical | MeasureName::Hypohamiltonian
    ) {
        return Err(StatsError::NotIntegerMeasure(tau));
    }
    let qualifying: Vec<_> = records
        .iter()
        .filter_map(Record::report)
        .filter(|r| r.n > 0 && r.exact(tau).is_some_and(|v| v >= k))
        .collect();
    let best = qualifying
        .iter()
        .min_by_key(|r| r.n)
        .ok_or(StatsError::NoQualifyingGraph { tau, k })?;
    Ok(RatioStat {
        tau,
        k,
        numerator: k,
        denominator: best.n,
        value: k as f64 / best.n as f64,
        graph: best.id.clone(),
        qualifying_graphs: qualifying.len(),
        label: "corpus lower bound".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::MeasureConfig;
    use crate::corpus::Input;
    use crate::measures::run_measures;
    use snark_core::constructions::{flower_snark, k4, petersen};

    #[test]
    fn petersen_ratios() {
        let inputs = vec![
            Input::from_cubic("k4", k4()),
            Input::from_cubic("j5", flower_snark(5).unwrap()),
            Input::from_cubic("p", petersen()),
        ];
        let cfg = MeasureConfig::with_measures([MeasureName::Omega, MeasureName::FlowResistance, MeasureName::Mu3]);
        let recs = run_measures(&inputs, &cfg);
        let s = ratio_stats(&recs, MeasureName::Omega, 2).unwrap();
        assert_eq!((s.numerator, s.denominator, s.graph.as_str()), (2, 10, "p"));
        assert_eq!(s.qualifying_graphs, 2);
        assert_eq!(
            ratio_stats(&recs, MeasureName::FlowResistance, 1).unwrap().denominator,
            10
        );
        assert_eq!(ratio_stats(&recs, MeasureName::Mu3, 3).unwrap().value, 0.3);
        assert_eq!(
            ratio_stats(&recs, MeasureName::Omega, 4),
            Err(StatsError::NoQualifyingGraph {
                tau: MeasureName::Omega,
                k: 4
            })
        );
        assert!(ratio_stats(&recs, MeasureName::CircularFlow, 4).is_err());
    }
}
