use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use snark_core::budget::DEFAULT_NODES;
use snark_core::Budget;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),
    #[error("invalid budget `{0}`: expected e.g. `1e8`, `nodes=5e7,time=30s`")]
    InvalidBudget(String),
}

/// Every measure a report can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureName {
    Class,
    D,
    R,
    Rho,
    R2,
    Omega,
    OmegaWeak,
    Gamma2,
    Mu2,
    Mu3,
    ExcessiveIndex,
    FlowNumber,
    CircularFlow,
    #[serde(rename = "r_f")]
    FlowResistance,
    Phi3,
    Phi4,
    Phi5,
    FlowCritical,
    Hypohamiltonian,
}

impl MeasureName {
    pub const ALL: [MeasureName; 19] = [
        MeasureName::Class,
        MeasureName::D,
        MeasureName::R,
        MeasureName::Rho,
        MeasureName::R2,
        MeasureName::Omega,
        MeasureName::OmegaWeak,
        MeasureName::Gamma2,
        MeasureName::Mu2,
        MeasureName::Mu3,
        MeasureName::ExcessiveIndex,
        MeasureName::FlowNumber,
        MeasureName::CircularFlow,
        MeasureName::FlowResistance,
        MeasureName::Phi3,
        MeasureName::Phi4,
        MeasureName::Phi5,
        MeasureName::FlowCritical,
        MeasureName::Hypohamiltonian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureName::Class => "class",
            MeasureName::D => "d",
            MeasureName::R => "r",
            MeasureName::Rho => "rho",
            MeasureName::R2 => "r2",
            MeasureName::Omega => "omega",
            MeasureName::OmegaWeak => "omega_weak",
            MeasureName::Gamma2 => "gamma2",
            MeasureName::Mu2 => "mu2",
            MeasureName::Mu3 => "mu3",
            MeasureName::ExcessiveIndex => "excessive_index",
            MeasureName::FlowNumber => "flow_number",
            MeasureName::CircularFlow => "circular_flow",
            MeasureName::FlowResistance => "r_f",
            MeasureName::Phi3 => "phi3",
            MeasureName::Phi4 => "phi4",
            MeasureName::Phi5 => "phi5",
            MeasureName::FlowCritical => "flow_critical",
            MeasureName::Hypohamiltonian => "hypohamiltonian",
        }
    }

    /// Parses `all` or a comma-separated list of names.
    pub fn parse_list(s: &str) -> Result<BTreeSet<MeasureName>, ConfigError> {
        if s.trim() == "all" {
            return Ok(MeasureName::ALL.into_iter().collect());
        }
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for MeasureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureName {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MeasureName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| ConfigError::UnknownMeasure(s.to_string()))
    }
}

/// Node and wall-clock limits applied to each measure of each graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub nodes: u64,
    pub time: Option<Duration>,
}

/// Default wall-clock limit per measure per graph.
pub const DEFAULT_TIME: Duration = Duration::from_secs(120);

impl Default for BudgetSpec {
    fn default() -> Self {
        BudgetSpec {
            nodes: DEFAULT_NODES,
            time: Some(DEFAULT_TIME),
        }
    }
}

impl BudgetSpec {
    /// A fresh budget; the time limit starts now.
    pub fn budget(&self) -> Budget {
        let b = Budget::nodes(self.nodes);
        match self.time {
            Some(t) => b.with_time_limit(t),
            None => b,
        }
    }
}

fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let v = s.parse::<f64>().ok()?;
    (v.is_finite() && v >= 0.0 && v <= u64::MAX as f64).then_some(v as u64)
}

fn parse_duration(s: &str) -> Option<Duration> {
    let (num, unit) = s.split_at(s.find(|c: char| c.is_ascii_alphabetic())?);
    let v: f64 = num.parse().ok()?;
    let secs = match unit {
        "ms" => v / 1000.0,
        "s" => v,
        "m" | "min" => v * 60.0,
        "h" => v * 3600.0,
        _ => return None,
    };
    (secs.is_finite() && secs >= 0.0).then(|| Duration::from_secs_f64(secs))
}

impl FromStr for BudgetSpec {
    type Err = ConfigError;
    /// `1e8`, `30s`, or `nodes=1e8,time=30s`; unspecified limits keep their defaults and
    /// `unlimited` lifts both.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::InvalidBudget(s.to_string());
        let mut spec = BudgetSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some(("nodes", v)) => spec.nodes = parse_count(v).ok_or_else(bad)?,
                Some(("time", v)) => spec.time = Some(parse_duration(v).ok_or_else(bad)?),
                Some(_) => return Err(bad()),
                None if part == "unlimited" => {
                    spec.nodes = u64::MAX;
                    spec.time = None;
                }
                None => match parse_count(part) {
                    Some(n) => spec.nodes = n,
                    None => spec.time = Some(parse_duration(part).ok_or_else(bad)?),
                },
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub measures: BTreeSet<MeasureName>,
    pub budget: BudgetSpec,
    /// Largest denominator tried for the circular flow number.
    pub q_cap: u32,
    /// Largest `k` tried for the excessive index.
    pub excessive_cap: usize,
    /// Φ⁺ searches are skipped on graphs with more vertices.
    pub phi_max_vertices: usize,
    /// Record per-measure wall times in the report.
    pub timings: bool,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            measures: MeasureName::ALL.into_iter().collect(),
            budget: BudgetSpec::default(),
            q_cap: 10,
            excessive_cap: 6,
            phi_max_vertices: 16,
            timings: false,
        }
    }
}

impl MeasureConfig {
    pub fn with_measures(measures: impl IntoIterator<Item = MeasureName>) -> Self {
        MeasureConfig {
            measures: measures.into_iter().collect(),
            ..MeasureConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_match_serde() {
        for m in MeasureName::ALL {
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.as_str()));
            assert_eq!(m.as_str().parse::<MeasureName>().unwrap(), m);
        }
        assert!("chi".parse::<MeasureName>().is_err());
        assert_eq!(MeasureName::parse_list("all").unwrap().len(), 19);
        assert_eq!(
            MeasureName::parse_list("d, r,rho")
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![MeasureName::D, MeasureName::R, MeasureName::Rho]
        );
    }

    #[test]
    fn budget_specs() {
        assert_eq!("1e8".parse::<BudgetSpec>().unwrap().nodes, 100_000_000);
        let s: BudgetSpec = "nodes=5000,time=1.5s".parse().unwrap();
        assert_eq!((s.nodes, s.time), (5000, Some(Duration::from_millis(1500))));
        assert_eq!("2m".parse::<BudgetSpec>().unwrap().time, Some(Duration::from_secs(120)));
        assert_eq!("1e6".parse::<BudgetSpec>().unwrap().time, Some(DEFAULT_TIME));
        let u: BudgetSpec = "unlimited".parse().unwrap();
        assert_eq!((u.nodes, u.time), (u64::MAX, None));
        assert!("nodes=x".parse::<BudgetSpec>().is_err());
        assert!("fast".parse::<BudgetSpec>().is_err());
        assert!("depth=3".parse::<BudgetSpec>().is_err());
    }
}
