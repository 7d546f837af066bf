use std::path::Path;

use snark_core::constructions::{
    build_g56, build_h28, build_k, build_k_star, flower_snark, k33, k4, loupekhine, petersen, ConstructionError,
};
use snark_core::io::parse_graph6;
use snark_core::{CubicGraph, MultiGraph};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown builder `{0}`")]
    UnknownBuilder(String),
    #[error("builder `{0}` needs a parameter, e.g. `{0}:5`")]
    MissingParameter(String),
    #[error("builder `{0}` takes no parameter")]
    UnexpectedParameter(String),
    #[error("invalid builder parameter `{0}`")]
    InvalidParameter(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// One corpus entry; parse failures are kept so they surface as per-graph records.
#[derive(Debug, Clone)]
pub struct Input {
    pub id: String,
    pub graph: Result<MultiGraph, String>,
}

impl Input {
    pub fn from_cubic(id: impl Into<String>, g: CubicGraph) -> Self {
        Input {
            id: id.into(),
            graph: Ok(g.into_inner()),
        }
    }
}

/// One input per non-empty line; ids are `<path>#<line index>`, counting from 0.
pub fn read_graph6_file(path: impl AsRef<Path>) -> Result<Vec<Input>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| Input {
            id: format!("{}#{i}", path.display()),
            graph: parse_graph6(line).map_err(|e| e.to_string()),
        })
        .collect())
}

/// Builder names accepted by [`builder`]; those marked with `:k` take an odd parameter.
pub const BUILDERS: [&str; 9] = [
    "petersen",
    "k4",
    "k33",
    "flower_snark:k",
    "loupekhine:k",
    "k",
    "k_star",
    "h28",
    "g56",
];

/// Builds a named graph. `spec` is `name` or `name:k`.
pub fn builder(spec: &str) -> Result<CubicGraph, CorpusError> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (
            n,
            Some(
                p.parse::<usize>()
                    .map_err(|_| CorpusError::InvalidParameter(p.to_string()))?,
            ),
        ),
        None => (spec, None),
    };
    let plain = |g: CubicGraph| match param {
        Some(_) => Err(CorpusError::UnexpectedParameter(name.to_string())),
        None => Ok(g),
    };
    let k = || param.ok_or_else(|| CorpusError::MissingParameter(name.to_string()));
    match name {
        "petersen" => plain(petersen()),
        "k4" => plain(k4()),
        "k33" => plain(k33()),
        "k" => plain(build_k()?),
        "k_star" => plain(build_k_star()?),
        "h28" => plain(build_h28()),
        "g56" => plain(build_g56()?),
        "flower_snark" => Ok(flower_snark(k()?)?),
        "loupekhine" => Ok(loupekhine(k()?)?),
        _ => Err(CorpusError::UnknownBuilder(name.to_string())),
    }
}

/// The named graphs of the paper suite.
pub const PAPER_SUITE: [&str; 7] = [
    "petersen",
    "flower_snark:5",
    "flower_snark:7",
    "k",
    "k_star",
    "h28",
    "g56",
];

pub fn builder_input(spec: &str) -> Result<Input, CorpusError> {
    Ok(Input::from_cubic(spec, builder(spec)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_specs() {
        assert_eq!(builder("petersen").unwrap().n(), 10);
        assert_eq!(builder("flower_snark:5").unwrap().n(), 20);
        assert_eq!(builder("loupekhine:5").unwrap().n(), 38);
        assert!(matches!(builder("flower_snark"), Err(CorpusError::MissingParameter(_))));
        assert!(matches!(
            builder("petersen:3"),
            Err(CorpusError::UnexpectedParameter(_))
        ));
        assert!(matches!(
            builder("flower_snark:x"),
            Err(CorpusError::InvalidParameter(_))
        ));
        assert!(matches!(builder("flower_snark:4"), Err(CorpusError::Construction(_))));
        assert!(matches!(builder("blanusa"), Err(CorpusError::UnknownBuilder(_))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            read_graph6_file("/nonexistent/x.g6"),
            Err(CorpusError::Io { .. })
        ));
    }
}
