//! graph6 encoding and the plain `n m` edge-list format for multigraphs.

use crate::graph::{GraphError, MultiGraph};

const HEADER: &str = ">>graph6<<";

fn push_n(out: &mut String, n: usize) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

/// Parses one graph6 line. A leading `>>graph6<<` header and surrounding whitespace are accepted.
pub fn parse_graph6(text: &str) -> Result<MultiGraph, GraphError> {
    let s = text.trim();
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(GraphError::MalformedGraph6("empty input".into()));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(GraphError::MalformedGraph6(format!(
            "byte {b:#04x} outside the printable graph6 range"
        )));
    }
    let six = |b: u8| (b - 63) as usize;
    let (n, body) = if bytes[0] != 126 {
        (six(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(GraphError::MalformedGraph6("truncated size field".into()));
        }
        let n = bytes[1..4].iter().fold(0, |acc, &b| (acc << 6) | six(b));
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(GraphError::MalformedGraph6("truncated size field".into()));
        }
        let n = bytes[2..8].iter().fold(0, |acc, &b| (acc << 6) | six(b));
        (n, &bytes[8..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(GraphError::MalformedGraph6(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let mut g = MultiGraph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = six(body[k / 6]);
            if byte & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j).map_err(|_| GraphError::LoopEncountered)?;
            }
            k += 1;
        }
    }
    let tail = bits % 6;
    if tail != 0 && six(body[expected - 1]) & ((1 << (6 - tail)) - 1) != 0 {
        return Err(GraphError::MalformedGraph6("nonzero padding bits".into()));
    }
    Ok(g)
}

/// Encodes a simple graph as graph6 (no header, no newline).
pub fn write_graph6(g: &MultiGraph) -> Result<String, GraphError> {
    if let Some(e) = g.first_parallel_edge() {
        return Err(GraphError::NotSimple(e));
    }
    let n = g.n();
    let mut adj = vec![false; n * n];
    for &(u, v) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut out = String::new();
    push_n(&mut out, n);
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
            k += 1;
            if k == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push(((acc << (6 - k)) + 63) as char);
    }
    Ok(out)
}

/// Parses the edge-list format: a line `n m`, then `m` lines `u v`. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph, GraphError> {
    let bad = |msg: String| GraphError::MalformedEdgeList(msg);
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let pair = |line: &str| -> Result<(usize, usize), GraphError> {
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
            _ => Err(bad(format!("expected two integers, got {line:?}"))),
        }
    };
    let (n, m) = pair(lines.next().ok_or_else(|| bad("missing header".into()))?)?;
    let mut g = MultiGraph::new(n);
    for i in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("expected {m} edges, found {i}")))?;
        let (u, v) = pair(line)?;
        g.add_edge(u, v)?;
    }
    if let Some(extra) = lines.next() {
        return Err(bad(format!("trailing line {extra:?}")));
    }
    Ok(g)
}

pub fn write_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_encodes_as_c_tilde() {
        let g = parse_graph6("C~").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 6);
        assert_eq!(write_graph6(&g).unwrap(), "C~");
    }

    #[test]
    fn single_vertex() {
        let g = MultiGraph::new(1);
        assert_eq!(write_graph6(&g).unwrap(), "@");
        assert_eq!(parse_graph6("@").unwrap().n(), 1);
    }

    #[test]
    fn header_tolerated() {
        assert_eq!(parse_graph6(">>graph6<<C~\n").unwrap().m(), 6);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_graph6("C"), Err(GraphError::MalformedGraph6(_))));
        assert!(matches!(parse_graph6("C~~"), Err(GraphError::MalformedGraph6(_))));
        assert!(matches!(parse_graph6("C\u{7f}"), Err(GraphError::MalformedGraph6(_))));
        assert!(matches!(parse_graph6(""), Err(GraphError::MalformedGraph6(_))));
    }

    #[test]
    fn large_n_uses_long_form() {
        let mut g = MultiGraph::new(70);
        for v in 0..69 {
            g.add_edge(v, v + 1).unwrap();
        }
        let s = write_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        let h = parse_graph6(&s).unwrap();
        assert_eq!(h.edge_multiset(), g.edge_multiset());
    }

    #[test]
    fn multigraph_refused() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(write_graph6(&g), Err(GraphError::NotSimple(1)));
        let text = write_edge_list(&g);
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("2 1\n0 0\n").is_err());
        assert!(parse_edge_list("x").is_err());
    }
}
