//! Edge-list text format.
//!
//! Header line: `bipartite <n_left> <n_right>` or `general <n>`.
//! Then one edge per line: `<u> <v> <w>` with a decimal weight.
//! Lines starting with `#` are comments. The canonical writer sorts edges
//! lexicographically and prints weights with 17 significant digits so that
//! parse(format(g)) is the identity.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BipartiteWeightedGraph, GeneratedGraph, WeightedEdge, WeightedGraph};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parse a graph from its text representation.
pub fn parse_graph(text: &str) -> Result<GeneratedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(0, "missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_count = |s: &str, what: &str| -> Result<usize> {
        s.parse::<usize>().map_err(|_| parse_err(header_line, format!("invalid {what} '{s}'")))
    };

    enum Kind {
        Bipartite(usize, usize),
        General(usize),
    }
    let kind = match fields.as_slice() {
        ["bipartite", a, b] => Kind::Bipartite(parse_count(a, "n_left")?, parse_count(b, "n_right")?),
        ["general", n] => Kind::General(parse_count(n, "n")?),
        _ => return Err(parse_err(header_line, format!("bad header '{header}'"))),
    };

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line_no, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(line_no, format!("expected '<u> <v> <w>', got '{line}'")));
        }
        let u = parts[0]
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("invalid vertex index '{}'", parts[0])))?;
        let v = parts[1]
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("invalid vertex index '{}'", parts[1])))?;
        let w = parts[2]
            .parse::<f64>()
            .map_err(|_| parse_err(line_no, format!("invalid weight '{}'", parts[2])))?;
        let in_range = match kind {
            Kind::Bipartite(nl, nr) => u < nl && v < nr,
            Kind::General(n) => u < n && v < n && u != v,
        };
        if !in_range {
            return Err(parse_err(line_no, format!("edge ({u}, {v}) out of range")));
        }
        let key = if matches!(kind, Kind::General(_)) { (u.min(v), u.max(v)) } else { (u, v) };
        if !seen.insert(key) {
            return Err(parse_err(line_no, format!("duplicate edge ({u}, {v})")));
        }
        edges.push(WeightedEdge { u, v, w });
    }

    match kind {
        Kind::Bipartite(nl, nr) => {
            let g = BipartiteWeightedGraph::new(nl, nr, edges).map_err(|e| parse_err(header_line, e.to_string()))?;
            Ok(GeneratedGraph::Bipartite(g))
        }
        Kind::General(n) => {
            let g = WeightedGraph::new(n, edges).map_err(|e| parse_err(header_line, e.to_string()))?;
            Ok(GeneratedGraph::General(g))
        }
    }
}

/// Canonical text representation.
pub fn format_graph(graph: &GeneratedGraph) -> String {
    let mut out = String::new();
    let mut edges: Vec<WeightedEdge> = match graph {
        GeneratedGraph::Bipartite(g) => {
            writeln!(out, "bipartite {} {}", g.n_left(), g.n_right()).unwrap();
            g.edges().to_vec()
        }
        GeneratedGraph::General(g) => {
            writeln!(out, "general {}", g.n()).unwrap();
            g.edges().to_vec()
        }
    };
    edges.sort_by_key(|e| (e.u, e.v));
    for e in edges {
        writeln!(out, "{} {} {:.16e}", e.u, e.v, e.w).unwrap();
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<GeneratedGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text)
}

pub fn write_graph(graph: &GeneratedGraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_graph(graph))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Model, ModelSpec};
    use crate::rng::RngStream;

    #[test]
    fn empty_edge_section() {
        let g = parse_graph("general 3\n").unwrap();
        let g = g.as_general().unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = parse_graph("# instance\nbipartite 2 2\n\n0 0 0.5\n# mid\n1 1 2.5e-1\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn out_of_range_index_is_parse_error() {
        let err = parse_graph("bipartite 4 4\n5 1 0.25\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_edge_is_parse_error() {
        assert!(parse_graph("general 3\n0 1 0.5\n1 0 0.25\n").is_err());
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("triangular 3\n").is_err());
        assert!(parse_graph("general 3\n0 1\n").is_err());
        assert!(parse_graph("general 3\n0 1 x\n").is_err());
    }

    #[test]
    fn round_trip_generated_instance() {
        let mut rng = RngStream::new(42, 0);
        let g = generate(ModelSpec::new(Model::Gnp, 50, 0.2).unwrap(), &mut rng).unwrap();
        let text = format_graph(&g);
        let parsed = parse_graph(&text).unwrap();
        assert_eq!(parsed, g);
        // format(parse(text)) is the identity on canonical text.
        assert_eq!(format_graph(&parsed), text);
    }
}
