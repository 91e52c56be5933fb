//! Plain-text edge lists.
//!
//! ```text
//! n m [bipartite]
//! [A B A B ...]        only with the bipartite token: one label per vertex
//! u v                  m lines, 0 <= u < v < n
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Side, Vertex};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 2 || tokens.len() > 3 {
        return Err(parse_err(hline, "header must be `n m` or `n m bipartite`"));
    }
    let n: usize = tokens[0].parse().map_err(|_| parse_err(hline, "bad vertex count"))?;
    let m: usize = tokens[1].parse().map_err(|_| parse_err(hline, "bad edge count"))?;
    let bipartite = match tokens.get(2) {
        None => false,
        Some(&"bipartite") => true,
        Some(t) => return Err(parse_err(hline, format!("unknown header token `{t}`"))),
    };

    let sides = if bipartite {
        let (sline, labels) = lines
            .next()
            .ok_or_else(|| parse_err(hline + 1, "missing side labels"))?;
        let parsed: Vec<Side> = labels
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'A' | 'a' => Ok(Side::A),
                'B' | 'b' => Ok(Side::B),
                other => Err(parse_err(sline, format!("bad side label `{other}`"))),
            })
            .collect::<Result<_>>()?;
        if parsed.len() != n {
            return Err(parse_err(
                sline,
                format!("expected {n} side labels, got {}", parsed.len()),
            ));
        }
        Some(parsed)
    } else {
        None
    };

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (lno, line) in lines {
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(lno, "edge line must be `u v`"));
        };
        let u: Vertex = a.parse().map_err(|_| parse_err(lno, "bad vertex id"))?;
        let v: Vertex = b.parse().map_err(|_| parse_err(lno, "bad vertex id"))?;
        if u == v {
            return Err(parse_err(lno, format!("self-loop at {u}")));
        }
        if u > v {
            return Err(parse_err(lno, "edges must be written with u < v"));
        }
        if v >= n {
            return Err(parse_err(lno, format!("vertex {v} out of range 0..{n}")));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(lno, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let g = Graph::from_edges(n, &edges)?;
    match sides {
        Some(s) => g.with_sides(s),
        None => Ok(g),
    }
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    match g.sides() {
        Some(sides) => {
            let _ = writeln!(out, "{} {} bipartite", g.n(), g.m());
            let labels: Vec<String> = sides.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", labels.join(" "));
        }
        None => {
            let _ = writeln!(out, "{} {}", g.n(), g.m());
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_sides() {
        let text = "4 3 bipartite\nA B A B\n0 1\n1 2\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.side(3), Some(Side::B));
        assert_eq!(write_edge_list(&g), text);
    }

    #[test]
    fn compact_labels_accepted() {
        let g = parse_edge_list("2 1 bipartite\nAB\n0 1\n").unwrap();
        assert_eq!(g.sides().unwrap(), &[Side::A, Side::B]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_edge_list("3 2\n0 1\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n1 1\n").is_err());
        assert!(parse_edge_list("3 1\n2 1\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("2 1 bipartite\nA A\n0 1\n").is_err());
        assert!(parse_edge_list("").is_err());
    }
}
