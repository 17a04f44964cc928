//! Plain-text edge lists.
//!
//! ```text
//! # n=5
//! 0 1
//! 1 4   # trailing comments are fine
//! ```
//!
//! The `# n=<n>` header must be the first non-blank line. Every other line
//! is blank, a `#` comment, or a pair `u v` of 0-based ids with `u < v`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use arbor_core::{Graph, Vertex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Invariant { line: usize, reason: String },
}

impl LoadError {
    /// Process exit code: 2 for unreadable or malformed input, 3 for a
    /// well-formed file describing an invalid graph.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Io { .. } | LoadError::Malformed { .. } => 2,
            LoadError::Invariant { .. } => 3,
        }
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> LoadError {
    LoadError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn invariant(line: usize, reason: impl Into<String>) -> LoadError {
    LoadError::Invariant {
        line,
        reason: reason.into(),
    }
}

fn parse_header(line: &str) -> Option<usize> {
    let rest = line.strip_prefix('#')?.trim();
    rest.strip_prefix("n=")?.trim().parse().ok()
}

pub fn parse_edge_list(text: &str) -> Result<Graph, LoadError> {
    let mut n: Option<usize> = None;
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let Some(n) = n else {
            n = Some(parse_header(line).ok_or_else(|| malformed(line_no, "expected header `# n=<n>`"))?);
            continue;
        };
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(malformed(line_no, "expected two vertex ids"));
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|_| malformed(line_no, format!("`{s}` is not a vertex id")));
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(invariant(line_no, format!("self-loop on vertex {u}")));
        }
        if u > v {
            return Err(invariant(line_no, format!("pair ({u}, {v}) is not in canonical order u < v")));
        }
        if v >= n as u64 {
            return Err(invariant(line_no, format!("vertex {v} out of range for n = {n}")));
        }
        if let Some(first) = seen.insert((u, v), line_no) {
            return Err(invariant(line_no, format!("duplicate edge ({u}, {v}), first on line {first}")));
        }
        pairs.push((u as Vertex, v as Vertex));
    }
    let n = n.ok_or_else(|| malformed(0, "missing header `# n=<n>`"))?;
    if n > Vertex::MAX as usize {
        return Err(invariant(1, format!("n = {n} exceeds the vertex id range")));
    }
    let g = Graph::from_edges(n, pairs).map_err(|e| invariant(0, e.to_string()))?;
    g.validate().map_err(|e| invariant(0, e.to_string()))?;
    Ok(g)
}

pub fn load_edge_list(path: &Path) -> Result<Graph, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    writeln!(w, "# n={}", g.n())?;
    for e in g.edges() {
        writeln!(w, "{} {}", e.u(), e.v())?;
    }
    w.flush()
}

pub fn save_edge_list(g: &Graph, path: &Path) -> io::Result<()> {
    write_edge_list(g, io::BufWriter::new(fs::File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_comments() {
        let g = parse_edge_list("\n# n=4\n# a comment\n0 1\n\n1 3 # tail\n").unwrap();
        assert_eq!((g.n(), g.m()), (4, 2));
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn malformed_inputs_exit_2() {
        for text in ["0 1\n", "# n=3\n0\n", "# n=3\n0 x\n", "# n=3\n0 1 2\n", ""] {
            let err = parse_edge_list(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text:?}: {err}");
        }
    }

    #[test]
    fn invariant_violations_exit_3() {
        for text in ["# n=3\n1 1\n", "# n=3\n2 1\n", "# n=3\n0 3\n", "# n=3\n0 1\n0 1\n"] {
            let err = parse_edge_list(text).unwrap_err();
            assert_eq!(err.exit_code(), 3, "{text:?}: {err}");
        }
    }

    #[test]
    fn round_trip_keeps_isolated_vertices() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.n(), 6);
        assert_eq!(back.edges(), g.edges());
    }
}
