//! File formats. Vertices are 1-indexed in files, 0-indexed internally.
//!
//! * Gr — header `p tw <n> <m>`, then `m` lines `<u> <v>`; `c` lines are
//!   comments.
//! * Td — header `s td <bags> <width+1> <n>`, bag lines `b <i> <v...>`,
//!   then bag-tree edges `<i> <j>`.
//! * Emb — one line `r <v>: <u1> <u2> ...` per vertex (clockwise
//!   rotation), final line `outer: <v1> <v2> ...` (outer face walk).

use crate::embed::EmbeddedGraph;
use crate::outer_td::TreeDecomposition;
use crate::VertexId;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph/embedding mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Graph(#[from] crate::GraphError),
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Parse { line, msg: msg.into() })
}

/// Abstract graph as parsed from a Gr file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrFile {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

pub fn parse_gr(text: &str) -> Result<GrFile, FormatError> {
    let mut n = None;
    let mut m = 0usize;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "tw" {
                return perr(line, "expected `p tw <n> <m>`");
            }
            n = Some(
                parts[2]
                    .parse::<usize>()
                    .map_err(|e| FormatError::Parse { line, msg: e.to_string() })?,
            );
            m = parts[3]
                .parse::<usize>()
                .map_err(|e| FormatError::Parse { line, msg: e.to_string() })?;
            continue;
        }
        let Some(n) = n else {
            return perr(line, "edge before `p tw` header");
        };
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 2 {
            return perr(line, "expected `<u> <v>`");
        }
        let u: usize = parts[0]
            .parse()
            .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
        let v: usize = parts[1]
            .parse()
            .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
        if u == 0 || v == 0 || u > n || v > n {
            return perr(line, format!("vertex out of range 1..={n}"));
        }
        if u == v {
            return perr(line, "self-loop");
        }
        let (a, b) = ((u - 1) as VertexId, (v - 1) as VertexId);
        edges.push((a.min(b), a.max(b)));
    }
    let Some(n) = n else {
        return perr(0, "missing `p tw` header");
    };
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    if edges.len() != before {
        return perr(0, "duplicate edge (multigraphs rejected)");
    }
    if edges.len() != m {
        return perr(0, format!("header announces {m} edges, found {}", edges.len()));
    }
    Ok(GrFile { n, edges })
}

pub fn write_gr(n: usize, edges: &[(VertexId, VertexId)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p tw {} {}", n, edges.len());
    let mut es: Vec<_> = edges.to_vec();
    es.sort_unstable();
    for (u, v) in es {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

pub fn graph_to_gr(g: &EmbeddedGraph) -> String {
    write_gr(g.n(), &g.edges())
}

/// Parses an Emb file against the vertex count of its Gr file and builds
/// the embedded graph, checking that both describe the same edge set.
pub fn parse_emb(text: &str, gr: &GrFile) -> Result<EmbeddedGraph, FormatError> {
    let mut rotation: Vec<Option<Vec<VertexId>>> = vec![None; gr.n];
    let mut outer: Option<Vec<VertexId>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("outer:") {
            let walk = parse_ids(rest, gr.n, line)?;
            outer = Some(walk);
            continue;
        }
        if let Some(rest) = t.strip_prefix('r') {
            let Some((vs, ns)) = rest.split_once(':') else {
                return perr(line, "expected `r <v>: <neighbors>`");
            };
            let v: usize = vs
                .trim()
                .parse()
                .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
            if v == 0 || v > gr.n {
                return perr(line, format!("vertex {v} out of range"));
            }
            let nbrs = parse_ids(ns, gr.n, line)?;
            if rotation[v - 1].replace(nbrs).is_some() {
                return perr(line, format!("duplicate rotation for vertex {v}"));
            }
            continue;
        }
        return perr(line, "unrecognized line");
    }
    let rotation: Vec<Vec<VertexId>> = rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| FormatError::Mismatch(format!("missing rotation for vertex {}", v + 1)))
        })
        .collect::<Result<_, _>>()?;
    // Edge sets must agree.
    let mut rot_edges: Vec<(VertexId, VertexId)> = Vec::new();
    for (u, nbrs) in rotation.iter().enumerate() {
        for &v in nbrs {
            if (u as VertexId) < v {
                rot_edges.push((u as VertexId, v));
            }
        }
    }
    rot_edges.sort_unstable();
    if rot_edges != gr.edges {
        return Err(FormatError::Mismatch(
            "rotation edges differ from graph edges".into(),
        ));
    }
    let g = match outer {
        Some(walk) => EmbeddedGraph::new(rotation, &walk)?,
        None => {
            if gr.edges.is_empty() && gr.n == 1 {
                EmbeddedGraph::with_outer_face(rotation, 0)?
            } else {
                return Err(FormatError::Mismatch("missing `outer:` line".into()));
            }
        }
    };
    Ok(g)
}

fn parse_ids(s: &str, n: usize, line: usize) -> Result<Vec<VertexId>, FormatError> {
    s.split_whitespace()
        .map(|w| {
            let v: usize = w
                .parse()
                .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
            if v == 0 || v > n {
                return perr(line, format!("vertex {v} out of range 1..={n}"));
            }
            Ok((v - 1) as VertexId)
        })
        .collect()
}

pub fn graph_to_emb(g: &EmbeddedGraph) -> String {
    let mut s = String::new();
    for v in 0..g.n() as VertexId {
        let _ = write!(s, "r {}:", v + 1);
        for &u in g.rotation(v) {
            let _ = write!(s, " {}", u + 1);
        }
        let _ = writeln!(s);
    }
    let _ = write!(s, "outer:");
    if g.m() == 0 {
        let _ = write!(s, " 1");
    } else {
        for &(u, _) in g.face_walk(g.outer_face()) {
            let _ = write!(s, " {}", u + 1);
        }
    }
    let _ = writeln!(s);
    s
}

pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize), FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<VertexId>>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('s') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 5 || parts[1] != "td" {
                return perr(line, "expected `s td <bags> <width+1> <n>`");
            }
            let nb: usize = parts[2]
                .parse()
                .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
            let w: usize = parts[3]
                .parse()
                .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
            let n: usize = parts[4]
                .parse()
                .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
            header = Some((nb, w, n));
            bags = vec![None; nb];
            continue;
        }
        let Some((nb, _, n)) = header else {
            return perr(line, "content before `s td` header");
        };
        if let Some(rest) = t.strip_prefix('b') {
            let mut it = rest.split_whitespace();
            let Some(id) = it.next() else {
                return perr(line, "bag line without id");
            };
            let id: usize = id
                .parse()
                .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
            if id == 0 || id > nb {
                return perr(line, format!("bag id {id} out of range 1..={nb}"));
            }
            let mut vs = Vec::new();
            for w in it {
                let v: usize = w
                    .parse()
                    .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
                if v == 0 || v > n {
                    return perr(line, format!("vertex {v} out of range 1..={n}"));
                }
                vs.push((v - 1) as VertexId);
            }
            vs.sort_unstable();
            vs.dedup();
            if bags[id - 1].replace(vs).is_some() {
                return perr(line, format!("duplicate bag {id}"));
            }
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 2 {
            return perr(line, "expected bag-tree edge `<i> <j>`");
        }
        let a: usize = parts[0]
            .parse()
            .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
        let b: usize = parts[1]
            .parse()
            .map_err(|e: std::num::ParseIntError| FormatError::Parse { line, msg: e.to_string() })?;
        if a == 0 || b == 0 || a > nb || b > nb {
            return perr(line, format!("bag id out of range 1..={nb}"));
        }
        edges.push((a - 1, b - 1));
    }
    let Some((nb, w, n)) = header else {
        return perr(0, "missing `s td` header");
    };
    let bags: Vec<Vec<VertexId>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| FormatError::Mismatch(format!("bag {} never defined", i + 1)))
        })
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition { bags, edges };
    if td.max_bag() != w && !(nb == 0 && w == 0) {
        return Err(FormatError::Mismatch(format!(
            "header announces width+1 = {w}, bags have max size {}",
            td.max_bag()
        )));
    }
    Ok((td, n))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "s td {} {} {}", td.bags.len(), td.max_bag(), n);
    for (i, b) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        let mut vs = b.clone();
        vs.sort_unstable();
        for v in vs {
            let _ = write!(s, " {}", v + 1);
        }
        let _ = writeln!(s);
    }
    let mut es = td.edges.clone();
    es.sort_unstable();
    for (a, b) in es {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr_roundtrip() {
        let g = crate::gen::grid(3, 4, true).unwrap();
        let text = graph_to_gr(&g);
        let parsed = parse_gr(&text).unwrap();
        assert_eq!(parsed.n, g.n());
        assert_eq!(parsed.edges, g.edges());
        assert_eq!(write_gr(parsed.n, &parsed.edges), text);
    }

    #[test]
    fn emb_roundtrip() {
        let g = crate::gen::mountain_chain(2, 3, 4).unwrap();
        let gr = GrFile { n: g.n(), edges: g.edges() };
        let text = graph_to_emb(&g);
        let parsed = parse_emb(&text, &gr).unwrap();
        assert_eq!(parsed.n(), g.n());
        assert_eq!(parsed.outer_face(), g.outer_face());
        assert_eq!(graph_to_emb(&parsed), text);
    }

    #[test]
    fn td_roundtrip() {
        let td = TreeDecomposition {
            bags: vec![vec![0, 1, 2], vec![1, 2, 3], vec![3]],
            edges: vec![(0, 1), (1, 2)],
        };
        let text = write_td(&td, 4);
        let (parsed, n) = parse_td(&text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(parsed.bags, td.bags);
        assert_eq!(parsed.edges, td.edges);
        assert_eq!(write_td(&parsed, n), text);
    }

    #[test]
    fn gr_rejects_garbage() {
        assert!(parse_gr("p tw 3 1\n1 4\n").is_err());
        assert!(parse_gr("p tw 3 2\n1 2\n").is_err());
        assert!(parse_gr("p tw 3 1\n1 1\n").is_err());
        assert!(parse_gr("p tw 3 2\n1 2\n1 2\n").is_err());
    }

    #[test]
    fn comments_allowed() {
        let gr = parse_gr("c a comment\np tw 2 1\n1 2\n").unwrap();
        assert_eq!(gr.n, 2);
    }
}
