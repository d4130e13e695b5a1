//! Pajek `.net` documents with ellipse vertex shapes.
//!
//! ```text
//! *Vertices 2
//! 1 "a" 0.0000 0.5000 0.5000 ellipse x_fact 50.0000 y_fact 50.0000
//! 2 "b" 1.0000 0.5000 0.5000 ellipse x_fact 50.0000 y_fact 50.0000
//! *Edges
//! 1 2 0.5000
//! ```

use std::fmt::Write;

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::impact::NodeGeometry;
use crate::layout::{Layout, Point};
use crate::num::Scalar;
use crate::similarity::SimilarityEdge;

use super::fmt4;

/// Fixed depth coordinate for two-dimensional drawings.
pub const PAJEK_Z: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct PajekVertex {
    pub index: usize,
    pub label: String,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub shape: Option<String>,
    pub x_fact: Option<f64>,
    pub y_fact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PajekEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PajekDocument {
    pub vertices: Vec<PajekVertex>,
    pub edges: Vec<PajekEdge>,
}

impl PajekDocument {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "*Vertices {}", self.vertices.len());
        for v in &self.vertices {
            let _ = write!(
                out,
                "{} \"{}\" {} {} {}",
                v.index,
                v.label,
                fmt4(v.x),
                fmt4(v.y),
                fmt4(v.z)
            );
            if let Some(shape) = &v.shape {
                let _ = write!(out, " {shape}");
            }
            if let Some(x) = v.x_fact {
                let _ = write!(out, " x_fact {}", fmt4(x));
            }
            if let Some(y) = v.y_fact {
                let _ = write!(out, " y_fact {}", fmt4(y));
            }
            out.push('\n');
        }
        out.push_str("*Edges\n");
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.i, e.j, fmt4(e.weight));
        }
        out
    }
}

/// Maps positions into [0, 1]² with one scale for both axes, centred at 0.5.
pub fn normalize_positions<T: Scalar>(positions: &[Point<T>]) -> Vec<[f64; 2]> {
    let pts: Vec<[f64; 2]> = positions.iter().map(|p| [p[0].as_f64(), p[1].as_f64()]).collect();
    if pts.is_empty() {
        return pts;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    pts.iter()
        .map(|p| {
            if span > 0.0 {
                [0.5 + (p[0] - center[0]) / span, 0.5 + (p[1] - center[1]) / span]
            } else {
                [0.5, 0.5]
            }
        })
        .collect()
}

pub(crate) fn check_consistency<T: Scalar>(
    env: &Environment,
    edges: &[SimilarityEdge<T>],
    geometries: &[NodeGeometry<T>],
    layout: &Layout<T>,
) -> Result<()> {
    let n = env.len();
    if geometries.len() != n || layout.positions.len() != n {
        return Err(Error::Consistency(format!(
            "{n} members but {} geometries and {} positions",
            geometries.len(),
            layout.positions.len()
        )));
    }
    for (k, g) in geometries.iter().enumerate() {
        if g.journal != env.members[k] {
            return Err(Error::Consistency(format!(
                "geometry {k} is for `{}` but member {k} is `{}`",
                g.journal, env.members[k]
            )));
        }
    }
    for e in edges {
        if e.a_index >= n || e.b_index >= n || e.a_index == e.b_index {
            return Err(Error::Consistency(format!(
                "edge {}-{} has indices ({}, {}) outside {n} members",
                e.a, e.b, e.a_index, e.b_index
            )));
        }
        if env.members[e.a_index] != e.a || env.members[e.b_index] != e.b {
            return Err(Error::Consistency(format!("edge {}-{} does not match member indices", e.a, e.b)));
        }
    }
    Ok(())
}

/// Builds the `.net` document: vertices labelled by abbreviation with
/// ellipse factors `x_fact = h_radius`, `y_fact = v_radius`, edges
/// weighted by raw cosine.
pub fn pajek_document<T: Scalar>(
    env: &Environment,
    edges: &[SimilarityEdge<T>],
    geometries: &[NodeGeometry<T>],
    layout: &Layout<T>,
) -> Result<PajekDocument> {
    check_consistency(env, edges, geometries, layout)?;
    let coords = normalize_positions(&layout.positions);
    let vertices = env
        .members
        .iter()
        .zip(geometries)
        .zip(coords)
        .enumerate()
        .map(|(k, ((id, g), [x, y]))| PajekVertex {
            index: k + 1,
            label: id.as_str().to_string(),
            x,
            y,
            z: PAJEK_Z,
            shape: Some("ellipse".into()),
            x_fact: Some(g.h_radius.as_f64()),
            y_fact: Some(g.v_radius.as_f64()),
        })
        .collect();
    let edges = edges
        .iter()
        .map(|e| PajekEdge {
            i: e.a_index.min(e.b_index) + 1,
            j: e.a_index.max(e.b_index) + 1,
            weight: e.cosine.as_f64(),
        })
        .collect();
    Ok(PajekDocument { vertices, edges })
}

pub fn write_pajek<T: Scalar>(
    env: &Environment,
    edges: &[SimilarityEdge<T>],
    geometries: &[NodeGeometry<T>],
    layout: &Layout<T>,
) -> Result<String> {
    Ok(pajek_document(env, edges, geometries, layout)?.to_text())
}

/// Splits a line into whitespace-separated tokens, keeping quoted strings whole.
fn tokenize(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut tok = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(ch) => tok.push(ch),
                    None => return Err("unterminated quoted label".into()),
                }
            }
            tokens.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() {
                    break;
                }
                tok.push(ch);
                chars.next();
            }
            tokens.push(tok);
        }
    }
    Ok(tokens)
}

/// Parses the `*Vertices` / `*Edges` subset written by [`write_pajek`].
pub fn read_pajek(text: &str) -> Result<PajekDocument> {
    let src = "<pajek>";
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k as u64 + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(src, 1, "missing *Vertices header"))?;
    let mut head = header.split_whitespace();
    if !head.next().is_some_and(|h| h.eq_ignore_ascii_case("*vertices")) {
        return Err(Error::parse(src, line_no, "missing *Vertices header"));
    }
    let count: usize = head
        .next()
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| Error::parse(src, line_no, "*Vertices needs a vertex count"))?;

    let mut doc = PajekDocument::default();
    let mut in_edges = false;
    for (no, line) in lines {
        let err = |m: String| Error::parse(src, no, m);
        if line.starts_with('*') {
            let section = line.split_whitespace().next().unwrap_or("").to_ascii_lowercase();
            match section.as_str() {
                "*edges" if !in_edges => {
                    in_edges = true;
                    continue;
                }
                "*arcs" => return Err(err("directed *Arcs are not supported".into())),
                other => return Err(err(format!("unexpected section `{other}`"))),
            }
        }
        let tokens = tokenize(line).map_err(err)?;
        let num = |k: usize, what: &str| -> Result<f64> {
            tokens
                .get(k)
                .and_then(|t| t.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("expected {what}")))
        };
        if in_edges {
            let i: usize = tokens.first().and_then(|t| t.parse().ok()).ok_or_else(|| err("expected edge source".into()))?;
            let j: usize = tokens.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| err("expected edge target".into()))?;
            let weight = if tokens.len() > 2 { num(2, "edge weight")? } else { 1.0 };
            if tokens.len() > 3 {
                return Err(err("trailing tokens after edge weight".into()));
            }
            if i == 0 || j == 0 || i > count || j > count || i == j {
                return Err(err(format!("edge {i} {j} does not join two of {count} vertices")));
            }
            doc.edges.push(PajekEdge { i: i.min(j), j: i.max(j), weight });
        } else {
            let index: usize = tokens.first().and_then(|t| t.parse().ok()).ok_or_else(|| err("expected vertex index".into()))?;
            if index != doc.vertices.len() + 1 {
                return Err(err(format!("vertex index {index} out of sequence")));
            }
            if index > count {
                return Err(err(format!("more vertex lines than the declared {count}")));
            }
            let label = tokens.get(1).cloned().ok_or_else(|| err("expected vertex label".into()))?;
            let x = num(2, "x coordinate")?;
            let y = num(3, "y coordinate")?;
            let z = num(4, "z coordinate")?;
            let mut vertex = PajekVertex { index, label, x, y, z, shape: None, x_fact: None, y_fact: None };
            let mut k = 5;
            if let Some(tok) = tokens.get(k) {
                if tok.parse::<f64>().is_err() && tok != "x_fact" && tok != "y_fact" {
                    vertex.shape = Some(tok.clone());
                    k += 1;
                }
            }
            while k < tokens.len() {
                let value = num(k + 1, &format!("value after `{}`", tokens[k]))?;
                match tokens[k].as_str() {
                    "x_fact" => vertex.x_fact = Some(value),
                    "y_fact" => vertex.y_fact = Some(value),
                    other => return Err(err(format!("unknown vertex attribute `{other}`"))),
                }
                k += 2;
            }
            doc.vertices.push(vertex);
        }
    }
    if doc.vertices.len() != count {
        return Err(Error::parse(
            src,
            line_no,
            format!("*Vertices declares {count} vertices but {} lines follow", doc.vertices.len()),
        ));
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "*Vertices 2\n\
1 \"a\" 0.0000 0.5000 0.5000 ellipse x_fact 50.0000 y_fact 50.0000\n\
2 \"b\" 1.0000 0.5000 0.5000 ellipse x_fact 50.0000 y_fact 50.0000\n\
*Edges\n\
1 2 0.5000\n";

    #[test]
    fn reads_and_rewrites_two_node_document() {
        let doc = read_pajek(TWO).unwrap();
        assert_eq!(doc.vertices.len(), 2);
        assert_eq!(doc.vertices[1].label, "b");
        assert_eq!(doc.vertices[0].x_fact, Some(50.0));
        assert_eq!(doc.edges, vec![PajekEdge { i: 1, j: 2, weight: 0.5 }]);
        assert_eq!(doc.to_text(), TWO);
    }

    #[test]
    fn missing_header_is_an_error() {
        assert!(matches!(read_pajek("1 \"a\" 0 0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(read_pajek("").is_err());
    }

    #[test]
    fn vertex_count_mismatch_is_an_error() {
        let short = "*Vertices 3\n1 \"a\" 0 0 0.5\n2 \"b\" 1 1 0.5\n*Edges\n";
        assert!(read_pajek(short).is_err());
        let long = "*Vertices 1\n1 \"a\" 0 0 0.5\n2 \"b\" 1 1 0.5\n";
        assert!(matches!(read_pajek(long), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn malformed_lines_are_errors_with_line_numbers() {
        let cases = [
            ("*Vertices 1\n1 \"a 0 0 0.5\n", 2),
            ("*Vertices 1\n1 \"a\" x 0 0.5\n", 2),
            ("*Vertices 1\n1 \"a\" 0 0 0.5 ellipse x_fact\n", 2),
            ("*Vertices 2\n1 \"a\" 0 0 0.5\n2 \"b\" 0 0 0.5\n*Edges\n1 3 0.5\n", 5),
            ("*Vertices 2\n1 \"a\" 0 0 0.5\n2 \"b\" 0 0 0.5\n*Arcs\n", 4),
        ];
        for (text, line) in cases {
            match read_pajek(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_edges_section_is_fine() {
        let doc = read_pajek("*Vertices 1\n1 \"a\" 0.5 0.5 0.5 ellipse x_fact 1 y_fact 1\n*Edges\n").unwrap();
        assert!(doc.edges.is_empty());
    }

    #[test]
    fn normalization_fits_unit_square() {
        let pts = normalize_positions(&[[0.0f64, 0.0], [10.0, 5.0], [-10.0, 0.0]]);
        assert_eq!(pts[0], [0.5, 0.375]);
        assert_eq!(pts[1], [1.0, 0.625]);
        assert_eq!(pts[2], [0.0, 0.375]);
        assert_eq!(normalize_positions(&[[3.0f64, 3.0]]), vec![[0.5, 0.5]]);
    }
}
