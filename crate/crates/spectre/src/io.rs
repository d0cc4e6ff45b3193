//! The JSON graph format:
//!
//! ```text
//! {"n": int, "edges": [[u,v],...], "faces": [[v0,v1,...],...],
//!  "generation": [int,...], "interior": [bool,...]}
//! ```
//!
//! `faces`, `generation` and `interior` are optional (no faces, no labels,
//! every vertex interior). Loading checks every graph invariant and reports
//! the line and column of the offending value.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use spectre_core::graph::{GraphItem, Violation};
use spectre_core::{Error as CoreError, Graph, GraphBuilder};

/// Largest edge count written to a graph file.
pub const MAX_FILE_EDGES: u64 = 50_000_000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    faces: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    generation: Option<Vec<u32>>,
    #[serde(default)]
    interior: Option<Vec<bool>>,
}

/// A graph file that failed to parse or to validate; `line` and `column`
/// are 1-based and point at the offending value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for LoadError {}

/// Parses and validates a graph in the JSON graph format.
pub fn parse_graph(text: &str) -> Result<Graph, LoadError> {
    let file: GraphFile = serde_json::from_str(text)
        .map_err(|e| LoadError { line: e.line(), column: e.column(), message: e.to_string() })?;
    let mut b = GraphBuilder::new(file.n).with_edge_capacity(file.edges.len());
    for [u, v] in &file.edges {
        b.add_edge(*u, *v);
    }
    if let Some(faces) = file.faces {
        b.faces(faces);
    }
    if let Some(labels) = file.generation {
        b.generation(labels);
    }
    if let Some(flags) = file.interior {
        b.interior(flags);
    }
    b.build().map_err(|e| locate_error(text, &e))
}

fn locate_error(text: &str, e: &CoreError) -> LoadError {
    let offset = match e {
        CoreError::Violation(Violation { item, index, .. }) => {
            let key = match item {
                GraphItem::Edge => "edges",
                GraphItem::Face => "faces",
                GraphItem::Generation => "generation",
                GraphItem::Interior => "interior",
                GraphItem::Vertex | GraphItem::Block => "n",
            };
            let element = if key == "n" { None } else { Some(*index) };
            locate(text, key, element).or_else(|| locate(text, key, None))
        }
        _ => locate(text, "n", None),
    };
    let (line, column) = line_column(text, offset.unwrap_or(0));
    LoadError { line, column, message: e.to_string() }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Byte offset of the value of top-level `key`, or of its `index`-th array
/// element. Only called on text that already parsed as JSON.
fn locate(text: &str, key: &str, index: Option<usize>) -> Option<usize> {
    let s = text.as_bytes();
    let mut i = skip_ws(s, 0);
    if s.get(i) != Some(&b'{') {
        return None;
    }
    i += 1;
    loop {
        i = skip_ws(s, i);
        if s.get(i) != Some(&b'"') {
            return None;
        }
        let end = skip_string(s, i);
        let name = serde_json::from_slice::<String>(&s[i..end]).ok()?;
        i = skip_ws(s, end);
        i = skip_ws(s, i + 1); // ':'
        if name == key {
            let Some(index) = index else { return Some(i) };
            if s.get(i) != Some(&b'[') {
                return Some(i);
            }
            let mut j = i + 1;
            for k in 0.. {
                j = skip_ws(s, j);
                if s.get(j) == Some(&b']') {
                    return None;
                }
                if k == index {
                    return Some(j);
                }
                j = skip_ws(s, skip_value(s, j));
                if s.get(j) == Some(&b',') {
                    j += 1;
                }
            }
        }
        i = skip_ws(s, skip_value(s, i));
        if s.get(i) != Some(&b',') {
            return None;
        }
        i += 1;
    }
}

fn skip_ws(s: &[u8], mut i: usize) -> usize {
    while i < s.len() && s[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// `i` points at an opening quote; returns the offset past the closing one.
fn skip_string(s: &[u8], mut i: usize) -> usize {
    i += 1;
    while i < s.len() {
        match s[i] {
            b'\\' => i += 2,
            b'"' => return i + 1,
            _ => i += 1,
        }
    }
    i
}

fn skip_value(s: &[u8], mut i: usize) -> usize {
    match s.get(i) {
        Some(b'"') => skip_string(s, i),
        Some(b'[') | Some(b'{') => {
            let mut depth = 0usize;
            while i < s.len() {
                match s[i] {
                    b'"' => {
                        i = skip_string(s, i);
                        continue;
                    }
                    b'[' | b'{' => depth += 1,
                    b']' | b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            return i + 1;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            i
        }
        _ => {
            while i < s.len() && !matches!(s[i], b',' | b']' | b'}') && !s[i].is_ascii_whitespace() {
                i += 1;
            }
            i
        }
    }
}

/// Reads a graph file; the error message carries the path and position.
pub fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Writes `g` in the JSON graph format, one edge and one face per line.
/// Complete blocks are written out edge by edge.
pub fn write_graph(g: &Graph, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{{")?;
    writeln!(out, "  \"n\": {},", g.vertex_count())?;
    write_rows(out, "edges", g.edges().map(|(u, v)| format!("[{u}, {v}]")))?;
    if let Some(faces) = g.faces() {
        writeln!(out, ",")?;
        write_rows(out, "faces", faces.iter().map(|f| serde_json::to_string(f).expect("face list")))?;
    }
    if let Some(labels) = g.generation() {
        writeln!(out, ",")?;
        write!(out, "  \"generation\": {}", serde_json::to_string(labels).expect("labels"))?;
    }
    writeln!(out, ",")?;
    writeln!(out, "  \"interior\": {}", serde_json::to_string(g.interior()).expect("flags"))?;
    writeln!(out, "}}")
}

fn write_rows(out: &mut impl Write, key: &str, rows: impl Iterator<Item = String>) -> std::io::Result<()> {
    write!(out, "  \"{key}\": [")?;
    let mut first = true;
    for row in rows {
        write!(out, "{}\n    {row}", if first { "" } else { "," })?;
        first = false;
    }
    write!(out, "{}]", if first { "" } else { "\n  " })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectre_core::generators::{complete_graph, tessellation_patch, TessellationParams};

    fn round_trip(g: &Graph) -> Graph {
        let mut buf = Vec::new();
        write_graph(g, &mut buf).unwrap();
        parse_graph(std::str::from_utf8(&buf).unwrap()).unwrap()
    }

    #[test]
    fn writes_and_reads_back() {
        let g = tessellation_patch(&TessellationParams::new(3, 7, 2).unwrap()).unwrap();
        let h = round_trip(&g);
        assert_eq!(h.vertex_count(), g.vertex_count());
        assert!(h.edges().eq(g.edges()));
        assert_eq!(h.faces(), g.faces());
        assert_eq!(h.generation(), g.generation());
        assert_eq!(h.interior(), g.interior());
        let k = complete_graph(4).unwrap();
        assert_eq!(round_trip(&k).edge_count(), 6);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_graph("{\n  \"n\": 2,\n  \"edges\": [[0, 1]\n}").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_graph("{\"n\": 2, \"edges\": [[0, 1]], \"colour\": 3}").unwrap_err();
        assert!(e.message.contains("colour"));
    }

    #[test]
    fn invariant_violations_point_at_the_element() {
        let text = "{\n  \"n\": 3,\n  \"edges\": [\n    [0, 1],\n    [1, 2],\n    [2, 2]\n  ]\n}";
        let e = parse_graph(text).unwrap_err();
        assert_eq!((e.line, e.column), (6, 5));
        assert!(e.message.contains("loop"));

        let text = "{\"n\": 3,\n \"edges\": [[0, 1], [1, 2], [0, 1]]}";
        let e = parse_graph(text).unwrap_err();
        assert_eq!((e.line, e.column), (2, 28));

        let text = "{\"n\": 4,\n \"edges\": [[0, 1], [1, 2], [0, 2]]}";
        let e = parse_graph(text).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("isolated"));

        let text = "{\"n\": 3, \"edges\": [[0, 1], [1, 2], [0, 2]],\n \"faces\": [[0, 1, 2],\n [0, 1]]}";
        let e = parse_graph(text).unwrap_err();
        assert_eq!((e.line, e.column), (3, 2));

        let text = "{\"n\": 2, \"edges\": [[0, 1]],\n \"generation\": [1]}";
        let e = parse_graph(text).unwrap_err();
        assert_eq!(e.line, 2);
    }
}
