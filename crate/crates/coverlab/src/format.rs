//! The JSON graph format.
//!
//! ```json
//! {
//!   "vertices": 2,
//!   "edges": [
//!     {"id": 0, "tail": 0, "head": 1, "inv": 1},
//!     {"id": 1, "tail": 1, "head": 0, "inv": 0},
//!     {"id": 2, "tail": 1, "head": 1, "inv": 2}
//!   ]
//! }
//! ```
//!
//! Edge records may appear in any order but their ids must be exactly
//! `0..edges.len()`. A half-loop is an edge with `inv == id`. Errors point
//! at the line and column of the offending record.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use coverlab_core::{families, Graph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub inv: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        GraphFile {
            vertices: g.vertex_count(),
            edges: (0..g.directed_edge_count())
                .map(|e| EdgeRecord {
                    id: e,
                    tail: g.tail(e),
                    head: g.head(e),
                    inv: g.inv(e),
                })
                .collect(),
        }
    }
}

/// Line and column (both 1-based) of each object in the top-level
/// `"edges"` array, in document order.
fn edge_positions(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 0);
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut last_key = String::new();
    let mut current = String::new();
    let mut edges_depth = None;
    for ch in text.chars() {
        if ch == '\n' {
            line += 1;
            col = 0;
        } else {
            col += 1;
        }
        if in_string {
            if escaped {
                escaped = false;
            } else if ch == '\\' {
                escaped = true;
            } else if ch == '"' {
                in_string = false;
                last_key = std::mem::take(&mut current);
            } else {
                current.push(ch);
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '[' => {
                depth += 1;
                if depth == 2 && last_key == "edges" {
                    edges_depth = Some(depth);
                }
            }
            '{' => {
                depth += 1;
                if edges_depth == Some(depth - 1) {
                    out.push((line, col));
                }
            }
            ']' | '}' => {
                if edges_depth == Some(depth) {
                    edges_depth = None;
                }
                depth = depth.saturating_sub(1);
            }
            _ => {}
        }
    }
    out
}

fn format_error(path: Option<&Path>, (line, column): (usize, usize), message: impl Into<String>) -> Error {
    Error::Format {
        path: path.map(Path::to_path_buf),
        line,
        column,
        message: message.into(),
    }
}

/// Parses and validates a graph. `path` is only used in error messages.
pub fn parse_graph(text: &str, path: Option<&Path>) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| format_error(path, (e.line(), e.column()), e.to_string()))?;
    let positions = edge_positions(text);
    let at = |record: usize| positions.get(record).copied().unwrap_or((1, 1));
    let m = file.edges.len();
    let mut slot = vec![usize::MAX; m];
    for (k, r) in file.edges.iter().enumerate() {
        if r.id >= m {
            return Err(format_error(path, at(k), format!("edge id {} out of range 0..{m}", r.id)));
        }
        if slot[r.id] != usize::MAX {
            return Err(format_error(path, at(k), format!("duplicate edge id {}", r.id)));
        }
        slot[r.id] = k;
    }
    let field = |f: fn(&EdgeRecord) -> usize| slot.iter().map(|&k| f(&file.edges[k])).collect();
    Graph::from_parts(file.vertices, field(|r| r.tail), field(|r| r.head), field(|r| r.inv)).map_err(|e| match e {
        coverlab_core::Error::MalformedEdge { edge, reason } => {
            format_error(path, at(slot[edge]), format!("edge {edge}: {reason}"))
        }
        other => format_error(path, (1, 1), other.to_string()),
    })
}

/// Pretty JSON with one edge record per line.
pub fn graph_to_json(g: &Graph) -> String {
    let mut s = format!("{{\n  \"vertices\": {},\n  \"edges\": [", g.vertex_count());
    for e in 0..g.directed_edge_count() {
        let sep = if e == 0 { "" } else { "," };
        write!(
            s,
            "{sep}\n    {{\"id\": {e}, \"tail\": {}, \"head\": {}, \"inv\": {}}}",
            g.tail(e),
            g.head(e),
            g.inv(e)
        )
        .unwrap();
    }
    if g.directed_edge_count() > 0 {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text, Some(path))
}

pub fn save_graph(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, graph_to_json(g)).map_err(|e| Error::io(path, e))
}

/// Builds a named graph: `complete:4`, `cycle:5`, `path:3`,
/// `bipartite:3,3`, `bouquet:2,1` (whole, half), `multi-edge:3`,
/// `chain:3,2`, `petersen`, `diamond-ring:6`.
pub fn family(spec: &str) -> Result<Graph> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<usize> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|a| a.trim().parse().map_err(|_| Error::Config(format!("bad number {a:?} in {spec:?}"))))
            .collect::<Result<_>>()?
    };
    let arity = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(Error::Config(format!("{name} takes {k} argument(s)")))
        }
    };
    Ok(match name {
        "complete" => arity(1).map(|_| families::complete(nums[0]))?,
        "cycle" => arity(1).map(|_| families::cycle(nums[0]))?,
        "path" => arity(1).map(|_| families::path(nums[0]))?,
        "bipartite" => arity(2).map(|_| families::complete_bipartite(nums[0], nums[1]))?,
        "bouquet" => arity(2).map(|_| families::bouquet(nums[0], nums[1]))?,
        "multi-edge" => arity(1).map(|_| families::multi_edge(nums[0]))?,
        "chain" => families::multi_chain(&nums),
        "petersen" => arity(0).map(|_| families::petersen())?,
        "diamond-ring" => arity(1).map(|_| families::diamond_ring(nums[0]))?,
        _ => return Err(Error::Config(format!("unknown graph family {name:?}"))),
    })
}

/// A path to a graph file, or `family:<spec>` for a built-in graph.
pub fn resolve_graph(source: &str) -> Result<Graph> {
    match source.strip_prefix("family:") {
        Some(spec) => family(spec),
        None => load_graph(Path::new(source)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for g in [families::bouquet(2, 1), families::petersen(), Graph::empty(), families::multi_chain(&[2, 3])] {
            assert_eq!(parse_graph(&graph_to_json(&g), None).unwrap(), g);
        }
    }

    #[test]
    fn edges_in_any_order() {
        let text = r#"{"vertices": 2, "edges": [
            {"id": 1, "tail": 1, "head": 0, "inv": 0},
            {"id": 0, "tail": 0, "head": 1, "inv": 1}
        ]}"#;
        let g = parse_graph(text, None).unwrap();
        assert_eq!(g.tail(0), 0);
        assert_eq!(g.head(0), 1);
    }

    fn error_line(text: &str) -> (usize, usize, String) {
        match parse_graph(text, None) {
            Err(Error::Format { line, column, message, .. }) => (line, column, message),
            other => panic!("expected a format error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_line() {
        let text = "{\n  \"vertices\": 1,\n  \"edges\": [\n    {\"id\": 0, \"tail\": 0, \"head\": 0, \"inv\": 0},\n    {\"id\": 1, \"tail\": 0, \"head\": 0, \"inv\": 2}\n  ]\n}\n";
        let (line, column, msg) = error_line(text);
        assert_eq!((line, column), (5, 5));
        assert!(msg.contains("out of range"), "{msg}");

        let half_loop_between = "{\"vertices\": 2, \"edges\": [\n{\"id\": 0, \"tail\": 0, \"head\": 1, \"inv\": 0}]}";
        let (line, _, msg) = error_line(half_loop_between);
        assert_eq!(line, 2);
        assert!(msg.contains("edge 0"), "{msg}");

        let dup = "{\"vertices\": 1, \"edges\": [\n{\"id\": 0, \"tail\": 0, \"head\": 0, \"inv\": 0},\n\n{\"id\": 0, \"tail\": 0, \"head\": 0, \"inv\": 0}]}";
        assert_eq!(error_line(dup).0, 4);

        let syntax = "{\"vertices\": 1,\n \"edges\": [,]}";
        assert_eq!(error_line(syntax).0, 2);

        let unknown = "{\"vertices\": 1, \"edges\": [], \"extra\": 3}";
        assert!(error_line(unknown).2.contains("extra"));
    }

    #[test]
    fn families_parse() {
        assert_eq!(family("complete:4").unwrap().vertex_count(), 4);
        assert_eq!(family("bouquet:2,1").unwrap().directed_edge_count(), 5);
        assert!(family("complete").is_err());
        assert!(family("moebius:3").is_err());
        assert!(resolve_graph("family:petersen").is_ok());
    }
}
