//! File formats: JSON graphs {"n", "edges", "labels"?}, plain edge lists
//! ("u v" per line), JSON trees {"root", "parent"}, and rotation-graph
//! exports (JSON, DOT, flat binary edge list).

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::rotation::RotationGraph;
use crate::tree::ElimTree;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("malformed edge list line {0:?}")]
    BadEdgeLine(String),
    #[error("malformed tree: {0}")]
    BadTree(String),
    #[error("bad magic in binary edge list")]
    BadMagic,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let doc = GraphJson {
        n: g.n(),
        edges: g.edges(),
        labels: g.labels().map(|ls| ls.to_vec()),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

pub fn graph_from_json(s: &str) -> Result<Graph, IoError> {
    let doc: GraphJson = serde_json::from_str(s)?;
    let mut g = Graph::from_edges(doc.n, &doc.edges)?;
    if let Some(labels) = doc.labels {
        if labels.len() != doc.n {
            return Err(IoError::BadTree(format!(
                "{} labels for {} vertices",
                labels.len(),
                doc.n
            )));
        }
        g = g.with_labels(labels);
    }
    Ok(g)
}

/// One "u v" pair per line; blank lines and '#' comments are skipped.
pub fn graph_to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn graph_from_edge_list(s: &str) -> Result<Graph, IoError> {
    let mut edges = Vec::new();
    let mut max = 0usize;
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(u), Some(v), None) => (
                u.parse::<usize>().map_err(|_| IoError::BadEdgeLine(line.into()))?,
                v.parse::<usize>().map_err(|_| IoError::BadEdgeLine(line.into()))?,
            ),
            _ => return Err(IoError::BadEdgeLine(line.into())),
        };
        max = max.max(u).max(v);
        edges.push((u, v));
    }
    Ok(Graph::from_edges(max + 1, &edges)?)
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    root: usize,
    parent: Vec<Option<usize>>,
}

pub fn tree_to_json(t: &ElimTree) -> String {
    let doc = TreeJson {
        root: t.root(),
        parent: (0..t.n()).map(|v| t.parent(v)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("tree serializes")
}

pub fn tree_from_json(s: &str) -> Result<ElimTree, IoError> {
    let doc: TreeJson = serde_json::from_str(s)?;
    let t = ElimTree::from_parents(&doc.parent)
        .ok_or_else(|| IoError::BadTree("parent array is not a rooted tree".into()))?;
    if t.root() != doc.root {
        return Err(IoError::BadTree(format!(
            "stated root {} does not match parent array root {}",
            doc.root,
            t.root()
        )));
    }
    Ok(t)
}

#[derive(Serialize)]
struct RotationGraphJson {
    trees: Vec<serde_json::Value>,
    edges: Vec<(usize, usize, String)>,
}

/// JSON export: every tree in ordinal order plus each edge once with its
/// rotated-pair label (display names of the pair, comma separated).
pub fn rotation_graph_to_json(rg: &RotationGraph) -> String {
    let g = rg.graph();
    let trees = (0..rg.len())
        .map(|o| {
            let t = rg.tree(o);
            serde_json::json!({
                "root": t.root(),
                "parent": (0..t.n()).map(|v| t.parent(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges = rg
        .edges()
        .map(|(a, b)| {
            let label = match rg.edge_label(a, b) {
                Ok((u, v)) => format!("{},{}", g.label(u), g.label(v)),
                Err(_) => String::new(),
            };
            (a, b, label)
        })
        .collect();
    serde_json::to_string_pretty(&RotationGraphJson { trees, edges }).expect("serializes")
}

/// DOT export. Vertices are labeled by their elimination-order string when
/// the tree is a path (permutohedron style), by the tree key in hex
/// otherwise. Optional fill colors come from a coloring.
pub fn rotation_graph_to_dot(rg: &RotationGraph, colors: Option<&[u8]>) -> String {
    const FILLS: [&str; 6] = ["#e8f0fe", "#fde8e8", "#e8fde8", "#fdf6e8", "#f1e8fd", "#e8fdf6"];
    let g = rg.graph();
    let mut out = String::from("graph rotation {\n  node [shape=ellipse, fontsize=10];\n");
    for o in 0..rg.len() {
        let t = rg.tree(o);
        let label = match t.path_order() {
            Some(seq) => seq.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(""),
            None => t.key().to_hex(),
        };
        let fill = colors
            .and_then(|cs| cs.get(o))
            .map(|&c| format!(", style=filled, fillcolor=\"{}\"", FILLS[c as usize % FILLS.len()]))
            .unwrap_or_default();
        out.push_str(&format!("  t{o} [label=\"{label}\"{fill}];\n"));
    }
    for (a, b) in rg.edges() {
        match rg.edge_label(a, b) {
            Ok((u, v)) => out.push_str(&format!(
                "  t{a} -- t{b} [label=\"{}{}\"]\n",
                g.label(u),
                g.label(v)
            )),
            Err(_) => out.push_str(&format!("  t{a} -- t{b};\n")),
        }
    }
    out.push_str("}\n");
    out
}

const BIN_MAGIC: &[u8; 4] = b"RGEL";

/// Flat binary edge list for large instances: magic, u32 version, u32 base
/// vertex count, u32 tree count, u64 edge count, then (u32, u32) pairs,
/// little endian, each undirected edge once.
pub fn rotation_graph_to_binary(rg: &RotationGraph, mut w: impl Write) -> Result<(), IoError> {
    w.write_all(BIN_MAGIC)?;
    w.write_all(&1u32.to_le_bytes())?;
    w.write_all(&(rg.graph().n() as u32).to_le_bytes())?;
    w.write_all(&(rg.len() as u32).to_le_bytes())?;
    w.write_all(&(rg.edge_count() as u64).to_le_bytes())?;
    for (a, b) in rg.edges() {
        w.write_all(&(a as u32).to_le_bytes())?;
        w.write_all(&(b as u32).to_le_bytes())?;
    }
    Ok(())
}

/// Counterpart reader; returns (base n, tree count, edges).
pub fn binary_edge_list(mut r: impl Read) -> Result<(u32, u32, Vec<(u32, u32)>), IoError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != BIN_MAGIC {
        return Err(IoError::BadMagic);
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?; // version
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4);
    r.read_exact(&mut b4)?;
    let trees = u32::from_le_bytes(b4);
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let m = u64::from_le_bytes(b8);
    let mut edges = Vec::with_capacity(m as usize);
    for _ in 0..m {
        r.read_exact(&mut b4)?;
        let a = u32::from_le_bytes(b4);
        r.read_exact(&mut b4)?;
        let b = u32::from_le_bytes(b4);
        edges.push((a, b));
    }
    Ok((n, trees, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilySpec};

    #[test]
    fn graph_json_roundtrip() {
        let g = make_family(&FamilySpec::CompleteSplit(2, 3)).unwrap();
        let s = graph_to_json(&g);
        let back = graph_from_json(&s).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.label(0), "x1");
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = make_family(&FamilySpec::Path(5)).unwrap();
        let s = graph_to_edge_list(&g);
        let back = graph_from_edge_list(&s).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert!(graph_from_edge_list("1 2 3").is_err());
        let with_comment = format!("# a path\n\n{s}");
        assert_eq!(graph_from_edge_list(&with_comment).unwrap().edges(), g.edges());
    }

    #[test]
    fn tree_json_roundtrip() {
        let t = ElimTree::from_parents(&[None, Some(0), Some(1), Some(1)]).unwrap();
        let s = tree_to_json(&t);
        assert_eq!(tree_from_json(&s).unwrap(), t);
        assert!(tree_from_json(r#"{"root":1,"parent":[null,0]}"#).is_err());
        assert!(tree_from_json(r#"{"root":0,"parent":[null,null]}"#).is_err());
    }

    #[test]
    fn exports_are_wellformed() {
        let g = make_family(&FamilySpec::Complete(3)).unwrap();
        let rg = RotationGraph::build(&g).unwrap();
        let json = rotation_graph_to_json(&rg);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["trees"].as_array().unwrap().len(), 6);
        assert_eq!(parsed["edges"].as_array().unwrap().len(), 6);
        let dot = rotation_graph_to_dot(&rg, None);
        assert!(dot.contains("123"));
        assert!(dot.starts_with("graph rotation"));
        let mut buf = Vec::new();
        rotation_graph_to_binary(&rg, &mut buf).unwrap();
        let (n, trees, edges) = binary_edge_list(buf.as_slice()).unwrap();
        assert_eq!((n, trees as usize, edges.len()), (3, 6, 6));
    }
}
