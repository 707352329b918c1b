//! Text file format for graphs.
//!
//! A graph file is a UTF-8 JSON object with fields `name`, `vertices`,
//! `edges` (each `{id, ends: [v, v], var}` with a positive Feynman index),
//! `legs` (each `{momentum, vertex}`) and an optional `masses` map from edge
//! id to mass index. Unknown fields are rejected. Serialisation is canonical:
//! parsing a canonically written file and writing it again reproduces the
//! bytes exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::graph::{Edge, EdgeVar, FeynGraph, GraphError, Leg};

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Invalid(#[from] GraphError),
    #[error("graph is not serialisable: edge `{0}` carries a leg variable")]
    LegVariableEdge(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    name: String,
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
    #[serde(default)]
    legs: Vec<LegRecord>,
    #[serde(default)]
    masses: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    id: String,
    ends: [String; 2],
    var: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LegRecord {
    momentum: u32,
    vertex: String,
}

pub fn parse_str(text: &str) -> Result<FeynGraph, GraphFileError> {
    let file: GraphFile = serde_json::from_str(text)?;
    let graph = FeynGraph::new(
        file.name,
        file.vertices,
        file.edges
            .into_iter()
            .map(|e| Edge {
                id: e.id,
                ends: (e.ends[0].clone(), e.ends[1].clone()),
                var: EdgeVar::Feyn(e.var),
            })
            .collect(),
        file.legs
            .into_iter()
            .map(|l| Leg {
                momentum: l.momentum,
                vertex: l.vertex,
            })
            .collect(),
        file.masses,
    )?;
    Ok(graph)
}

pub fn load(path: impl AsRef<Path>) -> Result<FeynGraph, GraphFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GraphFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}

// JSON string literal with proper escaping.
fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("string serialisation cannot fail")
}

/// Canonical serialisation: fixed field order, one line per edge and leg
/// record, empty `legs`/`masses` omitted, trailing newline. This is the
/// byte-level round-trip contract for graph files.
pub fn to_canonical_string(g: &FeynGraph) -> Result<String, GraphFileError> {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"name\": {},\n", quoted(&g.name)));
    let vertices = g
        .vertices()
        .iter()
        .map(|v| quoted(v))
        .collect::<Vec<_>>()
        .join(", ");
    out.push_str(&format!("  \"vertices\": [{vertices}],\n"));
    out.push_str("  \"edges\": [");
    let mut edge_lines = Vec::new();
    for e in g.edges() {
        let var = match e.var {
            EdgeVar::Feyn(i) => i,
            EdgeVar::Leg(_) => return Err(GraphFileError::LegVariableEdge(e.id.clone())),
        };
        edge_lines.push(format!(
            "    {{ \"id\": {}, \"ends\": [{}, {}], \"var\": {} }}",
            quoted(&e.id),
            quoted(&e.ends.0),
            quoted(&e.ends.1),
            var
        ));
    }
    if edge_lines.is_empty() {
        out.push(']');
    } else {
        out.push_str(&format!("\n{}\n  ]", edge_lines.join(",\n")));
    }
    if !g.legs().is_empty() {
        let leg_lines = g
            .legs()
            .iter()
            .map(|l| {
                format!(
                    "    {{ \"momentum\": {}, \"vertex\": {} }}",
                    l.momentum,
                    quoted(&l.vertex)
                )
            })
            .collect::<Vec<_>>()
            .join(",\n");
        out.push_str(&format!(",\n  \"legs\": [\n{leg_lines}\n  ]"));
    }
    if !g.masses().is_empty() {
        let mass_entries = g
            .masses()
            .iter()
            .map(|(e, m)| format!("{}: {}", quoted(e), m))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!(",\n  \"masses\": {{ {mass_entries} }}"));
    }
    out.push_str("\n}\n");
    Ok(out)
}

pub fn save(g: &FeynGraph, path: impl AsRef<Path>) -> Result<(), GraphFileError> {
    let path = path.as_ref();
    let text = to_canonical_string(g)?;
    fs::write(path, text).map_err(|source| GraphFileError::Io {
        path: path.display().to_string(),
        source,
    })
}
