//! Metric graph export as DOT or JSON.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use mqi_core::graph::MetricGraph;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFileVertex {
    pub facet: usize,
    pub normal: [f64; 3],
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFileEdge {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    pub weight: f64,
}

/// Full-precision JSON form of a metric graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<GraphFileVertex>,
    pub edges: Vec<GraphFileEdge>,
}

impl GraphFile {
    pub fn of(g: &MetricGraph) -> GraphFile {
        GraphFile {
            vertices: g
                .vertices
                .iter()
                .map(|v| GraphFileVertex { facet: v.facet, normal: [v.normal.x, v.normal.y, v.normal.z], area: v.area })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| GraphFileEdge { from: e.from, to: e.to, length: e.length, weight: e.weight })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<GraphFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("graph JSON: {e}")))
    }
}

/// Six decimals, with `-0.000000` printed as `0.000000`.
fn six(x: f64) -> String {
    let s = format!("{x:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn to_dot(g: &MetricGraph) -> String {
    let mut s = String::from("graph M {\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let n = v.normal;
        let _ = writeln!(s, "  n{i} [label=\"({}, {}, {})\"];", six(n.x), six(n.y), six(n.z));
    }
    for e in &g.edges {
        let _ = writeln!(s, "  n{} -- n{} [label=\"l={}, w={}\"];", e.from, e.to, six(e.length), six(e.weight));
    }
    s.push_str("}\n");
    s
}

pub fn to_json(g: &MetricGraph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphFile::of(g)).expect("graphs serialize");
    s.push('\n');
    s
}

pub fn export_graph(g: &MetricGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Dot => to_dot(g),
        GraphFormat::Json => to_json(g),
    }
}
