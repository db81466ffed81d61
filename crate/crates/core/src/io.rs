// SPDX-License-Identifier: Apache-2.0

//! JSON and DOT formats.
//!
//! Finite graph:
//!
//! ```json
//! { "vertices": ["u", "v"], "edges": [["e1", "u", "v"], ["e2", "u", "v"]] }
//! ```
//!
//! Periodic description: cell `k` holds a copy `name@k` of every
//! `period_cell` vertex; `glue` rule `[id, a, b]` joins `a@k` to `b@(k+1)`.
//! Head vertices and head edges are optional and may reference `name@k`.
//! Each end is a ray that visits the listed cell vertices in every cell it
//! passes, starting at `start_cell` and stepping by `direction`.
//!
//! ```json
//! {
//!   "name": "ladder",
//!   "period_cell": { "vertices": ["a", "b"], "edges": [["r", "a", "b"]] },
//!   "glue": [["ea", "a", "a"], ["eb", "b", "b"]],
//!   "two_way": true,
//!   "root": "a@0",
//!   "ends": [
//!     { "id": "left", "start_cell": 0, "direction": -1, "pattern": ["b"] },
//!     { "id": "right", "start_cell": 0, "direction": 1, "pattern": ["b"] }
//!   ]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arcs::{ArcSystem, PipelineState};
use crate::ends::{EndId, PeriodicPresentation, Presentation, RayDecl, VRef};
use crate::error::{EndsError, GraphError};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::tpath::Packing;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("edge `{0}` is a loop; loops are not allowed")]
    Loop(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("duplicate {what} `{id}`")]
    Duplicate { what: &'static str, id: String },
    #[error("bad reference `{0}`")]
    BadReference(String),
    #[error(transparent)]
    Ends(#[from] EndsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

pub fn parse_graph(text: &str) -> Result<MultiGraph, FormatError> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    graph_from_json(&raw)
}

pub fn graph_from_json(raw: &GraphJson) -> Result<MultiGraph, FormatError> {
    let mut g = MultiGraph::new();
    let mut ids = BTreeMap::new();
    for (i, name) in raw.vertices.iter().enumerate() {
        if ids.insert(name.as_str(), VertexId(i as u64)).is_some() {
            return Err(FormatError::Duplicate { what: "vertex", id: name.clone() });
        }
        g.add_labeled_vertex(VertexId(i as u64), name.clone());
    }
    let mut seen = BTreeSet::new();
    for (j, (id, u, v)) in raw.edges.iter().enumerate() {
        if !seen.insert(id.as_str()) {
            return Err(FormatError::Duplicate { what: "edge", id: id.clone() });
        }
        if u == v {
            return Err(FormatError::Loop(id.clone()));
        }
        let end = |name: &String| {
            ids.get(name.as_str()).copied().ok_or_else(|| FormatError::UnknownVertex { edge: id.clone(), vertex: name.clone() })
        };
        g.add_labeled_edge(EdgeId(j as u64), end(u)?, end(v)?, id.clone())?;
    }
    Ok(g)
}

pub fn graph_to_json(g: &MultiGraph) -> GraphJson {
    GraphJson {
        vertices: g.vertices().map(|v| g.vertex_label(v)).collect(),
        edges: g.edges().map(|(e, u, v)| (g.edge_label(e), g.vertex_label(u), g.vertex_label(v))).collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndJson {
    pub id: String,
    #[serde(default)]
    pub start_cell: i64,
    #[serde(default = "one")]
    pub direction: i64,
    pub pattern: Vec<String>,
}

fn one() -> i64 {
    1
}

fn default_horizon() -> usize {
    4
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicJson {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub head: GraphJson,
    pub period_cell: GraphJson,
    pub glue: Vec<(String, String, String)>,
    #[serde(default)]
    pub two_way: bool,
    pub root: String,
    #[serde(default)]
    pub ends: Vec<EndJson>,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
}

pub fn parse_periodic(text: &str) -> Result<PeriodicPresentation, FormatError> {
    let raw: PeriodicJson = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    periodic_from_json(&raw)
}

pub fn periodic_from_json(raw: &PeriodicJson) -> Result<PeriodicPresentation, FormatError> {
    let index = |names: &[String], what: &'static str| -> Result<BTreeMap<String, usize>, FormatError> {
        let mut m = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if m.insert(n.clone(), i).is_some() {
                return Err(FormatError::Duplicate { what, id: n.clone() });
            }
        }
        Ok(m)
    };
    let head = index(&raw.head.vertices, "head vertex")?;
    let cell = index(&raw.period_cell.vertices, "cell vertex")?;
    let cell_ref = |edge: &str, name: &str| {
        cell.get(name).copied().ok_or_else(|| FormatError::UnknownVertex { edge: edge.into(), vertex: name.into() })
    };
    let vref = |edge: &str, name: &str| -> Result<VRef, FormatError> {
        if let Some(&i) = head.get(name) {
            return Ok(VRef::Head(i));
        }
        let (base, k) = name.split_once('@').ok_or_else(|| FormatError::UnknownVertex { edge: edge.into(), vertex: name.into() })?;
        let k: i64 = k.parse().map_err(|_| FormatError::BadReference(name.into()))?;
        Ok(VRef::Cell(k, cell_ref(edge, base)?))
    };
    let mut cell_edges = Vec::new();
    for (id, a, b) in &raw.period_cell.edges {
        if a == b {
            return Err(FormatError::Loop(id.clone()));
        }
        cell_edges.push((id.clone(), cell_ref(id, a)?, cell_ref(id, b)?));
    }
    let mut glue = Vec::new();
    for (id, a, b) in &raw.glue {
        glue.push((id.clone(), cell_ref(id, a)?, cell_ref(id, b)?));
    }
    let mut head_edges = Vec::new();
    for (id, a, b) in &raw.head.edges {
        if a == b {
            return Err(FormatError::Loop(id.clone()));
        }
        head_edges.push((id.clone(), vref(id, a)?, vref(id, b)?));
    }
    let mut rays = Vec::new();
    for end in &raw.ends {
        let pattern = end.pattern.iter().map(|n| cell_ref(&end.id, n)).collect::<Result<_, _>>()?;
        rays.push(RayDecl { id: EndId(end.id.clone()), start_cell: end.start_cell, direction: end.direction, pattern });
    }
    let p = PeriodicPresentation {
        name: raw.name.clone(),
        head: raw.head.vertices.clone(),
        head_edges,
        cell: raw.period_cell.vertices.clone(),
        cell_edges,
        glue,
        two_way: raw.two_way,
        root: vref("root", &raw.root)?,
        rays,
        horizon: raw.horizon,
    };
    p.validate()?;
    Ok(p)
}

pub fn periodic_to_json(p: &PeriodicPresentation) -> PeriodicJson {
    let name = |r: VRef| match r {
        VRef::Head(i) => p.head[i].clone(),
        VRef::Cell(k, i) => format!("{}@{k}", p.cell[i]),
    };
    let triple = |(l, a, b): &(String, usize, usize)| (l.clone(), p.cell[*a].clone(), p.cell[*b].clone());
    PeriodicJson {
        name: p.name.clone(),
        head: GraphJson {
            vertices: p.head.clone(),
            edges: p.head_edges.iter().map(|(l, a, b)| (l.clone(), name(*a), name(*b))).collect(),
        },
        period_cell: GraphJson { vertices: p.cell.clone(), edges: p.cell_edges.iter().map(triple).collect() },
        glue: p.glue.iter().map(triple).collect(),
        two_way: p.two_way,
        root: name(p.root),
        ends: p
            .rays
            .iter()
            .map(|r| EndJson {
                id: r.id.0.clone(),
                start_cell: r.start_cell,
                direction: r.direction,
                pattern: r.pattern.iter().map(|&i| p.cell[i].clone()).collect(),
            })
            .collect(),
        horizon: p.horizon,
    }
}

/// Reads either format; a `period_cell` field selects the periodic one.
pub fn parse_input(text: &str) -> Result<PeriodicPresentation, FormatError> {
    let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    if value.get("period_cell").is_some() {
        parse_periodic(text)
    } else {
        let g = parse_graph(text)?;
        if g.num_vertices() == 0 {
            return Err(FormatError::Ends(EndsError::InvalidPresentation("empty graph".into())));
        }
        Ok(PeriodicPresentation::from_finite("input", &g, None)?)
    }
}

/// Export form of a presentation: the finite format when it has no cells.
pub fn presentation_to_value(p: &PeriodicPresentation) -> Value {
    match p.finite_graph() {
        Some(g) => serde_json::to_value(graph_to_json(&g)).expect("serializable"),
        None => serde_json::to_value(periodic_to_json(p)).expect("serializable"),
    }
}

/// Pretty JSON with a trailing newline; map keys are always sorted.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn edge_labels(g: &MultiGraph, edges: impl IntoIterator<Item = EdgeId>) -> Vec<String> {
    edges.into_iter().map(|e| g.edge_label(e)).collect()
}

pub fn packing_to_value(g: &MultiGraph, packing: &Packing) -> Value {
    let lambda: BTreeMap<String, usize> =
        packing.certificate.lambda_profile.iter().map(|(&t, &l)| (g.vertex_label(t), l)).collect();
    let cuts: BTreeMap<String, Vec<String>> = packing
        .certificate
        .per_terminal_cuts
        .iter()
        .map(|(&t, c)| (g.vertex_label(t), edge_labels(g, c.edge_set.iter().copied())))
        .collect();
    let sum: usize = lambda.values().sum();
    json!({
        "paths": packing.paths.paths.iter().map(|q| edge_labels(g, q.edges.iter().copied())).collect::<Vec<_>>(),
        "path_vertices": packing.paths.paths.iter()
            .map(|q| q.vertices.iter().map(|&v| g.vertex_label(v)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "lambda": lambda,
        "cuts": cuts,
        "total": packing.paths.len(),
        "bound": sum as f64 / 2.0,
        "stats": {
            "splits": packing.stats.splits,
            "candidates": packing.stats.candidates,
            "backtracks": packing.stats.backtracks,
        },
    })
}

pub fn arcs_to_value(p: &dyn Presentation, system: &ArcSystem, state: &PipelineState) -> Value {
    let w = &state.window;
    let wl = |v: &VertexId| w.graph.vertex_label(*v);
    let arcs: Vec<Value> = system
        .arcs
        .iter()
        .map(|a| {
            json!({
                "kind": a.kind,
                "from": a.from.label(p),
                "to": a.to.label(p),
                "edges": a.path.edges.iter().map(|&e| p.edge_label(e)).collect::<Vec<_>>(),
                "vertices": a.path.vertices.iter().map(|&v| p.vertex_label(v)).collect::<Vec<_>>(),
                "materialized_depth": a.materialized_depth,
            })
        })
        .collect();
    let label_map = |m: &BTreeMap<crate::ends::Terminal, usize>| -> BTreeMap<String, usize> {
        m.iter().map(|(t, &c)| (t.label(p), c)).collect()
    };
    let fm = &state.final_minor.minor;
    json!({
        "arcs": arcs,
        "counts": label_map(&system.per_terminal_counts),
        "lambda": label_map(&state.lambda),
        "pipeline": {
            "radius": state.radius,
            "premise": state.premise,
            "end_order": state.end_order.iter().map(|e| e.0.clone()).collect::<Vec<_>>(),
            "cuts": state.cuts.iter().map(|c| edge_labels(&w.graph, c.edge_set.iter().copied())).collect::<Vec<_>>(),
            "components": state.components.iter().map(|c| c.iter().map(wl).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "minor_terminals": state.terminal_image.iter()
                .map(|(t, v)| (t.label(p), fm.vertex_label(*v)))
                .collect::<BTreeMap<_, _>>(),
            "minor_paths": state.packing.paths.paths.iter()
                .map(|q| edge_labels(fm, q.edges.iter().copied()))
                .collect::<Vec<_>>(),
            "ray_sources": state.sources.iter()
                .map(|s| s.iter().map(|&v| p.vertex_label(v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        },
    })
}

/// Graphviz rendering of a finite packing, one colour per path.
pub fn packing_to_dot(g: &MultiGraph, packing: &Packing, terminals: &BTreeSet<VertexId>) -> String {
    const PALETTE: [&str; 8] = ["blue", "red", "darkgreen", "orange", "purple", "brown", "teal", "magenta"];
    let mut owner = BTreeMap::new();
    for (i, q) in packing.paths.paths.iter().enumerate() {
        for &e in &q.edges {
            owner.insert(e, i);
        }
    }
    let mut out = String::from("graph packing {\n  node [shape=circle, fontsize=10];\n");
    for v in g.vertices() {
        let style = if terminals.contains(&v) { ", style=filled, fillcolor=lightgray" } else { "" };
        out.push_str(&format!("  \"{}\" [label=\"{}\"{}];\n", v.0, g.vertex_label(v), style));
    }
    for (e, u, v) in g.edges() {
        let colour = owner.get(&e).map(|&i| format!(", color={}, penwidth=2", PALETTE[i % PALETTE.len()])).unwrap_or_default();
        out.push_str(&format!("  \"{}\" -- \"{}\" [label=\"{}\"{}];\n", u.0, v.0, g.edge_label(e), colour));
    }
    out.push_str("}\n");
    out
}

/// Graphviz rendering of a finite graph or of the radius-`r` window.
pub fn presentation_to_dot(p: &dyn Presentation, r: usize) -> Result<String, EndsError> {
    let w = crate::ends::window(p, r)?;
    let g = &w.graph;
    let mut out = String::from("graph window {\n  node [shape=circle, fontsize=10];\n");
    for v in g.vertices() {
        let shape = if w.is_region(v) { ", shape=doublecircle" } else { "" };
        out.push_str(&format!("  \"{}\" [label=\"{}\"{}];\n", v.0, g.vertex_label(v), shape));
    }
    for (e, u, v) in g.edges() {
        out.push_str(&format!("  \"{}\" -- \"{}\" [label=\"{}\"];\n", u.0, v.0, g.edge_label(e)));
    }
    out.push_str("}\n");
    Ok(out)
}
