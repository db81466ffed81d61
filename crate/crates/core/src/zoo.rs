// SPDX-License-Identifier: Apache-2.0

//! Named graph families.
//!
//! `dup_rung_ladder` and `fig3_tree` are rebuilt from their defining
//! properties rather than from drawings; the audit below pins exactly those
//! properties (degrees, number of ends, end parities).

use std::collections::BTreeSet;

use crate::ends::presentation::{distances, EndId, PeriodicPresentation, Presentation, RayDecl, VRef};
use crate::error::ZooError;
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZooEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
    pub infinite: bool,
}

pub const ENTRIES: &[ZooEntry] = &[
    ZooEntry { name: "star", params: "k ≥ 1", summary: "K_{1,k}: center c, leaves l1..lk", infinite: false },
    ZooEntry { name: "path", params: "n ≥ 2", summary: "path on vertices p0..p(n-1)", infinite: false },
    ZooEntry { name: "cycle", params: "n ≥ 2", summary: "cycle on vertices c0..c(n-1); n = 2 is a digon", infinite: false },
    ZooEntry { name: "parallel", params: "m ≥ 1", summary: "two vertices u, v joined by m parallel edges", infinite: false },
    ZooEntry { name: "ray", params: "none", summary: "one-way infinite path x@0, x@1, ...; one end `inf`", infinite: true },
    ZooEntry {
        name: "double_ladder",
        params: "none",
        summary: "rails a@k, b@k (k ∈ Z) with one rung per cell; every vertex has degree 3; ends `left`, `right`",
        infinite: true,
    },
    ZooEntry {
        name: "dup_rung_ladder",
        params: "none",
        summary: "double ladder with every rung doubled; every vertex has degree 4; ends `left`, `right` (reconstruction)",
        infinite: true,
    },
    ZooEntry {
        name: "fig3_tree",
        params: "none",
        summary: "leaves l1, l2, l3 on a center x@0 that starts the ray x@0, x@1, ...; one end `inf` of degree 1 (reconstruction)",
        infinite: true,
    },
    ZooEntry {
        name: "even_ladder",
        params: "none",
        summary: "dup_rung_ladder with both ends as default terminals; the positive instance for arcs",
        infinite: true,
    },
];

pub fn entry(name: &str) -> Option<&'static ZooEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Terminal shorthand used when none is given.
pub fn default_terminals(name: &str, params: &[usize]) -> String {
    match name {
        "star" | "path" | "fig3_tree" => "leaves".into(),
        "cycle" => format!("c0,c{}", params.first().copied().unwrap_or(4) / 2),
        "parallel" => "u,v".into(),
        "ray" => "x@0,ends".into(),
        "dup_rung_ladder" => "ends,class:a".into(),
        _ => "ends".into(),
    }
}

fn one_param(name: &str, params: &[usize], min: usize) -> Result<usize, ZooError> {
    match params {
        [k] if *k >= min => Ok(*k),
        _ => Err(ZooError::BadParams { name: name.into(), expected: format!("one parameter ≥ {min}"), got: params.to_vec() }),
    }
}

fn no_params(name: &str, params: &[usize]) -> Result<(), ZooError> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(ZooError::BadParams { name: name.into(), expected: "no parameters".into(), got: params.to_vec() })
    }
}

fn finite(name: &str, vertices: &[String], edges: &[(String, usize, usize)]) -> Result<PeriodicPresentation, ZooError> {
    let mut g = MultiGraph::new();
    for (i, v) in vertices.iter().enumerate() {
        g.add_labeled_vertex(VertexId(i as u64), v.clone());
    }
    for (j, (l, a, b)) in edges.iter().enumerate() {
        g.add_labeled_edge(EdgeId(j as u64), VertexId(*a as u64), VertexId(*b as u64), l.clone())
            .map_err(|e| ZooError::Ends(e.into()))?;
    }
    Ok(PeriodicPresentation::from_finite(name, &g, None)?)
}

fn ladder(name: &str, rungs: usize) -> PeriodicPresentation {
    PeriodicPresentation {
        name: name.into(),
        head: vec![],
        head_edges: vec![],
        cell: vec!["a".into(), "b".into()],
        cell_edges: (1..=rungs).map(|i| (if rungs == 1 { "r".into() } else { format!("r{i}") }, 0, 1)).collect(),
        glue: vec![("ea".into(), 0, 0), ("eb".into(), 1, 1)],
        two_way: true,
        root: VRef::Cell(0, 0),
        rays: vec![
            RayDecl { id: EndId("left".into()), start_cell: 0, direction: -1, pattern: vec![1] },
            RayDecl { id: EndId("right".into()), start_cell: 0, direction: 1, pattern: vec![1] },
        ],
        horizon: 4,
    }
}

fn one_way_ray(name: &str, leaves: usize) -> PeriodicPresentation {
    PeriodicPresentation {
        name: name.into(),
        head: (1..=leaves).map(|i| format!("l{i}")).collect(),
        head_edges: (0..leaves).map(|i| (format!("t{}", i + 1), VRef::Head(i), VRef::Cell(0, 0))).collect(),
        cell: vec!["x".into()],
        cell_edges: vec![],
        glue: vec![("e".into(), 0, 0)],
        two_way: false,
        root: VRef::Cell(0, 0),
        rays: vec![RayDecl { id: EndId("inf".into()), start_cell: 0, direction: 1, pattern: vec![0] }],
        horizon: 4,
    }
}

pub fn build(name: &str, params: &[usize]) -> Result<PeriodicPresentation, ZooError> {
    let p = match name {
        "star" => {
            let k = one_param(name, params, 1)?;
            let vertices: Vec<String> = std::iter::once("c".to_string()).chain((1..=k).map(|i| format!("l{i}"))).collect();
            let edges: Vec<_> = (1..=k).map(|i| (format!("e{i}"), 0, i)).collect();
            finite(name, &vertices, &edges)?
        }
        "path" => {
            let n = one_param(name, params, 2)?;
            let vertices: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let edges: Vec<_> = (1..n).map(|i| (format!("e{i}"), i - 1, i)).collect();
            finite(name, &vertices, &edges)?
        }
        "cycle" => {
            let n = one_param(name, params, 2)?;
            let vertices: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
            let edges: Vec<_> = (0..n).map(|i| (format!("e{i}"), i, (i + 1) % n)).collect();
            finite(name, &vertices, &edges)?
        }
        "parallel" => {
            let m = one_param(name, params, 1)?;
            let edges: Vec<_> = (1..=m).map(|i| (format!("e{i}"), 0, 1)).collect();
            finite(name, &["u".to_string(), "v".to_string()], &edges)?
        }
        "ray" => {
            no_params(name, params)?;
            one_way_ray(name, 0)
        }
        "double_ladder" => {
            no_params(name, params)?;
            ladder(name, 1)
        }
        "dup_rung_ladder" | "even_ladder" => {
            no_params(name, params)?;
            ladder(name, 2)
        }
        "fig3_tree" => {
            no_params(name, params)?;
            one_way_ray(name, 3)
        }
        _ => return Err(ZooError::UnknownName(name.into())),
    };
    p.validate()?;
    audit(name, params, &p).map_err(|detail| ZooError::AuditFailed { name: name.into(), detail })?;
    Ok(p)
}

/// Degree multiset of the ball of radius 6, as `(label, degree)` pairs.
fn degrees(p: &PeriodicPresentation) -> Vec<(String, usize)> {
    distances(p, 6).keys().map(|&v| (p.vertex_label(v), p.degree(v))).collect()
}

/// Checks the documented properties of an entry.
pub fn audit(name: &str, params: &[usize], p: &PeriodicPresentation) -> Result<(), String> {
    let degs = degrees(p);
    let all = |pred: &dyn Fn(&str, usize) -> bool, what: &str| -> Result<(), String> {
        match degs.iter().find(|(l, d)| !pred(l, *d)) {
            Some((l, d)) => Err(format!("`{l}` has degree {d}, expected {what}")),
            None => Ok(()),
        }
    };
    let ends = p.ends().len();
    let want_ends = match name {
        "ray" | "fig3_tree" => 1,
        "double_ladder" | "dup_rung_ladder" | "even_ladder" => 2,
        _ => 0,
    };
    if ends != want_ends {
        return Err(format!("{ends} declared ends, expected {want_ends}"));
    }
    match name {
        "star" => {
            let k = params[0];
            all(&|l, d| if l == "c" { d == k } else { d == 1 }, "k at the center and 1 at leaves")
        }
        "path" => {
            let n = params[0];
            all(&|l, d| if l == "p0" || l == format!("p{}", n - 1) { d == 1 } else { d == 2 }, "1 at the ends, 2 inside")
        }
        "cycle" => all(&|_, d| d == 2, "2"),
        "parallel" => all(&|_, d| d == params[0], "m"),
        "ray" => all(&|l, d| if l == "x@0" { d == 1 } else { d == 2 }, "1 at the root, 2 elsewhere"),
        "double_ladder" => all(&|_, d| d == 3, "3"),
        "dup_rung_ladder" | "even_ladder" => all(&|_, d| d == 4, "4"),
        "fig3_tree" => {
            let leaves: BTreeSet<&str> = ["l1", "l2", "l3"].into();
            all(
                &|l, d| match l {
                    "x@0" => d == 4,
                    _ if leaves.contains(l) => d == 1,
                    _ => d == 2,
                },
                "4 at the center, 1 at leaves, 2 on the ray",
            )
        }
        _ => Ok(()),
    }
}
