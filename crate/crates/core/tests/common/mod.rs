// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::collections::BTreeSet;

use tpack::{EdgeId, GraphPath, MultiGraph, VertexId};

/// Smallest boundary of a vertex set containing `x` and avoiding `y`, by
/// enumerating every such set. Only for graphs with at most 20 vertices.
pub fn brute_min_cut(g: &MultiGraph, x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>) -> usize {
    let free: Vec<VertexId> = g.vertices().filter(|v| !x.contains(v) && !y.contains(v)).collect();
    assert!(free.len() <= 20, "oracle limited to 20 free vertices");
    let mut best = usize::MAX;
    for mask in 0u32..1 << free.len() {
        let mut side = x.clone();
        side.extend(free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
        let size = g.edges().filter(|(_, u, v)| side.contains(u) != side.contains(v)).count();
        best = best.min(size);
    }
    best
}

/// λ(t, T \ {t}) by exhaustive cut enumeration.
pub fn brute_lambda(g: &MultiGraph, t: VertexId, terminals: &BTreeSet<VertexId>) -> usize {
    let rest: BTreeSet<VertexId> = terminals.iter().copied().filter(|&s| s != t).collect();
    brute_min_cut(g, &BTreeSet::from([t]), &rest)
}

/// Pairwise edge-disjointness, counting repeated edges inside one path too.
pub fn edge_disjoint(paths: &[GraphPath]) -> bool {
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    paths.iter().flat_map(|p| p.edges.iter()).all(|&e| seen.insert(e))
}

/// Every step of `path` is an edge of `g` joining consecutive vertices.
pub fn is_walk_in(g: &MultiGraph, path: &GraphPath) -> bool {
    path.vertices.len() == path.edges.len() + 1
        && path.edges.iter().enumerate().all(|(i, &e)| {
            g.endpoints(e).is_some_and(|(a, b)| {
                let (u, v) = (path.vertices[i], path.vertices[i + 1]);
                (a, b) == (u, v) || (a, b) == (v, u)
            })
        })
}

pub fn is_prefix(short: &GraphPath, long: &GraphPath) -> bool {
    long.vertices.starts_with(&short.vertices) && long.edges.starts_with(&short.edges)
}

pub fn graph(n: u64, edges: &[(u64, u64)]) -> MultiGraph {
    let mut g = MultiGraph::new();
    for i in 0..n {
        g.add_labeled_vertex(VertexId(i), format!("v{i}"));
    }
    for (j, &(a, b)) in edges.iter().enumerate() {
        g.add_labeled_edge(EdgeId(j as u64), VertexId(a), VertexId(b), format!("e{j}")).unwrap();
    }
    g
}
