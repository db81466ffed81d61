// SPDX-License-Identifier: Apache-2.0

//! Unit-capacity max-flow on undirected multigraphs.
//!
//! Augmenting paths are found by breadth-first search from all sources at
//! once, scanning incident edges in ascending [`EdgeId`] order. Sources and
//! sinks behave as if attached to a super-source and super-sink by edges of
//! unbounded capacity; those attachments never show up in results.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::GraphError;
use crate::multigraph::{Cut, EdgeId, GraphPath, MultiGraph, VertexId};

struct FlowNetwork {
    verts: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    /// (edge index, neighbour index), ascending by edge id
    adj: Vec<Vec<(usize, usize)>>,
    ends: Vec<(usize, usize)>,
    ids: Vec<EdgeId>,
    /// +1: flow from ends.0 to ends.1, -1: reverse, 0: none
    flow: Vec<i8>,
    is_source: Vec<bool>,
    is_sink: Vec<bool>,
    value: usize,
}

impl FlowNetwork {
    fn new(graph: &MultiGraph, x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>) -> Result<Self, GraphError> {
        if x.is_empty() {
            return Err(GraphError::EmptySet("source set"));
        }
        if y.is_empty() {
            return Err(GraphError::EmptySet("sink set"));
        }
        graph.check_subset(x)?;
        graph.check_subset(y)?;
        if let Some(&v) = x.intersection(y).next() {
            return Err(GraphError::NotDisjoint(graph.vertex_label(v)));
        }
        let verts: Vec<VertexId> = graph.vertices().collect();
        let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut ends = Vec::with_capacity(graph.num_edges());
        let mut ids = Vec::with_capacity(graph.num_edges());
        for (i, (e, u, v)) in graph.edges().enumerate() {
            let (a, b) = (index[&u], index[&v]);
            adj[a].push((i, b));
            adj[b].push((i, a));
            ends.push((a, b));
            ids.push(e);
        }
        let is_source = verts.iter().map(|v| x.contains(v)).collect();
        let is_sink = verts.iter().map(|v| y.contains(v)).collect();
        let m = ids.len();
        Ok(FlowNetwork { verts, index, adj, ends, ids, flow: vec![0; m], is_source, is_sink, value: 0 })
    }

    fn residual(&self, edge: usize, from: usize) -> bool {
        if self.ends[edge].0 == from {
            self.flow[edge] < 1
        } else {
            self.flow[edge] > -1
        }
    }

    fn augment_once(&mut self) -> bool {
        let n = self.verts.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for i in 0..n {
            if self.is_source[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(edge, w) in &self.adj[u] {
                if seen[w] || !self.residual(edge, u) {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some((edge, u));
                if self.is_sink[w] {
                    let mut cur = w;
                    while let Some((edge, prev)) = parent[cur] {
                        self.flow[edge] += if self.ends[edge].0 == prev { 1 } else { -1 };
                        cur = prev;
                    }
                    self.value += 1;
                    return true;
                }
                queue.push_back(w);
            }
        }
        false
    }

    fn run(&mut self, limit: Option<usize>) -> usize {
        while limit.map_or(true, |k| self.value < k) && self.augment_once() {}
        self.value
    }

    fn source_side(&self) -> BTreeSet<VertexId> {
        let n = self.verts.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for i in 0..n {
            if self.is_source[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(edge, w) in &self.adj[u] {
                if !seen[w] && self.residual(edge, u) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..n).filter(|&i| seen[i]).map(|i| self.verts[i]).collect()
    }

    /// Splits the current flow into source-sink paths. Each path starts at
    /// its last source vertex and ends at its first sink vertex, and is simple.
    fn decompose(&self) -> Vec<GraphPath> {
        let mut used = vec![false; self.ids.len()];
        let mut paths = Vec::new();
        let n = self.verts.len();
        let out_arc = |edge: usize, from: usize| -> bool {
            let (a, _) = self.ends[edge];
            if a == from {
                self.flow[edge] == 1
            } else {
                self.flow[edge] == -1
            }
        };
        for s in 0..n {
            if !self.is_source[s] {
                continue;
            }
            loop {
                if !self.adj[s].iter().any(|&(e, _)| !used[e] && out_arc(e, s)) {
                    break;
                }
                let mut walk = GraphPath::single(self.verts[s]);
                let mut cur = s;
                while !self.is_sink[cur] {
                    let &(edge, w) = self.adj[cur]
                        .iter()
                        .find(|&&(e, _)| !used[e] && out_arc(e, cur))
                        .expect("flow conservation");
                    used[edge] = true;
                    walk.push(self.ids[edge], self.verts[w]);
                    cur = w;
                }
                let mut path = walk.trim_cycles();
                if let Some(last_src) = path.vertices.iter().rposition(|v| self.is_source[self.index[v]]) {
                    path.vertices.drain(..last_src);
                    path.edges.drain(..last_src);
                }
                paths.push(path);
            }
        }
        paths
    }
}

/// Value of a maximum `x`–`y` flow, stopping early once `limit` is reached.
pub fn max_flow_value(
    g: &MultiGraph,
    x: &BTreeSet<VertexId>,
    y: &BTreeSet<VertexId>,
    limit: Option<usize>,
) -> Result<usize, GraphError> {
    let mut net = FlowNetwork::new(g, x, y)?;
    Ok(net.run(limit))
}

/// Minimum cut separating `x` from `y`. The returned side containing `x` is
/// the set of vertices reachable from `x` in the final residual graph.
pub fn min_cut(g: &MultiGraph, x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>) -> Result<(Cut, usize), GraphError> {
    let mut net = FlowNetwork::new(g, x, y)?;
    let value = net.run(None);
    let cut = Cut::from_side(g, net.source_side());
    debug_assert_eq!(cut.value(), value);
    Ok((cut, value))
}

/// Minimum cut whose `y` side is as small as possible: the vertices that
/// can still reach `y` in the residual graph. Sides are returned with `x` in
/// `side_a`.
pub fn min_cut_near_sink(
    g: &MultiGraph,
    x: &BTreeSet<VertexId>,
    y: &BTreeSet<VertexId>,
) -> Result<(Cut, usize), GraphError> {
    let (cut, value) = min_cut(g, y, x)?;
    Ok((cut.swapped(), value))
}

/// `k` pairwise edge-disjoint paths from `x` to `y`. Every path has exactly
/// its first vertex in `x` and its last vertex in `y`.
pub fn edge_disjoint_paths(
    g: &MultiGraph,
    x: &BTreeSet<VertexId>,
    y: &BTreeSet<VertexId>,
    k: usize,
) -> Result<Vec<GraphPath>, GraphError> {
    let mut net = FlowNetwork::new(g, x, y)?;
    let value = net.run(Some(k));
    if value < k {
        let cut = Cut::from_side(g, net.source_side());
        return Err(GraphError::Infeasible { requested: k, available: value, cut: Box::new(cut) });
    }
    let paths = net.decompose();
    debug_assert_eq!(paths.len(), k);
    Ok(paths)
}

/// All edge-disjoint paths of a maximum flow.
pub fn max_edge_disjoint_paths(
    g: &MultiGraph,
    x: &BTreeSet<VertexId>,
    y: &BTreeSet<VertexId>,
) -> Result<Vec<GraphPath>, GraphError> {
    let mut net = FlowNetwork::new(g, x, y)?;
    net.run(None);
    Ok(net.decompose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: u64, edges: &[(u64, u64)]) -> MultiGraph {
        let mut g = MultiGraph::new();
        for v in 0..n {
            g.add_vertex(VertexId(v));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            g.add_edge(EdgeId(i as u64), VertexId(u), VertexId(v)).unwrap();
        }
        g
    }

    fn set(vs: &[u64]) -> BTreeSet<VertexId> {
        vs.iter().map(|&v| VertexId(v)).collect()
    }

    /// Smallest boundary over all vertex sets containing x and avoiding y.
    fn brute_min_cut(g: &MultiGraph, x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>) -> usize {
        let verts: Vec<VertexId> = g.vertices().collect();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << verts.len()) {
            let side: BTreeSet<VertexId> =
                verts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            if x.is_subset(&side) && side.is_disjoint(y) {
                best = best.min(g.boundary_size(&side).unwrap());
            }
        }
        best
    }

    #[test]
    fn path_and_parallel_cuts() {
        let p = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(min_cut(&p, &set(&[0]), &set(&[3])).unwrap().1, 1);
        let par = graph(2, &[(0, 1), (0, 1), (0, 1)]);
        assert_eq!(min_cut(&par, &set(&[0]), &set(&[1])).unwrap().1, 3);
    }

    #[test]
    fn c4_opposite_matches_enumeration() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let (x, y) = (set(&[0]), set(&[2]));
        let expected = brute_min_cut(&c4, &x, &y);
        assert_eq!(expected, 2);
        let (cut, value) = min_cut(&c4, &x, &y).unwrap();
        assert_eq!(value, expected);
        assert!(cut.separates(&x, &y));
        assert!(cut.is_consistent_with(&c4));
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let p = graph(3, &[(0, 1), (1, 2)]);
        assert!(matches!(min_cut(&p, &set(&[0, 1]), &set(&[1])), Err(GraphError::NotDisjoint(_))));
    }

    #[test]
    fn disconnected_gives_zero() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        let (cut, v) = min_cut(&g, &set(&[0]), &set(&[3])).unwrap();
        assert_eq!(v, 0);
        assert!(cut.edge_set.is_empty());
    }

    #[test]
    fn paths_on_small_graphs() {
        let p = graph(3, &[(0, 1), (1, 2)]);
        let ps = edge_disjoint_paths(&p, &set(&[0]), &set(&[2]), 1).unwrap();
        assert_eq!(ps[0].vertices, vec![VertexId(0), VertexId(1), VertexId(2)]);

        let par = graph(2, &[(0, 1), (0, 1), (0, 1)]);
        let ps = edge_disjoint_paths(&par, &set(&[0]), &set(&[1]), 3).unwrap();
        assert_eq!(ps.len(), 3);
        assert!(ps.iter().all(|p| p.len() == 1));

        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let ps = edge_disjoint_paths(&c4, &set(&[0]), &set(&[2]), 2).unwrap();
        let mut arcs: Vec<Vec<EdgeId>> = ps
            .iter()
            .map(|p| {
                let mut e = p.edges.clone();
                e.sort();
                e
            })
            .collect();
        arcs.sort();
        assert_eq!(arcs, vec![vec![EdgeId(0), EdgeId(1)], vec![EdgeId(2), EdgeId(3)]]);
    }

    #[test]
    fn infeasible_request_carries_cut() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        match edge_disjoint_paths(&c4, &set(&[0]), &set(&[2]), 3) {
            Err(GraphError::Infeasible { requested: 3, available: 2, cut }) => assert_eq!(cut.value(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn multi_source_paths_avoid_other_terminals() {
        // sources 0 and 1 on a path 0-1-2, sink 2: only one path, starting at 1
        let g = graph(3, &[(0, 1), (1, 2)]);
        let ps = max_edge_disjoint_paths(&g, &set(&[0, 1]), &set(&[2])).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].vertices, vec![VertexId(1), VertexId(2)]);
    }

    #[test]
    fn sink_side_cut_is_near_sink() {
        let p = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let (near_src, _) = min_cut(&p, &set(&[0]), &set(&[3])).unwrap();
        let (near_sink, _) = min_cut_near_sink(&p, &set(&[0]), &set(&[3])).unwrap();
        assert_eq!(near_src.edge_set, BTreeSet::from([EdgeId(0)]));
        assert_eq!(near_sink.edge_set, BTreeSet::from([EdgeId(2)]));
        assert!(near_sink.side_a.contains(&VertexId(0)));
    }
}
