// SPDX-License-Identifier: Apache-2.0

//! Finite loopless multigraphs with stable vertex and edge identities.
//!
//! Parallel edges are allowed, loops are not. Every edge keeps its
//! [`EdgeId`] through contractions and truncations, which is what lets cuts
//! computed on a minor be read back as cuts of the graph it came from.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A walk or path given by its vertex sequence and the edges between
/// consecutive vertices. `vertices.len() == edges.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GraphPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl GraphPath {
    pub fn single(v: VertexId) -> Self {
        GraphPath { vertices: vec![v], edges: Vec::new() }
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().expect("path has at least one vertex")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn push(&mut self, e: EdgeId, v: VertexId) {
        self.edges.push(e);
        self.vertices.push(v);
    }

    pub fn reversed(&self) -> GraphPath {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        GraphPath { vertices, edges }
    }

    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    /// Removes closed sub-walks: whenever a vertex repeats, everything
    /// between its first occurrence and the repeat is dropped. Only edges are
    /// removed, so endpoints and edge-disjointness from other walks survive.
    pub fn trim_cycles(&self) -> GraphPath {
        let mut out = GraphPath::single(self.first());
        let mut position: BTreeMap<VertexId, usize> = BTreeMap::new();
        position.insert(self.first(), 0);
        for (e, &v) in self.edges.iter().zip(&self.vertices[1..]) {
            if let Some(&i) = position.get(&v) {
                for dropped in out.vertices.drain(i + 1..) {
                    position.remove(&dropped);
                }
                out.edges.truncate(i);
            } else {
                out.push(*e, v);
                position.insert(v, out.vertices.len() - 1);
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    adjacency: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
    vertex_labels: BTreeMap<VertexId, String>,
    edge_labels: BTreeMap<EdgeId, String>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if self.vertices.insert(v) {
            self.adjacency.insert(v, Vec::new());
            true
        } else {
            false
        }
    }

    pub fn add_labeled_vertex(&mut self, v: VertexId, label: impl Into<String>) -> bool {
        let fresh = self.add_vertex(v);
        self.vertex_labels.insert(v, label.into());
        fresh
    }

    pub fn add_edge(&mut self, e: EdgeId, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::Loop { edge: self.edge_label(e), vertex: self.vertex_label(u) });
        }
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        if self.edges.contains_key(&e) {
            return Err(GraphError::DuplicateEdge(self.edge_label(e)));
        }
        self.edges.insert(e, (u, v));
        for (a, b) in [(u, v), (v, u)] {
            let list = self.adjacency.get_mut(&a).expect("vertex present");
            let at = list.partition_point(|&(f, _)| f < e);
            list.insert(at, (e, b));
        }
        Ok(())
    }

    pub fn add_labeled_edge(
        &mut self,
        e: EdgeId,
        u: VertexId,
        v: VertexId,
        label: impl Into<String>,
    ) -> Result<(), GraphError> {
        let label = label.into();
        if u == v {
            return Err(GraphError::Loop { edge: label, vertex: self.vertex_label(u) });
        }
        self.add_edge(e, u, v)?;
        self.edge_labels.insert(e, label);
        Ok(())
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        let (u, v) = self.edges.remove(&e)?;
        for a in [u, v] {
            if let Some(list) = self.adjacency.get_mut(&a) {
                list.retain(|&(f, _)| f != e);
            }
        }
        self.edge_labels.remove(&e);
        Some((u, v))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    /// Incident edges sorted by ascending edge id.
    pub fn neighbors(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        self.adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.adjacency.get(&v).map(Vec::len).ok_or(GraphError::UnknownVertex(v))
    }

    /// Number of edges with exactly one endpoint in `x`.
    pub fn boundary_size(&self, x: &BTreeSet<VertexId>) -> Result<usize, GraphError> {
        self.check_subset(x)?;
        Ok(self.boundary_edges(x).len())
    }

    pub fn boundary_edges(&self, x: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, (u, v))| x.contains(u) != x.contains(v))
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn check_subset(&self, x: &BTreeSet<VertexId>) -> Result<(), GraphError> {
        match x.iter().find(|v| !self.vertices.contains(v)) {
            Some(&v) => Err(GraphError::UnknownVertex(v)),
            None => Ok(()),
        }
    }

    pub fn vertex_label(&self, v: VertexId) -> String {
        self.vertex_labels.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn edge_label(&self, e: EdgeId) -> String {
        self.edge_labels.get(&e).cloned().unwrap_or_else(|| e.to_string())
    }

    pub fn set_vertex_label(&mut self, v: VertexId, label: impl Into<String>) {
        self.vertex_labels.insert(v, label.into());
    }

    pub fn set_edge_label(&mut self, e: EdgeId, label: impl Into<String>) {
        self.edge_labels.insert(e, label.into());
    }

    pub fn find_vertex(&self, label: &str) -> Option<VertexId> {
        self.vertices.iter().copied().find(|&v| self.vertex_label(v) == label)
    }

    pub fn find_edge(&self, label: &str) -> Option<EdgeId> {
        self.edges.keys().copied().find(|&e| self.edge_label(e) == label)
    }

    pub fn max_vertex_id(&self) -> Option<VertexId> {
        self.vertices.iter().next_back().copied()
    }

    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |e| e.0 + 1))
    }

    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.max_vertex_id().map_or(0, |v| v.0 + 1))
    }

    /// Connected components in order of their smallest vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.reach(v, |_| true);
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertices reachable from `start` through vertices accepted by `allow`.
    pub fn reach(&self, start: VertexId, allow: impl Fn(VertexId) -> bool) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(_, w) in self.neighbors(u) {
                if allow(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> MultiGraph {
        let mut h = MultiGraph::new();
        for &v in keep.iter().filter(|v| self.vertices.contains(v)) {
            h.add_vertex(v);
            if let Some(l) = self.vertex_labels.get(&v) {
                h.vertex_labels.insert(v, l.clone());
            }
        }
        for (e, u, v) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                h.add_edge(e, u, v).expect("induced edge is valid");
                if let Some(l) = self.edge_labels.get(&e) {
                    h.edge_labels.insert(e, l.clone());
                }
            }
        }
        h
    }

    /// Copy without the given edges.
    pub fn without_edges(&self, drop: &BTreeSet<EdgeId>) -> MultiGraph {
        let mut h = self.clone();
        for &e in drop {
            h.remove_edge(e);
        }
        h
    }
}

/// A finite edge cut together with the bipartition that induces it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub edge_set: BTreeSet<EdgeId>,
    pub side_a: BTreeSet<VertexId>,
    pub side_b: BTreeSet<VertexId>,
}

impl Cut {
    pub fn from_side(g: &MultiGraph, side_a: BTreeSet<VertexId>) -> Cut {
        let side_b = g.vertices().filter(|v| !side_a.contains(v)).collect();
        let edge_set = g.boundary_edges(&side_a);
        Cut { edge_set, side_a, side_b }
    }

    pub fn value(&self) -> usize {
        self.edge_set.len()
    }

    pub fn swapped(&self) -> Cut {
        Cut { edge_set: self.edge_set.clone(), side_a: self.side_b.clone(), side_b: self.side_a.clone() }
    }

    pub fn separates(&self, x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>) -> bool {
        x.is_subset(&self.side_a) && y.is_subset(&self.side_b)
    }

    /// True when the sides partition `g` and the edge set is exactly the set
    /// of crossing edges.
    pub fn is_consistent_with(&self, g: &MultiGraph) -> bool {
        self.side_a.is_disjoint(&self.side_b)
            && self.side_a.union(&self.side_b).copied().collect::<BTreeSet<_>>() == *g.vertex_set()
            && g.boundary_edges(&self.side_a) == self.edge_set
    }
}

/// The result of contracting disjoint connected vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMinor {
    pub minor: MultiGraph,
    pub class_map: BTreeMap<VertexId, VertexId>,
    pub super_vertices: BTreeSet<VertexId>,
    pub edge_correspondence: BTreeMap<EdgeId, EdgeId>,
}

/// One class to contract, the id of its image and the image label.
#[derive(Clone, Debug)]
pub struct ContractionClass {
    pub members: BTreeSet<VertexId>,
    pub image: VertexId,
    pub label: String,
}

/// Contracts each class to a fresh vertex. Internal edges are dropped,
/// every other edge is kept with its id, so parallel edges may appear.
pub fn contract(g: &MultiGraph, classes: &[BTreeSet<VertexId>]) -> Result<ContractionMinor, GraphError> {
    let mut next = g.next_vertex_id().0;
    let labeled: Vec<ContractionClass> = classes
        .iter()
        .map(|c| {
            let image = VertexId(next);
            next += 1;
            let names: Vec<String> = c.iter().map(|&v| g.vertex_label(v)).collect();
            ContractionClass { members: c.clone(), image, label: format!("{{{}}}", names.join(",")) }
        })
        .collect();
    contract_labeled(g, &labeled)
}

pub fn contract_labeled(g: &MultiGraph, classes: &[ContractionClass]) -> Result<ContractionMinor, GraphError> {
    let mut class_map = BTreeMap::new();
    for (i, class) in classes.iter().enumerate() {
        if class.members.is_empty() {
            return Err(GraphError::EmptySet("contraction class"));
        }
        g.check_subset(&class.members)?;
        for &v in &class.members {
            if class_map.insert(v, class.image).is_some() {
                return Err(GraphError::OverlappingClasses(g.vertex_label(v)));
            }
        }
        let start = *class.members.iter().next().expect("nonempty");
        if g.reach(start, |w| class.members.contains(&w)).len() != class.members.len() {
            return Err(GraphError::DisconnectedClass(i));
        }
    }
    let mut minor = MultiGraph::new();
    let mut super_vertices = BTreeSet::new();
    for v in g.vertices() {
        if !class_map.contains_key(&v) {
            minor.add_labeled_vertex(v, g.vertex_label(v));
            class_map.insert(v, v);
        }
    }
    for class in classes {
        if minor.contains_vertex(class.image) || super_vertices.contains(&class.image) {
            return Err(GraphError::DuplicateVertex(class.label.clone()));
        }
        minor.add_labeled_vertex(class.image, class.label.clone());
        super_vertices.insert(class.image);
    }
    let mut edge_correspondence = BTreeMap::new();
    for (e, u, v) in g.edges() {
        let (cu, cv) = (class_map[&u], class_map[&v]);
        if cu != cv {
            minor.add_labeled_edge(e, cu, cv, g.edge_label(e))?;
            edge_correspondence.insert(e, e);
        }
    }
    Ok(ContractionMinor { minor, class_map, super_vertices, edge_correspondence })
}
