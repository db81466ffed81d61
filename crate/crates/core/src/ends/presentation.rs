// SPDX-License-Identifier: Apache-2.0

//! Finitely described locally finite graphs.
//!
//! A [`PeriodicPresentation`] is a finite head graph plus copies of a finite
//! cell glued along an index line, either one-way (cells `0, 1, 2, …`) or
//! two-way (all integers). Ends are declared by ray representatives that
//! step through the cells. Finite graphs are presentations with an empty
//! cell.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EndsError;
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EndId(pub String);

impl fmt::Display for EndId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Lazily generated locally finite graph with a root and declared ends.
///
/// The adjacency oracle must be pure: the same vertex always yields the same
/// list, sorted by ascending edge id, and every edge is reported by both of
/// its endpoints with the same id.
pub trait Presentation {
    fn root(&self) -> VertexId;
    fn neighbors(&self, v: VertexId) -> Vec<(EdgeId, VertexId)>;
    /// Declared ends in declaration order.
    fn ends(&self) -> Vec<EndId>;
    /// The `index`-th vertex of the declared ray representative of `end`.
    fn ray_vertex(&self, end: &EndId, index: usize) -> Option<VertexId>;
    fn vertex_label(&self, v: VertexId) -> String;
    fn edge_label(&self, e: EdgeId) -> String;
    fn find_vertex(&self, label: &str) -> Option<VertexId>;
    /// Name of the cell vertex `v` is a copy of, if any.
    fn vertex_class(&self, v: VertexId) -> Option<String> {
        let _ = v;
        None
    }
    /// Radius around the root containing every distinct local shape of the
    /// graph, when the presentation repeats itself beyond it.
    fn conclusive_radius(&self) -> Option<usize>;
    /// `Some(true)` when infinitely many vertices have odd degree.
    fn periodic_odd(&self) -> Option<bool>;
    /// Extra layers explored beyond a window to tell regions apart.
    fn horizon(&self) -> usize {
        4
    }

    fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }
}

/// Breadth-first distances from the root up to `radius`.
pub fn distances<P: Presentation + ?Sized>(p: &P, radius: usize) -> BTreeMap<VertexId, usize> {
    let root = p.root();
    let mut dist = BTreeMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == radius {
            continue;
        }
        for (_, w) in p.neighbors(u) {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VRef {
    Head(usize),
    Cell(i64, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayDecl {
    pub id: EndId,
    pub start_cell: i64,
    pub direction: i64,
    /// cell-vertex indices visited within each cell, in order
    pub pattern: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPresentation {
    pub name: String,
    pub head: Vec<String>,
    pub head_edges: Vec<(String, VRef, VRef)>,
    pub cell: Vec<String>,
    pub cell_edges: Vec<(String, usize, usize)>,
    /// `(label, i, j)`: vertex `i` of cell `k` joined to vertex `j` of cell `k + 1`
    pub glue: Vec<(String, usize, usize)>,
    pub two_way: bool,
    pub root: VRef,
    pub rays: Vec<RayDecl>,
    pub horizon: usize,
}

fn zig(k: i64) -> u64 {
    if k >= 0 {
        2 * k as u64
    } else {
        (-2 * k - 1) as u64
    }
}

fn unzig(z: u64) -> i64 {
    if z % 2 == 0 {
        (z / 2) as i64
    } else {
        -((z / 2) as i64) - 1
    }
}

impl PeriodicPresentation {
    pub fn validate(&self) -> Result<(), EndsError> {
        let bad = |m: String| Err(EndsError::InvalidPresentation(m));
        let mut names = BTreeSet::new();
        for n in self.head.iter().chain(&self.cell) {
            if n.contains('@') || n.contains('#') {
                return bad(format!("vertex name `{n}` may not contain '@' or '#'"));
            }
            if !names.insert(n) {
                return bad(format!("duplicate vertex name `{n}`"));
            }
        }
        if self.head.is_empty() && self.cell.is_empty() {
            return bad("empty graph".into());
        }
        let mut labels = BTreeSet::new();
        for l in self.head_edges.iter().map(|e| &e.0).chain(self.cell_edges.iter().map(|e| &e.0)).chain(self.glue.iter().map(|e| &e.0)) {
            if !labels.insert(l) {
                return bad(format!("duplicate edge id `{l}`"));
            }
        }
        for (l, a, b) in &self.head_edges {
            for r in [a, b] {
                if !self.valid_ref(*r) {
                    return bad(format!("edge `{l}` references a vertex outside the graph"));
                }
            }
            if a == b {
                return bad(format!("edge `{l}` is a loop"));
            }
            if !matches!((a, b), (VRef::Head(_), _) | (_, VRef::Head(_))) {
                return bad(format!("head edge `{l}` must touch a head vertex"));
            }
        }
        for (l, i, j) in &self.cell_edges {
            if i == j {
                return bad(format!("edge `{l}` is a loop"));
            }
            if *i >= self.cell.len() || *j >= self.cell.len() {
                return bad(format!("edge `{l}` references an unknown cell vertex"));
            }
        }
        for (l, i, j) in &self.glue {
            if *i >= self.cell.len() || *j >= self.cell.len() {
                return bad(format!("glue `{l}` references an unknown cell vertex"));
            }
        }
        if !self.valid_ref(self.root) {
            return bad("root is not a vertex".into());
        }
        let mut ids = BTreeSet::new();
        for ray in &self.rays {
            if !ids.insert(&ray.id) {
                return bad(format!("duplicate end `{}`", ray.id));
            }
            if ray.pattern.is_empty() || ray.pattern.iter().any(|&i| i >= self.cell.len()) {
                return bad(format!("ray of end `{}` has an invalid pattern", ray.id));
            }
            if ray.direction != 1 && ray.direction != -1 {
                return bad(format!("ray of end `{}` must step by +1 or -1", ray.id));
            }
            if !self.two_way && (ray.direction < 0 || ray.start_cell < 0) {
                return bad(format!("ray of end `{}` leaves a one-way presentation", ray.id));
            }
            let checked = 3 * ray.pattern.len() + 1;
            let verts: Vec<VertexId> = (0..checked).map(|i| self.ray_vertex(&ray.id, i).expect("declared")).collect();
            if verts.iter().collect::<BTreeSet<_>>().len() != verts.len() {
                return bad(format!("ray of end `{}` repeats a vertex", ray.id));
            }
            for w in verts.windows(2) {
                if !self.neighbors(w[0]).iter().any(|&(_, x)| x == w[1]) {
                    return bad(format!(
                        "ray of end `{}` steps between non-adjacent `{}` and `{}`",
                        ray.id,
                        self.vertex_label(w[0]),
                        self.vertex_label(w[1])
                    ));
                }
            }
        }
        Ok(())
    }

    fn valid_ref(&self, r: VRef) -> bool {
        match r {
            VRef::Head(i) => i < self.head.len(),
            VRef::Cell(k, i) => i < self.cell.len() && (self.two_way || k >= 0),
        }
    }

    pub fn encode(&self, r: VRef) -> VertexId {
        match r {
            VRef::Head(i) => VertexId(i as u64),
            VRef::Cell(k, i) => VertexId(self.head.len() as u64 + zig(k) * self.cell.len() as u64 + i as u64),
        }
    }

    pub fn decode(&self, v: VertexId) -> VRef {
        let h = self.head.len() as u64;
        if v.0 < h {
            VRef::Head(v.0 as usize)
        } else {
            let c = self.cell.len() as u64;
            let rest = v.0 - h;
            VRef::Cell(unzig(rest / c), (rest % c) as usize)
        }
    }

    fn cell_stride(&self) -> u64 {
        (self.cell_edges.len() + self.glue.len()) as u64
    }

    fn cell_edge_id(&self, k: i64, i: usize) -> EdgeId {
        EdgeId(self.head_edges.len() as u64 + zig(k) * self.cell_stride() + i as u64)
    }

    fn glue_edge_id(&self, k: i64, i: usize) -> EdgeId {
        EdgeId(self.head_edges.len() as u64 + zig(k) * self.cell_stride() + (self.cell_edges.len() + i) as u64)
    }

    fn has_cell(&self, k: i64) -> bool {
        !self.cell.is_empty() && (self.two_way || k >= 0)
    }

    /// Converts a finite multigraph into a presentation with only a head.
    pub fn from_finite(name: &str, g: &MultiGraph, root: Option<VertexId>) -> Result<Self, EndsError> {
        let verts: Vec<VertexId> = g.vertices().collect();
        let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let head = verts.iter().map(|&v| g.vertex_label(v)).collect();
        let head_edges = g.edges().map(|(e, u, v)| (g.edge_label(e), VRef::Head(index[&u]), VRef::Head(index[&v]))).collect();
        let root = root.or_else(|| verts.first().copied()).ok_or_else(|| EndsError::InvalidPresentation("empty graph".into()))?;
        let p = PeriodicPresentation {
            name: name.to_string(),
            head,
            head_edges,
            cell: Vec::new(),
            cell_edges: Vec::new(),
            glue: Vec::new(),
            two_way: false,
            root: VRef::Head(index[&root]),
            rays: Vec::new(),
            horizon: 4,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn is_finite(&self) -> bool {
        self.cell.is_empty()
    }

    /// The whole graph, for presentations without cells.
    pub fn finite_graph(&self) -> Option<MultiGraph> {
        if !self.is_finite() {
            return None;
        }
        let mut g = MultiGraph::new();
        for (i, n) in self.head.iter().enumerate() {
            g.add_labeled_vertex(VertexId(i as u64), n.clone());
        }
        for (j, (l, a, b)) in self.head_edges.iter().enumerate() {
            g.add_labeled_edge(EdgeId(j as u64), self.encode(*a), self.encode(*b), l.clone()).ok()?;
        }
        Some(g)
    }

    /// Smallest and largest cell index mentioned by the head, root or rays.
    fn referenced_span(&self) -> (i64, i64) {
        let mut referenced = vec![0i64];
        for (_, a, b) in &self.head_edges {
            for r in [a, b] {
                if let VRef::Cell(k, _) = r {
                    referenced.push(*k);
                }
            }
        }
        if let VRef::Cell(k, _) = self.root {
            referenced.push(k);
        }
        referenced.extend(self.rays.iter().map(|r| r.start_cell));
        (*referenced.iter().min().expect("nonempty"), *referenced.iter().max().expect("nonempty"))
    }

    fn ref_label(&self, r: VRef) -> String {
        match r {
            VRef::Head(i) => self.head[i].clone(),
            VRef::Cell(k, i) => format!("{}@{}", self.cell[i], k),
        }
    }
}

impl Presentation for PeriodicPresentation {
    fn root(&self) -> VertexId {
        self.encode(self.root)
    }

    fn neighbors(&self, v: VertexId) -> Vec<(EdgeId, VertexId)> {
        let me = self.decode(v);
        let mut out = Vec::new();
        for (j, (_, a, b)) in self.head_edges.iter().enumerate() {
            if *a == me {
                out.push((EdgeId(j as u64), self.encode(*b)));
            } else if *b == me {
                out.push((EdgeId(j as u64), self.encode(*a)));
            }
        }
        if let VRef::Cell(k, i) = me {
            for (j, &(_, a, b)) in self.cell_edges.iter().enumerate() {
                if a == i {
                    out.push((self.cell_edge_id(k, j), self.encode(VRef::Cell(k, b))));
                } else if b == i {
                    out.push((self.cell_edge_id(k, j), self.encode(VRef::Cell(k, a))));
                }
            }
            for (j, &(_, a, b)) in self.glue.iter().enumerate() {
                if a == i && self.has_cell(k + 1) {
                    out.push((self.glue_edge_id(k, j), self.encode(VRef::Cell(k + 1, b))));
                }
                if b == i && self.has_cell(k - 1) {
                    out.push((self.glue_edge_id(k - 1, j), self.encode(VRef::Cell(k - 1, a))));
                }
            }
        }
        out.sort();
        out
    }

    fn ends(&self) -> Vec<EndId> {
        self.rays.iter().map(|r| r.id.clone()).collect()
    }

    fn ray_vertex(&self, end: &EndId, index: usize) -> Option<VertexId> {
        let ray = self.rays.iter().find(|r| &r.id == end)?;
        let len = ray.pattern.len();
        let k = ray.start_cell + ray.direction * (index / len) as i64;
        Some(self.encode(VRef::Cell(k, ray.pattern[index % len])))
    }

    fn vertex_label(&self, v: VertexId) -> String {
        self.ref_label(self.decode(v))
    }

    fn edge_label(&self, e: EdgeId) -> String {
        let he = self.head_edges.len() as u64;
        if e.0 < he {
            return self.head_edges[e.0 as usize].0.clone();
        }
        let stride = self.cell_stride().max(1);
        let rest = e.0 - he;
        let k = unzig(rest / stride);
        let j = (rest % stride) as usize;
        if j < self.cell_edges.len() {
            format!("{}@{}", self.cell_edges[j].0, k)
        } else {
            format!("{}@{}", self.glue[j - self.cell_edges.len()].0, k)
        }
    }

    fn find_vertex(&self, label: &str) -> Option<VertexId> {
        if let Some(i) = self.head.iter().position(|h| h == label) {
            return Some(VertexId(i as u64));
        }
        let (name, k) = label.rsplit_once('@')?;
        let k: i64 = k.parse().ok()?;
        let i = self.cell.iter().position(|c| c == name)?;
        self.valid_ref(VRef::Cell(k, i)).then(|| self.encode(VRef::Cell(k, i)))
    }

    fn vertex_class(&self, v: VertexId) -> Option<String> {
        match self.decode(v) {
            VRef::Cell(_, i) => Some(self.cell[i].clone()),
            VRef::Head(_) => None,
        }
    }

    fn conclusive_radius(&self) -> Option<usize> {
        let mut wanted: BTreeSet<VertexId> = (0..self.head.len()).map(|i| VertexId(i as u64)).collect();
        if !self.cell.is_empty() {
            let (lo, hi) = self.referenced_span();
            let (lo, hi) = (lo - 2, hi + 2);
            for k in lo..=hi {
                if self.has_cell(k) {
                    for i in 0..self.cell.len() {
                        wanted.insert(self.encode(VRef::Cell(k, i)));
                    }
                }
            }
        }
        // search inside a strip of cells; leaving a wanted vertex unreached means unknown
        let (lo, hi) = if self.cell.is_empty() { (0, 0) } else { self.referenced_span() };
        let slack = 2 * self.cell.len() as i64 + 4;
        let in_strip = |v: VertexId| match self.decode(v) {
            VRef::Head(_) => true,
            VRef::Cell(k, _) => lo - slack <= k && k <= hi + slack,
        };
        let root = self.root();
        let mut dist = BTreeMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([root]);
        let mut missing = wanted.len() - usize::from(wanted.contains(&root));
        let mut far = 0;
        while let Some(u) = queue.pop_front() {
            if missing == 0 {
                break;
            }
            for (_, w) in self.neighbors(u) {
                if in_strip(w) && !dist.contains_key(&w) {
                    let d = dist[&u] + 1;
                    dist.insert(w, d);
                    if wanted.contains(&w) {
                        missing -= 1;
                        far = far.max(d);
                    }
                    queue.push_back(w);
                }
            }
        }
        (missing == 0).then_some(far + 1)
    }

    fn periodic_odd(&self) -> Option<bool> {
        if self.cell.is_empty() {
            return Some(false);
        }
        let (lo, hi) = self.referenced_span();
        let probes: Vec<i64> = if self.two_way { vec![hi + 3, lo - 3] } else { vec![hi + 3] };
        Some(probes.iter().any(|&k| {
            (0..self.cell.len()).any(|i| self.neighbors(self.encode(VRef::Cell(k, i))).len() % 2 == 1)
        }))
    }

    fn horizon(&self) -> usize {
        self.horizon
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder() -> PeriodicPresentation {
        PeriodicPresentation {
            name: "ladder".into(),
            head: vec![],
            head_edges: vec![],
            cell: vec!["a".into(), "b".into()],
            cell_edges: vec![("rung".into(), 0, 1)],
            glue: vec![("ra".into(), 0, 0), ("rb".into(), 1, 1)],
            two_way: true,
            root: VRef::Cell(0, 0),
            rays: vec![
                RayDecl { id: EndId("+".into()), start_cell: 0, direction: 1, pattern: vec![1] },
                RayDecl { id: EndId("-".into()), start_cell: 0, direction: -1, pattern: vec![1] },
            ],
            horizon: 4,
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let p = ladder();
        for k in -5..5 {
            for i in 0..2 {
                let r = VRef::Cell(k, i);
                assert_eq!(p.decode(p.encode(r)), r);
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric() {
        let p = ladder();
        p.validate().unwrap();
        for v in distances(&p, 6).keys() {
            for (e, w) in p.neighbors(*v) {
                assert!(p.neighbors(w).contains(&(e, *v)), "edge {e} not symmetric");
            }
            assert_eq!(p.degree(*v), 3);
        }
    }

    #[test]
    fn labels_resolve() {
        let p = ladder();
        let v = p.find_vertex("b@-3").unwrap();
        assert_eq!(p.vertex_label(v), "b@-3");
        assert_eq!(p.vertex_class(v).as_deref(), Some("b"));
        let (e, _) = p.neighbors(v)[0];
        assert!(p.edge_label(e).contains('@'));
    }

    #[test]
    fn rejects_loops_and_bad_rays() {
        let mut p = ladder();
        p.cell_edges.push(("loop".into(), 0, 0));
        assert!(p.validate().is_err());
        let mut p = ladder();
        p.rays[0].pattern = vec![0, 1, 0];
        assert!(p.validate().is_err());
    }
}
