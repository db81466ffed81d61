// SPDX-License-Identifier: Apache-2.0

//! Finite truncations.
//!
//! `window(p, r)` keeps the ball `B_r` around the root and replaces every
//! infinite piece of `G − B_r` by one super-vertex. Pieces are told apart by
//! exploring `horizon` further layers: a piece none of whose explored
//! vertices has an unexplored neighbour is finite and joins the core.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::ends::presentation::{distances, EndId, Presentation};
use crate::ends::{Terminal, TerminalSpec};
use crate::error::EndsError;
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// Super-vertex ids are `REGION_BASE + k`.
pub const REGION_BASE: u64 = 1 << 62;

const RAY_WALK_LIMIT: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: VertexId,
    /// explored vertices of the piece
    pub members: BTreeSet<VertexId>,
    pub ends: Vec<EndId>,
}

#[derive(Clone, Debug)]
pub struct Window {
    pub radius: usize,
    pub horizon: usize,
    /// core vertices and region super-vertices; edges keep their ids
    pub graph: MultiGraph,
    /// distance from the root of every explored vertex
    pub dist: BTreeMap<VertexId, usize>,
    pub core: BTreeSet<VertexId>,
    pub regions: Vec<Region>,
    pub end_region: BTreeMap<EndId, VertexId>,
    /// original endpoints of every window edge
    pub real_endpoints: BTreeMap<EdgeId, (VertexId, VertexId)>,
    /// explored non-core vertex → region id
    member_of: BTreeMap<VertexId, VertexId>,
}

pub fn window(p: &dyn Presentation, r: usize) -> Result<Window, EndsError> {
    window_with_horizon(p, r, p.horizon())
}

pub fn window_with_horizon(p: &dyn Presentation, r: usize, horizon: usize) -> Result<Window, EndsError> {
    let horizon = horizon.max(1);
    let far = r + horizon;
    let dist = distances(p, far);
    let adjacency: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = dist.keys().map(|&v| (v, p.neighbors(v))).collect();

    let mut core: BTreeSet<VertexId> = dist.iter().filter(|(_, &d)| d <= r).map(|(&v, _)| v).collect();
    let mut seen = BTreeSet::new();
    let mut open_pieces = Vec::new();
    for (&v, &d) in &dist {
        if d <= r || seen.contains(&v) {
            continue;
        }
        let mut piece = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        seen.insert(v);
        let mut open = false;
        while let Some(u) = queue.pop_front() {
            for &(_, w) in &adjacency[&u] {
                match dist.get(&w) {
                    None => open = true,
                    Some(&dw) if dw > r && seen.insert(w) => {
                        piece.insert(w);
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if open {
            open_pieces.push(piece);
        } else {
            core.extend(piece);
        }
    }

    let mut member_of = BTreeMap::new();
    let mut regions: Vec<Region> = open_pieces
        .into_iter()
        .enumerate()
        .map(|(k, members)| {
            let id = VertexId(REGION_BASE + k as u64);
            for &m in &members {
                member_of.insert(m, id);
            }
            Region { id, members, ends: Vec::new() }
        })
        .collect();

    let mut end_region = BTreeMap::new();
    for end in p.ends() {
        let mut walk = Vec::new();
        for i in 0..RAY_WALK_LIMIT {
            let v = p.ray_vertex(&end, i).ok_or_else(|| EndsError::RayEscapes {
                end: end.0.clone(),
                detail: format!("ray vertex {i} is not available"),
            })?;
            if !dist.contains_key(&v) {
                break;
            }
            walk.push(v);
        }
        if walk.len() == RAY_WALK_LIMIT {
            return Err(EndsError::RayEscapes { end: end.0.clone(), detail: format!("ray stays within radius {far}") });
        }
        let start = walk.iter().rposition(|v| core.contains(v)).map_or(0, |i| i + 1);
        let tail_regions: BTreeSet<VertexId> = walk[start..].iter().map(|v| member_of[v]).collect();
        let region = match tail_regions.len() {
            1 => *tail_regions.iter().next().expect("one region"),
            0 => {
                return Err(EndsError::RayEscapes {
                    end: end.0.clone(),
                    detail: format!("ray has no tail outside radius {r}"),
                })
            }
            _ => {
                return Err(EndsError::RayEscapes {
                    end: end.0.clone(),
                    detail: format!("ray tail visits {} pieces outside radius {r}", tail_regions.len()),
                })
            }
        };
        regions[(region.0 - REGION_BASE) as usize].ends.push(end.clone());
        end_region.insert(end, region);
    }

    let mut graph = MultiGraph::new();
    let mut real_endpoints = BTreeMap::new();
    for &v in &core {
        graph.add_labeled_vertex(v, p.vertex_label(v));
    }
    for region in &regions {
        let label = if region.ends.is_empty() {
            format!("<region {}>", region.id.0 - REGION_BASE)
        } else {
            let names: Vec<&str> = region.ends.iter().map(|e| e.0.as_str()).collect();
            format!("<{}>", names.join(","))
        };
        graph.add_labeled_vertex(region.id, label);
    }
    for &u in &core {
        for &(e, w) in &adjacency[&u] {
            if graph.contains_edge(e) {
                continue;
            }
            let target = if core.contains(&w) { w } else { member_of[&w] };
            graph.add_labeled_edge(e, u, target, p.edge_label(e))?;
            real_endpoints.insert(e, (u, w));
        }
    }

    Ok(Window { radius: r, horizon, graph, dist, core, regions, end_region, real_endpoints, member_of })
}

impl Window {
    pub fn is_region(&self, v: VertexId) -> bool {
        v.0 >= REGION_BASE && self.graph.contains_vertex(v)
    }

    pub fn region(&self, id: VertexId) -> Option<&Region> {
        id.0.checked_sub(REGION_BASE).and_then(|k| self.regions.get(k as usize))
    }

    /// Window vertex standing for an original vertex, when it was explored.
    pub fn image_of(&self, v: VertexId) -> Option<VertexId> {
        if self.core.contains(&v) {
            Some(v)
        } else {
            self.member_of.get(&v).copied()
        }
    }

    pub fn terminal_image(&self, t: &Terminal) -> Option<VertexId> {
        match t {
            Terminal::Vertex(v) => self.image_of(*v),
            Terminal::End(e) => self.end_region.get(e).copied(),
        }
    }

    /// Explored vertex terminals hidden inside a region.
    pub fn hidden_terminals(&self, p: &dyn Presentation, spec: &TerminalSpec, region: VertexId, skip: Option<VertexId>) -> Vec<VertexId> {
        self.region(region)
            .map(|r| r.members.iter().copied().filter(|&v| Some(v) != skip && spec.is_vertex_terminal(p, v)).collect())
            .unwrap_or_default()
    }

    /// Window images of every terminal except `skip`. A region is included
    /// when it carries a terminal end or hides a vertex terminal.
    pub fn rest_images(&self, p: &dyn Presentation, spec: &TerminalSpec, skip: Option<&Terminal>) -> BTreeSet<VertexId> {
        let skip_vertex = match skip {
            Some(Terminal::Vertex(v)) => Some(*v),
            _ => None,
        };
        let mut out = BTreeSet::new();
        for &v in &self.core {
            if Some(v) != skip_vertex && spec.is_vertex_terminal(p, v) {
                out.insert(v);
            }
        }
        for region in &self.regions {
            let carries_end =
                region.ends.iter().any(|e| spec.is_end_terminal(e) && skip != Some(&Terminal::End(e.clone())));
            if carries_end || !self.hidden_terminals(p, spec, region.id, skip_vertex).is_empty() {
                out.insert(region.id);
            }
        }
        out
    }

    /// Smaller root distance of an edge's original endpoints.
    pub fn edge_depth(&self, e: EdgeId) -> Option<usize> {
        let (u, w) = self.real_endpoints.get(&e)?;
        let du = self.dist.get(u).copied().unwrap_or(usize::MAX);
        let dw = self.dist.get(w).copied().unwrap_or(usize::MAX);
        Some(du.min(dw))
    }

    pub fn nonend_regions(&self) -> Vec<VertexId> {
        self.regions.iter().filter(|r| r.ends.is_empty()).map(|r| r.id).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::presentation::{PeriodicPresentation, RayDecl, VRef};

    fn ray() -> PeriodicPresentation {
        PeriodicPresentation {
            name: "ray".into(),
            head: vec![],
            head_edges: vec![],
            cell: vec!["x".into()],
            cell_edges: vec![],
            glue: vec![("e".into(), 0, 0)],
            two_way: false,
            root: VRef::Cell(0, 0),
            rays: vec![RayDecl { id: EndId("inf".into()), start_cell: 0, direction: 1, pattern: vec![0] }],
            horizon: 3,
        }
    }

    #[test]
    fn ray_window_is_a_path_plus_region() {
        let p = ray();
        let w = window(&p, 3).unwrap();
        assert_eq!(w.core.len(), 4);
        assert_eq!(w.regions.len(), 1);
        assert_eq!(w.graph.num_edges(), 4);
        let region = w.end_region[&EndId("inf".into())];
        assert_eq!(w.graph.degree(region).unwrap(), 1);
        let x3 = p.find_vertex("x@3").unwrap();
        assert_eq!(w.graph.neighbors(region)[0].1, x3);
    }

    #[test]
    fn finite_graph_window_has_no_regions() {
        let mut g = MultiGraph::new();
        for v in 0..4 {
            g.add_vertex(VertexId(v));
        }
        for (i, (u, v)) in [(0, 1), (1, 2), (2, 3), (3, 0)].into_iter().enumerate() {
            g.add_edge(EdgeId(i as u64), VertexId(u), VertexId(v)).unwrap();
        }
        let p = PeriodicPresentation::from_finite("c4", &g, None).unwrap();
        for r in 0..4 {
            let w = window(&p, r).unwrap();
            assert!(w.regions.is_empty());
            assert_eq!(w.graph.num_edges(), 4);
        }
    }
}
