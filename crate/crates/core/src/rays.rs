// SPDX-License-Identifier: Apache-2.0

//! Edge-disjoint `S`–ω rays.
//!
//! The system is sized by the stabilized minimum cut between `S` and the
//! end's region. Every flow is computed a few layers deeper than the ball
//! it commits to and cut just after its last visit to that ball, so each
//! tip keeps an edge-disjoint continuation. Extension rounds start from the
//! tips and never touch earlier prefix vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::ends::checks::separates_after_removal;
use crate::ends::presentation::{distances, EndId, Presentation};
use crate::ends::window::{window, window_with_horizon, Window};
use crate::error::{EndsError, GraphError};
use crate::flow::{edge_disjoint_paths, max_edge_disjoint_paths, max_flow_value, min_cut};
use crate::multigraph::{Cut, EdgeId, GraphPath, MultiGraph, VertexId};

/// Radius added per extension round; independent of the requested depth.
pub const EXTENSION_STEP: usize = 4;
/// Extra layers each flow sees beyond the ball it commits to.
const LOOK_AHEAD: usize = 4;

const SUPER_SOURCE: VertexId = VertexId(u64::MAX);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaySystem {
    pub source_set: BTreeSet<VertexId>,
    pub end: EndId,
    /// finite prefixes, each starting in `source_set`
    pub rays: Vec<GraphPath>,
    pub claimed_size: usize,
    /// vertices in the shortest materialized prefix
    pub materialized_depth: usize,
    pub stabilization_radius: usize,
    /// every prefix ends just outside this ball, inside the end's piece
    pub frontier_radius: usize,
    /// edges no ray may use
    pub avoid: BTreeSet<EdgeId>,
}

/// Builds a maximum ray system with every ray materialized to at least
/// `depth` vertices.
pub fn max_ray_system(
    p: &dyn Presentation,
    s: &BTreeSet<VertexId>,
    end: &EndId,
    depth: usize,
    r_max: usize,
) -> Result<RaySystem, EndsError> {
    max_ray_system_avoiding(p, s, end, depth, r_max, &BTreeSet::new())
}

/// As [`max_ray_system`] in the graph without the edges `avoid`.
pub fn max_ray_system_avoiding(
    p: &dyn Presentation,
    s: &BTreeSet<VertexId>,
    end: &EndId,
    depth: usize,
    r_max: usize,
    avoid: &BTreeSet<EdgeId>,
) -> Result<RaySystem, EndsError> {
    if s.is_empty() {
        return Err(EndsError::Graph(GraphError::EmptySet("source set")));
    }
    if !p.ends().contains(end) {
        return Err(EndsError::UnknownEnd(end.0.clone()));
    }
    let reach = distances(p, r_max);
    let mut start = 1;
    for v in s {
        let d = *reach.get(v).ok_or_else(|| {
            EndsError::UnsupportedTerminals(format!("source `{}` is farther than radius {r_max}", p.vertex_label(*v)))
        })?;
        start = start.max(d);
    }

    let mut sequence = Vec::new();
    let mut prev: Option<(usize, Cut)> = None;
    let mut stable = None;
    for r in start..=r_max {
        let w = window(p, r)?;
        let g = w.graph.without_edges(avoid);
        let region = w.end_region[end];
        let y = BTreeSet::from([region]);
        let (cut, value) = min_cut(&g, s, &y)?;
        sequence.push(Some(value));
        if let Some((pv, pcut)) = prev.take() {
            if pv == value && s.iter().all(|&x| separates_after_removal(&g, &pcut.edge_set, x, &y)) {
                stable = Some((r, value));
                break;
            }
        }
        prev = Some((value, cut));
    }
    let Some((radius, value)) = stable else {
        return Err(EndsError::Unstabilized { what: format!("S–{end} cut"), r_max, sequence });
    };

    let look = window(p, radius + LOOK_AHEAD)?;
    let region = look.end_region[end];
    let keep: BTreeSet<VertexId> = look.core.iter().copied().chain([region]).collect();
    let trimmed = look.graph.without_edges(avoid).induced_subgraph(&keep);
    let y = BTreeSet::from([region]);
    if max_flow_value(&trimmed, s, &y, None)? != value {
        return Err(EndsError::ExtensionFailed(format!("rays into `{end}` must cross another region at radius {radius}")));
    }
    let rays: Vec<GraphPath> = max_edge_disjoint_paths(&trimmed, s, &y)?
        .iter()
        .map(|path| cut_after_ball(path, 0, radius, &look))
        .collect();
    let rs = RaySystem {
        source_set: s.clone(),
        end: end.clone(),
        materialized_depth: rays.iter().map(|r| r.vertices.len()).min().unwrap_or(0),
        claimed_size: rays.len(),
        rays,
        stabilization_radius: radius,
        frontier_radius: radius,
        avoid: avoid.clone(),
    };
    extend(p, &rs, depth)
}

/// The part of `path` from index `from` up to the first vertex after its
/// last visit to the ball of radius `bound`, with region vertices replaced
/// by real endpoints.
fn cut_after_ball(path: &GraphPath, from: usize, bound: usize, w: &Window) -> GraphPath {
    let inside = |v: &VertexId| w.dist.get(v).is_some_and(|&d| d <= bound) && w.core.contains(v);
    let last_in = path.vertices.iter().rposition(inside).unwrap_or(from).max(from);
    let stop = (last_in + 1).min(path.vertices.len() - 1);
    let mut out = GraphPath::single(path.vertices[from]);
    for k in from..stop {
        let e = path.edges[k];
        let next = path.vertices[k + 1];
        let real = if w.core.contains(&next) { next } else { w.real_endpoints[&e].1 };
        out.push(e, real);
    }
    out
}

/// Grows every ray until each has at least `depth` vertices. Existing
/// prefixes are kept verbatim.
pub fn extend(p: &dyn Presentation, rs: &RaySystem, depth: usize) -> Result<RaySystem, EndsError> {
    let mut out = rs.clone();
    while out.claimed_size > 0 && out.materialized_depth < depth {
        let old = out.frontier_radius;
        let new = old + EXTENSION_STEP;
        let w = window(p, new + LOOK_AHEAD)?;
        let region = w.end_region[&out.end];

        let tips: Vec<VertexId> = out.rays.iter().map(|r| r.last()).collect();
        let spent: BTreeSet<VertexId> =
            out.rays.iter().flat_map(|r| r.vertices[..r.vertices.len() - 1].iter().copied()).collect();
        let allowed =
            |v: VertexId| v == region || (w.dist.get(&v).is_some_and(|&d| d > old) && w.core.contains(&v) && !spent.contains(&v));
        let mut piece = BTreeSet::new();
        let mut queue: VecDeque<VertexId> = tips.iter().copied().collect();
        for &t in &tips {
            if !allowed(t) {
                return Err(EndsError::ExtensionFailed(format!("tip `{}` left the end's piece", p.vertex_label(t))));
            }
            piece.insert(t);
        }
        while let Some(u) = queue.pop_front() {
            for &(e, x) in w.graph.neighbors(u) {
                if !out.avoid.contains(&e) && allowed(x) && piece.insert(x) {
                    queue.push_back(x);
                }
            }
        }
        if !piece.contains(&region) {
            return Err(EndsError::ExtensionFailed(format!("end `{}` unreachable beyond radius {old}", out.end)));
        }

        let mut net: MultiGraph = w.graph.without_edges(&out.avoid).induced_subgraph(&piece);
        net.add_vertex(SUPER_SOURCE);
        let base = net.next_edge_id().0;
        for (i, &t) in tips.iter().enumerate() {
            net.add_edge(EdgeId(base + i as u64), SUPER_SOURCE, t)?;
        }
        let paths = edge_disjoint_paths(&net, &BTreeSet::from([SUPER_SOURCE]), &BTreeSet::from([region]), tips.len())
            .map_err(|e| EndsError::ExtensionFailed(format!("round to radius {new}: {e}")))?;
        for path in paths {
            let i = (path.edges[0].0 - base) as usize;
            let segment = cut_after_ball(&path, 1, new, &w);
            let ray = &mut out.rays[i];
            ray.edges.extend(&segment.edges);
            ray.vertices.extend(&segment.vertices[1..]);
        }
        out.frontier_radius = new;
        out.materialized_depth = out.rays.iter().map(|r| r.vertices.len()).min().unwrap_or(0);
    }
    Ok(out)
}

/// Pairs every edge of `f` with the ray that starts through it.
pub fn start_edge_index(rs: &RaySystem, f: &Cut) -> Result<BTreeMap<EdgeId, usize>, EndsError> {
    if rs.rays.len() != f.edge_set.len() {
        return Err(EndsError::Consistency(format!("{} rays against a cut of size {}", rs.rays.len(), f.edge_set.len())));
    }
    let mut index = BTreeMap::new();
    for (i, ray) in rs.rays.iter().enumerate() {
        let e = *ray.edges.first().ok_or_else(|| EndsError::Consistency(format!("ray {i} has no edge")))?;
        if !f.edge_set.contains(&e) {
            return Err(EndsError::Consistency(format!("ray {i} does not start in the cut (edge {e})")));
        }
        if index.insert(e, i).is_some() {
            return Err(EndsError::Consistency(format!("two rays start through edge {e}")));
        }
    }
    Ok(index)
}

/// Violations of the ray-system invariants, as human-readable lines.
pub fn verify_ray_system(p: &dyn Presentation, rs: &RaySystem) -> Result<Vec<String>, EndsError> {
    let mut out = Vec::new();
    if rs.rays.len() != rs.claimed_size {
        out.push(format!("{} rays but claimed size {}", rs.rays.len(), rs.claimed_size));
    }
    let mut used = BTreeMap::new();
    for (i, ray) in rs.rays.iter().enumerate() {
        if !rs.source_set.contains(&ray.first()) {
            out.push(format!("ray {i} does not start in S"));
        }
        if ray.vertices[1..].iter().any(|v| rs.source_set.contains(v)) {
            out.push(format!("ray {i} revisits S"));
        }
        if !ray.is_simple() {
            out.push(format!("ray {i} repeats a vertex"));
        }
        for (k, &e) in ray.edges.iter().enumerate() {
            if !p.neighbors(ray.vertices[k]).contains(&(e, ray.vertices[k + 1])) {
                out.push(format!("ray {i} step {k} is not an edge"));
            }
            if let Some(j) = used.insert(e, i) {
                out.push(format!("rays {j} and {i} share edge {}", p.edge_label(e)));
            }
            if rs.avoid.contains(&e) {
                out.push(format!("ray {i} uses avoided edge {}", p.edge_label(e)));
            }
        }
    }
    let far = rs.rays.iter().flat_map(|r| r.vertices.iter()).count();
    let w = window_with_horizon(p, rs.stabilization_radius, far + 1)?;
    let region = w.end_region[&rs.end];
    for (i, ray) in rs.rays.iter().enumerate() {
        let tail_start = ray.vertices.iter().rposition(|v| w.core.contains(v)).map_or(0, |k| k + 1);
        if ray.vertices[tail_start..].iter().any(|&v| w.image_of(v) != Some(region)) {
            out.push(format!("ray {i} tail leaves the piece of `{}`", rs.end));
        }
    }
    Ok(out)
}
