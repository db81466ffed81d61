// SPDX-License-Identifier: Apache-2.0

//! Maximum edge-disjoint T-path packings in finite inner-Eulerian graphs.
//!
//! The solver eliminates every non-terminal vertex by complete splitting-off.
//! A pair of edges `uv`, `vw` at a non-terminal `v` is replaced by a single
//! shortcut `uw` only if the replacement keeps `λ(s, T \ {s})` for every
//! terminal `s`. Each shortcut remembers the walk it stands for, so once
//! only terminals carry edges, every remaining edge expands to a walk in the
//! input graph. Cycle trimming turns the walks into simple T-paths.
//!
//! In the final terminal-only graph any cut isolating `t` has size `d(t)`,
//! so the preserved connectivities force exactly `λ(t, T \ {t})` paths at
//! every terminal. This is checked on every result, not assumed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{GraphError, PackError};
use crate::flow::{max_flow_value, min_cut};
use crate::multigraph::{Cut, EdgeId, GraphPath, MultiGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalSet(BTreeSet<VertexId>);

impl TerminalSet {
    pub fn new(g: &MultiGraph, terminals: impl IntoIterator<Item = VertexId>) -> Result<Self, GraphError> {
        let set: BTreeSet<VertexId> = terminals.into_iter().collect();
        if set.is_empty() {
            return Err(GraphError::EmptySet("terminal set"));
        }
        g.check_subset(&set)?;
        Ok(TerminalSet(set))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_set(&self) -> &BTreeSet<VertexId> {
        &self.0
    }

    pub fn others(&self, t: VertexId) -> BTreeSet<VertexId> {
        self.0.iter().copied().filter(|&s| s != t).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathSystem {
    pub paths: Vec<GraphPath>,
}

impl PathSystem {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Number of paths having `t` as an endpoint.
    pub fn count_at(&self, t: VertexId) -> usize {
        self.paths.iter().filter(|p| p.first() == t || p.last() == t).count()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackingCertificate {
    pub lambda_profile: BTreeMap<VertexId, usize>,
    pub per_terminal_cuts: BTreeMap<VertexId, Cut>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerEulerian {
    pub holds: bool,
    pub witness: Option<VertexId>,
}

/// Every non-terminal vertex must have even degree. The witness is the
/// smallest odd non-terminal.
pub fn is_inner_eulerian(g: &MultiGraph, t: &TerminalSet) -> InnerEulerian {
    let witness = g.vertices().find(|&v| !t.contains(v) && g.neighbors(v).len() % 2 == 1);
    InnerEulerian { holds: witness.is_none(), witness }
}

pub fn lambda_profile(g: &MultiGraph, t: &TerminalSet) -> Result<BTreeMap<VertexId, usize>, PackError> {
    if t.len() < 2 {
        return Err(GraphError::EmptySet("T \\ {t}").into());
    }
    t.iter()
        .map(|s| Ok((s, min_cut(g, &BTreeSet::from([s]), &t.others(s))?.1)))
        .collect()
}

/// Half of `Σ λ(t, T \ {t})`, returned doubled to stay integral.
pub fn twice_bound(lambda: &BTreeMap<VertexId, usize>) -> usize {
    lambda.values().sum()
}

#[derive(Clone, Copy, Debug)]
pub struct PackOptions {
    /// Maximum number of candidate pairs examined before giving up.
    pub node_budget: usize,
}

impl Default for PackOptions {
    fn default() -> Self {
        PackOptions { node_budget: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SplitStats {
    pub splits: usize,
    pub candidates: usize,
    pub backtracks: usize,
}

#[derive(Clone, Debug)]
pub struct Packing {
    pub paths: PathSystem,
    pub certificate: PackingCertificate,
    pub stats: SplitStats,
}

pub fn pack_tpaths(g: &MultiGraph, t: &TerminalSet) -> Result<(PathSystem, PackingCertificate), PackError> {
    let p = pack_tpaths_with(g, t, PackOptions::default())?;
    Ok((p.paths, p.certificate))
}

pub fn pack_tpaths_with(g: &MultiGraph, t: &TerminalSet, opts: PackOptions) -> Result<Packing, PackError> {
    let ie = is_inner_eulerian(g, t);
    if let Some(w) = ie.witness {
        return Err(PackError::NotInnerEulerian { witness: w, label: g.vertex_label(w) });
    }
    if t.len() < 2 {
        return Ok(Packing {
            paths: PathSystem::default(),
            certificate: PackingCertificate::default(),
            stats: SplitStats::default(),
        });
    }
    let lambda = lambda_profile(g, t)?;
    let mut stats = SplitStats::default();
    let mut budget = opts.node_budget;
    let mut paths = Vec::new();
    for comp in g.components() {
        let local: BTreeSet<VertexId> = comp.iter().copied().filter(|&v| t.contains(v)).collect();
        if local.len() < 2 {
            continue;
        }
        let sub = g.induced_subgraph(&comp);
        let targets: BTreeMap<VertexId, usize> = local.iter().map(|&s| (s, lambda[&s])).collect();
        let state = SplitState::new(&sub);
        let done = split_all(state, &local, &targets, &mut budget, &mut stats)?.ok_or_else(|| {
            PackError::Internal("no complete admissible splitting found; the graph admits none".into())
        })?;
        for (e, u, v) in done.h.edges() {
            debug_assert!(local.contains(&u) && local.contains(&v));
            let walk = &done.walks[&e];
            debug_assert_eq!((walk.first(), walk.last()), (u, v));
            paths.push(walk.trim_cycles());
        }
    }
    paths.sort_by(|a, b| a.edges.iter().min().cmp(&b.edges.iter().min()).then_with(|| a.edges.cmp(&b.edges)));
    let paths = PathSystem { paths };

    for s in t.iter() {
        let count = paths.count_at(s);
        if count != lambda[&s] {
            return Err(PackError::Internal(format!(
                "terminal `{}` has {count} paths but λ = {}",
                g.vertex_label(s),
                lambda[&s]
            )));
        }
    }
    let mut per_terminal_cuts = BTreeMap::new();
    for s in t.iter() {
        let (cut, _) = min_cut(g, &BTreeSet::from([s]), &t.others(s))?;
        per_terminal_cuts.insert(s, cut);
    }
    Ok(Packing { paths, certificate: PackingCertificate { lambda_profile: lambda, per_terminal_cuts }, stats })
}

#[derive(Clone)]
struct SplitState {
    h: MultiGraph,
    /// walk in the input graph from the first to the second endpoint of each edge of `h`
    walks: BTreeMap<EdgeId, GraphPath>,
    next_id: u64,
}

impl SplitState {
    fn new(g: &MultiGraph) -> Self {
        let walks = g
            .edges()
            .map(|(e, u, v)| (e, GraphPath { vertices: vec![u, v], edges: vec![e] }))
            .collect();
        SplitState { h: g.clone(), walks, next_id: g.next_edge_id().0 }
    }

    fn walk_from(&self, e: EdgeId, from: VertexId) -> GraphPath {
        let w = &self.walks[&e];
        if w.first() == from {
            w.clone()
        } else {
            w.reversed()
        }
    }

    /// Replaces `va` (edge `e1`) and `vb` (edge `e2`) by a shortcut `ab`.
    fn split(&self, v: VertexId, (e1, a): (EdgeId, VertexId), (e2, b): (EdgeId, VertexId)) -> SplitState {
        let mut next = self.clone();
        next.h.remove_edge(e1);
        next.h.remove_edge(e2);
        let first = self.walk_from(e1, v).reversed();
        let second = self.walk_from(e2, v);
        next.walks.remove(&e1);
        next.walks.remove(&e2);
        if a != b {
            let mut walk = first;
            walk.vertices.extend_from_slice(&second.vertices[1..]);
            walk.edges.extend_from_slice(&second.edges);
            let id = EdgeId(next.next_id);
            next.next_id += 1;
            next.h.add_edge(id, a, b).expect("shortcut joins distinct vertices");
            next.walks.insert(id, walk);
        }
        next
    }

    fn preserves(&self, terminals: &BTreeSet<VertexId>, targets: &BTreeMap<VertexId, usize>) -> Result<bool, PackError> {
        for (&s, &target) in targets {
            if target == 0 {
                continue;
            }
            let rest: BTreeSet<VertexId> = terminals.iter().copied().filter(|&x| x != s).collect();
            if max_flow_value(&self.h, &BTreeSet::from([s]), &rest, Some(target))? < target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn split_all(
    state: SplitState,
    terminals: &BTreeSet<VertexId>,
    targets: &BTreeMap<VertexId, usize>,
    budget: &mut usize,
    stats: &mut SplitStats,
) -> Result<Option<SplitState>, PackError> {
    let Some(v) = state.h.vertices().find(|&v| !terminals.contains(&v) && !state.h.neighbors(v).is_empty()) else {
        return Ok(Some(state));
    };
    let incident = state.h.neighbors(v).to_vec();
    // pairs reaching the same neighbour pair give isomorphic results
    let mut tried: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for i in 0..incident.len() {
        for j in i + 1..incident.len() {
            let (a, b) = (incident[i].1, incident[j].1);
            if !tried.insert((a.min(b), a.max(b))) {
                continue;
            }
            if *budget == 0 {
                return Err(PackError::BudgetExhausted(stats.candidates));
            }
            *budget -= 1;
            stats.candidates += 1;
            let next = state.split(v, incident[i], incident[j]);
            if !next.preserves(terminals, targets)? {
                continue;
            }
            stats.splits += 1;
            if let Some(done) = split_all(next, terminals, targets, budget, stats)? {
                return Ok(Some(done));
            }
            stats.backtracks += 1;
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PackingViolation {
    MalformedPath { path: usize, reason: String },
    NotTPath { path: usize, reason: String },
    NotSimple { path: usize },
    SharedEdge { edge: String, first: usize, second: usize },
    LambdaMismatch { terminal: String, certified: Option<usize>, actual: usize },
    CountMismatch { terminal: String, count: usize, lambda: usize },
    MissingCut { terminal: String },
    CutInconsistent { terminal: String },
    CutNotSeparating { terminal: String },
    CutSizeMismatch { terminal: String, size: usize, lambda: usize },
    CutNotOnPaths { terminal: String },
}

impl fmt::Display for PackingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PackingViolation::*;
        match self {
            MalformedPath { path, reason } => write!(f, "path {path} is malformed: {reason}"),
            NotTPath { path, reason } => write!(f, "path {path} is not a T-path: {reason}"),
            NotSimple { path } => write!(f, "path {path} repeats a vertex"),
            SharedEdge { edge, first, second } => write!(f, "paths {first} and {second} share edge `{edge}`"),
            LambdaMismatch { terminal, certified, actual } => {
                write!(f, "certificate λ for `{terminal}` is {certified:?}, actual {actual}")
            }
            CountMismatch { terminal, count, lambda } => {
                write!(f, "count ≠ λ at `{terminal}`: {count} paths, λ = {lambda}")
            }
            MissingCut { terminal } => write!(f, "no certificate cut for `{terminal}`"),
            CutInconsistent { terminal } => write!(f, "certificate cut for `{terminal}` is not a cut of the graph"),
            CutNotSeparating { terminal } => write!(f, "certificate cut for `{terminal}` does not separate it from T"),
            CutSizeMismatch { terminal, size, lambda } => {
                write!(f, "certificate cut for `{terminal}` has size {size}, λ = {lambda}")
            }
            CutNotOnPaths { terminal } => write!(f, "cut not on path system for `{terminal}`"),
        }
    }
}

fn path_shape(g: &MultiGraph, p: &GraphPath) -> Result<(), String> {
    if p.vertices.len() != p.edges.len() + 1 {
        return Err("vertex and edge counts disagree".into());
    }
    if p.edges.is_empty() {
        return Err("trivial path".into());
    }
    for (i, &e) in p.edges.iter().enumerate() {
        let Some((u, v)) = g.endpoints(e) else {
            return Err(format!("unknown edge {e}"));
        };
        let (a, b) = (p.vertices[i], p.vertices[i + 1]);
        if !((u == a && v == b) || (u == b && v == a)) {
            return Err(format!("edge `{}` does not join step {i}", g.edge_label(e)));
        }
    }
    Ok(())
}

pub fn verify_packing(
    g: &MultiGraph,
    t: &TerminalSet,
    p: &PathSystem,
    c: &PackingCertificate,
) -> Vec<PackingViolation> {
    use PackingViolation::*;
    let mut out = Vec::new();
    let mut owner: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (i, path) in p.paths.iter().enumerate() {
        if let Err(reason) = path_shape(g, path) {
            out.push(MalformedPath { path: i, reason });
            continue;
        }
        if !path.is_simple() {
            out.push(NotSimple { path: i });
        }
        let (a, b) = (path.first(), path.last());
        if !t.contains(a) || !t.contains(b) {
            out.push(NotTPath { path: i, reason: "an endpoint is not a terminal".into() });
        } else if a == b {
            out.push(NotTPath { path: i, reason: "endpoints coincide".into() });
        }
        if let Some(&inner) = path.vertices[1..path.vertices.len() - 1].iter().find(|&&v| t.contains(v)) {
            out.push(NotTPath { path: i, reason: format!("inner vertex `{}` is a terminal", g.vertex_label(inner)) });
        }
        for &e in &path.edges {
            if let Some(&j) = owner.get(&e) {
                out.push(SharedEdge { edge: g.edge_label(e), first: j, second: i });
            } else {
                owner.insert(e, i);
            }
        }
    }
    if t.len() < 2 {
        return out;
    }
    for s in t.iter() {
        let label = g.vertex_label(s);
        let others = t.others(s);
        let actual = match min_cut(g, &BTreeSet::from([s]), &others) {
            Ok((_, v)) => v,
            Err(_) => continue,
        };
        let certified = c.lambda_profile.get(&s).copied();
        if certified != Some(actual) {
            out.push(LambdaMismatch { terminal: label.clone(), certified, actual });
        }
        let count = p.count_at(s);
        if count != actual {
            out.push(CountMismatch { terminal: label.clone(), count, lambda: actual });
        }
        let Some(cut) = c.per_terminal_cuts.get(&s) else {
            out.push(MissingCut { terminal: label });
            continue;
        };
        if !cut.is_consistent_with(g) {
            out.push(CutInconsistent { terminal: label.clone() });
        }
        let (s_side, other_side) = if cut.side_a.contains(&s) { (&cut.side_a, &cut.side_b) } else { (&cut.side_b, &cut.side_a) };
        if !s_side.contains(&s) || !others.is_subset(other_side) {
            out.push(CutNotSeparating { terminal: label.clone() });
        }
        if cut.value() != actual {
            out.push(CutSizeMismatch { terminal: label.clone(), size: cut.value(), lambda: actual });
        }
        let at_s: Vec<&GraphPath> = p.paths.iter().filter(|q| q.first() == s || q.last() == s).collect();
        let on_paths = at_s.iter().all(|q| q.edges.iter().filter(|e| cut.edge_set.contains(e)).count() == 1)
            && cut.edge_set.iter().all(|e| at_s.iter().any(|q| q.edges.contains(e)));
        if !on_paths {
            out.push(CutNotOnPaths { terminal: label });
        }
    }
    out
}
