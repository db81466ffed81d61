// SPDX-License-Identifier: Apache-2.0

//! Certified checks on presentations. Every verdict that would need an
//! unbounded radius is reported as unknown past `r_max`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ends::presentation::{distances, EndId, Presentation};
use crate::ends::window::{window, Window};
use crate::ends::{Terminal, TerminalSpec, VertexTerminals};
use crate::error::EndsError;
use crate::flow::{max_flow_value, min_cut};
use crate::multigraph::{Cut, EdgeId, MultiGraph, VertexId};

pub const DEFAULT_R_MAX: usize = 32;
/// Largest window enumerated by the cut-parity check.
pub const DEFAULT_CUT_GUARD: usize = 18;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiscreteVerdict {
    Separated { radius: usize },
    /// `(radius, terminal)`: a terminal sharing the end's region at that radius
    NotDiscrete { evidence: Vec<(usize, String)> },
    Unknown { r_max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscreteReport {
    pub ends: BTreeMap<String, DiscreteVerdict>,
    /// vertex terminals of a locally finite graph are always discrete
    pub vertices_discrete: bool,
}

impl DiscreteReport {
    pub fn all_separated(&self) -> bool {
        self.ends.values().all(|v| matches!(v, DiscreteVerdict::Separated { .. }))
    }

    pub fn any_not_discrete(&self) -> bool {
        self.ends.values().any(|v| matches!(v, DiscreteVerdict::NotDiscrete { .. }))
    }

    pub fn max_separation_radius(&self) -> Option<usize> {
        self.ends
            .values()
            .map(|v| match v {
                DiscreteVerdict::Separated { radius } => Some(*radius),
                _ => None,
            })
            .try_fold(0, |acc, r| r.map(|r| acc.max(r)))
    }
}

pub fn check_discrete(p: &dyn Presentation, spec: &TerminalSpec, r_max: usize) -> Result<DiscreteReport, EndsError> {
    spec.validate(p)?;
    let mut separated: BTreeMap<&EndId, usize> = BTreeMap::new();
    let mut evidence: BTreeMap<&EndId, Vec<(usize, String)>> = BTreeMap::new();
    let mut hidden_every_radius: BTreeMap<&EndId, bool> = spec.ends.iter().map(|e| (e, true)).collect();
    for r in 1..=r_max.max(1) {
        if separated.len() == spec.ends.len() {
            break;
        }
        let w = window(p, r)?;
        for e in &spec.ends {
            if separated.contains_key(e) {
                continue;
            }
            let region = w.end_region[e];
            let mut hidden = w.hidden_terminals(p, spec, region, None);
            hidden.sort_by_key(|v| (w.dist[v], *v));
            let other_end = w.region(region).and_then(|reg| reg.ends.iter().find(|o| *o != e && spec.is_end_terminal(o)));
            if hidden.is_empty() {
                hidden_every_radius.insert(e, false);
            }
            match (hidden.first(), other_end) {
                (None, None) => {
                    separated.insert(e, r);
                }
                (Some(&v), _) => evidence.entry(e).or_default().push((r, p.vertex_label(v))),
                (None, Some(o)) => evidence.entry(e).or_default().push((r, format!("end:{o}"))),
            }
        }
    }
    let infinite_vertices = !matches!(spec.vertices, VertexTerminals::Finite(_));
    let ends = spec
        .ends
        .iter()
        .map(|e| {
            let verdict = if let Some(&radius) = separated.get(e) {
                DiscreteVerdict::Separated { radius }
            } else if infinite_vertices && hidden_every_radius[e] {
                DiscreteVerdict::NotDiscrete { evidence: evidence.remove(e).unwrap_or_default() }
            } else {
                DiscreteVerdict::Unknown { r_max }
            };
            (e.0.clone(), verdict)
        })
        .collect();
    Ok(DiscreteReport { ends, vertices_discrete: true })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaResult {
    pub terminal: Terminal,
    pub value: usize,
    /// minimum cut of the window at `cut_radius`; its edges are original edges
    pub cut: Cut,
    pub cut_radius: usize,
    pub radius: usize,
    pub sequence: Vec<Option<usize>>,
}

/// Radius from which every finite vertex terminal lies in the ball.
pub(crate) fn covering_radius(p: &dyn Presentation, spec: &TerminalSpec, r_max: usize) -> Result<usize, EndsError> {
    let Some(vs) = spec.finite_vertices() else { return Ok(1) };
    if vs.is_empty() {
        return Ok(1);
    }
    let dist = distances(p, r_max);
    let mut far = 1;
    for v in vs {
        match dist.get(v) {
            Some(&d) => far = far.max(d),
            None => {
                return Err(EndsError::UnsupportedTerminals(format!(
                    "vertex terminal `{}` is farther than radius {r_max} from the root",
                    p.vertex_label(*v)
                )))
            }
        }
    }
    Ok(far)
}

/// `λ(t, T∖{t})` by truncation. Stabilized at `r` when windows `r − 1` and
/// `r` give equal values and the minimum cut of window `r − 1` still
/// separates in window `r`.
pub fn lambda_end(p: &dyn Presentation, spec: &TerminalSpec, t: &Terminal, r_max: usize) -> Result<LambdaResult, EndsError> {
    spec.validate(p)?;
    if !spec.contains(p, t) {
        return Err(EndsError::UnsupportedTerminals(format!("`{}` is not a terminal", t.label(p))));
    }
    if let Some(all) = spec.terminals() {
        if all.len() < 2 {
            return Err(EndsError::UnsupportedTerminals("λ needs at least two terminals".into()));
        }
    }
    let start = covering_radius(p, spec, r_max)?;
    let mut sequence = Vec::new();
    let mut prev: Option<(usize, Cut)> = None;
    for r in start..=r_max {
        let w = window(p, r)?;
        let x = w.terminal_image(t).ok_or_else(|| EndsError::Consistency(format!("`{}` has no image", t.label(p))))?;
        let y = w.rest_images(p, spec, Some(t));
        if y.is_empty() || y.contains(&x) {
            sequence.push(None);
            prev = None;
            continue;
        }
        let xs = BTreeSet::from([x]);
        let (cut, value) = min_cut(&w.graph, &xs, &y)?;
        sequence.push(Some(value));
        if let Some((pv, pcut)) = prev.take() {
            if pv == value && separates_after_removal(&w.graph, &pcut.edge_set, x, &y) {
                return Ok(LambdaResult { terminal: t.clone(), value, cut: pcut, cut_radius: r - 1, radius: r, sequence });
            }
        }
        prev = Some((value, cut));
    }
    Err(EndsError::Unstabilized { what: format!("λ({})", t.label(p)), r_max, sequence })
}

pub(crate) fn separates_after_removal(g: &MultiGraph, edges: &BTreeSet<EdgeId>, x: VertexId, y: &BTreeSet<VertexId>) -> bool {
    g.without_edges(edges).reach(x, |_| true).is_disjoint(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityResult {
    pub end: EndId,
    pub parity: Parity,
    /// `(r, value)`: edge-disjoint `B_r`–end rays counted in window `r + horizon`
    pub degrees: Vec<(usize, usize)>,
    pub certified_radius: Option<usize>,
}

/// Ray degree of `B_r` towards an end, read off window `r + horizon`.
pub(crate) fn ball_degree(p: &dyn Presentation, end: &EndId, r: usize) -> Result<usize, EndsError> {
    let w = window(p, r + p.horizon())?;
    let region = *w.end_region.get(end).ok_or_else(|| EndsError::UnknownEnd(end.0.clone()))?;
    let ball: BTreeSet<VertexId> = w.core.iter().copied().filter(|v| w.dist[v] <= r).collect();
    Ok(max_flow_value(&w.graph, &ball, &BTreeSet::from([region]), None)?)
}

pub fn end_degree_parity(p: &dyn Presentation, end: &EndId, r_max: usize) -> Result<ParityResult, EndsError> {
    if !p.ends().contains(end) {
        return Err(EndsError::UnknownEnd(end.0.clone()));
    }
    let start = p.conclusive_radius().unwrap_or(1).max(1);
    let mut degrees = Vec::new();
    for r in start..=r_max {
        let d = ball_degree(p, end, r)?;
        if let Some(&(_, prev)) = degrees.last() {
            if prev % 2 == d % 2 {
                degrees.push((r, d));
                let parity = if d % 2 == 0 { Parity::Even } else { Parity::Odd };
                return Ok(ParityResult { end: end.clone(), parity, degrees, certified_radius: Some(r) });
            }
        }
        degrees.push((r, d));
    }
    Ok(ParityResult { end: end.clone(), parity: Parity::Unknown, degrees, certified_radius: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Vertex { label: String, degree: usize },
    End { end: String, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerEulerianVerdict {
    /// `None` when undecided within `r_max`
    pub holds: Option<bool>,
    pub witness: Option<Witness>,
    pub parities: Vec<ParityResult>,
}

pub fn is_inner_eulerian_with_ends(p: &dyn Presentation, spec: &TerminalSpec, r_max: usize) -> Result<InnerEulerianVerdict, EndsError> {
    spec.validate(p)?;
    let dist = distances(p, r_max);
    let mut order: Vec<(usize, VertexId)> = dist.iter().map(|(&v, &d)| (d, v)).collect();
    order.sort();
    for (_, v) in order {
        let degree = p.degree(v);
        if degree % 2 == 1 && !spec.is_vertex_terminal(p, v) {
            let witness = Witness::Vertex { label: p.vertex_label(v), degree };
            return Ok(InnerEulerianVerdict { holds: Some(false), witness: Some(witness), parities: Vec::new() });
        }
    }
    let mut parities = Vec::new();
    let mut undecided = false;
    for end in p.ends().into_iter().filter(|e| !spec.is_end_terminal(e)) {
        let res = end_degree_parity(p, &end, r_max)?;
        match res.parity {
            Parity::Odd => {
                let degree = res.degrees.last().map_or(0, |&(_, d)| d);
                let witness = Witness::End { end: end.0.clone(), degree };
                parities.push(res);
                return Ok(InnerEulerianVerdict { holds: Some(false), witness: Some(witness), parities });
            }
            Parity::Unknown => undecided = true,
            Parity::Even => {}
        }
        parities.push(res);
    }
    let covered = p.conclusive_radius().is_some_and(|c| c <= r_max);
    let periodic_even = p.periodic_odd() == Some(false) || !matches!(spec.vertices, VertexTerminals::Finite(_));
    let holds = (!undecided && covered && periodic_even).then_some(true);
    Ok(InnerEulerianVerdict { holds, witness: None, parities })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PremiseVerdict {
    pub holds: bool,
    pub radius: usize,
    pub window_vertices: usize,
    #[serde(skip)]
    pub witness: Option<Cut>,
    /// edge labels of the odd witness cut
    pub witness_edges: Vec<String>,
    /// labels of the witness side free of terminals
    pub witness_side: Vec<String>,
}

/// Odd cut with every terminal on one side, chosen by size, then by `rank`
/// of its deepest edge, then by enumeration order.
fn odd_one_sided_cut(
    g: &MultiGraph,
    terminals: &BTreeSet<VertexId>,
    guard: usize,
    rank: &dyn Fn(EdgeId) -> usize,
) -> Result<Option<Cut>, EndsError> {
    if g.num_vertices() > guard {
        return Err(EndsError::WindowTooLarge { vertices: g.num_vertices(), guard });
    }
    let free: Vec<VertexId> = g.vertices().filter(|v| !terminals.contains(v)).collect();
    let bit: BTreeMap<VertexId, u32> = free.iter().enumerate().map(|(i, &v)| (v, 1u32 << i)).collect();
    let edges: Vec<(u32, u32, EdgeId)> = g
        .edges()
        .map(|(e, u, v)| (bit.get(&u).copied().unwrap_or(0), bit.get(&v).copied().unwrap_or(0), e))
        .collect();
    let mut best: Option<(usize, usize, u32)> = None;
    for mask in 1..(1u64 << free.len()) as u32 {
        let crossing = edges.iter().filter(|&&(a, b, _)| (a & mask != 0) != (b & mask != 0));
        let d = crossing.clone().count();
        if d % 2 == 0 || best.is_some_and(|(bd, _, _)| bd < d) {
            continue;
        }
        let deepest = crossing.map(|&(_, _, e)| rank(e)).max().unwrap_or(0);
        if best.map_or(true, |b| (d, deepest) < (b.0, b.1)) {
            best = Some((d, deepest, mask));
        }
    }
    Ok(best.map(|(_, _, mask)| {
        let side = free.iter().copied().filter(|v| bit[v] & mask != 0).collect();
        Cut::from_side(g, side)
    }))
}

/// Odd cut of a finite graph with all of `terminals` on one side, if any.
pub fn cut_parity_premise_finite(g: &MultiGraph, terminals: &BTreeSet<VertexId>, guard: usize) -> Result<Option<Cut>, EndsError> {
    odd_one_sided_cut(g, terminals, guard, &|_| 0)
}

/// Enumerates every cut of `window(p, r)` with all terminals on one side.
pub fn check_cut_parity_premise(p: &dyn Presentation, spec: &TerminalSpec, r: usize, guard: usize) -> Result<PremiseVerdict, EndsError> {
    spec.validate(p)?;
    let w = window(p, r)?;
    let terminals = w.rest_images(p, spec, None);
    let witness = odd_one_sided_cut(&w.graph, &terminals, guard, &|e| w.edge_depth(e).unwrap_or(usize::MAX))?;
    Ok(premise_verdict(&w, r, witness))
}

fn premise_verdict(w: &Window, r: usize, witness: Option<Cut>) -> PremiseVerdict {
    let (witness_edges, witness_side) = match &witness {
        Some(c) => (
            c.edge_set.iter().map(|&e| w.graph.edge_label(e)).collect(),
            c.side_a.iter().map(|&v| w.graph.vertex_label(v)).collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    PremiseVerdict { holds: witness.is_none(), radius: r, window_vertices: w.graph.num_vertices(), witness, witness_edges, witness_side }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HandshakeStatus {
    Even,
    Odd,
    PotentiallyInfinite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandshakeReport {
    pub status: HandshakeStatus,
    pub odd_vertices: Vec<String>,
    pub odd_ends: Vec<String>,
    pub total: Option<usize>,
    pub radius: Option<usize>,
}

pub fn handshake_check(p: &dyn Presentation, r_max: usize) -> Result<HandshakeReport, EndsError> {
    let unknown = |status| HandshakeReport { status, odd_vertices: Vec::new(), odd_ends: Vec::new(), total: None, radius: None };
    if p.periodic_odd() != Some(false) {
        return Ok(unknown(HandshakeStatus::PotentiallyInfinite));
    }
    let Some(c) = p.conclusive_radius().filter(|&c| c <= r_max) else {
        return Ok(unknown(HandshakeStatus::Unknown));
    };
    let dist = distances(p, c);
    let mut odd: Vec<(usize, VertexId)> = dist.iter().filter(|(&v, _)| p.degree(v) % 2 == 1).map(|(&v, &d)| (d, v)).collect();
    odd.sort();
    let odd_vertices: Vec<String> = odd.iter().map(|&(_, v)| p.vertex_label(v)).collect();
    let mut odd_ends = Vec::new();
    for end in p.ends() {
        match end_degree_parity(p, &end, r_max)?.parity {
            Parity::Odd => odd_ends.push(end.0.clone()),
            Parity::Even => {}
            Parity::Unknown => return Ok(unknown(HandshakeStatus::Unknown)),
        }
    }
    let total = odd_vertices.len() + odd_ends.len();
    let status = if total % 2 == 0 { HandshakeStatus::Even } else { HandshakeStatus::Odd };
    Ok(HandshakeReport { status, odd_vertices, odd_ends, total: Some(total), radius: Some(c) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::EdgeId;

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

    #[test]
    fn star4_premise_holds_and_star3_fails() {
        let s4 = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let leaves: BTreeSet<VertexId> = (1..5).map(VertexId).collect();
        assert!(cut_parity_premise_finite(&s4, &leaves, 18).unwrap().is_none());
        let s3 = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let leaves: BTreeSet<VertexId> = (1..4).map(VertexId).collect();
        let w = cut_parity_premise_finite(&s3, &leaves, 18).unwrap().unwrap();
        assert_eq!(w.value(), 3);
        assert_eq!(w.side_a, BTreeSet::from([VertexId(0)]));
    }

    #[test]
    fn guard_refuses_large_graphs() {
        let g = graph(20, &[]);
        assert!(matches!(cut_parity_premise_finite(&g, &BTreeSet::new(), 18), Err(EndsError::WindowTooLarge { .. })));
    }
}
