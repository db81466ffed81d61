// SPDX-License-Identifier: Apache-2.0

//! Edge-disjoint T-arc systems.
//!
//! Pipeline, all on one window:
//!
//! 1. For each end terminal in declared order, contract the components
//!    found so far and take the canonical minimum cut `F_n` from the end's
//!    region against the remaining terminals. Its source side is `C_n`.
//! 2. Contract every `C_n` to a vertex `v_n` and pack T-paths in that
//!    finite minor with `v_n` as terminals.
//! 3. Build a ray system from the far endpoints of `F_n` into each end and
//!    replace every path edge at `v_n` by the ray starting through it. A
//!    single edge between `v_n` and `v_m` becomes a double ray.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::ends::checks::{covering_radius, separates_after_removal};
use crate::ends::presentation::{distances, EndId, Presentation};
use crate::ends::split::{SplitPresentation, COPY_BASE};
use crate::ends::window::{window, window_with_horizon, Window, REGION_BASE};
use crate::ends::{
    check_cut_parity_premise, check_discrete, is_inner_eulerian_with_ends, lambda_end,
    DiscreteVerdict, Terminal, TerminalSpec, DEFAULT_CUT_GUARD, DEFAULT_R_MAX,
};
use crate::error::{ArcError, EndsError};
use crate::flow::{max_flow_value, min_cut};
use crate::multigraph::{contract_labeled, ContractionClass, ContractionMinor, Cut, EdgeId, GraphPath, VertexId};
use crate::rays::{max_ray_system_avoiding, start_edge_index, RaySystem};
use crate::tpath::{is_inner_eulerian, pack_tpaths_with, PackOptions, Packing, TerminalSet};

/// Contraction vertex `v_n` has id `CONTRACTION_BASE + n`.
pub const CONTRACTION_BASE: u64 = REGION_BASE + (1 << 32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    FinitePath,
    Ray,
    DoubleRay,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub kind: ArcKind,
    pub from: Terminal,
    pub to: Terminal,
    /// materialized segment; rays run from their vertex towards the end,
    /// double rays from the `from` end to the `to` end
    pub path: GraphPath,
    pub materialized_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSystem {
    pub arcs: Vec<Arc>,
    pub per_terminal_counts: BTreeMap<Terminal, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiseMode {
    /// enumerate terminal-one-sided cuts on the largest window the guard allows
    CutParity,
    /// require every non-terminal vertex and end to be even
    InnerEulerian,
}

#[derive(Clone, Copy, Debug)]
pub struct ArcOptions {
    pub premise: PremiseMode,
    pub r_max: usize,
    pub guard: usize,
    pub pack: PackOptions,
}

impl Default for ArcOptions {
    fn default() -> Self {
        ArcOptions { premise: PremiseMode::CutParity, r_max: DEFAULT_R_MAX, guard: DEFAULT_CUT_GUARD, pack: PackOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PremiseReport {
    pub mode: PremiseMode,
    /// radius whose window was enumerated, for the cut-parity mode
    pub radius: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct PipelineState {
    pub premise: PremiseReport,
    /// radius of the window every stage works on
    pub radius: usize,
    pub window: Window,
    pub end_order: Vec<EndId>,
    pub lambda: BTreeMap<Terminal, usize>,
    pub lambda_radius: BTreeMap<Terminal, usize>,
    /// `F_n`, sides in window vertices with `C_n` as `side_a`
    pub cuts: Vec<Cut>,
    pub components: Vec<BTreeSet<VertexId>>,
    pub stage_minors: Vec<ContractionMinor>,
    pub stage_terminals: Vec<BTreeSet<VertexId>>,
    pub final_minor: ContractionMinor,
    pub final_terminals: BTreeSet<VertexId>,
    /// terminal → its vertex in the final minor
    pub terminal_image: BTreeMap<Terminal, VertexId>,
    pub sources: Vec<BTreeSet<VertexId>>,
    pub ray_systems: Vec<RaySystem>,
    pub packing: Packing,
}

fn contraction_vertex(n: usize) -> VertexId {
    VertexId(CONTRACTION_BASE + n as u64)
}

fn spec_terminals(spec: &TerminalSpec) -> Result<Vec<Terminal>, EndsError> {
    spec.terminals()
        .ok_or_else(|| EndsError::UnsupportedTerminals("arc systems need finitely many vertex terminals".into()))
}

/// Checks the premise in the requested mode; finite graphs use the exact
/// degree criterion.
fn verify_premise(p: &dyn Presentation, spec: &TerminalSpec, r: usize, opts: &ArcOptions) -> Result<PremiseReport, ArcError> {
    let finite = p.ends().is_empty() && p.conclusive_radius().is_some();
    match opts.premise {
        PremiseMode::InnerEulerian => {
            let v = is_inner_eulerian_with_ends(p, spec, opts.r_max)?;
            match v.holds {
                Some(true) => Ok(PremiseReport { mode: opts.premise, radius: None }),
                Some(false) => Err(ArcError::PremiseFailed(format!("not inner-Eulerian: {:?}", v.witness))),
                None => Err(ArcError::PremiseUnverified(format!("inner-Eulerian verdict unknown up to radius {}", opts.r_max))),
            }
        }
        PremiseMode::CutParity if finite => {
            // in a finite graph an odd terminal-free side exists iff an odd non-terminal does
            let whole = p.conclusive_radius().expect("finite");
            let w = window(p, whole)?;
            let t = TerminalSet::new(&w.graph, w.rest_images(p, spec, None))?;
            if let Some(v) = is_inner_eulerian(&w.graph, &t).witness {
                return Err(ArcError::PremiseFailed(format!("odd cut around non-terminal `{}`", w.graph.vertex_label(v))));
            }
            Ok(PremiseReport { mode: opts.premise, radius: Some(whole) })
        }
        PremiseMode::CutParity => {
            let Some(radius) = fitting_radius(p, r, opts.guard)? else {
                return Err(ArcError::PremiseUnverified(format!("no window up to radius {r} fits the guard of {}", opts.guard)));
            };
            let verdict = check_cut_parity_premise(p, spec, radius, opts.guard)?;
            if !verdict.holds {
                return Err(ArcError::PremiseFailed(format!(
                    "odd cut {{{}}} with all terminals on one side at radius {radius}",
                    verdict.witness_edges.join(", ")
                )));
            }
            Ok(PremiseReport { mode: opts.premise, radius: Some(radius) })
        }
    }
}

/// Largest radius `≤ r` whose window has at most `guard` vertices.
pub fn fitting_radius(p: &dyn Presentation, r: usize, guard: usize) -> Result<Option<usize>, EndsError> {
    for radius in (0..=r).rev() {
        if window(p, radius)?.graph.num_vertices() <= guard {
            return Ok(Some(radius));
        }
    }
    Ok(None)
}

/// Stage cuts `F_n` and components `C_n` on `w`.
pub fn compute_separating_cuts(
    p: &dyn Presentation,
    spec: &TerminalSpec,
    w: &Window,
    lambda: &BTreeMap<Terminal, usize>,
) -> Result<(Vec<Cut>, Vec<BTreeSet<VertexId>>, Vec<ContractionMinor>, Vec<BTreeSet<VertexId>>), ArcError> {
    let vertex_terminals: BTreeSet<VertexId> = spec.finite_vertices().cloned().unwrap_or_default();
    for &v in &vertex_terminals {
        if !w.core.contains(&v) {
            return Err(ArcError::Invariant(format!("vertex terminal `{}` lies outside the window", p.vertex_label(v))));
        }
    }
    let mut cuts = Vec::new();
    let mut components: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut minors = Vec::new();
    let mut stage_terminals = Vec::new();
    for (n, end) in spec.ends.iter().enumerate() {
        let classes: Vec<ContractionClass> = components
            .iter()
            .enumerate()
            .map(|(i, c)| ContractionClass { members: c.clone(), image: contraction_vertex(i), label: format!("v{i}") })
            .collect();
        let minor = contract_labeled(&w.graph, &classes)?;
        let x = minor.class_map[&w.end_region[end]];
        if x.0 >= CONTRACTION_BASE {
            return Err(ArcError::Invariant(format!("end `{end}` lies inside an earlier component")));
        }
        let mut t_n: BTreeSet<VertexId> = vertex_terminals.clone();
        t_n.extend((0..n).map(contraction_vertex));
        t_n.extend(spec.ends[n..].iter().map(|e| minor.class_map[&w.end_region[e]]));
        let rest: BTreeSet<VertexId> = t_n.iter().copied().filter(|&v| v != x).collect();
        if rest.contains(&x) {
            return Err(ArcError::NotDiscrete(format!("end `{end}` shares its region with another terminal")));
        }
        let (cut, value) = min_cut(&minor.minor, &BTreeSet::from([x]), &rest)?;
        let want = lambda[&Terminal::End(end.clone())];
        if value != want {
            return Err(ArcError::Invariant(format!("stage {n} cut has size {value}, expected λ = {want}")));
        }
        let c_n = cut.side_a.clone();
        if components.iter().any(|c| !c.is_disjoint(&c_n)) || c_n.iter().any(|v| v.0 >= CONTRACTION_BASE) {
            return Err(ArcError::Invariant(format!("component C_{n} meets an earlier component")));
        }
        if !c_n.is_disjoint(&vertex_terminals) {
            return Err(ArcError::Invariant(format!("component C_{n} contains a vertex terminal")));
        }
        cuts.push(Cut::from_side(&w.graph, c_n.clone()));
        components.push(c_n);
        minors.push(minor);
        stage_terminals.push(t_n);
    }
    Ok((cuts, components, minors, stage_terminals))
}

/// Contracts every component to its `v_n`; returns the minor and `T_κ`.
pub fn build_final_minor(
    spec: &TerminalSpec,
    w: &Window,
    components: &[BTreeSet<VertexId>],
) -> Result<(ContractionMinor, BTreeSet<VertexId>), ArcError> {
    let classes: Vec<ContractionClass> = components
        .iter()
        .enumerate()
        .map(|(i, c)| ContractionClass { members: c.clone(), image: contraction_vertex(i), label: format!("v{i}") })
        .collect();
    let minor = contract_labeled(&w.graph, &classes)?;
    let mut terminals = BTreeSet::new();
    for &v in spec.finite_vertices().into_iter().flatten() {
        let image = minor.class_map[&v];
        if image != v {
            return Err(ArcError::Invariant(format!("vertex terminal `{}` was contracted", w.graph.vertex_label(v))));
        }
        terminals.insert(v);
    }
    terminals.extend((0..components.len()).map(contraction_vertex));
    Ok((minor, terminals))
}

/// Runs the whole pipeline.
pub fn assemble_arcs(
    p: &dyn Presentation,
    spec: &TerminalSpec,
    r: usize,
    depth: usize,
    opts: &ArcOptions,
) -> Result<(ArcSystem, PipelineState), ArcError> {
    spec.validate(p)?;
    if spec.terminals().is_none() {
        let report = check_discrete(p, spec, opts.r_max)?;
        if let Some((end, _)) = report.ends.iter().find(|(_, v)| matches!(v, DiscreteVerdict::NotDiscrete { .. })) {
            return Err(ArcError::NotDiscrete(format!("end `{end}` is a limit of vertex terminals")));
        }
    }
    let terminals = spec_terminals(spec)?;
    if terminals.len() < 2 {
        return Err(EndsError::UnsupportedTerminals("arc systems need at least two terminals".into()).into());
    }
    let premise = verify_premise(p, spec, r, opts)?;

    let discrete = check_discrete(p, spec, opts.r_max)?;
    let mut r_eff = r.max(covering_radius(p, spec, opts.r_max)?);
    for (end, verdict) in &discrete.ends {
        match verdict {
            DiscreteVerdict::Separated { radius } => r_eff = r_eff.max(*radius),
            DiscreteVerdict::NotDiscrete { evidence } => {
                let (radius, t) = evidence.first().cloned().unwrap_or_default();
                return Err(ArcError::NotDiscrete(format!("end `{end}` meets terminal `{t}` beyond radius {radius}")));
            }
            DiscreteVerdict::Unknown { r_max } => {
                return Err(ArcError::NotDiscrete(format!("end `{end}` not separated up to radius {r_max}")))
            }
        }
    }

    let mut lambda = BTreeMap::new();
    let mut lambda_radius = BTreeMap::new();
    for t in &terminals {
        let res = lambda_end(p, spec, t, opts.r_max)?;
        r_eff = r_eff.max(res.radius);
        lambda.insert(t.clone(), res.value);
        lambda_radius.insert(t.clone(), res.radius);
    }

    let w = window(p, r_eff)?;
    let (cuts, components, stage_minors, stage_terminals) = compute_separating_cuts(p, spec, &w, &lambda)?;
    let (final_minor, final_terminals) = build_final_minor(spec, &w, &components)?;

    let t_kappa = TerminalSet::new(&final_minor.minor, final_terminals.iter().copied())?;
    if let Some(v) = is_inner_eulerian(&final_minor.minor, &t_kappa).witness {
        return Err(ArcError::TruncationNotInnerEulerian(final_minor.minor.vertex_label(v)));
    }
    let packing = pack_tpaths_with(&final_minor.minor, &t_kappa, opts.pack)?;

    let mut terminal_image = BTreeMap::new();
    for t in &terminals {
        let image = match t {
            Terminal::Vertex(v) => *v,
            Terminal::End(e) => contraction_vertex(spec.ends.iter().position(|x| x == e).expect("declared")),
        };
        let count = packing.paths.count_at(image);
        if count != lambda[t] {
            return Err(ArcError::Invariant(format!("{count} paths at `{}` but λ = {}", t.label(p), lambda[t])));
        }
        terminal_image.insert(t.clone(), image);
    }

    let mut sources = Vec::new();
    let mut ray_systems = Vec::new();
    let mut indexes = Vec::new();
    for (n, end) in spec.ends.iter().enumerate() {
        let c_n = &components[n];
        let mut s_n = BTreeSet::new();
        for &e in &cuts[n].edge_set {
            let (u, x) = w.real_endpoints[&e];
            s_n.insert(if c_n.contains(&u) { x } else { u });
        }
        // rays live in C_n ∪ S_n, so each starts through its own edge of F_n
        let avoid: BTreeSet<EdgeId> = w
            .graph
            .edges()
            .filter(|(_, a, b)| !c_n.contains(a) && !c_n.contains(b))
            .map(|(e, _, _)| e)
            .collect();
        let rs = max_ray_system_avoiding(p, &s_n, end, depth, opts.r_max.max(r_eff + 2 * p.horizon()), &avoid)?;
        if rs.claimed_size != cuts[n].value() {
            return Err(ArcError::Invariant(format!("{} rays into `{end}` but |F_{n}| = {}", rs.claimed_size, cuts[n].value())));
        }
        indexes.push(start_edge_index(&rs, &cuts[n])?);
        sources.push(s_n);
        ray_systems.push(rs);
    }

    let state = PipelineState {
        premise,
        radius: r_eff,
        end_order: spec.ends.clone(),
        lambda,
        lambda_radius,
        cuts,
        components,
        stage_minors,
        stage_terminals,
        final_minor,
        final_terminals,
        terminal_image,
        sources,
        ray_systems,
        window: w,
        packing,
    };
    let arcs = map_paths(p, spec, &state, &indexes)?;
    let mut per_terminal_counts: BTreeMap<Terminal, usize> = terminals.iter().map(|t| (t.clone(), 0)).collect();
    for a in &arcs {
        *per_terminal_counts.get_mut(&a.from).expect("terminal") += 1;
        *per_terminal_counts.get_mut(&a.to).expect("terminal") += 1;
    }
    for (t, &count) in &per_terminal_counts {
        if count != state.lambda[t] {
            return Err(ArcError::Invariant(format!("{count} arcs at `{}` but λ = {}", t.label(p), state.lambda[t])));
        }
    }
    Ok((ArcSystem { arcs, per_terminal_counts }, state))
}

/// The arc map: rays replace the path edges at contraction vertices.
fn map_paths(
    p: &dyn Presentation,
    spec: &TerminalSpec,
    state: &PipelineState,
    indexes: &[BTreeMap<EdgeId, usize>],
) -> Result<Vec<Arc>, ArcError> {
    let w = &state.window;
    let mut used: BTreeSet<EdgeId> = state.packing.paths.paths.iter().flat_map(|q| q.edges.iter().copied()).collect();
    used.extend(state.ray_systems.iter().flat_map(|rs| rs.rays.iter().flat_map(|r| r.edges.iter().copied())));
    let stage = |v: VertexId| (v.0 >= CONTRACTION_BASE).then(|| (v.0 - CONTRACTION_BASE) as usize);
    let as_terminal = |v: VertexId| match stage(v) {
        Some(n) => Terminal::End(spec.ends[n].clone()),
        None => Terminal::Vertex(v),
    };

    let mut arcs = Vec::new();
    for path in &state.packing.paths.paths {
        let (a, b) = (path.first(), path.last());
        let mut walk: GraphPath;
        let mut consumed = 0;
        match stage(a) {
            Some(n) => {
                let ray = &state.ray_systems[n].rays[indexes[n][&path.edges[0]]];
                walk = ray.reversed();
                consumed = 1;
            }
            None => walk = GraphPath::single(a),
        }
        let end_stage = stage(b);
        let inner_edges = path.edges.len() - usize::from(end_stage.is_some() && path.edges.len() > consumed);
        for &e in &path.edges[consumed..inner_edges] {
            step_across(p, w, &mut walk, e, &mut used)?;
        }
        if let Some(m) = end_stage {
            let last = *path.edges.last().expect("nonempty");
            let ray = &state.ray_systems[m].rays[indexes[m][&last]];
            let skip = if consumed == path.edges.len() { 1 } else {
                step_to(p, w, &mut walk, ray.first(), &mut used)?;
                0
            };
            walk.edges.extend(&ray.edges[skip..]);
            walk.vertices.extend(&ray.vertices[skip + 1..]);
        }
        let (from, to) = (as_terminal(a), as_terminal(b));
        let depth_of = |n: Option<usize>| n.map(|n| state.ray_systems[n].materialized_depth);
        let (kind, from, to, walk) = match (stage(a), end_stage) {
            (Some(_), Some(_)) => (ArcKind::DoubleRay, from, to, walk),
            (Some(_), None) => (ArcKind::Ray, to, from, walk.reversed()),
            (None, Some(_)) => (ArcKind::Ray, from, to, walk),
            (None, None) => (ArcKind::FinitePath, from, to, walk),
        };
        let materialized_depth = [depth_of(stage(a)), depth_of(end_stage)].into_iter().flatten().min().unwrap_or(walk.vertices.len());
        arcs.push(Arc { kind, from, to, path: walk, materialized_depth });
    }
    Ok(arcs)
}

/// Extends `walk` across window edge `e`, first crossing a region if the
/// walk stands inside one.
fn step_across(p: &dyn Presentation, w: &Window, walk: &mut GraphPath, e: EdgeId, used: &mut BTreeSet<EdgeId>) -> Result<(), ArcError> {
    let (u, x) = w.real_endpoints[&e];
    let cur = walk.last();
    if cur != u && cur != x {
        let target = if w.image_of(cur) == w.image_of(u) && !w.core.contains(&u) { u } else { x };
        step_to(p, w, walk, target, used)?;
    }
    let cur = walk.last();
    walk.push(e, if cur == u { x } else { u });
    Ok(())
}

/// Walks inside the current region to `target` along unused edges.
fn step_to(p: &dyn Presentation, w: &Window, walk: &mut GraphPath, target: VertexId, used: &mut BTreeSet<EdgeId>) -> Result<(), ArcError> {
    let start = walk.last();
    if start == target {
        return Ok(());
    }
    let bound = w.radius;
    let limit = w.radius + 8 * w.horizon;
    let dist = distances(p, limit);
    let mut prev: BTreeMap<VertexId, (EdgeId, VertexId)> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(v) = queue.pop_front() {
        if v == target {
            break;
        }
        for (e, y) in p.neighbors(v) {
            let outside = dist.get(&y).is_some_and(|&d| d > bound);
            if outside && !used.contains(&e) && !walk.vertices.contains(&y) && seen.insert(y) {
                prev.insert(y, (e, v));
                queue.push_back(y);
            }
        }
    }
    if !seen.contains(&target) {
        return Err(ArcError::Invariant(format!(
            "could not route from `{}` to `{}` inside a region",
            p.vertex_label(start),
            p.vertex_label(target)
        )));
    }
    let mut hops = Vec::new();
    let mut v = target;
    while v != start {
        let (e, u) = prev[&v];
        hops.push((e, v));
        v = u;
    }
    for (e, v) in hops.into_iter().rev() {
        used.insert(e);
        walk.push(e, v);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ArcViolation {
    SharedEdge { edge: String, first: usize, second: usize },
    NotSimple { arc: usize },
    NotAnEdge { arc: usize, step: usize },
    InnerTerminal { arc: usize, vertex: String },
    EndpointMismatch { arc: usize },
    CountMismatch { terminal: String, count: usize, lambda: usize },
    CutNotSeparating { terminal: String },
    CutSizeMismatch { terminal: String, size: usize, lambda: usize },
    WrongEnd { arc: usize, end: String },
}

impl fmt::Display for ArcViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcViolation::SharedEdge { edge, first, second } => write!(f, "arcs {first} and {second} share edge {edge}"),
            ArcViolation::NotSimple { arc } => write!(f, "arc {arc} repeats a vertex"),
            ArcViolation::NotAnEdge { arc, step } => write!(f, "arc {arc} step {step} is not an edge"),
            ArcViolation::InnerTerminal { arc, vertex } => write!(f, "arc {arc} passes through terminal {vertex}"),
            ArcViolation::EndpointMismatch { arc } => write!(f, "arc {arc} endpoints disagree with its path"),
            ArcViolation::CountMismatch { terminal, count, lambda } => write!(f, "count ≠ λ at {terminal}: {count} ≠ {lambda}"),
            ArcViolation::CutNotSeparating { terminal } => write!(f, "certificate cut of {terminal} does not separate"),
            ArcViolation::CutSizeMismatch { terminal, size, lambda } => {
                write!(f, "certificate cut of {terminal} has size {size}, λ = {lambda}")
            }
            ArcViolation::WrongEnd { arc, end } => write!(f, "wrong end: arc {arc} tail leaves `{end}`"),
        }
    }
}

/// Independent audit of an arc system against its pipeline certificate.
pub fn verify_arc_system(
    p: &dyn Presentation,
    spec: &TerminalSpec,
    system: &ArcSystem,
    state: &PipelineState,
) -> Result<Vec<ArcViolation>, EndsError> {
    let mut out = Vec::new();
    let mut owner: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (i, arc) in system.arcs.iter().enumerate() {
        let path = &arc.path;
        for &e in &path.edges {
            if let Some(j) = owner.insert(e, i) {
                out.push(ArcViolation::SharedEdge { edge: p.edge_label(e), first: j, second: i });
            }
        }
        if !path.is_simple() {
            out.push(ArcViolation::NotSimple { arc: i });
        }
        for (k, &e) in path.edges.iter().enumerate() {
            if !p.neighbors(path.vertices[k]).contains(&(e, path.vertices[k + 1])) {
                out.push(ArcViolation::NotAnEdge { arc: i, step: k });
            }
        }
        let first_inner = usize::from(matches!(arc.from, Terminal::Vertex(_)));
        let last_inner = path.vertices.len() - usize::from(matches!(arc.to, Terminal::Vertex(_)));
        for &v in path.vertices.get(first_inner..last_inner).unwrap_or(&[]) {
            if spec.is_vertex_terminal(p, v) {
                out.push(ArcViolation::InnerTerminal { arc: i, vertex: p.vertex_label(v) });
            }
        }
        let ok_from = match &arc.from {
            Terminal::Vertex(v) => path.first() == *v,
            Terminal::End(_) => arc.kind == ArcKind::DoubleRay,
        };
        let ok_to = match &arc.to {
            Terminal::Vertex(v) => path.last() == *v && arc.kind == ArcKind::FinitePath,
            Terminal::End(_) => arc.kind != ArcKind::FinitePath,
        };
        if !ok_from || !ok_to || arc.from == arc.to {
            out.push(ArcViolation::EndpointMismatch { arc: i });
        }
    }

    let mut counts: BTreeMap<&Terminal, usize> = BTreeMap::new();
    for arc in &system.arcs {
        *counts.entry(&arc.from).or_default() += 1;
        *counts.entry(&arc.to).or_default() += 1;
    }
    for (t, &lambda) in &state.lambda {
        let count = counts.get(t).copied().unwrap_or(0);
        if count != lambda || system.per_terminal_counts.get(t) != Some(&count) {
            out.push(ArcViolation::CountMismatch { terminal: t.label(p), count, lambda });
        }
    }

    let w = &state.window;
    for (t, &image) in &state.terminal_image {
        let label = t.label(p);
        let Some(cut) = state.packing.certificate.per_terminal_cuts.get(&image) else {
            out.push(ArcViolation::CutNotSeparating { terminal: label });
            continue;
        };
        if cut.value() != state.lambda[t] {
            out.push(ArcViolation::CutSizeMismatch { terminal: label.clone(), size: cut.value(), lambda: state.lambda[t] });
        }
        let x = w.terminal_image(t).expect("terminal in window");
        let rest: BTreeSet<VertexId> =
            state.terminal_image.keys().filter(|o| *o != t).filter_map(|o| w.terminal_image(o)).collect();
        if !separates_after_removal(&w.graph, &cut.edge_set, x, &rest) {
            out.push(ArcViolation::CutNotSeparating { terminal: label });
        }
    }

    let far = system.arcs.iter().flat_map(|a| a.path.vertices.iter()).count();
    if system.arcs.iter().any(|a| a.kind != ArcKind::FinitePath) {
        let big = window_with_horizon(p, state.radius, far + 1)?;
        for (i, arc) in system.arcs.iter().enumerate() {
            let v = &arc.path.vertices;
            let first_core = v.iter().position(|x| big.core.contains(x));
            let last_core = v.iter().rposition(|x| big.core.contains(x));
            let mut check = |end: &Terminal, tail: &[VertexId]| {
                if let Terminal::End(e) = end {
                    let region = big.end_region[e];
                    if tail.is_empty() || tail.iter().any(|&x| big.image_of(x) != Some(region)) {
                        out.push(ArcViolation::WrongEnd { arc: i, end: e.0.clone() });
                    }
                }
            };
            if arc.kind == ArcKind::DoubleRay {
                check(&arc.from, &v[..first_core.unwrap_or(v.len())]);
            }
            if arc.kind != ArcKind::FinitePath {
                check(&arc.to, &v[last_core.map_or(0, |k| k + 1)..]);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuEstimate {
    pub terminal: String,
    pub value: usize,
    pub radius: usize,
    /// the value at `radius + 1` agrees
    pub stabilized: bool,
}

/// Edge-disjoint `t`–rest arcs counted on the window of radius `r` after
/// splitting every other vertex terminal into pendant copies.
pub fn mu_estimate(p: &dyn Presentation, spec: &TerminalSpec, t: &Terminal, r: usize) -> Result<MuEstimate, EndsError> {
    spec.validate(p)?;
    if !spec.contains(p, t) {
        return Err(EndsError::UnsupportedTerminals(format!("`{}` is not a terminal", t.label(p))));
    }
    let (keep, root) = match t {
        Terminal::Vertex(v) => (Some(*v), *v),
        Terminal::End(e) => {
            let mut root = None;
            for i in 0..1 << 12 {
                let v = p.ray_vertex(e, i).ok_or_else(|| EndsError::UnknownEnd(e.0.clone()))?;
                if !spec.is_vertex_terminal(p, v) {
                    root = Some(v);
                    break;
                }
            }
            (None, root.ok_or_else(|| EndsError::UnsupportedTerminals(format!("end `{e}` runs through terminals only")))?)
        }
    };
    let sp = SplitPresentation::new(p, spec, keep, root)?;
    let value_at = |radius: usize| -> Result<usize, EndsError> {
        let w = window(&sp, radius)?;
        let x = w.terminal_image(t).ok_or_else(|| EndsError::Consistency("terminal without image".into()))?;
        let mut y: BTreeSet<VertexId> = w.core.iter().copied().filter(|&v| SplitPresentation::is_copy(v)).collect();
        for region in &w.regions {
            let hides_copy = region.members.iter().any(|&v| SplitPresentation::is_copy(v));
            let carries_end = region.ends.iter().any(|e| spec.is_end_terminal(e) && Terminal::End(e.clone()) != *t);
            if hides_copy || carries_end {
                y.insert(region.id);
            }
        }
        y.remove(&x);
        Ok(max_flow_value(&w.graph, &BTreeSet::from([x]), &y, None)?)
    };
    debug_assert!(root.0 < COPY_BASE);
    let value = value_at(r)?;
    let next = value_at(r + 1)?;
    Ok(MuEstimate { terminal: t.label(p), value, radius: r, stabilized: value == next })
}

/// Graphviz rendering of the pipeline window: cuts bold red, arcs coloured.
pub fn to_dot(system: &ArcSystem, state: &PipelineState) -> String {
    const PALETTE: [&str; 8] = ["blue", "darkgreen", "orange", "purple", "brown", "teal", "magenta", "gold"];
    let g = &state.window.graph;
    let in_cut: BTreeSet<EdgeId> = state.cuts.iter().flat_map(|c| c.edge_set.iter().copied()).collect();
    let mut arc_of: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (i, a) in system.arcs.iter().enumerate() {
        for &e in &a.path.edges {
            arc_of.insert(e, i);
        }
    }
    let mut out = String::from("graph window {\n  node [shape=circle, fontsize=10];\n");
    for v in g.vertices() {
        let shape = if state.window.is_region(v) { ", shape=doublecircle" } else { "" };
        out.push_str(&format!("  \"{}\" [label=\"{}\"{}];\n", v.0, g.vertex_label(v), shape));
    }
    for (e, u, v) in g.edges() {
        let mut attrs = vec![format!("label=\"{}\"", g.edge_label(e))];
        if let Some(&i) = arc_of.get(&e) {
            attrs.push(format!("color={}", PALETTE[i % PALETTE.len()]));
        }
        if in_cut.contains(&e) {
            attrs.push("style=bold, penwidth=3, fontcolor=red".into());
        }
        out.push_str(&format!("  \"{}\" -- \"{}\" [{}];\n", u.0, v.0, attrs.join(", ")));
    }
    out.push_str("}\n");
    out
}
