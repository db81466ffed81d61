// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use tpack::arcs::{assemble_arcs, mu_estimate, to_dot, verify_arc_system, ArcKind, ArcOptions, PremiseMode};
use tpack::ends::{check_discrete, DiscreteVerdict, EndId, Presentation, Terminal, TerminalSpec};
use tpack::zoo::build;
use tpack::ArcError;

fn end(s: &str) -> Terminal {
    Terminal::End(EndId(s.into()))
}

#[test]
fn even_ladder_two_double_rays_at_two_radii() {
    let p = build("even_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "ends").unwrap();
    let mut counts = Vec::new();
    for r in [10, 14] {
        let (sys, state) = assemble_arcs(&p, &spec, r, 40, &ArcOptions::default()).unwrap();
        assert_eq!(sys.arcs.len(), 2);
        assert!(sys.arcs.iter().all(|a| a.kind == ArcKind::DoubleRay));
        assert!(common::edge_disjoint(&sys.arcs.iter().map(|a| a.path.clone()).collect::<Vec<_>>()));
        assert!(verify_arc_system(&p, &spec, &sys, &state).unwrap().is_empty());
        // every double ray meets both ends: its two tails lie on opposite sides of cell 0
        for a in &sys.arcs {
            let cell = |v| p.vertex_label(v).split('@').nth(1).unwrap().parse::<i64>().unwrap();
            let (x, y) = (cell(a.path.first()), cell(a.path.last()));
            assert!(x.min(y) < -(r as i64) && x.max(y) > r as i64, "{x} {y}");
        }
        counts.push(sys.per_terminal_counts.clone());
    }
    assert_eq!(counts[0], counts[1]);
    assert_eq!(counts[0][&end("left")], 2);
}

#[test]
fn inner_eulerian_mode_agrees_on_even_ladder() {
    let p = build("even_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "ends").unwrap();
    let opts = ArcOptions { premise: PremiseMode::InnerEulerian, ..ArcOptions::default() };
    let (sys, state) = assemble_arcs(&p, &spec, 10, 30, &opts).unwrap();
    assert_eq!(sys.arcs.len(), 2);
    assert!(verify_arc_system(&p, &spec, &sys, &state).unwrap().is_empty());
}

#[test]
fn ray_from_its_root() {
    let p = build("ray", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "x@0,ends").unwrap();
    let (sys, state) = assemble_arcs(&p, &spec, 6, 25, &ArcOptions::default()).unwrap();
    assert_eq!(sys.arcs.len(), 1);
    let arc = &sys.arcs[0];
    assert_eq!(arc.kind, ArcKind::Ray);
    assert_eq!(p.vertex_label(arc.path.first()), "x@0");
    assert!(arc.path.vertices.len() >= 25);
    assert!(verify_arc_system(&p, &spec, &sys, &state).unwrap().is_empty());
}

#[test]
fn ladder_vertex_to_both_ends() {
    // a@0 has degree 4; two rails lead to each end
    let p = build("even_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "a@0,ends").unwrap();
    let (sys, state) = assemble_arcs(&p, &spec, 8, 30, &ArcOptions::default()).unwrap();
    assert!(verify_arc_system(&p, &spec, &sys, &state).unwrap().is_empty(), "{:?}", verify_arc_system(&p, &spec, &sys, &state));
    let a0 = Terminal::Vertex(p.find_vertex("a@0").unwrap());
    assert_eq!(state.lambda[&a0], sys.per_terminal_counts[&a0]);
    assert_eq!(sys.per_terminal_counts[&end("left")], state.lambda[&end("left")]);
}

#[test]
fn finite_graphs_give_finite_paths() {
    let p = build("cycle", &[6]).unwrap();
    let spec = TerminalSpec::parse(&p, "c0,c3").unwrap();
    let (sys, state) = assemble_arcs(&p, &spec, 3, 10, &ArcOptions::default()).unwrap();
    assert_eq!(sys.arcs.len(), 2);
    assert!(sys.arcs.iter().all(|a| a.kind == ArcKind::FinitePath));
    assert!(verify_arc_system(&p, &spec, &sys, &state).unwrap().is_empty());
}

#[test]
fn fig3_tree_premise_failure() {
    let p = build("fig3_tree", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "leaves").unwrap();
    for r in [4, 10] {
        let err = assemble_arcs(&p, &spec, r, 20, &ArcOptions::default()).unwrap_err();
        assert!(matches!(err, ArcError::PremiseFailed(ref m) if m.contains("e@0")), "{err}");
    }
    let opts = ArcOptions { premise: PremiseMode::InnerEulerian, ..ArcOptions::default() };
    assert!(matches!(assemble_arcs(&p, &spec, 4, 20, &opts), Err(ArcError::PremiseFailed(_))));
}

#[test]
fn star3_premise_failure() {
    let p = build("star", &[3]).unwrap();
    let spec = TerminalSpec::parse(&p, "leaves").unwrap();
    assert!(matches!(assemble_arcs(&p, &spec, 2, 5, &ArcOptions::default()), Err(ArcError::PremiseFailed(m)) if m.contains("`c`")));
}

#[test]
fn example_1_2_is_refused_and_mu_matches() {
    let p = build("dup_rung_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "ends,class:a").unwrap();
    assert!(matches!(assemble_arcs(&p, &spec, 8, 20, &ArcOptions::default()), Err(ArcError::NotDiscrete(_))));
    let report = check_discrete(&p, &spec, 16).unwrap();
    assert!(report.ends.values().all(|v| matches!(v, DiscreteVerdict::NotDiscrete { .. })));
    for r in 8..=10 {
        for label in ["a@0", "a@3", "a@-2"] {
            let t = Terminal::Vertex(p.find_vertex(label).unwrap());
            let m = mu_estimate(&p, &spec, &t, r).unwrap();
            assert_eq!((m.value, m.stabilized), (4, true), "{label} at {r}");
        }
        for e in ["left", "right"] {
            let m = mu_estimate(&p, &spec, &end(e), r).unwrap();
            assert_eq!((m.value, m.stabilized), (1, true), "{e} at {r}");
        }
    }
}

#[test]
fn mu_equals_lambda_when_discrete() {
    // without the rail terminals μ and λ coincide
    let p = build("even_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "ends").unwrap();
    assert_eq!(mu_estimate(&p, &spec, &end("left"), 8).unwrap().value, 2);
}

#[test]
fn dot_marks_cut_edges() {
    let p = build("even_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "ends").unwrap();
    let (sys, state) = assemble_arcs(&p, &spec, 6, 20, &ArcOptions::default()).unwrap();
    let dot = to_dot(&sys, &state);
    assert!(dot.starts_with("graph window {"));
    let bold = dot.lines().filter(|l| l.contains("penwidth=3")).count();
    let cut: BTreeSet<_> = state.cuts.iter().flat_map(|c| c.edge_set.iter()).collect();
    assert_eq!(bold, cut.len());
}
