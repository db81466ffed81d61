// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use tpack::ends::{
    check_cut_parity_premise, check_discrete, end_degree_parity, handshake_check, is_inner_eulerian_with_ends,
    lambda_end, window, DiscreteVerdict, EndId, HandshakeStatus, Parity, Presentation, Terminal, TerminalSpec,
    Witness, DEFAULT_CUT_GUARD,
};
use tpack::zoo::build;

fn end(s: &str) -> EndId {
    EndId(s.into())
}

#[test]
fn double_ladder_window_has_two_end_regions() {
    let p = build("double_ladder", &[]).unwrap();
    let w = window(&p, 6).unwrap();
    assert_eq!(w.regions.len(), 2);
    assert_ne!(w.end_region[&end("left")], w.end_region[&end("right")]);
    // a@-6..a@6 and b@-5..b@5
    assert_eq!(w.core.len(), 13 + 11);
}

#[test]
fn truncation_restricts_consistently() {
    let p = build("dup_rung_ladder", &[]).unwrap();
    for r in 2..8 {
        let small = window(&p, r - 1).unwrap();
        let big = window(&p, r).unwrap();
        let inner = |w: &tpack::ends::Window, bound: usize| -> BTreeSet<_> {
            w.graph.edges().map(|(e, _, _)| e).filter(|&e| w.edge_depth(e).unwrap() + 1 < bound).collect()
        };
        assert_eq!(inner(&small, r - 1), inner(&big, r - 1));
    }
}

#[test]
fn lambda_on_the_zoo() {
    let ray = build("ray", &[]).unwrap();
    let spec = TerminalSpec::parse(&ray, "x@0,ends").unwrap();
    assert_eq!(lambda_end(&ray, &spec, &Terminal::End(end("inf")), 32).unwrap().value, 1);

    let ladder = build("double_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&ladder, "ends").unwrap();
    let res = lambda_end(&ladder, &spec, &Terminal::End(end("right")), 32).unwrap();
    assert_eq!(res.value, 2);
    assert_eq!(res.cut.value(), 2);

    let tree = build("fig3_tree", &[]).unwrap();
    let spec = TerminalSpec::parse(&tree, "leaves").unwrap();
    for leaf in ["l1", "l2", "l3"] {
        let v = tree.find_vertex(leaf).unwrap();
        assert_eq!(lambda_end(&tree, &spec, &Terminal::Vertex(v), 32).unwrap().value, 1);
    }
}

#[test]
fn lambda_stays_put_after_stabilizing() {
    let p = build("dup_rung_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&p, "ends").unwrap();
    let res = lambda_end(&p, &spec, &Terminal::End(end("left")), 32).unwrap();
    // doubled rungs sit inside cells; the rail pair is still the cheapest cut
    assert_eq!(res.value, 2);
    let tail: Vec<_> = res.sequence.iter().rev().take(2).collect();
    assert!(tail.iter().all(|v| **v == Some(2)));
}

#[test]
fn end_parities() {
    let ray = build("ray", &[]).unwrap();
    assert_eq!(end_degree_parity(&ray, &end("inf"), 32).unwrap().parity, Parity::Odd);
    let ladder = build("double_ladder", &[]).unwrap();
    let res = end_degree_parity(&ladder, &end("left"), 32).unwrap();
    assert_eq!(res.parity, Parity::Even);
    assert_eq!(res.degrees.last().unwrap().1, 2);
    let tree = build("fig3_tree", &[]).unwrap();
    let res = end_degree_parity(&tree, &end("inf"), 32).unwrap();
    assert_eq!(res.parity, Parity::Odd);
    assert_eq!(res.degrees.last().unwrap().1, 1);
}

#[test]
fn inner_eulerian_with_ends() {
    let tree = build("fig3_tree", &[]).unwrap();
    let spec = TerminalSpec::parse(&tree, "leaves").unwrap();
    let v = is_inner_eulerian_with_ends(&tree, &spec, 32).unwrap();
    assert_eq!(v.holds, Some(false));
    assert!(matches!(v.witness, Some(Witness::End { ref end, degree: 1 }) if end == "inf"));

    let dup = build("dup_rung_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&dup, "ends").unwrap();
    assert_eq!(is_inner_eulerian_with_ends(&dup, &spec, 32).unwrap().holds, Some(true));

    let ladder = build("double_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&ladder, "ends").unwrap();
    let v = is_inner_eulerian_with_ends(&ladder, &spec, 32).unwrap();
    assert_eq!(v.holds, Some(false));
    assert!(matches!(v.witness, Some(Witness::Vertex { degree: 3, .. })));
}

#[test]
fn cut_parity_premise() {
    let tree = build("fig3_tree", &[]).unwrap();
    let spec = TerminalSpec::parse(&tree, "leaves").unwrap();
    for r in 1..6 {
        let v = check_cut_parity_premise(&tree, &spec, r, DEFAULT_CUT_GUARD).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness_edges, vec!["e@0".to_string()], "radius {r}");
    }
    let dup = build("dup_rung_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&dup, "ends").unwrap();
    for r in 1..=4 {
        assert!(check_cut_parity_premise(&dup, &spec, r, DEFAULT_CUT_GUARD).unwrap().holds);
    }
    assert!(check_cut_parity_premise(&dup, &spec, 5, DEFAULT_CUT_GUARD).is_err());
}

#[test]
fn discreteness() {
    let dup = build("dup_rung_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&dup, "ends,class:a").unwrap();
    let report = check_discrete(&dup, &spec, 16).unwrap();
    assert!(report.ends.values().all(|v| matches!(v, DiscreteVerdict::NotDiscrete { .. })));

    let ladder = build("double_ladder", &[]).unwrap();
    let spec = TerminalSpec::parse(&ladder, "ends").unwrap();
    let report = check_discrete(&ladder, &spec, 16).unwrap();
    assert!(report.all_separated());
}

#[test]
fn handshake() {
    let ray = build("ray", &[]).unwrap();
    let h = handshake_check(&ray, 32).unwrap();
    assert_eq!((h.status, h.total), (HandshakeStatus::Even, Some(2)));
    let tree = build("fig3_tree", &[]).unwrap();
    let h = handshake_check(&tree, 32).unwrap();
    assert_eq!((h.status, h.total), (HandshakeStatus::Even, Some(4)));
    let dup = build("dup_rung_ladder", &[]).unwrap();
    let h = handshake_check(&dup, 32).unwrap();
    assert_eq!((h.status, h.total), (HandshakeStatus::Even, Some(0)));
    let ladder = build("double_ladder", &[]).unwrap();
    assert_eq!(handshake_check(&ladder, 32).unwrap().status, HandshakeStatus::PotentiallyInfinite);
}

#[test]
fn ray_with_all_vertices_breaks_the_converse() {
    let ray = build("ray", &[]).unwrap();
    let spec = TerminalSpec::parse(&ray, "all").unwrap();
    for r in 1..=12 {
        assert!(check_cut_parity_premise(&ray, &spec, r, DEFAULT_CUT_GUARD).unwrap().holds);
    }
    assert_eq!(is_inner_eulerian_with_ends(&ray, &spec, 32).unwrap().holds, Some(false));
}
