// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use tpack::arcs::{assemble_arcs, fitting_radius, verify_arc_system, ArcOptions};
use tpack::brute::brute_force_pack;
use tpack::ends::{
    check_cut_parity_premise, handshake_check, is_inner_eulerian_with_ends, lambda_end, window, EndId, HandshakeStatus,
    PeriodicPresentation, Presentation, RayDecl, Terminal, TerminalSpec, VRef, DEFAULT_CUT_GUARD,
};
use tpack::flow::{edge_disjoint_paths, min_cut};
use tpack::io::{parse_periodic, periodic_to_json};
use tpack::tpath::{is_inner_eulerian, lambda_profile, pack_tpaths, verify_packing};
use tpack::{contract, ArcError, MultiGraph, TerminalSet, VertexId};

fn multigraph(max_n: u64, max_m: usize) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |pairs| {
            let edges: Vec<(u64, u64)> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            common::graph(n, &edges)
        })
    })
}

fn terminal_mask(g: &MultiGraph, mask: u32) -> BTreeSet<VertexId> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut t: BTreeSet<VertexId> = vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
    for &v in &vs {
        if t.len() >= 2 {
            break;
        }
        t.insert(v);
    }
    t
}

/// Pairs up odd non-terminals with fresh edges; a leftover goes to a terminal.
fn make_inner_eulerian(g: &mut MultiGraph, t: &BTreeSet<VertexId>) {
    let odd: Vec<VertexId> = g.vertices().filter(|v| !t.contains(v) && g.neighbors(*v).len() % 2 == 1).collect();
    let mut it = odd.chunks(2);
    for pair in &mut it {
        let other = if pair.len() == 2 { pair[1] } else { *t.iter().next().unwrap() };
        let e = g.next_edge_id();
        g.add_labeled_edge(e, pair[0], other, format!("e{}", e.0)).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn min_cut_equals_menger_and_enumeration(g in multigraph(6, 10), a in 0u64..6, b in 0u64..6) {
        let n = g.num_vertices() as u64;
        let (x, y) = (VertexId(a % n), VertexId(b % n));
        prop_assume!(x != y);
        let (xs, ys) = (BTreeSet::from([x]), BTreeSet::from([y]));
        let (cut, value) = min_cut(&g, &xs, &ys).unwrap();
        prop_assert_eq!(cut.value(), value);
        prop_assert!(cut.side_a.contains(&x) && !cut.side_a.contains(&y));
        prop_assert_eq!(value, common::brute_min_cut(&g, &xs, &ys));
        let paths = edge_disjoint_paths(&g, &xs, &ys, value).unwrap();
        prop_assert!(common::edge_disjoint(&paths));
        prop_assert!(paths.iter().all(|p| common::is_walk_in(&g, p) && p.first() == x && p.last() == y));
        prop_assert!(edge_disjoint_paths(&g, &xs, &ys, value + 1).is_err());
    }

    #[test]
    fn packing_attains_half_lambda_sum(mut g in multigraph(6, 9), mask in 0u32..64) {
        let ts = terminal_mask(&g, mask);
        make_inner_eulerian(&mut g, &ts);
        let t = TerminalSet::new(&g, ts.iter().copied()).unwrap();
        prop_assert!(is_inner_eulerian(&g, &t).holds);
        let (paths, cert) = pack_tpaths(&g, &t).unwrap();
        prop_assert!(verify_packing(&g, &t, &paths, &cert).is_empty());
        let lambdas: Vec<usize> = ts.iter().map(|&s| common::brute_lambda(&g, s, &ts)).collect();
        let sum: usize = lambdas.iter().sum();
        prop_assert_eq!(sum % 2, 0);
        prop_assert_eq!(2 * paths.len(), sum);
        for (&s, &l) in ts.iter().zip(&lambdas) {
            prop_assert_eq!(paths.count_at(s), l);
        }
        if g.num_edges() <= 12 {
            prop_assert_eq!(brute_force_pack(&g, &t).unwrap().max, paths.len());
        }
    }

    #[test]
    fn no_packing_beats_half_lambda_sum(g in multigraph(5, 9), mask in 0u32..32) {
        let ts = terminal_mask(&g, mask);
        let t = TerminalSet::new(&g, ts.iter().copied()).unwrap();
        let sum: usize = lambda_profile(&g, &t).unwrap().values().sum();
        prop_assert!(2 * brute_force_pack(&g, &t).unwrap().max <= sum);
    }

    #[test]
    fn packing_is_deterministic(mut g in multigraph(6, 9), mask in 0u32..64) {
        let ts = terminal_mask(&g, mask);
        make_inner_eulerian(&mut g, &ts);
        let t = TerminalSet::new(&g, ts.iter().copied()).unwrap();
        prop_assert_eq!(pack_tpaths(&g, &t).unwrap(), pack_tpaths(&g, &t).unwrap());
    }

    #[test]
    fn contraction_keeps_crossing_edges(g in multigraph(6, 10), mask in 0u32..64) {
        let class = terminal_mask(&g, mask);
        let connected = g.induced_subgraph(&class).is_connected();
        let Ok(minor) = contract(&g, std::slice::from_ref(&class)) else {
            prop_assert!(!connected);
            return Ok(());
        };
        prop_assert!(connected);
        let inside = g.edges().filter(|(_, u, v)| class.contains(u) && class.contains(v)).count();
        prop_assert_eq!(minor.minor.num_edges(), g.num_edges() - inside);
        prop_assert_eq!(minor.minor.num_vertices(), g.num_vertices() - class.len() + 1);
    }

    #[test]
    fn walk_trimming_keeps_endpoints(g in multigraph(5, 10), start in 0u64..5, steps in prop::collection::vec(0usize..8, 0..12)) {
        let mut v = VertexId(start % g.num_vertices() as u64);
        let mut walk = tpack::GraphPath::single(v);
        for s in steps {
            let nb = g.neighbors(v);
            if nb.is_empty() { break; }
            let (e, w) = nb[s % nb.len()];
            walk.push(e, w);
            v = w;
        }
        let t = walk.trim_cycles();
        prop_assert!(t.is_simple());
        prop_assert_eq!(t.first(), walk.first());
        prop_assert_eq!(t.last(), walk.last());
        prop_assert!(common::is_walk_in(&g, &t));
        prop_assert_eq!(walk.reversed().reversed(), walk);
    }
}

/// Random periodic graph whose rays follow the rail of vertex 0.
fn periodic() -> impl Strategy<Value = PeriodicPresentation> {
    (1usize..=3, any::<bool>()).prop_flat_map(|(c, two_way)| {
        (
            prop::collection::vec((0..c, 0..c), 0..=3),
            prop::collection::vec((0..c, 0..c), 0..=2),
            Just((c, two_way)),
        )
            .prop_map(|(cell_edges, extra_glue, (c, two_way))| {
                let cell_edges: Vec<_> =
                    cell_edges.into_iter().filter(|(a, b)| a != b).enumerate().map(|(i, (a, b))| (format!("r{i}"), a, b)).collect();
                let glue = std::iter::once((0, 0))
                    .chain(extra_glue)
                    .enumerate()
                    .map(|(i, (a, b))| (format!("g{i}"), a, b))
                    .collect();
                let mut rays = vec![RayDecl { id: EndId("right".into()), start_cell: 0, direction: 1, pattern: vec![0] }];
                if two_way {
                    rays.push(RayDecl { id: EndId("left".into()), start_cell: 0, direction: -1, pattern: vec![0] });
                }
                PeriodicPresentation {
                    name: "random".into(),
                    head: vec![],
                    head_edges: vec![],
                    cell: (0..c).map(|i| format!("v{i}")).collect(),
                    cell_edges,
                    glue,
                    two_way,
                    root: VRef::Cell(0, 0),
                    rays,
                    horizon: 4,
                }
            })
    })
    .prop_filter("connected and valid", |p| p.validate().is_ok() && p.conclusive_radius().is_some())
}

fn default_spec(p: &PeriodicPresentation) -> TerminalSpec {
    TerminalSpec::parse(p, if p.two_way { "ends" } else { "v0@0,ends" }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn periodic_descriptions_round_trip(p in periodic()) {
        let text = serde_json::to_string(&periodic_to_json(&p)).unwrap();
        prop_assert_eq!(parse_periodic(&text).unwrap(), p);
    }

    #[test]
    fn windows_keep_core_degrees(p in periodic(), r in 1usize..7) {
        let w = window(&p, r).unwrap();
        for &v in &w.core {
            if w.dist[&v] < r {
                prop_assert_eq!(w.graph.neighbors(v).len(), p.degree(v));
            }
        }
        prop_assert_eq!(w.regions.iter().filter(|g| !g.ends.is_empty()).count(), p.ends().len().min(w.regions.len()));
    }

    #[test]
    fn handshake_is_never_odd(p in periodic()) {
        prop_assert_ne!(handshake_check(&p, 24).unwrap().status, HandshakeStatus::Odd);
    }

    #[test]
    fn lambda_certificate_persists(p in periodic()) {
        let spec = default_spec(&p);
        for t in spec.terminals().unwrap() {
            let res = lambda_end(&p, &spec, &t, 24).unwrap();
            prop_assert_eq!(res.cut.value(), res.value);
            for extra in 1..=3 {
                let w = window(&p, res.radius + extra).unwrap();
                let x = w.terminal_image(&t).unwrap();
                let rest = w.rest_images(&p, &spec, Some(&t));
                let (_, value) = min_cut(&w.graph, &BTreeSet::from([x]), &rest).unwrap();
                prop_assert_eq!(value, res.value);
            }
        }
    }

    #[test]
    fn inner_eulerian_implies_premise(p in periodic()) {
        let spec = default_spec(&p);
        if is_inner_eulerian_with_ends(&p, &spec, 24).unwrap().holds == Some(true) {
            let top = fitting_radius(&p, 12, DEFAULT_CUT_GUARD).unwrap().unwrap_or(0);
            for r in 1..=top {
                prop_assert!(check_cut_parity_premise(&p, &spec, r, DEFAULT_CUT_GUARD).unwrap().holds);
            }
        }
    }

    #[test]
    fn arc_systems_verify_or_fail_cleanly(p in periodic()) {
        let spec = default_spec(&p);
        match assemble_arcs(&p, &spec, 6, 20, &ArcOptions::default()) {
            Ok((sys, state)) => {
                let violations = verify_arc_system(&p, &spec, &sys, &state).unwrap();
                prop_assert!(violations.is_empty(), "{:?}", violations);
                for t in spec.terminals().unwrap() {
                    prop_assert_eq!(sys.per_terminal_counts[&t], state.lambda[&t]);
                }
            }
            Err(e) => prop_assert!(
                matches!(e, ArcError::PremiseFailed(_) | ArcError::PremiseUnverified(_)),
                "unexpected failure: {}", e
            ),
        }
    }

    #[test]
    fn finite_presentations_degenerate(g in multigraph(5, 8), mask in 0u32..32) {
        prop_assume!(g.is_connected());
        let ts = terminal_mask(&g, mask);
        let p = PeriodicPresentation::from_finite("g", &g, None).unwrap();
        let spec = TerminalSpec::finite(ts.iter().copied(), []);
        let t = TerminalSet::new(&g, ts.iter().copied()).unwrap();
        let profile = lambda_profile(&g, &t).unwrap();
        for &s in &ts {
            prop_assert_eq!(lambda_end(&p, &spec, &Terminal::Vertex(s), 16).unwrap().value, profile[&s]);
        }
        let whole = p.conclusive_radius().unwrap();
        let premise = check_cut_parity_premise(&p, &spec, whole, DEFAULT_CUT_GUARD).unwrap();
        prop_assert_eq!(premise.holds, is_inner_eulerian(&g, &t).holds);
    }
}
