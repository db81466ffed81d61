// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use tpack::brute::brute_force_pack;
use tpack::tpath::{is_inner_eulerian, lambda_profile, pack_tpaths, verify_packing};
use tpack::zoo::build;
use tpack::{PackError, TerminalSet, VertexId};

fn leaves(g: &tpack::MultiGraph) -> BTreeSet<VertexId> {
    g.vertices().filter(|&v| g.neighbors(v).len() == 1).collect()
}

#[test]
fn star4_packs_two_paths() {
    let g = build("star", &[4]).unwrap().finite_graph().unwrap();
    let t = TerminalSet::new(&g, leaves(&g)).unwrap();
    let (paths, cert) = pack_tpaths(&g, &t).unwrap();
    assert_eq!(paths.len(), 2);
    assert!(verify_packing(&g, &t, &paths, &cert).is_empty());
}

#[test]
fn star3_is_the_counterexample() {
    let g = build("star", &[3]).unwrap().finite_graph().unwrap();
    let t = TerminalSet::new(&g, leaves(&g)).unwrap();
    let center = g.find_vertex("c").unwrap();
    assert!(matches!(pack_tpaths(&g, &t), Err(PackError::NotInnerEulerian { witness, .. }) if witness == center));
    let lambda = lambda_profile(&g, &t).unwrap();
    assert_eq!(lambda.values().sum::<usize>(), 3);
    assert_eq!(brute_force_pack(&g, &t).unwrap().max, 1);
}

#[test]
fn cycles_and_parallels_against_the_oracle() {
    for (name, params, terms) in [
        ("cycle", vec![6], vec!["c0", "c3"]),
        ("cycle", vec![5], vec!["c0", "c1", "c3"]),
        ("parallel", vec![4], vec!["u", "v"]),
        ("path", vec![5], vec!["p0", "p4"]),
    ] {
        let g = build(name, &params).unwrap().finite_graph().unwrap();
        let ts: BTreeSet<VertexId> = terms.iter().map(|l| g.find_vertex(l).unwrap()).collect();
        let t = TerminalSet::new(&g, ts.iter().copied()).unwrap();
        assert!(is_inner_eulerian(&g, &t).holds);
        let (paths, cert) = pack_tpaths(&g, &t).unwrap();
        assert!(verify_packing(&g, &t, &paths, &cert).is_empty());
        let sum: usize = ts.iter().map(|&s| common::brute_lambda(&g, s, &ts)).sum();
        assert_eq!(2 * paths.len(), sum, "{name}");
        assert_eq!(brute_force_pack(&g, &t).unwrap().max, paths.len(), "{name}");
    }
}

#[test]
fn k4_with_all_terminals_is_not_required_to_be_even() {
    // all vertices terminals: inner-Eulerian holds vacuously
    let g = common::graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let t = TerminalSet::new(&g, g.vertices()).unwrap();
    let (paths, _) = pack_tpaths(&g, &t).unwrap();
    assert_eq!(paths.len(), 6);
}
