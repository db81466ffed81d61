// SPDX-License-Identifier: Apache-2.0

//! Exhaustive small-instance corpus: connected loopless multigraphs, one per
//! isomorphism class.

use std::collections::BTreeSet;

use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// Unordered vertex pairs of `K_n` in lexicographic order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn go(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    go(0, &mut perm, &mut out);
    out
}

/// Lexicographically largest multiplicity vector over all relabellings.
fn canonical(mult: &[u8], pairs: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<u8> {
    let index = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).expect("pair")
    };
    perms
        .iter()
        .map(|pi| pairs.iter().map(|&(a, b)| mult[index(pi[a], pi[b])]).collect::<Vec<u8>>())
        .max()
        .expect("at least one permutation")
}

fn connected(mult: &[u8], n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mult[k] > 0 && (a == v || b == v) {
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn build(mult: &[u8], n: usize, pairs: &[(usize, usize)]) -> MultiGraph {
    let mut g = MultiGraph::new();
    for i in 0..n {
        g.add_labeled_vertex(VertexId(i as u64), format!("v{i}"));
    }
    let mut next = 0u64;
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for _ in 0..mult[k] {
            g.add_labeled_edge(EdgeId(next), VertexId(a as u64), VertexId(b as u64), format!("e{next}")).expect("fresh edge");
            next += 1;
        }
    }
    g
}

/// All connected loopless multigraphs with `2 ≤ |V| ≤ max_vertices` and
/// `|E| ≤ max_edges`, one per isomorphism class, in a fixed order.
pub fn connected_multigraphs(max_vertices: usize, max_edges: usize) -> Vec<MultiGraph> {
    let mut out = Vec::new();
    for n in 2..=max_vertices {
        let ps = pairs(n);
        let perms = permutations(n);
        let mut classes = BTreeSet::new();
        let mut mult = vec![0u8; ps.len()];
        // every multiplicity vector with total at most max_edges
        fn visit(
            k: usize,
            left: usize,
            mult: &mut Vec<u8>,
            n: usize,
            ps: &[(usize, usize)],
            perms: &[Vec<usize>],
            classes: &mut BTreeSet<Vec<u8>>,
        ) {
            if k == mult.len() {
                if connected(mult, n, ps) {
                    classes.insert(canonical(mult, ps, perms));
                }
                return;
            }
            for m in 0..=left {
                mult[k] = m as u8;
                visit(k + 1, left - m, mult, n, ps, perms, classes);
            }
            mult[k] = 0;
        }
        visit(0, max_edges, &mut mult, n, &ps, &perms, &mut classes);
        out.extend(classes.iter().map(|m| build(m, n, &ps)));
    }
    out
}

/// Every vertex subset of size at least two, smallest masks first.
pub fn terminal_subsets(g: &MultiGraph) -> Vec<BTreeSet<VertexId>> {
    let vs: Vec<VertexId> = g.vertices().collect();
    (0u32..1 << vs.len())
        .filter(|m| m.count_ones() >= 2)
        .map(|m| vs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect()
}
