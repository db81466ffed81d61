// SPDX-License-Identifier: Apache-2.0

//! Exhaustive T-path packing for small graphs.
//!
//! This is the independent oracle for the splitting-off solver: it makes no
//! parity assumption and never approximates. Instances above the edge guard
//! are refused.

use std::collections::{BTreeMap, HashMap};

use crate::error::PackError;
use crate::multigraph::{EdgeId, GraphPath, MultiGraph, VertexId};
use crate::tpath::{PathSystem, TerminalSet};

pub const DEFAULT_EDGE_GUARD: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceResult {
    pub max: usize,
    pub system: Option<PathSystem>,
    /// For each terminal, the largest number of edge-disjoint T-paths ending there.
    pub per_terminal: BTreeMap<VertexId, usize>,
}

struct Candidate {
    mask: u64,
    path: GraphPath,
}

/// All T-paths of `g`, each listed once, as edge masks over the edge order.
fn enumerate_tpaths(g: &MultiGraph, t: &TerminalSet, index: &BTreeMap<EdgeId, usize>) -> Vec<Candidate> {
    fn dfs(
        g: &MultiGraph,
        t: &TerminalSet,
        index: &BTreeMap<EdgeId, usize>,
        start: VertexId,
        path: &mut GraphPath,
        mask: u64,
        out: &mut Vec<Candidate>,
    ) {
        let u = path.last();
        for &(e, w) in g.neighbors(u) {
            if path.vertices.contains(&w) {
                continue;
            }
            let bit = 1u64 << index[&e];
            path.push(e, w);
            if t.contains(w) {
                if w > start {
                    out.push(Candidate { mask: mask | bit, path: path.clone() });
                }
            } else {
                dfs(g, t, index, start, path, mask | bit, out);
            }
            path.vertices.pop();
            path.edges.pop();
        }
    }
    let mut out = Vec::new();
    for s in t.iter() {
        let mut path = GraphPath::single(s);
        dfs(g, t, index, s, &mut path, 0, &mut out);
    }
    out
}

struct Packer<'a> {
    candidates: Vec<&'a Candidate>,
    /// candidate indices containing each edge bit
    by_edge: Vec<Vec<usize>>,
    memo: HashMap<u64, usize>,
}

impl<'a> Packer<'a> {
    fn new(candidates: Vec<&'a Candidate>, edges: usize) -> Self {
        let mut by_edge = vec![Vec::new(); edges];
        for (i, c) in candidates.iter().enumerate() {
            for (b, list) in by_edge.iter_mut().enumerate() {
                if c.mask >> b & 1 == 1 {
                    list.push(i);
                }
            }
        }
        Packer { candidates, by_edge, memo: HashMap::new() }
    }

    /// Largest packing using only edges in `avail`.
    fn best(&mut self, avail: u64) -> usize {
        if avail == 0 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&avail) {
            return v;
        }
        let low = avail.trailing_zeros() as usize;
        let mut best = self.best(avail & !(1 << low));
        for k in 0..self.by_edge[low].len() {
            let c = self.by_edge[low][k];
            let m = self.candidates[c].mask;
            if m & avail == m {
                best = best.max(1 + self.best(avail & !m));
            }
        }
        self.memo.insert(avail, best);
        best
    }

    fn reconstruct(&mut self, mut avail: u64) -> Vec<GraphPath> {
        let mut out = Vec::new();
        while avail != 0 {
            let target = self.best(avail);
            if target == 0 {
                break;
            }
            let low = avail.trailing_zeros() as usize;
            let mut chosen = None;
            for k in 0..self.by_edge[low].len() {
                let c = self.by_edge[low][k];
                let m = self.candidates[c].mask;
                if m & avail == m && 1 + self.best(avail & !m) == target {
                    chosen = Some(c);
                    break;
                }
            }
            match chosen {
                Some(c) => {
                    out.push(self.candidates[c].path.clone());
                    avail &= !self.candidates[c].mask;
                }
                None => avail &= !(1 << low),
            }
        }
        out
    }
}

pub fn brute_force_pack(g: &MultiGraph, t: &TerminalSet) -> Result<BruteForceResult, PackError> {
    brute_force_pack_with_guard(g, t, DEFAULT_EDGE_GUARD)
}

pub fn brute_force_pack_with_guard(g: &MultiGraph, t: &TerminalSet, guard: usize) -> Result<BruteForceResult, PackError> {
    let m = g.num_edges();
    if m > guard.min(64) {
        return Err(PackError::TooLarge { edges: m, guard: guard.min(64) });
    }
    let index: BTreeMap<EdgeId, usize> = g.edges().enumerate().map(|(i, (e, _, _))| (e, i)).collect();
    let candidates = enumerate_tpaths(g, t, &index);
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };

    let mut packer = Packer::new(candidates.iter().collect(), m);
    let max = packer.best(all);
    let system = (max > 0).then(|| PathSystem { paths: packer.reconstruct(all) });

    let mut per_terminal = BTreeMap::new();
    for s in t.iter() {
        let at_s: Vec<&Candidate> =
            candidates.iter().filter(|c| c.path.first() == s || c.path.last() == s).collect();
        per_terminal.insert(s, Packer::new(at_s, m).best(all));
    }
    Ok(BruteForceResult { max, system, per_terminal })
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn terms(g: &MultiGraph, vs: &[u64]) -> TerminalSet {
        TerminalSet::new(g, vs.iter().map(|&v| VertexId(v))).unwrap()
    }

    #[test]
    fn star3_attains_only_one() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let r = brute_force_pack(&g, &terms(&g, &[1, 2, 3])).unwrap();
        assert_eq!(r.max, 1);
        assert!(r.per_terminal.values().all(|&v| v == 1));
    }

    #[test]
    fn star4_and_single_edge() {
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let r = brute_force_pack(&g, &terms(&g, &[1, 2, 3, 4])).unwrap();
        assert_eq!(r.max, 2);
        assert_eq!(r.system.unwrap().len(), 2);
        let e = graph(2, &[(0, 1)]);
        assert_eq!(brute_force_pack(&e, &terms(&e, &[0, 1])).unwrap().max, 1);
    }

    #[test]
    fn refuses_large_instances() {
        let edges: Vec<(u64, u64)> = (0..13).map(|_| (0, 1)).collect();
        let g = graph(2, &edges);
        assert!(matches!(brute_force_pack(&g, &terms(&g, &[0, 1])), Err(PackError::TooLarge { .. })));
        assert_eq!(brute_force_pack_with_guard(&g, &terms(&g, &[0, 1]), 13).unwrap().max, 13);
    }

    #[test]
    fn paths_never_pass_through_terminals() {
        // 0 - 1 - 2 with all three terminal: two paths 0-1, 1-2, never 0-1-2
        let g = graph(3, &[(0, 1), (1, 2)]);
        let r = brute_force_pack(&g, &terms(&g, &[0, 1, 2])).unwrap();
        assert_eq!(r.max, 2);
        assert!(r.system.unwrap().paths.iter().all(|p| p.len() == 1));
    }
}
