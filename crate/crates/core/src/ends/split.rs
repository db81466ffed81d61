// SPDX-License-Identifier: Apache-2.0

//! Terminal endpoint splitting.
//!
//! Every vertex terminal except an optional kept one is replaced by one
//! pendant copy per incident edge, so a path can end at a terminal but
//! never pass through it.

use crate::ends::presentation::{EndId, Presentation};
use crate::ends::TerminalSpec;
use crate::error::EndsError;
use crate::multigraph::{EdgeId, VertexId};

/// Copy `j` of vertex `v` has id `COPY_BASE + 64·v + j`.
pub const COPY_BASE: u64 = 1 << 61;
const MAX_SPLIT_DEGREE: usize = 64;

pub struct SplitPresentation<'a> {
    inner: &'a dyn Presentation,
    spec: &'a TerminalSpec,
    keep: Option<VertexId>,
    root: VertexId,
}

impl<'a> SplitPresentation<'a> {
    pub fn new(inner: &'a dyn Presentation, spec: &'a TerminalSpec, keep: Option<VertexId>, root: VertexId) -> Result<Self, EndsError> {
        let sp = SplitPresentation { inner, spec, keep, root };
        if sp.is_split(root) {
            return Err(EndsError::UnsupportedTerminals(format!("root `{}` would be split", inner.vertex_label(root))));
        }
        Ok(sp)
    }

    pub fn is_split(&self, v: VertexId) -> bool {
        v.0 < COPY_BASE && Some(v) != self.keep && self.spec.is_vertex_terminal(self.inner, v)
    }

    pub fn is_copy(v: VertexId) -> bool {
        v.0 >= COPY_BASE && v.0 < COPY_BASE << 1
    }

    fn decode_copy(v: VertexId) -> (VertexId, usize) {
        let rest = v.0 - COPY_BASE;
        (VertexId(rest / MAX_SPLIT_DEGREE as u64), (rest % MAX_SPLIT_DEGREE as u64) as usize)
    }

    fn copy_id(v: VertexId, j: usize) -> VertexId {
        assert!(j < MAX_SPLIT_DEGREE && v.0 < COPY_BASE / MAX_SPLIT_DEGREE as u64, "vertex too large to split");
        VertexId(COPY_BASE + v.0 * MAX_SPLIT_DEGREE as u64 + j as u64)
    }

    fn image(&self, e: EdgeId, w: VertexId) -> VertexId {
        if self.is_split(w) {
            let j = self.inner.neighbors(w).iter().position(|&(f, _)| f == e).expect("symmetric adjacency");
            Self::copy_id(w, j)
        } else {
            w
        }
    }
}

impl Presentation for SplitPresentation<'_> {
    fn root(&self) -> VertexId {
        self.root
    }

    fn neighbors(&self, v: VertexId) -> Vec<(EdgeId, VertexId)> {
        if Self::is_copy(v) {
            let (orig, j) = Self::decode_copy(v);
            let (e, w) = self.inner.neighbors(orig)[j];
            return vec![(e, self.image(e, w))];
        }
        self.inner.neighbors(v).into_iter().map(|(e, w)| (e, self.image(e, w))).collect()
    }

    fn ends(&self) -> Vec<EndId> {
        self.inner.ends()
    }

    fn ray_vertex(&self, end: &EndId, index: usize) -> Option<VertexId> {
        self.inner.ray_vertex(end, index).filter(|&v| !self.is_split(v))
    }

    fn vertex_label(&self, v: VertexId) -> String {
        if Self::is_copy(v) {
            let (orig, j) = Self::decode_copy(v);
            format!("{}#{}", self.inner.vertex_label(orig), j)
        } else {
            self.inner.vertex_label(v)
        }
    }

    fn edge_label(&self, e: EdgeId) -> String {
        self.inner.edge_label(e)
    }

    fn find_vertex(&self, label: &str) -> Option<VertexId> {
        match label.rsplit_once('#') {
            Some((base, j)) => {
                let v = self.inner.find_vertex(base)?;
                let j: usize = j.parse().ok()?;
                (self.is_split(v) && j < self.inner.degree(v)).then(|| Self::copy_id(v, j))
            }
            None => self.inner.find_vertex(label).filter(|&v| !self.is_split(v)),
        }
    }

    fn conclusive_radius(&self) -> Option<usize> {
        self.inner.conclusive_radius()
    }

    fn periodic_odd(&self) -> Option<bool> {
        self.inner.periodic_odd()
    }

    fn horizon(&self) -> usize {
        self.inner.horizon()
    }
}
