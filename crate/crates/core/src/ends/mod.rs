// SPDX-License-Identifier: Apache-2.0

//! Locally finite infinite graphs with declared ends, seen through finite
//! windows.

pub mod checks;
pub mod presentation;
pub mod split;
pub mod window;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::EndsError;
use crate::multigraph::VertexId;

pub use checks::{
    check_cut_parity_premise, check_discrete, cut_parity_premise_finite, end_degree_parity, handshake_check,
    is_inner_eulerian_with_ends, lambda_end, DiscreteReport, DiscreteVerdict, HandshakeReport, HandshakeStatus,
    InnerEulerianVerdict, LambdaResult, Parity, ParityResult, PremiseVerdict, Witness, DEFAULT_CUT_GUARD,
    DEFAULT_R_MAX,
};
pub use presentation::{distances, EndId, PeriodicPresentation, Presentation, RayDecl, VRef};
pub use split::SplitPresentation;
pub use window::{window, window_with_horizon, Region, Window, REGION_BASE};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Terminal {
    Vertex(VertexId),
    End(EndId),
}

impl Terminal {
    pub fn label(&self, p: &dyn Presentation) -> String {
        match self {
            Terminal::Vertex(v) => p.vertex_label(*v),
            Terminal::End(e) => format!("end:{e}"),
        }
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminal::Vertex(v) => write!(f, "{v}"),
            Terminal::End(e) => write!(f, "end:{e}"),
        }
    }
}

/// Which vertices are terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexTerminals {
    Finite(BTreeSet<VertexId>),
    /// every copy of the named cell vertices
    Class(BTreeSet<String>),
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalSpec {
    pub vertices: VertexTerminals,
    /// distinct declared ends, in enumeration order
    pub ends: Vec<EndId>,
}

impl TerminalSpec {
    pub fn finite(vertices: impl IntoIterator<Item = VertexId>, ends: impl IntoIterator<Item = EndId>) -> Self {
        TerminalSpec { vertices: VertexTerminals::Finite(vertices.into_iter().collect()), ends: ends.into_iter().collect() }
    }

    pub fn ends_only(ends: impl IntoIterator<Item = EndId>) -> Self {
        Self::finite([], ends)
    }

    pub fn is_vertex_terminal(&self, p: &dyn Presentation, v: VertexId) -> bool {
        match &self.vertices {
            VertexTerminals::Finite(set) => set.contains(&v),
            VertexTerminals::Class(names) => p.vertex_class(v).is_some_and(|c| names.contains(&c)),
            VertexTerminals::All => true,
        }
    }

    pub fn is_end_terminal(&self, e: &EndId) -> bool {
        self.ends.contains(e)
    }

    pub fn finite_vertices(&self) -> Option<&BTreeSet<VertexId>> {
        match &self.vertices {
            VertexTerminals::Finite(set) => Some(set),
            _ => None,
        }
    }

    /// All terminals, vertices first; `None` when infinitely many vertices are terminals.
    pub fn terminals(&self) -> Option<Vec<Terminal>> {
        let vs = self.finite_vertices()?;
        Some(vs.iter().map(|&v| Terminal::Vertex(v)).chain(self.ends.iter().cloned().map(Terminal::End)).collect())
    }

    pub fn contains(&self, p: &dyn Presentation, t: &Terminal) -> bool {
        match t {
            Terminal::Vertex(v) => self.is_vertex_terminal(p, *v),
            Terminal::End(e) => self.is_end_terminal(e),
        }
    }

    /// Parses comma-separated tokens: `leaves`, `ends`, `all`, `class:NAME`,
    /// `end:ID`, or a vertex label.
    pub fn parse(p: &dyn Presentation, text: &str) -> Result<Self, EndsError> {
        let mut finite = BTreeSet::new();
        let mut classes = BTreeSet::new();
        let mut all = false;
        let mut ends: Vec<EndId> = Vec::new();
        let push_end = |e: EndId, ends: &mut Vec<EndId>| {
            if !ends.contains(&e) {
                ends.push(e);
            }
        };
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "leaves" => finite.extend(leaves(p)?),
                "ends" => p.ends().into_iter().for_each(|e| push_end(e, &mut ends)),
                "all" => all = true,
                _ => {
                    if let Some(name) = token.strip_prefix("class:") {
                        classes.insert(name.to_string());
                    } else if let Some(id) = token.strip_prefix("end:") {
                        let e = EndId(id.to_string());
                        if !p.ends().contains(&e) {
                            return Err(EndsError::UnknownEnd(id.to_string()));
                        }
                        push_end(e, &mut ends);
                    } else {
                        let v = p.find_vertex(token).ok_or_else(|| {
                            EndsError::UnsupportedTerminals(format!("no vertex or keyword named `{token}`"))
                        })?;
                        finite.insert(v);
                    }
                }
            }
        }
        let vertices = if all {
            VertexTerminals::All
        } else if !classes.is_empty() {
            if !finite.is_empty() {
                return Err(EndsError::UnsupportedTerminals("cannot mix `class:` with individual vertices".into()));
            }
            VertexTerminals::Class(classes)
        } else {
            VertexTerminals::Finite(finite)
        };
        let spec = TerminalSpec { vertices, ends };
        spec.validate(p)?;
        Ok(spec)
    }

    pub fn validate(&self, p: &dyn Presentation) -> Result<(), EndsError> {
        let declared = p.ends();
        let mut seen = BTreeSet::new();
        for e in &self.ends {
            if !declared.contains(e) {
                return Err(EndsError::UnknownEnd(e.0.clone()));
            }
            if !seen.insert(e) {
                return Err(EndsError::UnsupportedTerminals(format!("end `{e}` listed twice")));
            }
        }
        if let Some(vs) = self.finite_vertices() {
            for &v in vs {
                if p.find_vertex(&p.vertex_label(v)) != Some(v) {
                    return Err(EndsError::Graph(crate::error::GraphError::UnknownVertex(v)));
                }
            }
        }
        Ok(())
    }
}

/// Degree-one vertices; refused when the periodic part has any.
fn leaves(p: &dyn Presentation) -> Result<BTreeSet<VertexId>, EndsError> {
    let radius = p
        .conclusive_radius()
        .ok_or_else(|| EndsError::UnsupportedTerminals("`leaves` needs a connected presentation".into()))?;
    let dist = distances(p, radius);
    let found: BTreeSet<VertexId> = dist.keys().copied().filter(|&v| p.degree(v) == 1).collect();
    if found.iter().any(|&v| dist[&v] + 1 >= radius && p.vertex_class(v).is_some()) {
        return Err(EndsError::UnsupportedTerminals("`leaves` would be infinite".into()));
    }
    Ok(found)
}
