// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::multigraph::{Cut, EdgeId, VertexId};

#[derive(Debug, Clone, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge `{edge}` is a loop at `{vertex}`; loops are not allowed")]
    Loop { edge: String, vertex: String },
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("{0} must be nonempty")]
    EmptySet(&'static str),
    #[error("vertex sets must be disjoint (`{0}` is in both)")]
    NotDisjoint(String),
    #[error("contraction classes overlap at `{0}`")]
    OverlappingClasses(String),
    #[error("contraction class {0} does not induce a connected subgraph")]
    DisconnectedClass(usize),
    #[error("requested {requested} edge-disjoint paths but the maximum is {available}")]
    Infeasible { requested: usize, available: usize, cut: Box<Cut> },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Error)]
pub enum PackError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not inner-Eulerian: non-terminal `{label}` has odd degree")]
    NotInnerEulerian { witness: VertexId, label: String },
    #[error("splitting-off search exhausted its budget of {0} nodes")]
    BudgetExhausted(usize),
    #[error("instance has {edges} edges, brute force is limited to {guard}")]
    TooLarge { edges: usize, guard: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Error)]
pub enum EndsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown end `{0}`")]
    UnknownEnd(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("ray representative of end `{end}` escapes its component: {detail}")]
    RayEscapes { end: String, detail: String },
    #[error("{what} did not stabilize up to radius {r_max}; values {sequence:?}")]
    Unstabilized { what: String, r_max: usize, sequence: Vec<Option<usize>> },
    #[error("terminal `{terminal}` is not separated from the other terminals at radius {radius}")]
    NotSeparable { terminal: String, radius: usize },
    #[error("window has {vertices} vertices, exhaustive enumeration is limited to {guard}")]
    WindowTooLarge { vertices: usize, guard: usize },
    #[error("unsupported terminal specification: {0}")]
    UnsupportedTerminals(String),
    #[error("ray extension failed: {0}")]
    ExtensionFailed(String),
    #[error("consistency error: {0}")]
    Consistency(String),
}

#[derive(Debug, Clone, Error)]
pub enum ArcError {
    #[error(transparent)]
    Ends(#[from] EndsError),
    #[error(transparent)]
    Pack(#[from] PackError),
    #[error("premise fails: {0}")]
    PremiseFailed(String),
    #[error("premise could not be verified: {0}")]
    PremiseUnverified(String),
    #[error("terminal set is not certified discrete: {0}")]
    NotDiscrete(String),
    #[error("truncated minor is not inner-Eulerian for its terminals: `{0}` has odd degree")]
    TruncationNotInnerEulerian(String),
    #[error("pipeline invariant violated: {0}")]
    Invariant(String),
}

impl From<GraphError> for ArcError {
    fn from(e: GraphError) -> Self {
        ArcError::Ends(EndsError::Graph(e))
    }
}

#[derive(Debug, Clone, Error)]
pub enum ZooError {
    #[error("unknown zoo entry `{0}`; try `zoo list`")]
    UnknownName(String),
    #[error("entry `{name}` expects {expected}, got {got:?}")]
    BadParams { name: String, expected: String, got: Vec<usize> },
    #[error("entry `{name}` failed its property audit: {detail}")]
    AuditFailed { name: String, detail: String },
    #[error(transparent)]
    Ends(#[from] EndsError),
}
