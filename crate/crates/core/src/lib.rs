// SPDX-License-Identifier: Apache-2.0

//! Edge-disjoint T-path packing in finite multigraphs and T-arc systems in
//! locally finite graphs seen through finite windows.

pub mod arcs;
pub mod brute;
pub mod cli;
pub mod corpus;
pub mod ends;
pub mod error;
pub mod flow;
pub mod io;
pub mod multigraph;
pub mod rays;
pub mod tpath;
pub mod zoo;

pub use error::{ArcError, EndsError, GraphError, PackError, ZooError};
pub use multigraph::{contract, ContractionMinor, Cut, EdgeId, GraphPath, MultiGraph, VertexId};
pub use tpath::{PathSystem, PackingCertificate, TerminalSet};
