//! Exact measures of edge-uncolorability for cubic graphs.

pub mod bitset;
pub mod budget;
pub mod coloring;
pub mod constructions;
pub mod factors;
pub mod flows;
pub mod graph;
pub mod io;
pub mod maxflow;
pub mod multipole;
mod search;
pub mod structure;

pub use bitset::BitSet;
pub use budget::{Budget, BudgetExhausted};
pub use graph::{as_cubic, CubicGraph, EdgeId, GraphError, Incidence, MultiGraph, VertexId};
