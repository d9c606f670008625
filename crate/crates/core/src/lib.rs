//! Rotation graphs of small graphs: explicit construction of the 1-skeleton
//! of graph associahedra, the structure induced on them by adding simplicial
//! vertices, true twins, and false twins (partitions into paths, edge
//! decompositions, embedded copies, quotient maps), constructive colorings,
//! and distance/diameter computations.

pub mod coloring;
pub mod corpus;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod report;
pub mod rotation;
pub mod structure;
pub mod tree;
pub mod verify;

pub use graph::{make_family, FamilySpec, Graph, Vertex, VertexSet};
pub use rotation::{rotate, RotationGraph};
pub use tree::{tree_from_order, validate, ElimTree, TreeKey};
