//! Kernelization for constrained diverse spanning tree problems.
//!
//! Given a connected graph and integers `k, ell`, both problems ask for
//! `ell` spanning trees whose edge sets pairwise differ in at least `k`
//! edges, subject to per-tree constraints:
//!
//! * **leaf & internal** ([`Instance`]): every tree has at least `p` leaves
//!   and at least `q` internal vertices;
//! * **leaf & non-terminal** ([`InstanceNT`]): every tree has at least `p`
//!   leaves and every vertex of a given set is internal.
//!
//! [`kernel`] shrinks an instance to size polynomial in `p + q + k*ell`
//! (respectively `|V_NT| + p + k*ell`), [`oracle`] decides small instances
//! exactly, and [`spantree`] / [`diversify`] contain the constructive
//! building blocks used to certify large yes-instances.

pub mod blackbox;
pub mod diversify;
mod dsu;
pub mod graph;
pub mod instance;
pub mod kernel;
pub mod oracle;
pub mod spantree;

pub use graph::{Degree2Path, Edge, Graph, GraphError, Vertex, VertexSet};
pub use instance::{Constraints, Instance, InstanceError, InstanceNT};
pub use spantree::SpanningTree;

/// `ceil(k / 4)`, the block size of the diverse family construction.
pub fn quarter_ceil(k: usize) -> usize {
    k.div_ceil(4)
}
