//! Kernel–covariance pairs of graph correspondences.
//!
//! The gauge-equivariant representations of a graph correspondence (and so
//! the gauge-invariant ideals of its Toeplitz algebra) are classified by pairs
//! of vertex sets `(K, I)`. This crate enumerates those pairs, computes meets,
//! joins and connecting morphisms, builds Katsura dilation graphs, and checks
//! the classification on finite-dimensional Fock-space realizations.

pub mod cli;
pub mod corpus;
pub mod dilation;
pub mod error;
pub mod fock;
pub mod graph;
pub mod ideals;
pub mod lattice;
pub mod linalg;

pub use error::{Error, Result};
pub use graph::{Graph, Path, VertexSet};
pub use ideals::Pair;
