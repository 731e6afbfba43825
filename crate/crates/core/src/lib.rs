//! Exact partition functions for the Potts model with a reflecting boundary.
//!
//! The same quantity is computed by three independent routes, all over the
//! exact coefficient ring Q(sqrt f):
//!
//! * direct enumeration of all spin states ([`partition::brute_force_z`]),
//! * the deletion-contraction recursion on boundary graphs
//!   ([`partition::deletion_contraction_z`]),
//! * a Markov trace on the type-B Temperley-Lieb (blob) diagram algebra,
//!   applied to the braid word of a rectangular lattice
//!   ([`braid::lattice_z`]).
//!
//! Their exact, bit-for-bit agreement is the library's central invariant;
//! the [`verify`] module bundles it with the algebraic identities the
//! diagram route rests on.

pub mod braid;
pub mod cli;
pub mod graph;
pub mod model;
pub mod partition;
pub mod qf;
pub mod tlb;
pub mod verify;

pub use braid::{lattice_graph, lattice_z, potts_bracket_lattice, TangleLetter, TangleWord};
pub use graph::{BoundaryGraph, SpinState, VertexId};
pub use model::{make_model, ModelParams, PhysicalParams};
pub use partition::{brute_force_z, deletion_contraction_z, state_weight};
pub use qf::QfScalar;
pub use tlb::{AlgebraElement, BlobDiagram, LoopWeights};
