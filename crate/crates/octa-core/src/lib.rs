//! Core library for parity-constrained n-partite n-uniform hypergraphs
//! ("octahedral systems") and the exact geometry they abstract.
//!
//! The central object is [`OctahedralSystem`]: an n-partite n-uniform
//! hypergraph on vertex classes of sizes `(m_1, ..., m_n)` in which every
//! selection of two vertices per class induces an even number of edges.
//! Such systems are exactly the GF(2) span of the class-fiber generators
//! ([`f2`]), which makes them enumerable, countable, and searchable.
//!
//! Modules:
//! - [`shape`], [`system`]: vertices, edges, shapes, the parity predicate.
//! - [`f2`]: the GF(2) vector-space view; counting, span enumeration.
//! - [`constructions`]: explicit small systems (chain, grid, fan, complete).
//! - [`dominance`]: the edge-set containment digraph and sink deletion.
//! - [`bounds`], [`search`]: published bound formulas and the exact
//!   minimum-edge search with symmetry-reduced branch and bound.
//! - [`lemmas`]: structural lower-bound harness driven by the digraph.
//! - [`geometry`]: exact rational colourful point configurations.
//! - [`circle`]: exact planar realizability for `(3,3,3)` systems.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature
//! (default) enables wall-clock budgets, and `parallel` enables rayon
//! data-parallel search.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod circle;
pub mod constructions;
pub mod dominance;
pub mod error;
pub mod f2;
pub mod geometry;
pub mod lemmas;
pub mod search;
pub mod shape;
pub mod system;

pub use error::Error;
pub use shape::{ClassShape, EdgeTuple, VertexRef};
pub use system::{OctahedralSystem, PairSelection, Transversal, VertexSubset};
