//! Computations with locally gentle pairs and their semilinear algebras.
//!
//! The crate provides:
//!
//! - [`quiver`]: quivers with quadratic zero-relations, validation of the
//!   locally gentle conditions, vertex classification, admissible paths,
//!   and random instance generation;
//! - [`zembyk`]: the levee surgery at a relational vertex and the full
//!   excision into relation-free line and cycle quivers;
//! - [`surface`]: the combinatorial surface model (fans, faces, Euler
//!   characteristic, boundary walks), labeled tilings, and the split;
//! - [`words`]: strings and bands over signed arrow letters with
//!   admissibility, canonical forms, and enumeration;
//! - [`galois`]: finite fields, Frobenius and free-word automorphism
//!   backends, and the automorphism sequences attached to words;
//! - [`algebra`]: arithmetic in the semilinear path algebra modulo the
//!   relation ideal;
//! - [`reps`]: semilinear quiver representations, string and band modules,
//!   hom spaces over the prime field, and indecomposability testing;
//! - [`nodal`]: the embedding of a gentle algebra into the hereditary
//!   algebra of its excision and the nodal condition report.

pub mod algebra;
pub mod fixtures;
pub mod galois;
pub mod nodal;
pub mod quiver;
pub mod reps;
pub mod surface;
pub mod words;
pub mod zembyk;
