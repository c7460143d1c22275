//! Exact combinatorial topology on small simplicial complexes.

pub mod bistellar;
pub mod catalog;
pub mod census;
pub mod collapse;
pub mod complex;
pub mod homology;
pub mod io;
pub mod recognition;
pub mod structure;

pub use complex::{Face, SimplicialComplex, Vertex};
