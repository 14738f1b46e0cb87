//! Finite spaces: affine and projective spaces over the field with one element,
//! their subspaces, and simplicial complexes as closed subsets.

mod simplicial;
mod space;

use thiserror::Error;

pub use simplicial::{vertex_list, SimplicialComplex};
pub use space::{elements, subset_label, Ground, Poset, MAX_AMBIENT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("ambient dimension {0} exceeds the enumeration bound {MAX_AMBIENT}")]
    AmbientTooLarge(usize),
    #[error("abstract posets are limited to 64 elements, got {0}")]
    TooManyElements(usize),
    #[error("point key {0:#b} lies outside the ground set")]
    KeyOutOfRange(u64),
    #[error("relations contain a cycle")]
    NotAntisymmetric,
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{0} is not a face of the complex")]
    NotAFace(String),
    #[error("{0} is not a point of the space")]
    NotAPoint(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
