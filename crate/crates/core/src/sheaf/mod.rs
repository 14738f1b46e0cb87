//! Sheaves of free modules on finite posets, their morphisms, complexes and
//! standard resolutions.

mod complex;
mod construct;
mod data;
mod morphism;
mod resolution;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::poset::PosetError;

pub use complex::SheafComplex;
pub use construct::{is_locally_closed, random_map, random_sheaf, HomBasis};
pub use data::Sheaf;
pub use morphism::SheafMorphism;
pub use resolution::{
    append_term, koszul_complex, prepend_term, standard_coresolution, standard_resolution,
    Generator, KoszulComplex, ProjectiveComplex,
};

#[derive(Debug, Error)]
pub enum SheafError {
    #[error("expected {expected} entries, found {found}")]
    RankCount { expected: usize, found: usize },
    #[error("missing restriction {0} -> {1}")]
    MissingRestriction(String, String),
    #[error("restriction {0} -> {1} has the wrong shape")]
    RestrictionShape(String, String),
    #[error("restrictions from {0} to {1} disagree along different paths")]
    NotFunctorial(String, String),
    #[error("components do not commute with the restriction {0} -> {1}")]
    NotNatural(String, String),
    #[error("sheaves live on different posets")]
    BaseMismatch,
    #[error("stalk at {0} has torsion; only free stalks are representable")]
    TorsionStalk(String),
    #[error("subset is not locally closed")]
    NotLocallyClosed,
    #[error("poset has no unique maximal point")]
    NoGenericPoint,
    #[error("{0} is not a point of the ambient poset")]
    NotASubspace(String),
    #[error("complex has no terms")]
    EmptyComplex,
    #[error("differentials do not compose to zero at {0}")]
    NotAComplex(String),
    #[error("coefficient on generator {0} does not raise degree by one along the order")]
    BadGenerator(usize),
    #[error("join does not exist in this poset")]
    NoJoin,
    #[error("{0} minimal nonfaces exceed the Koszul enumeration bound of 20")]
    TooManyNonfaces(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}
