//! Stanley-Reisner rings through the map from affine space over a field to affine
//! space over the field with one element: monomial ideals, squarefree modules,
//! Taylor complexes and graded strand comparisons.

mod graded;
mod ideal;
mod module;
mod verify;

use thiserror::Error;

use crate::cm::CmError;
use crate::derived::DerivedError;
use crate::linalg::LinalgError;
use crate::poset::PosetError;
use crate::sheaf::SheafError;

pub use graded::{
    induced_rank, koszul_monomial_complex, taylor_complex, taylor_complex_of, GradedFreeComplex,
};
pub use ideal::{
    divides, key_exponents, monomial_string, stanley_reisner_ideal, support_key, MonomialIdeal,
};
pub use module::{colimit, pi_star, pi_star_literal, BoxModule, Colimit, SquarefreeModule};
pub use verify::{
    reisner_scheme_side, squarefree_degrees, taylor_ext, taylor_ext_table,
    verify_canonical_complex, verify_extens_for_k, ExtEntry, MultiplicationEntry, SchemeReisner,
    StrandComparison,
};

#[derive(Debug, Error)]
pub enum SrError {
    #[error("exponent vector of length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("ideal is not squarefree: generator {0}")]
    NotSquarefree(String),
    #[error("sheaf must live on the full affine space")]
    NotAffine,
    #[error("graded data known only up to exponent {0}; squarefree degrees need at least 1")]
    InsufficientData(u32),
    #[error("generator {0} is out of range")]
    BadGenerator(usize),
    #[error("differential is not homogeneous at generator {0}")]
    NotHomogeneous(usize),
    #[error("multiplication maps do not commute at {0}")]
    NotCommuting(String),
    #[error("differentials starting in degree {0} do not compose to zero")]
    NotAComplex(i32),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}
