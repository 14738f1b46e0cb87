//! Morphisms from affine space over a field to affine space over the field with one
//! element, given by monomial divisors.

mod divisors;
mod morphism;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::sheaf::SheafError;
use crate::sr::SrError;

pub use divisors::MonomialDivisors;
pub use morphism::{
    continuous_map_fibers, f_star, f_star_map, flatness_verdict, general_position_check,
    koszul_oracle, natural_window, strand_exactness, FaithfulCheck, FlatnessVerdict,
    GeneralPosition, KoszulWitness, Overlap, StrandFamily, StrataMap, Stratum, ORACLE_LIMIT,
};

#[derive(Debug, Error)]
pub enum MonomialError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no monomials given")]
    Empty,
    #[error("exponent vector of length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("sheaf must live on the affine space of dimension {0}")]
    NotAffine(usize),
    #[error("window bound {given} for x{variable} is below the required {needed}")]
    WindowTooSmall {
        variable: usize,
        needed: u32,
        given: u32,
    },
    #[error("{0} is not a field")]
    NeedsField(String),
    #[error("{0} divisors exceed the Koszul oracle bound and the shortcut has been disabled")]
    OracleTooLarge(usize),
    #[error(transparent)]
    Sr(#[from] SrError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
