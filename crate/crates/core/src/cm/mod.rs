//! Canonical complexes of closed subsets of affine space and their Cohen-Macaulay theory.

mod canonical;
mod criteria;

use thiserror::Error;

use crate::derived::DerivedError;
use crate::poset::PosetError;
use crate::sheaf::SheafError;

pub use canonical::{
    canonical_complex, canonical_sheaf, complex_subposet, face_indicator, CanonicalComplex,
};
pub use criteria::{
    is_cm_on_open, is_cohen_macaulay, link_table, stalk_formula, CmReport, LinkEntry,
    PointEvidence, StalkFormulaEntry, StalkFormulaReport,
};

#[derive(Debug, Error)]
pub enum CmError {
    #[error("the complex has no faces")]
    EmptyComplex,
    #[error("not Cohen-Macaulay over {0}")]
    NotCohenMacaulay(String),
    #[error("{0} is not an open subset")]
    NotOpen(String),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}
