//! Derived functors on finite spaces: sections, cosections, local cohomology,
//! `RHom` and duality.

mod duality;
mod gamma;
mod graded;
mod rhom;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::sheaf::SheafError;

pub use duality::*;
pub use gamma::{
    l_homology, local_cohomology, local_cohomology_at, r_gamma, r_gamma_cech, r_gamma_sheaf,
    r_gamma_standard, reduced_homology, reduced_l, sheaf_cohomology, MAX_COVER,
};
pub use rhom::{dualize, ext_sheaf, r_hom_global, r_hom_sheaf, r_hom_stalk};

#[derive(Debug, Error)]
pub enum DerivedError {
    #[error("the cover model needs a convex subset space")]
    NotConvex,
    #[error("{0} minimal points exceed the cover bound {MAX_COVER}")]
    CoverTooLarge(usize),
    #[error("{0} is not a closed point of the open set")]
    NotClosed(String),
    #[error("complexes live on different posets")]
    BaseMismatch,
    #[error("duality checks need a field, got {0}")]
    NeedsField(String),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
