//! Line-bundle cohomology on projective space and its comparison with sheaves on
//! the projective space over the field with one element.

mod bundles;
mod correspondence;

use thiserror::Error;

use crate::cm::CmError;
use crate::derived::DerivedError;
use crate::linalg::LinalgError;
use crate::poset::PosetError;
use crate::sheaf::SheafError;

pub use bundles::{binomial, line_bundle_cech, line_bundle_cohomology};
pub use correspondence::{
    cohomology_preservation_check, omega_star_duality, punctured_resolution, r_pi_star_stalk,
    verify_rpistar_omega, CohomologyPreservation, Dims, DualitySample, LineBundle, OmegaDuality,
    RpiStarOmega, StalkEntry, CECH_LIMIT, MAX_DIMENSION,
};

#[derive(Debug, Error)]
pub enum ProjectiveError {
    #[error("dimension {n} outside 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("the stalk needs a nonempty point")]
    EmptyPoint,
    #[error("point {0:#b} does not fit the ambient space")]
    PointOutOfRange(u64),
    #[error("{0} is not a field")]
    NeedsField(String),
    #[error("the complex has no nonempty face")]
    EmptyComplex,
    #[error("sign pattern {0:#b} has unbounded multiplicity and nonzero cohomology")]
    InfinitePattern(u64),
    #[error("line-bundle cohomology appears in rows {0:?}")]
    UnexpectedTerm(Vec<i32>),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
