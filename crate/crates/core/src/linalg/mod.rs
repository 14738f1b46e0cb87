//! Exact linear algebra over `Q`, `F_p` and `Z`, and cohomology of bounded complexes.

mod complex;
pub mod elim;
mod lattice;
mod matrix;
mod module;
mod ring;
mod smith;
mod sparse;

use thiserror::Error;

pub use complex::{ChainComplex, ChainMap};
pub use lattice::{rank, rank_kernel_image, solve, KernelImage, Quotient};
pub use matrix::Matrix;
pub use module::FgModule;
pub use ring::{is_prime, Ring, MAX_PRIME};
pub use smith::{smith_normal_form, SmithForm};
pub use sparse::SparseMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("unknown coefficient ring `{0}` (expected Q, Z or F<p>)")]
    UnknownRing(String),
    #[error("rows of unequal length")]
    RaggedRows,
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("consecutive differentials starting at degree {0} do not compose to zero")]
    NotAComplex(i32),
    #[error("integer entries exceeded the i64 range")]
    Overflow,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system has no integral solution")]
    NonIntegral,
}
