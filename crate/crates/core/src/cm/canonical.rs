use std::sync::Arc;

use crate::linalg::Ring;
use crate::poset::{Poset, SimplicialComplex};
use crate::sheaf::{koszul_complex, Sheaf, SheafComplex};

use super::{criteria::is_cohen_macaulay, CmError};

/// `ω_K^• = Hom(Kos(k_K), ω)|_K`, with the Koszul labels of its summands.
#[derive(Clone, Debug)]
pub struct CanonicalComplex {
    /// The complex on the face poset of `K`.
    pub complex: SheafComplex,
    pub nonfaces: Vec<u64>,
    /// Codimension `n - dim K`.
    pub codimension: i32,
}

/// The face poset of `K` inside `𝔸ⁿ`, including the empty face.
pub fn complex_subposet(k: &SimplicialComplex) -> Arc<Poset> {
    Arc::new(k.poset())
}

/// `k_K` as a sheaf on `𝔸ⁿ`.
pub fn face_indicator(k: &SimplicialComplex, ring: Ring) -> Result<Sheaf, CmError> {
    let base = Arc::new(Poset::affine_space(k.ambient())?);
    let faces: Vec<usize> = k
        .faces()
        .iter()
        .map(|&f| base.index_of(f).expect("face of the ambient space"))
        .collect();
    Ok(Sheaf::indicator(base, ring, &faces)?)
}

pub fn canonical_complex(k: &SimplicialComplex, ring: Ring) -> Result<CanonicalComplex, CmError> {
    if k.is_empty() {
        return Err(CmError::EmptyComplex);
    }
    let kos = koszul_complex(k, ring)?;
    let base = Arc::new(Poset::affine_space(k.ambient())?);
    let omega = Sheaf::canonical(base, ring)?;
    let complex = kos.complex.hom_into_on(&omega, complex_subposet(k))?;
    Ok(CanonicalComplex {
        complex,
        nonfaces: kos.nonfaces,
        codimension: k.codimension(),
    })
}

/// The canonical sheaf `ω_K`: the only cohomology sheaf of `ω_K^•`, defined when `K`
/// is Cohen-Macaulay over the ring.
pub fn canonical_sheaf(k: &SimplicialComplex, ring: Ring) -> Result<Sheaf, CmError> {
    let report = is_cohen_macaulay(k, ring)?;
    if !report.cm {
        return Err(CmError::NotCohenMacaulay(ring.label()));
    }
    let c = canonical_complex(k, ring)?;
    Ok(c.complex.cohomology_sheaf(c.codimension)?)
}
