use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::derived::{r_hom_stalk, reduced_homology, Graded};
use crate::linalg::Ring;
use crate::poset::{subset_label, Poset, SimplicialComplex};
use crate::sheaf::{Sheaf, SheafComplex};

use super::canonical::{canonical_complex, face_indicator};
use super::CmError;

/// Reduced homology of the link of one face, computed on the simplicial link and on
/// the punctured open star inside the face poset.
#[derive(Clone, Debug, Serialize)]
pub struct LinkEntry {
    pub face: String,
    pub link_dimension: i32,
    pub simplicial: Graded,
    pub poset: Graded,
    pub agree: bool,
}

pub fn link_table(k: &SimplicialComplex, ring: Ring) -> Result<Vec<LinkEntry>, CmError> {
    k.faces()
        .par_iter()
        .map(|&p| {
            let link = k.link(p)?;
            let simplicial = link.reduced_homology(ring);
            let poset = reduced_homology(&k.star_poset(p), ring)?;
            let agree = simplicial == poset;
            Ok(LinkEntry {
                face: subset_label(p, 1),
                link_dimension: link.simplicial_dimension(),
                simplicial,
                poset,
                agree,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct StalkFormulaEntry {
    pub face: String,
    /// `H^i(ω_K^•)_p`.
    pub canonical: Graded,
    /// `H̃_{d_p - i - 1}(Link_K(p))`, keyed by `i`.
    pub link: Graded,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StalkFormulaReport {
    pub points: Vec<StalkFormulaEntry>,
    pub holds: bool,
}

/// Compares the stalks of `ω_K^•` with link homology at every face, with
/// `d_p = n - |p|`.
pub fn stalk_formula(k: &SimplicialComplex, ring: Ring) -> Result<StalkFormulaReport, CmError> {
    let omega = canonical_complex(k, ring)?;
    let base = omega.complex.base().clone();
    let n = k.ambient() as i32;
    let points: Vec<StalkFormulaEntry> = (0..base.len())
        .into_par_iter()
        .map(|x| {
            let p = base.key(x);
            let d_p = n - p.count_ones() as i32;
            let canonical = omega.complex.stalk_cohomology(x);
            let link: Graded = k
                .link(p)
                .expect("face")
                .reduced_homology(ring)
                .into_iter()
                .map(|(j, m)| (d_p - j - 1, m))
                .collect();
            let holds = canonical == link;
            StalkFormulaEntry {
                face: base.label(x),
                canonical,
                link,
                holds,
            }
        })
        .collect();
    let holds = points.iter().all(|e| e.holds);
    Ok(StalkFormulaReport { points, holds })
}

/// Per-face evidence behind a Cohen-Macaulay verdict.
#[derive(Clone, Debug, Serialize)]
pub struct PointEvidence {
    pub face: String,
    pub link_dimension: i32,
    /// `H̃_i(Link_K(p))` keyed by `i`.
    pub link_homology: Graded,
    /// `Ext^i(k_K, ω)_p` keyed by `i`.
    pub ext: Graded,
    /// `H^i(ω_K^•)_p` keyed by `i`.
    pub canonical: Graded,
    pub link_ok: bool,
    pub ext_ok: bool,
    pub canonical_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub facets: Vec<String>,
    pub ring: String,
    pub ambient: usize,
    /// Codimension `n - dim K`.
    pub d: i32,
    pub pure: bool,
    /// Criterion (1): link homology vanishes below the link dimension.
    pub links: bool,
    /// Criterion (2): `Ext^i(k_K, ω)` is concentrated in degree `d` and flat there.
    pub ext: bool,
    /// Criterion (2'): `ω_K^•` is concentrated in degree `d` and flat there.
    pub canonical: bool,
    pub consistent: bool,
    pub cm: bool,
    /// Degree in which `ω_K^•` is concentrated, if it is.
    pub concentration: Option<i32>,
    /// First face violating the link criterion.
    pub witness: Option<String>,
    pub points: Vec<PointEvidence>,
}

fn concentrated_in(g: &Graded, d: i32) -> bool {
    g.iter().all(|(&i, m)| i == d && m.is_free())
}

/// The three equivalent Cohen-Macaulay criteria evaluated on `K ∩ V` for an open
/// `V ⊆ 𝔸ⁿ` given by its points.
pub fn is_cm_on_open(k: &SimplicialComplex, ring: Ring, open: &[u64]) -> Result<CmReport, CmError> {
    let n = k.ambient();
    let set: HashSet<u64> = open.iter().copied().collect();
    for &p in open {
        if let Some(v) = (0..n).find(|&v| !set.contains(&(p | 1 << v))) {
            return Err(CmError::NotOpen(format!(
                "missing {} above {}",
                subset_label(p | 1 << v, 1),
                subset_label(p, 1)
            )));
        }
    }
    let omega = canonical_complex(k, ring)?;
    let d = omega.codimension;
    let affine = Arc::new(Poset::affine_space(n)?);
    let k_k = SheafComplex::concentrated(face_indicator(k, ring)?, 0);
    let dualizing = SheafComplex::concentrated(Sheaf::canonical(affine.clone(), ring)?, 0);
    let kbase = omega.complex.base().clone();
    let faces: Vec<u64> = k
        .faces()
        .iter()
        .copied()
        .filter(|p| set.contains(p))
        .collect();
    let points: Vec<PointEvidence> = faces
        .par_iter()
        .map(|&p| {
            let link = k.link(p)?;
            let link_dimension = link.simplicial_dimension();
            let link_homology = link.reduced_homology(ring);
            let ext = r_hom_stalk(&k_k, &dualizing, affine.index_of(p).expect("face"))?
                .nonzero_homology();
            let canonical = omega
                .complex
                .stalk_cohomology(kbase.index_of(p).expect("face"));
            let link_ok = link_homology.keys().all(|&i| i >= link_dimension);
            let (ext_ok, canonical_ok) = (concentrated_in(&ext, d), concentrated_in(&canonical, d));
            Ok(PointEvidence {
                face: subset_label(p, 1),
                link_dimension,
                link_homology,
                ext,
                canonical,
                link_ok,
                ext_ok,
                canonical_ok,
            })
        })
        .collect::<Result<_, CmError>>()?;
    let links = points.iter().all(|e| e.link_ok);
    let ext = points.iter().all(|e| e.ext_ok);
    let canonical = points.iter().all(|e| e.canonical_ok);
    Ok(CmReport {
        facets: k.facets().iter().map(|&f| subset_label(f, 1)).collect(),
        ring: ring.label(),
        ambient: n,
        d,
        pure: k.is_pure(),
        links,
        ext,
        canonical,
        consistent: links == ext && ext == canonical,
        cm: links && ext && canonical,
        concentration: canonical.then_some(d),
        witness: points.iter().find(|e| !e.link_ok).map(|e| e.face.clone()),
        points,
    })
}

pub fn is_cohen_macaulay(k: &SimplicialComplex, ring: Ring) -> Result<CmReport, CmError> {
    let all: Vec<u64> = (0..1u64 << k.ambient()).collect();
    is_cm_on_open(k, ring, &all)
}
