use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::linalg::{ChainComplex, FgModule, Ring};
use crate::poset::{Poset, PosetError};
use crate::sheaf::{Sheaf, SheafComplex};

use super::gamma::{l_homology, local_cohomology, local_cohomology_at, r_gamma};
use super::rhom::{dualize, r_hom_global, r_hom_stalk};
use super::DerivedError;

pub type Graded = BTreeMap<i32, FgModule>;

/// Two graded modules that a duality statement predicts to agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub left: Graded,
    pub right: Graded,
    pub holds: bool,
}

impl Comparison {
    fn exact(left: Graded, right: Graded) -> Self {
        let holds = left == right;
        Self { left, right, holds }
    }
}

/// Per-point comparisons plus the overall verdict.
#[derive(Clone, Debug, Serialize)]
pub struct StalkwiseComparison {
    pub points: Vec<(String, Comparison)>,
    pub holds: bool,
}

impl StalkwiseComparison {
    fn from_points(points: Vec<(String, Comparison)>) -> Self {
        let holds = points.iter().all(|(_, c)| c.holds);
        Self { points, holds }
    }
}

fn require_field(ring: Ring) -> Result<(), DerivedError> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(DerivedError::NeedsField(ring.label()))
    }
}

/// `H^i` of `c` placed at `key(i)`.
fn reindex(c: &ChainComplex, key: impl Fn(i32) -> i32) -> Graded {
    c.nonzero_homology()
        .into_iter()
        .map(|(d, m)| (key(d), m))
        .collect()
}

/// Cohomology `H^i(X, k)` against homology `H_i(X, k)`. Over the integers the universal
/// coefficient theorem is used: equal ranks, and torsion of `H^i` equal to that of `H_{i-1}`.
pub fn duality_pairing(base: &Poset, ring: Ring) -> Result<Comparison, DerivedError> {
    let k = SheafComplex::concentrated(Sheaf::constant(Arc::new(base.clone()), ring, 1), 0);
    let left = r_gamma(&k)?.nonzero_homology();
    let right = reindex(&l_homology(&k)?, |d| -d);
    let holds = if ring.is_field() {
        left == right
    } else {
        let degrees: Vec<i32> = left.keys().chain(right.keys()).copied().collect();
        degrees.iter().all(|&i| {
            let (h, ho, prev) = (left.get(&i), right.get(&i), right.get(&(i - 1)));
            h.map_or(0, |m| m.rank) == ho.map_or(0, |m| m.rank)
                && h.map_or(&[][..], |m| &m.torsion[..]) == prev.map_or(&[][..], |m| &m.torsion[..])
        })
    };
    Ok(Comparison { left, right, holds })
}

/// The spaces whose global dualizing complexes are known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardSpace {
    /// `𝔸ⁿ`, dualizing complex `k_{0}`.
    Affine(usize),
    /// `ℙⁿ`, dualizing complex `k_{1}[n]`.
    Projective(usize),
    /// `ℍⁿ`, dualizing complex `k[n]`.
    Hyperplanes(usize),
}

impl StandardSpace {
    pub fn poset(self) -> Result<Poset, PosetError> {
        match self {
            StandardSpace::Affine(n) => Poset::affine_space(n),
            StandardSpace::Projective(n) => Poset::projective_space(n),
            StandardSpace::Hyperplanes(n) => Poset::hyperplane_union(n),
        }
    }

    pub fn dualizing_complex(self, base: Arc<Poset>, ring: Ring) -> SheafComplex {
        match self {
            StandardSpace::Affine(_) => {
                SheafComplex::concentrated(Sheaf::skyscraper(base, ring, 0), 0)
            }
            StandardSpace::Projective(n) => {
                let top = base.len() - 1;
                SheafComplex::concentrated(Sheaf::skyscraper(base, ring, top), -(n as i32))
            }
            StandardSpace::Hyperplanes(n) => {
                SheafComplex::concentrated(Sheaf::constant(base, ring, 1), -(n as i32))
            }
        }
    }
}

/// `H^i RHom(F, D_X)` against `H^{-i}(X, F)`.
pub fn global_duality(
    f: &SheafComplex,
    dualizing: &SheafComplex,
) -> Result<Comparison, DerivedError> {
    require_field(f.ring())?;
    let left = r_hom_global(f, dualizing)?.nonzero_homology();
    let right = reindex(&r_gamma(f)?, |d| -d);
    Ok(Comparison::exact(left, right))
}

/// Stalkwise cohomology of `F` against that of `D(D(F))`.
pub fn reflexivity(f: &SheafComplex) -> Result<StalkwiseComparison, DerivedError> {
    let base = f.base().clone();
    let omega = SheafComplex::concentrated(Sheaf::canonical(base.clone(), f.ring())?, 0);
    let dual = dualize(f)?;
    let points = (0..base.len())
        .map(|x| {
            let left = f.stalk_cohomology(x);
            let right = r_hom_stalk(&dual, &omega, x)?.nonzero_homology();
            Ok((base.label(x), Comparison::exact(left, right)))
        })
        .collect::<Result<Vec<_>, DerivedError>>()?;
    Ok(StalkwiseComparison::from_points(points))
}

/// Local duality on affine space: `H^i RHom(F, ω)` against `H^{n-i}_0(F)`, and at every
/// point `p`, `H^i RHom(F, ω)_p` against `H^{d_p - i}_p(U_p, F)` with `d_p = n - |p|`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalDuality {
    pub global: Comparison,
    pub stalks: StalkwiseComparison,
    pub holds: bool,
}

pub fn local_duality(f: &SheafComplex) -> Result<LocalDuality, DerivedError> {
    require_field(f.ring())?;
    let base = f.base().clone();
    let n = base.ambient().unwrap_or(0) as i32;
    let omega = SheafComplex::concentrated(Sheaf::canonical(base.clone(), f.ring())?, 0);
    let global = Comparison::exact(
        r_hom_global(f, &omega)?.nonzero_homology(),
        reindex(&local_cohomology(f, 0)?, |d| n - d),
    );
    let points = (0..base.len())
        .map(|p| {
            let d_p = n - base.key(p).count_ones() as i32;
            let left = r_hom_stalk(f, &omega, p)?.nonzero_homology();
            let right = reindex(&local_cohomology_at(f, p)?, |d| d_p - d);
            Ok((base.label(p), Comparison::exact(left, right)))
        })
        .collect::<Result<Vec<_>, DerivedError>>()?;
    let stalks = StalkwiseComparison::from_points(points);
    let holds = global.holds && stalks.holds;
    Ok(LocalDuality {
        global,
        stalks,
        holds,
    })
}
