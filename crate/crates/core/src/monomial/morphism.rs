use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{rank, FgModule, Matrix, Ring};
use crate::poset::{subset_label, Poset};
use crate::sheaf::{Sheaf, SheafMorphism};
use crate::sr::{colimit, divides, koszul_monomial_complex, Colimit};

use super::{MonomialDivisors, MonomialError};

/// Largest number of divisors for which every sub-Koszul complex is checked.
pub const ORACLE_LIMIT: usize = 10;

static SHORTCUT_TRUSTED: AtomicBool = AtomicBool::new(true);

/// A torus-orbit stratum (the coordinates allowed to vanish) and its image point.
#[derive(Clone, Debug, Serialize)]
pub struct Stratum {
    pub vanishing: String,
    pub point: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrataMap {
    pub strata: Vec<Stratum>,
    pub image: Vec<String>,
    pub image_open: bool,
    pub surjective: bool,
    /// Whether all divisors share a point, i.e. no monomial is a unit.
    pub common_zero: bool,
    #[serde(skip)]
    pub pairs: Vec<(u64, u64)>,
    #[serde(skip)]
    pub image_keys: Vec<u64>,
}

/// The map on strata: coordinates `T` vanishing go to `{i : supp(m_i) ∩ T = ∅}`.
pub fn continuous_map_fibers(d: &MonomialDivisors) -> StrataMap {
    let n = d.len();
    let supports: Vec<u64> = (0..n).map(|i| d.support(i)).collect();
    let pairs: Vec<(u64, u64)> = (0..1u64 << d.vars())
        .map(|t| {
            (
                t,
                (0..n)
                    .filter(|&i| supports[i] & t == 0)
                    .fold(0, |p, i| p | 1 << i),
            )
        })
        .collect();
    let mut image_keys: Vec<u64> = pairs
        .iter()
        .map(|&(_, p)| p)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    image_keys.sort_by_key(|&p| (p.count_ones(), p));
    let image_set: BTreeSet<u64> = image_keys.iter().copied().collect();
    let full = (1u64 << n) - 1;
    let image_open = image_keys
        .iter()
        .all(|&p| (0..n).all(|i| image_set.contains(&(p | 1 << i))) || p == full);
    StrataMap {
        strata: pairs
            .iter()
            .map(|&(t, p)| Stratum {
                vanishing: subset_label(t, 1),
                point: subset_label(p, 1),
            })
            .collect(),
        image: image_keys.iter().map(|&p| subset_label(p, 1)).collect(),
        image_open,
        surjective: image_set.len() == 1 << n,
        common_zero: d.units().is_empty(),
        pairs,
        image_keys,
    }
}

/// Two divisors whose monomials share a variable.
#[derive(Clone, Debug, Serialize)]
pub struct Overlap {
    pub first: usize,
    pub second: usize,
    pub certificate: String,
}

/// A nonzero Koszul homology strand `H_j` of the sub-sequence `divisors`.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulWitness {
    pub divisors: Vec<usize>,
    pub degree: Vec<i64>,
    pub homological: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralPosition {
    pub in_general_position: bool,
    /// Pairwise disjoint variable supports.
    pub shortcut: bool,
    /// Every sub-Koszul complex is acyclic in positive homological degree.
    pub oracle: Option<bool>,
    pub overlap: Option<Overlap>,
    pub witness: Option<KoszulWitness>,
    pub method: String,
}

/// Degrees at which Koszul strands can differ: the lcm-closure of the term degrees.
fn strand_degrees(terms: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut set: BTreeSet<Vec<i64>> = terms.iter().cloned().collect();
    loop {
        let items: Vec<Vec<i64>> = set.iter().cloned().collect();
        let before = set.len();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                set.insert(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// Searches every nonempty sub-sequence for nonzero positive Koszul homology.
///
/// A strand depends only on which term degrees lie below it, so the lcm-closure
/// of the term degrees covers every distinct strand.
pub fn koszul_oracle(
    d: &MonomialDivisors,
    ring: Ring,
) -> Result<Option<KoszulWitness>, MonomialError> {
    let n = d.len();
    let mut subsets: Vec<u64> = (1..1u64 << n).collect();
    subsets.sort_by_key(|&s| (s.count_ones(), s));
    for s in subsets {
        let idx: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
        let monomials: Vec<Vec<u32>> = idx.iter().map(|&i| d.monomials()[i].clone()).collect();
        let kos = koszul_monomial_complex(d.vars(), &monomials, ring)?;
        let terms: Vec<Vec<i64>> = (kos.lo()..=kos.hi())
            .flat_map(|k| kos.generators(k).to_vec())
            .collect();
        for a in strand_degrees(&terms) {
            let h = kos.strand(&a).nonzero_homology();
            if let Some((&deg, m)) = h.iter().find(|(&deg, _)| deg < 0) {
                return Ok(Some(KoszulWitness {
                    divisors: idx.iter().map(|i| i + 1).collect(),
                    degree: a,
                    homological: -deg,
                    dim: m.rank + m.torsion.len(),
                }));
            }
        }
    }
    Ok(None)
}

/// General position of monomial divisors. The disjoint-supports criterion is checked
/// against the Koszul oracle whenever the oracle is affordable; the oracle decides,
/// and a disagreement disables the criterion for the rest of the process.
pub fn general_position_check(
    d: &MonomialDivisors,
    ring: Ring,
) -> Result<GeneralPosition, MonomialError> {
    let n = d.len();
    let mut overlap = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (d.support(i), d.support(j));
            if a & b != 0 {
                let label = MonomialDivisors::variable_label;
                overlap = Some(Overlap {
                    first: i + 1,
                    second: j + 1,
                    certificate: format!("{}∩{}={}≠∅", label(a), label(b), label(a & b)),
                });
                break 'outer;
            }
        }
    }
    let shortcut = overlap.is_none();
    if n > ORACLE_LIMIT {
        if !SHORTCUT_TRUSTED.load(Ordering::Relaxed) {
            return Err(MonomialError::OracleTooLarge(n));
        }
        return Ok(GeneralPosition {
            in_general_position: shortcut,
            shortcut,
            oracle: None,
            overlap,
            witness: None,
            method: "disjoint supports".into(),
        });
    }
    let witness = koszul_oracle(d, ring)?;
    let oracle = witness.is_none();
    if oracle != shortcut {
        SHORTCUT_TRUSTED.store(false, Ordering::Relaxed);
    }
    Ok(GeneralPosition {
        in_general_position: oracle,
        shortcut,
        oracle: Some(oracle),
        overlap,
        witness,
        method: "koszul strands".into(),
    })
}

/// Component-wise sum of the exponents of all monomials; strands are constant beyond it.
pub fn natural_window(d: &MonomialDivisors) -> Vec<u32> {
    d.product((1u64 << d.len()) - 1)
}

/// The graded pieces of `f★F` over a box of degrees.
#[derive(Clone, Debug, Serialize)]
pub struct StrandFamily {
    pub window: Vec<u32>,
    pub strands: Vec<(Vec<u32>, FgModule)>,
}

impl StrandFamily {
    pub fn is_zero(&self) -> bool {
        self.strands.iter().all(|(_, m)| m.is_zero())
    }

    pub fn get(&self, a: &[u32]) -> Option<&FgModule> {
        self.strands.iter().find(|(b, _)| b == a).map(|(_, m)| m)
    }
}

fn box_degrees(window: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &w in window {
        out = out
            .into_iter()
            .flat_map(|a| (0..=w).map(move |e| [a.clone(), vec![e]].concat()))
            .collect();
    }
    out
}

fn check_base(d: &MonomialDivisors, f: &Sheaf) -> Result<(), MonomialError> {
    let base = f.base();
    if base.ambient() != Some(d.len()) || base.len() != 1 << d.len() {
        return Err(MonomialError::NotAffine(d.len()));
    }
    Ok(())
}

fn check_window(d: &MonomialDivisors, window: &[u32]) -> Result<(), MonomialError> {
    if window.len() != d.vars() {
        return Err(MonomialError::ExponentLength {
            expected: d.vars(),
            found: window.len(),
        });
    }
    for (v, (&need, &given)) in natural_window(d).iter().zip(window).enumerate() {
        if given < need {
            return Err(MonomialError::WindowTooSmall {
                variable: v + 1,
                needed: need,
                given,
            });
        }
    }
    Ok(())
}

/// Points `p` with `m_p | x^a`, as indices of the base.
fn dividing_points(d: &MonomialDivisors, base: &Poset, a: &[u32]) -> Vec<usize> {
    (0..base.len())
        .filter(|&x| divides(&d.product(base.key(x)), a))
        .collect()
}

fn strand(d: &MonomialDivisors, f: &Sheaf, a: &[u32]) -> Result<Colimit, MonomialError> {
    Ok(colimit(f, &dividing_points(d, f.base(), a))?)
}

/// `(f★F)_a` for every `a` in the box `{0..=window}`: the colimit of `F` over the
/// points `p` with `m_p | x^a`.
pub fn f_star(
    d: &MonomialDivisors,
    f: &Sheaf,
    window: &[u32],
) -> Result<StrandFamily, MonomialError> {
    check_base(d, f)?;
    check_window(d, window)?;
    let strands = box_degrees(window)
        .into_par_iter()
        .map(|a| Ok((a.clone(), strand(d, f, &a)?.module)))
        .collect::<Result<Vec<_>, MonomialError>>()?;
    Ok(StrandFamily {
        window: window.to_vec(),
        strands,
    })
}

/// `(f★φ)_a` on free parts, with the source and target strands.
pub fn f_star_map(
    d: &MonomialDivisors,
    phi: &SheafMorphism,
    a: &[u32],
) -> Result<(Colimit, Colimit, Matrix), MonomialError> {
    check_base(d, phi.source())?;
    let src = strand(d, phi.source(), a)?;
    let tgt = strand(d, phi.target(), a)?;
    let m = src.induced(&tgt, |p| phi.component(p).clone(), phi.source().ring())?;
    Ok((src, tgt, m))
}

/// Whether `f★` carries `0 -> A -> B -> C -> 0` to an exact sequence in every
/// degree of the window. Field coefficients only.
pub fn strand_exactness(
    d: &MonomialDivisors,
    alpha: &SheafMorphism,
    beta: &SheafMorphism,
    window: &[u32],
) -> Result<bool, MonomialError> {
    let ring = alpha.source().ring();
    if !ring.is_field() {
        return Err(MonomialError::NeedsField(ring.label()));
    }
    check_window(d, window)?;
    let results = box_degrees(window)
        .into_par_iter()
        .map(|a| {
            let (sa, _, ma) = f_star_map(d, alpha, &a)?;
            let (sb, sc, mb) = f_star_map(d, beta, &a)?;
            let (ra, rb) = (rank(&ma, ring), rank(&mb, ring));
            let composite = mb.mul(&ma, ring).is_zero() || ma.cols() == 0 || mb.rows() == 0;
            Ok(composite
                && ra == sa.module.rank
                && rb == sc.module.rank
                && sb.module.rank == ra + rb)
        })
        .collect::<Result<Vec<bool>, MonomialError>>()?;
    Ok(results.into_iter().all(|ok| ok))
}

#[derive(Clone, Debug, Serialize)]
pub struct FaithfulCheck {
    pub checked: usize,
    pub holds: bool,
    pub counterexample: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessVerdict {
    pub general_position: GeneralPosition,
    pub flat: bool,
    pub strata: StrataMap,
    /// For flat data: `f★F = 0` exactly when `F` vanishes on the image, on each sample.
    pub faithful: Option<FaithfulCheck>,
}

/// Flatness (general position, field case) and faithful flatness on the image.
/// With no samples, the skyscrapers at all points are used.
pub fn flatness_verdict(
    d: &MonomialDivisors,
    ring: Ring,
    samples: &[Sheaf],
) -> Result<FlatnessVerdict, MonomialError> {
    if !ring.is_field() {
        return Err(MonomialError::NeedsField(ring.label()));
    }
    let general_position = general_position_check(d, ring)?;
    let strata = continuous_map_fibers(d);
    let flat = general_position.in_general_position;
    let faithful = if flat {
        let base = Arc::new(Poset::affine_space(d.len()).map_err(crate::sheaf::SheafError::from)?);
        let owned: Vec<Sheaf>;
        let samples = if samples.is_empty() {
            owned = (0..base.len())
                .map(|x| Sheaf::skyscraper(base.clone(), ring, x))
                .collect();
            &owned
        } else {
            samples
        };
        let window = natural_window(d);
        let image: BTreeSet<u64> = strata.image_keys.iter().copied().collect();
        let mut counterexample = None;
        for (k, f) in samples.iter().enumerate() {
            let on_image =
                (0..f.base().len()).any(|x| f.rank(x) > 0 && image.contains(&f.base().key(x)));
            if f_star(d, f, &window)?.is_zero() == on_image {
                counterexample = Some(k);
                break;
            }
        }
        Some(FaithfulCheck {
            checked: samples.len(),
            holds: counterexample.is_none(),
            counterexample,
        })
    } else {
        None
    };
    Ok(FlatnessVerdict {
        general_position,
        flat,
        strata,
        faithful,
    })
}
