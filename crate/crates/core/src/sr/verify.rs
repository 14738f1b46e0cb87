use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cm::{canonical_complex, is_cohen_macaulay};
use crate::linalg::{ChainComplex, FgModule, Matrix, Ring};
use crate::poset::{Poset, SimplicialComplex};
use crate::sheaf::{koszul_complex, Sheaf, SheafComplex};

use super::graded::{induced_rank, taylor_complex, GradedFreeComplex};
use super::{key_exponents, monomial_string, stanley_reisner_ideal, MonomialIdeal, SrError};

/// One nonzero graded piece `Ext^i(...)_a` or `H^i(...)_a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ExtEntry {
    pub i: i32,
    pub degree: Vec<u32>,
    pub dim: usize,
    pub torsion: Vec<u64>,
}

impl ExtEntry {
    fn new(i: i32, degree: Vec<u32>, m: &FgModule) -> Self {
        Self {
            i,
            degree,
            dim: m.rank,
            torsion: m.torsion.clone(),
        }
    }
}

/// Rank of `x_{variable} : H^i_a -> H^i_{a + e_variable}` on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicationEntry {
    pub i: i32,
    pub degree: Vec<u32>,
    pub variable: usize,
    pub sheaf: usize,
    pub taylor: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrandComparison {
    pub sheaf: Vec<ExtEntry>,
    pub taylor: Vec<ExtEntry>,
    pub multiplication: Vec<MultiplicationEntry>,
    pub holds: bool,
}

/// All exponent vectors in `{0,1}^n`, ordered by subset key.
pub fn squarefree_degrees(n: usize) -> Vec<Vec<u32>> {
    (0..1u64 << n).map(|p| key_exponents(p, n)).collect()
}

fn as_i64(a: &[u32]) -> Vec<i64> {
    a.iter().map(|&e| e as i64).collect()
}

/// `RHom(R/I, R(-1))` through the Taylor resolution.
fn dual_taylor(ideal: &MonomialIdeal, ring: Ring) -> Result<GradedFreeComplex, SrError> {
    if let Some(g) = ideal.generators().iter().find(|g| g.iter().any(|&e| e > 1)) {
        return Err(SrError::NotSquarefree(monomial_string(g)));
    }
    Ok(taylor_complex(ideal, ring).dual(&vec![1; ideal.vars()]))
}

/// `Ext^i_R(R/I, R(-1))_a` for a squarefree ideal and `a` in `{0,1}^n`.
pub fn taylor_ext(
    ideal: &MonomialIdeal,
    i: i32,
    a: &[u32],
    ring: Ring,
) -> Result<FgModule, SrError> {
    if a.len() != ideal.vars() {
        return Err(SrError::ExponentLength {
            expected: ideal.vars(),
            found: a.len(),
        });
    }
    Ok(dual_taylor(ideal, ring)?.strand(&as_i64(a)).homology_at(i))
}

/// Every nonzero `Ext^i_R(R/I, R(-1))_a` over squarefree degrees, sorted by `(i, a)`.
pub fn taylor_ext_table(ideal: &MonomialIdeal, ring: Ring) -> Result<Vec<ExtEntry>, SrError> {
    let dual = dual_taylor(ideal, ring)?;
    let mut table: Vec<ExtEntry> = squarefree_degrees(ideal.vars())
        .into_par_iter()
        .flat_map_iter(|a| {
            let h = dual.strand(&as_i64(&a)).nonzero_homology();
            h.into_iter()
                .map(move |(i, m)| ExtEntry::new(i, a.clone(), &m))
        })
        .collect();
    table.sort();
    Ok(table)
}

/// Strands of a complex over squarefree degrees with the `x_i` maps between them.
struct Strands {
    complexes: Vec<ChainComplex>,
    maps: HashMap<(u64, usize), BTreeMap<i32, Matrix>>,
}

fn sheaf_strands(c: &SheafComplex, n: usize) -> Strands {
    let base = c.base();
    let ring = c.ring();
    let complexes = (0..1u64 << n)
        .into_par_iter()
        .map(|p| {
            base.index_of(p)
                .map_or_else(|| ChainComplex::zero(ring), |x| c.stalk_complex(x))
        })
        .collect();
    let mut maps = HashMap::new();
    for p in 0..1u64 << n {
        for i in (0..n).filter(|i| p >> i & 1 == 0) {
            let (Some(x), Some(y)) = (base.index_of(p), base.index_of(p | 1 << i)) else {
                continue;
            };
            let m = c
                .degrees()
                .map(|d| (d, c.term(d).expect("in range").restriction(x, y)))
                .collect();
            maps.insert((p, i), m);
        }
    }
    Strands { complexes, maps }
}

fn graded_strands(g: &GradedFreeComplex, n: usize) -> Strands {
    let degrees = squarefree_degrees(n);
    let complexes = degrees.par_iter().map(|a| g.strand(&as_i64(a))).collect();
    let mut maps = HashMap::new();
    for p in 0..1u64 << n {
        for i in (0..n).filter(|i| p >> i & 1 == 0) {
            let q = (p | 1 << i) as usize;
            maps.insert(
                (p, i),
                g.strand_map(&as_i64(&degrees[p as usize]), &as_i64(&degrees[q])),
            );
        }
    }
    Strands { complexes, maps }
}

fn compare_strands(sheaf: &Strands, taylor: &Strands, n: usize) -> StrandComparison {
    let per_degree: Vec<(Vec<ExtEntry>, Vec<ExtEntry>, Vec<MultiplicationEntry>)> = (0..1u64 << n)
        .into_par_iter()
        .map(|p| {
            let a = key_exponents(p, n);
            let (s, t) = (&sheaf.complexes[p as usize], &taylor.complexes[p as usize]);
            let (hs, ht) = (s.nonzero_homology(), t.nonzero_homology());
            let mut mult = Vec::new();
            for i in (0..n).filter(|i| p >> i & 1 == 0) {
                let q = (p | 1 << i) as usize;
                for &deg in hs
                    .keys()
                    .chain(ht.keys())
                    .collect::<std::collections::BTreeSet<_>>()
                {
                    let rank_of = |st: &Strands, src: &ChainComplex| {
                        st.maps
                            .get(&(p, i))
                            .map_or(0, |m| induced_rank(src, &st.complexes[q], m, deg))
                    };
                    mult.push(MultiplicationEntry {
                        i: deg,
                        degree: a.clone(),
                        variable: i + 1,
                        sheaf: rank_of(sheaf, s),
                        taylor: rank_of(taylor, t),
                    });
                }
            }
            let to_entries = |h: BTreeMap<i32, FgModule>| {
                h.iter()
                    .map(|(&i, m)| ExtEntry::new(i, a.clone(), m))
                    .collect::<Vec<_>>()
            };
            (to_entries(hs), to_entries(ht), mult)
        })
        .collect();
    let mut out = StrandComparison {
        sheaf: Vec::new(),
        taylor: Vec::new(),
        multiplication: Vec::new(),
        holds: true,
    };
    for (s, t, m) in per_degree {
        out.sheaf.extend(s);
        out.taylor.extend(t);
        out.multiplication.extend(m);
    }
    out.sheaf.sort();
    out.taylor.sort();
    out.holds = out.sheaf == out.taylor && out.multiplication.iter().all(|m| m.sheaf == m.taylor);
    out
}

/// Compares the squarefree strands of `ω_K^•` with `Ext_R(R/I_K, R(-1))`, degree by
/// degree, including the ranks of the multiplication maps on cohomology.
pub fn verify_canonical_complex(
    k: &SimplicialComplex,
    ring: Ring,
) -> Result<StrandComparison, SrError> {
    let n = k.ambient();
    let omega = canonical_complex(k, ring)?;
    let dual = dual_taylor(&stanley_reisner_ideal(k), ring)?;
    Ok(compare_strands(
        &sheaf_strands(&omega.complex, n),
        &graded_strands(&dual, n),
        n,
    ))
}

/// The same comparison with the sheaf side taken as `Hom(Kos(k_K), ω)` on all of
/// affine space, i.e. `RHom(k_K, ω)` before restricting to `K`.
pub fn verify_extens_for_k(k: &SimplicialComplex, ring: Ring) -> Result<StrandComparison, SrError> {
    let n = k.ambient();
    let kos = koszul_complex(k, ring)?;
    let base = Arc::new(Poset::affine_space(n)?);
    let omega = Sheaf::canonical(base, ring)?;
    let lhs = kos.complex.hom_into(&omega)?;
    let dual = dual_taylor(&stanley_reisner_ideal(k), ring)?;
    Ok(compare_strands(
        &sheaf_strands(&lhs, n),
        &graded_strands(&dual, n),
        n,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeReisner {
    pub codimension: i32,
    /// Whether every squarefree piece of `Ext^i_R(R/I_K, R(-1))` vanishes for
    /// `i != codimension` and is free for `i = codimension`.
    pub concentrated: bool,
    pub offending: Option<ExtEntry>,
    pub sheaf_cm: bool,
    pub agree: bool,
}

/// Cohen-Macaulayness of `R/I_K` read off the Taylor Ext table, against the sheaf verdict.
pub fn reisner_scheme_side(k: &SimplicialComplex, ring: Ring) -> Result<SchemeReisner, SrError> {
    let codimension = k.codimension();
    let table = taylor_ext_table(&stanley_reisner_ideal(k), ring)?;
    let offending = table
        .into_iter()
        .find(|e| e.i != codimension || !e.torsion.is_empty());
    let concentrated = offending.is_none();
    let sheaf_cm = is_cohen_macaulay(k, ring)?.cm;
    Ok(SchemeReisner {
        codimension,
        concentrated,
        offending,
        sheaf_cm,
        agree: concentrated == sheaf_cm,
    })
}
