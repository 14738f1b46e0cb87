use std::collections::BTreeMap;
use std::sync::Arc;

use crate::linalg::{solve, ChainComplex, FgModule, Matrix, Ring};
use crate::poset::Poset;

use super::{Sheaf, SheafError, SheafMorphism};

/// A bounded cochain complex of sheaves `F^lo -> ... -> F^hi`.
#[derive(Clone, Debug)]
pub struct SheafComplex {
    base: Arc<Poset>,
    ring: Ring,
    lo: i32,
    terms: Vec<Sheaf>,
    diffs: Vec<SheafMorphism>,
}

impl SheafComplex {
    /// Checks that consecutive differentials compose to zero at every stalk.
    pub fn new(lo: i32, terms: Vec<Sheaf>, diffs: Vec<SheafMorphism>) -> Result<Self, SheafError> {
        let first = terms.first().ok_or(SheafError::EmptyComplex)?;
        let (base, ring) = (first.base().clone(), first.ring());
        if diffs.len() + 1 != terms.len() {
            return Err(SheafError::RankCount {
                expected: terms.len() - 1,
                found: diffs.len(),
            });
        }
        for w in diffs.windows(2) {
            for x in 0..base.len() {
                if !w[1].component(x).mul(w[0].component(x), ring).is_zero() {
                    return Err(SheafError::NotAComplex(base.label(x)));
                }
            }
        }
        Ok(Self {
            base,
            ring,
            lo,
            terms,
            diffs,
        })
    }

    /// A single sheaf placed in `degree`.
    pub fn concentrated(f: Sheaf, degree: i32) -> Self {
        Self {
            base: f.base().clone(),
            ring: f.ring(),
            lo: degree,
            terms: vec![f],
            diffs: Vec::new(),
        }
    }

    /// `A -> B` with `A` in `degree`.
    pub fn two_term(map: SheafMorphism, degree: i32) -> Self {
        let (a, b) = (map.source().clone(), map.target().clone());
        Self {
            base: a.base().clone(),
            ring: a.ring(),
            lo: degree,
            terms: vec![a, b],
            diffs: vec![map],
        }
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn term(&self, degree: i32) -> Option<&Sheaf> {
        let k = degree - self.lo;
        (k >= 0).then(|| self.terms.get(k as usize)).flatten()
    }

    /// Differential out of `degree`.
    pub fn differential(&self, degree: i32) -> Option<&SheafMorphism> {
        let k = degree - self.lo;
        (k >= 0).then(|| self.diffs.get(k as usize)).flatten()
    }

    pub fn rank(&self, degree: i32, x: usize) -> usize {
        self.term(degree).map_or(0, |f| f.rank(x))
    }

    /// The complex of stalks at `x`.
    pub fn stalk_complex(&self, x: usize) -> ChainComplex {
        let dims = self.terms.iter().map(|f| f.rank(x)).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|d| d.component(x).to_sparse())
            .collect();
        ChainComplex::new(self.ring, self.lo, dims, diffs).expect("checked at construction")
    }

    /// Nonzero cohomology of the stalk complex at `x`.
    pub fn stalk_cohomology(&self, x: usize) -> BTreeMap<i32, FgModule> {
        self.stalk_complex(x).nonzero_homology()
    }

    /// `C[m]` with `C[m]^i = C^{m+i}` and differentials multiplied by `(-1)^m`.
    pub fn shift(&self, m: i32) -> SheafComplex {
        let sign = self.ring.sign(m.rem_euclid(2) as usize);
        Self {
            base: self.base.clone(),
            ring: self.ring,
            lo: self.lo - m,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scaled(sign)).collect(),
        }
    }

    /// Restriction of every term to a subposet.
    pub fn restrict_to(&self, sub: Arc<Poset>) -> Result<SheafComplex, SheafError> {
        let terms: Vec<Sheaf> = self
            .terms
            .iter()
            .map(|f| f.restrict_to(sub.clone()))
            .collect::<Result<_, _>>()?;
        let map: Vec<usize> = (0..sub.len())
            .map(|i| self.base.index_of(sub.key(i)).expect("checked"))
            .collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let comps = map.iter().map(|&x| d.component(x).clone()).collect();
                SheafMorphism::new(terms[k].clone(), terms[k + 1].clone(), comps)
            })
            .collect::<Result<_, _>>()?;
        SheafComplex::new(self.lo, terms, diffs)
    }

    /// Extension by zero of every term to a larger poset.
    pub fn extend_by_zero(&self, base: Arc<Poset>) -> Result<SheafComplex, SheafError> {
        let terms: Vec<Sheaf> = self
            .terms
            .iter()
            .map(|f| f.extend_by_zero(base.clone()))
            .collect::<Result<_, _>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let comps = (0..base.len())
                    .map(|x| match self.base.index_of(base.key(x)) {
                        Some(i) => d.component(i).clone(),
                        None => Matrix::zeros(0, 0),
                    })
                    .collect();
                SheafMorphism::new(terms[k].clone(), terms[k + 1].clone(), comps)
            })
            .collect::<Result<_, _>>()?;
        SheafComplex::new(self.lo, terms, diffs)
    }

    /// The cohomology sheaf in `degree`; over the integers its stalks must be free.
    pub fn cohomology_sheaf(&self, degree: i32) -> Result<Sheaf, SheafError> {
        let Some(term) = self.term(degree) else {
            return Ok(Sheaf::zero(self.base.clone(), self.ring));
        };
        let (cycles, incl) = match self.differential(degree) {
            Some(d) => d.kernel()?,
            None => (term.clone(), SheafMorphism::identity(term)),
        };
        let Some(prev) = self.differential(degree - 1) else {
            return Ok(cycles);
        };
        let comps = (0..self.base.len())
            .map(|x| {
                if cycles.rank(x) == 0 || prev.source().rank(x) == 0 {
                    return Ok(Matrix::zeros(cycles.rank(x), prev.source().rank(x)));
                }
                solve(incl.component(x), prev.component(x), self.ring)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let into_cycles = SheafMorphism::new(prev.source().clone(), cycles, comps)?;
        Ok(into_cycles.cokernel()?.0)
    }

    /// Sum of the ranks of all terms at all points.
    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(Sheaf::total_rank).sum()
    }
}
