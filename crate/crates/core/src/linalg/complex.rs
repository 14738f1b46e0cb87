use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{elim, FgModule, LinalgError, Ring, SparseMatrix};

/// Bounded cochain complex `C^lo -> C^{lo+1} -> ... -> C^hi` of free modules.
///
/// `diffs[k]` is the differential out of degree `lo + k`; the last term has none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<SparseMatrix>,
}

/// Per-degree components of a map between complexes; missing degrees are zero.
#[derive(Clone, Debug, Default)]
pub struct ChainMap {
    pub components: BTreeMap<i32, SparseMatrix>,
}

impl ChainComplex {
    /// Builds a complex and checks shapes and `d∘d = 0`.
    pub fn new(
        ring: Ring,
        lo: i32,
        dims: Vec<usize>,
        diffs: Vec<SparseMatrix>,
    ) -> Result<Self, LinalgError> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(LinalgError::Shape {
                expected: dims.len().saturating_sub(1),
                found: diffs.len(),
            });
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(LinalgError::Shape {
                    expected: dims[k],
                    found: d.cols(),
                });
            }
        }
        for (k, w) in diffs.windows(2).enumerate() {
            if !w[1].mul(&w[0], ring).is_zero() {
                return Err(LinalgError::NotAComplex(lo + k as i32));
            }
        }
        let diffs = diffs.into_iter().map(|d| d.scale(1, ring)).collect();
        Ok(Self {
            ring,
            lo,
            dims,
            diffs,
        })
    }

    pub fn zero(ring: Ring) -> Self {
        Self {
            ring,
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A single free module of rank `dim` in `degree`.
    pub fn concentrated(ring: Ring, degree: i32, dim: usize) -> Self {
        Self {
            ring,
            lo: degree,
            dims: vec![dim],
            diffs: Vec::new(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Lowest degree carrying a term slot.
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree carrying a term slot (`lo - 1` when empty).
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.index(degree).map_or(0, |k| self.dims[k])
    }

    /// Differential out of `degree`, if both ends lie in range.
    pub fn differential(&self, degree: i32) -> Option<&SparseMatrix> {
        self.index(degree).and_then(|k| self.diffs.get(k))
    }

    fn index(&self, degree: i32) -> Option<usize> {
        let k = degree.checked_sub(self.lo)?;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|d| {
                if d.rem_euclid(2) == 0 {
                    self.dim(d) as i64
                } else {
                    -(self.dim(d) as i64)
                }
            })
            .sum()
    }

    /// Cohomology in every degree of the range.
    pub fn homology(&self) -> BTreeMap<i32, FgModule> {
        let ring = self.ring;
        let info: Vec<(usize, Vec<u64>)> = self
            .diffs
            .par_iter()
            .map(|d| match ring {
                Ring::Integers => elim::invariant_factors(d),
                _ => (elim::rank(d, ring), Vec::new()),
            })
            .collect();
        self.degrees()
            .enumerate()
            .map(|(k, deg)| {
                let (r_out, _) = info.get(k).map_or((0, &[][..]), |x| (x.0, &x.1[..]));
                let (r_in, torsion) = if k == 0 {
                    (0, &[][..])
                } else {
                    (info[k - 1].0, &info[k - 1].1[..])
                };
                let rank = self.dims[k] - r_in - r_out;
                (deg, FgModule::with_torsion(rank, torsion.iter().copied()))
            })
            .collect()
    }

    /// Cohomology with zero groups dropped.
    pub fn nonzero_homology(&self) -> BTreeMap<i32, FgModule> {
        self.homology()
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .collect()
    }

    pub fn homology_at(&self, degree: i32) -> FgModule {
        self.homology().remove(&degree).unwrap_or_default()
    }

    /// Ranks of the cohomology, for field coefficients or free parts.
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        self.nonzero_homology()
            .into_iter()
            .map(|(d, m)| (d, m.rank))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.nonzero_homology().is_empty()
    }

    /// Term-wise dual: degrees negated, differentials transposed.
    pub fn dual(&self) -> ChainComplex {
        let mut dims = self.dims.clone();
        dims.reverse();
        let diffs = self
            .diffs
            .iter()
            .rev()
            .map(SparseMatrix::transpose)
            .collect();
        ChainComplex {
            ring: self.ring,
            lo: -self.hi(),
            dims,
            diffs,
        }
    }

    /// `C[m]` with `C[m]^i = C^{m+i}` and differential multiplied by `(-1)^m`.
    pub fn shift(&self, m: i32) -> ChainComplex {
        let sign = self.ring.sign(m.rem_euclid(2) as usize);
        ChainComplex {
            ring: self.ring,
            lo: self.lo - m,
            dims: self.dims.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|d| d.scale(sign, self.ring))
                .collect(),
        }
    }

    /// Mapping cone: `Cone^i = A^{i+1} ⊕ B^i`, `d = [[-d_A, 0], [f, d_B]]`.
    pub fn cone(
        a: &ChainComplex,
        b: &ChainComplex,
        f: &ChainMap,
    ) -> Result<ChainComplex, LinalgError> {
        let ring = a.ring;
        let lo = (a.lo - 1).min(b.lo);
        let hi = (a.hi() - 1).max(b.hi());
        if hi < lo {
            return Ok(ChainComplex::zero(ring));
        }
        let dims: Vec<usize> = (lo..=hi).map(|i| a.dim(i + 1) + b.dim(i)).collect();
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (sa, sb) = (a.dim(i + 1), b.dim(i));
            let mut t = Vec::new();
            if let Some(da) = a.differential(i + 1) {
                t.extend(da.triplets().map(|(r, c, v)| (r, c, ring.neg(v))));
            }
            if let Some(fm) = f.components.get(&(i + 1)) {
                if fm.cols() != sa || fm.rows() != b.dim(i + 1) {
                    return Err(LinalgError::Shape {
                        expected: sa,
                        found: fm.cols(),
                    });
                }
                t.extend(fm.triplets().map(|(r, c, v)| (a.dim(i + 2) + r, c, v)));
            }
            if let Some(db) = b.differential(i) {
                t.extend(db.triplets().map(|(r, c, v)| (a.dim(i + 2) + r, sa + c, v)));
            }
            diffs.push(SparseMatrix::from_triplets(
                dims[(i + 1 - lo) as usize],
                sa + sb,
                t,
                ring,
            ));
        }
        ChainComplex::new(ring, lo, dims, diffs)
    }

    /// Drops zero terms at both ends.
    pub fn trimmed(&self) -> ChainComplex {
        let Some(first) = self.dims.iter().position(|&d| d > 0) else {
            return ChainComplex::zero(self.ring);
        };
        let last = self
            .dims
            .iter()
            .rposition(|&d| d > 0)
            .expect("nonzero term");
        ChainComplex {
            ring: self.ring,
            lo: self.lo + first as i32,
            dims: self.dims[first..=last].to_vec(),
            diffs: self.diffs[first..last].to_vec(),
        }
    }
}

impl ChainMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i32, m: SparseMatrix) {
        self.components.insert(degree, m);
    }

    /// Checks `f ∘ d_A = d_B ∘ f` in every degree.
    pub fn is_chain_map(&self, a: &ChainComplex, b: &ChainComplex) -> bool {
        let ring = a.ring;
        let comp = |d: i32, rows: usize, cols: usize| {
            self.components
                .get(&d)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zeros(rows, cols))
        };
        let lo = a.lo.min(b.lo);
        let hi = a.hi().max(b.hi());
        (lo..=hi).all(|i| {
            let left = match a.differential(i) {
                Some(da) => comp(i + 1, b.dim(i + 1), a.dim(i + 1)).mul(da, ring),
                None => SparseMatrix::zeros(b.dim(i + 1), a.dim(i)),
            };
            let right = match b.differential(i) {
                Some(db) => db.mul(&comp(i, b.dim(i), a.dim(i)), ring),
                None => SparseMatrix::zeros(b.dim(i + 1), a.dim(i)),
            };
            left.to_dense().normalized(ring) == right.to_dense().normalized(ring)
        })
    }
}
