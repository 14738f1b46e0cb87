use std::collections::BTreeMap;

use crate::linalg::{rank, rank_kernel_image, ChainComplex, Matrix, Ring, SparseMatrix};

use super::SrError;

/// A bounded cochain complex of `Z^m`-graded free modules over `k[x_1..x_m]`.
///
/// A differential entry `(s, t, c)` from term `k` sends generator `s` to
/// `c * x^(deg s - deg t)` times generator `t` of term `k + 1`.
#[derive(Clone, Debug)]
pub struct GradedFreeComplex {
    vars: usize,
    ring: Ring,
    lo: i32,
    terms: Vec<Vec<Vec<i64>>>,
    diffs: Vec<Vec<(usize, usize, i64)>>,
}

impl GradedFreeComplex {
    /// Checks degree lengths, homogeneity and `d∘d = 0`.
    pub fn new(
        vars: usize,
        ring: Ring,
        lo: i32,
        terms: Vec<Vec<Vec<i64>>>,
        diffs: Vec<Vec<(usize, usize, i64)>>,
    ) -> Result<Self, SrError> {
        if let Some(d) = terms.iter().flatten().find(|d| d.len() != vars) {
            return Err(SrError::ExponentLength {
                expected: vars,
                found: d.len(),
            });
        }
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(SrError::NotAComplex(lo));
        }
        for (k, d) in diffs.iter().enumerate() {
            for &(s, t, _) in d {
                let (Some(src), Some(tgt)) = (terms[k].get(s), terms[k + 1].get(t)) else {
                    return Err(SrError::BadGenerator(s));
                };
                if tgt.iter().zip(src).any(|(a, b)| a > b) {
                    return Err(SrError::NotHomogeneous(s));
                }
            }
        }
        for k in 1..diffs.len() {
            let first = scalar_matrix(&diffs[k - 1], terms[k].len(), terms[k - 1].len(), ring);
            let second = scalar_matrix(&diffs[k], terms[k + 1].len(), terms[k].len(), ring);
            if !second.mul(&first, ring).is_zero() {
                return Err(SrError::NotAComplex(lo + k as i32 - 1));
            }
        }
        Ok(Self {
            vars,
            ring,
            lo,
            terms,
            diffs,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
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

    /// Generator degrees of the term in `degree`.
    pub fn generators(&self, degree: i32) -> &[Vec<i64>] {
        let k = degree - self.lo;
        if k < 0 {
            return &[];
        }
        self.terms.get(k as usize).map_or(&[], Vec::as_slice)
    }

    fn present(&self, k: usize, a: &[i64]) -> Vec<Option<usize>> {
        let mut next = 0;
        self.terms[k]
            .iter()
            .map(|d| {
                d.iter().zip(a).all(|(x, y)| x <= y).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    }

    /// The degree-`a` piece, a finite complex of free `k`-modules.
    pub fn strand(&self, a: &[i64]) -> ChainComplex {
        if self.terms.is_empty() {
            return ChainComplex::zero(self.ring);
        }
        let present: Vec<Vec<Option<usize>>> =
            (0..self.terms.len()).map(|k| self.present(k, a)).collect();
        let dims: Vec<usize> = present.iter().map(|p| p.iter().flatten().count()).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let triplets = d
                    .iter()
                    .filter_map(|&(s, t, c)| Some((present[k + 1][t]?, present[k][s]?, c)))
                    .collect();
                SparseMatrix::from_triplets(dims[k + 1], dims[k], triplets, self.ring)
            })
            .collect();
        ChainComplex::new(self.ring, self.lo, dims, diffs)
            .expect("strands of a complex are complexes")
    }

    /// The inclusion of the degree-`a` strand into the degree-`b` strand, `a <= b`.
    pub fn strand_map(&self, a: &[i64], b: &[i64]) -> BTreeMap<i32, Matrix> {
        (0..self.terms.len())
            .map(|k| {
                let (pa, pb) = (self.present(k, a), self.present(k, b));
                let rows = pb.iter().flatten().count();
                let cols = pa.iter().flatten().count();
                let mut m = Matrix::zeros(rows, cols);
                for (x, y) in pa.iter().zip(&pb) {
                    if let (Some(c), Some(r)) = (x, y) {
                        m.set(*r, *c, 1);
                    }
                }
                (self.lo + k as i32, m)
            })
            .collect()
    }

    /// `Hom(C, R(-c))`: the term in degree `i` moves to degree `-i` and a generator of
    /// degree `b` becomes one of degree `c - b`.
    pub fn dual(&self, c: &[i64]) -> GradedFreeComplex {
        let len = self.terms.len();
        let terms = (0..len)
            .rev()
            .map(|k| {
                self.terms[k]
                    .iter()
                    .map(|b| c.iter().zip(b).map(|(x, y)| x - y).collect())
                    .collect()
            })
            .collect();
        let diffs = (0..self.diffs.len())
            .rev()
            .map(|k| self.diffs[k].iter().map(|&(s, t, v)| (t, s, v)).collect())
            .collect();
        Self {
            vars: self.vars,
            ring: self.ring,
            lo: -self.hi(),
            terms,
            diffs,
        }
    }
}

fn scalar_matrix(entries: &[(usize, usize, i64)], rows: usize, cols: usize, ring: Ring) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for &(s, t, c) in entries {
        m.set(t, s, ring.add(m.get(t, s), c));
    }
    m
}

/// Complex on subsets of `gens`: subset `S` sits in degree `-|S|` with degree
/// `combine(S)`; `e_S` maps to `sum_t (-1)^t e_{S - s_t}`.
fn subset_complex(
    vars: usize,
    count: usize,
    ring: Ring,
    degree_of: impl Fn(u64) -> Vec<i64>,
) -> GradedFreeComplex {
    let by_size: Vec<Vec<u64>> = (0..=count)
        .map(|s| {
            (0..1u64 << count)
                .filter(|m| m.count_ones() as usize == s)
                .collect()
        })
        .collect();
    let terms: Vec<Vec<Vec<i64>>> = by_size
        .iter()
        .rev()
        .map(|ms| ms.iter().map(|&m| degree_of(m)).collect())
        .collect();
    let diffs = (0..count)
        .map(|k| {
            let size = count - k;
            let targets = &by_size[size - 1];
            by_size[size]
                .iter()
                .enumerate()
                .flat_map(|(s, &m)| {
                    (0..count)
                        .filter(move |&j| m >> j & 1 == 1)
                        .enumerate()
                        .map(move |(t, j)| {
                            let face = m & !(1 << j);
                            let tgt = targets
                                .binary_search(&face)
                                .expect("faces have one fewer element");
                            (s, tgt, ring.sign(t))
                        })
                })
                .collect()
        })
        .collect();
    GradedFreeComplex::new(vars, ring, -(count as i32), terms, diffs)
        .expect("subset complexes are complexes")
}

/// The Taylor resolution of `R/I` on the listed generators, in the given order.
pub fn taylor_complex_of(
    vars: usize,
    gens: &[Vec<u32>],
    ring: Ring,
) -> Result<GradedFreeComplex, SrError> {
    if let Some(g) = gens.iter().find(|g| g.len() != vars) {
        return Err(SrError::ExponentLength {
            expected: vars,
            found: g.len(),
        });
    }
    Ok(subset_complex(vars, gens.len(), ring, |m| {
        (0..vars)
            .map(|v| {
                (0..gens.len())
                    .filter(|&j| m >> j & 1 == 1)
                    .map(|j| gens[j][v] as i64)
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }))
}

pub fn taylor_complex(ideal: &super::MonomialIdeal, ring: Ring) -> GradedFreeComplex {
    taylor_complex_of(ideal.vars(), ideal.generators(), ring)
        .expect("ideal generators have matching length")
}

/// The Koszul complex of a sequence of monomials.
pub fn koszul_monomial_complex(
    vars: usize,
    monomials: &[Vec<u32>],
    ring: Ring,
) -> Result<GradedFreeComplex, SrError> {
    if let Some(g) = monomials.iter().find(|g| g.len() != vars) {
        return Err(SrError::ExponentLength {
            expected: vars,
            found: g.len(),
        });
    }
    Ok(subset_complex(vars, monomials.len(), ring, |m| {
        (0..vars)
            .map(|v| {
                (0..monomials.len())
                    .filter(|&j| m >> j & 1 == 1)
                    .map(|j| monomials[j][v] as i64)
                    .sum()
            })
            .collect()
    }))
}

/// Rank of the map induced on cohomology in `degree` by a chain map `src -> tgt`.
pub fn induced_rank(
    src: &ChainComplex,
    tgt: &ChainComplex,
    map: &BTreeMap<i32, Matrix>,
    degree: i32,
) -> usize {
    let ring = src.ring();
    let (Some(f), true) = (map.get(&degree), src.dim(degree) > 0 && tgt.dim(degree) > 0) else {
        return 0;
    };
    let cycles = match src.differential(degree) {
        Some(d) if !d.is_zero() => rank_kernel_image(&d.to_dense(), ring).kernel,
        _ => Matrix::identity(src.dim(degree)),
    };
    let pushed = f.mul(&cycles, ring);
    let boundaries = match tgt.differential(degree - 1) {
        Some(d) => d.to_dense(),
        None => Matrix::zeros(tgt.dim(degree), 0),
    };
    rank(&boundaries.hstack(&pushed), ring) - rank(&boundaries, ring)
}
