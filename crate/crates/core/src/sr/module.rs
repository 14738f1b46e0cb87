use std::collections::HashMap;
use std::sync::Arc;

use crate::linalg::{rank, FgModule, Matrix, Quotient, Ring, SparseMatrix};
use crate::poset::{subset_label, Poset};
use crate::sheaf::Sheaf;

use super::{MonomialIdeal, SrError};

/// A squarefree `Z^n`-graded module: a free module `M_p` for each subset `p` and
/// multiplication maps `x_i : M_p -> M_{p+i}` for `i` not in `p`.
///
/// The module in an arbitrary degree `a` is `M_{supp a}`, with `x_i` acting as
/// the identity whenever `i` already lies in the support.
#[derive(Clone, Debug)]
pub struct SquarefreeModule {
    n: usize,
    ring: Ring,
    ranks: Vec<usize>,
    mult: HashMap<(u64, usize), Matrix>,
}

impl SquarefreeModule {
    /// Ranks are indexed by subset key; `mult[(p, i)]` is `x_{i+1}` out of `M_p`.
    pub fn new(
        n: usize,
        ring: Ring,
        ranks: Vec<usize>,
        mult: HashMap<(u64, usize), Matrix>,
    ) -> Result<Self, SrError> {
        if ranks.len() != 1 << n {
            return Err(SrError::ExponentLength {
                expected: 1 << n,
                found: ranks.len(),
            });
        }
        let mut full = HashMap::new();
        for p in 0..1u64 << n {
            for i in (0..n).filter(|i| p >> i & 1 == 0) {
                let q = p | 1 << i;
                let m = match mult.get(&(p, i)) {
                    Some(m) => m.normalized(ring),
                    None => Matrix::zeros(ranks[q as usize], ranks[p as usize]),
                };
                if m.rows() != ranks[q as usize] || m.cols() != ranks[p as usize] {
                    return Err(SrError::ExponentLength {
                        expected: ranks[p as usize],
                        found: m.cols(),
                    });
                }
                full.insert((p, i), m);
            }
        }
        for p in 0..1u64 << n {
            for i in (0..n).filter(|i| p >> i & 1 == 0) {
                for j in (i + 1..n).filter(|j| p >> j & 1 == 0) {
                    let ij = full[&(p | 1 << i, j)].mul(&full[&(p, i)], ring);
                    let ji = full[&(p | 1 << j, i)].mul(&full[&(p, j)], ring);
                    if ij != ji {
                        return Err(SrError::NotCommuting(subset_label(p, 1)));
                    }
                }
            }
        }
        Ok(Self {
            n,
            ring,
            ranks,
            mult: full,
        })
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self, p: u64) -> usize {
        self.ranks[p as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// `x_{i+1} : M_p -> M_{p+i}`, the identity when `i` lies in `p`.
    pub fn multiplication(&self, p: u64, i: usize) -> Matrix {
        if p >> i & 1 == 1 {
            Matrix::identity(self.rank(p))
        } else {
            self.mult[&(p, i)].clone()
        }
    }

    /// The same data read as a sheaf on affine space.
    pub fn to_sheaf(&self) -> Result<Sheaf, SrError> {
        let base = Arc::new(Poset::affine_space(self.n)?);
        let ranks = (0..base.len()).map(|x| self.rank(base.key(x))).collect();
        let sheaf = Sheaf::from_rule(base.clone(), self.ring, ranks, |x, y| {
            let (p, q) = (base.key(x), base.key(y));
            self.mult[&(p, (q & !p).trailing_zeros() as usize)].clone()
        })?;
        Ok(sheaf)
    }
}

fn affine_dimension(f: &Sheaf) -> Result<usize, SrError> {
    let base = f.base();
    match base.ambient() {
        Some(n) if base.len() == 1 << n => Ok(n),
        _ => Err(SrError::NotAffine),
    }
}

/// The squarefree module of a sheaf on affine space: `M_p = F_p`, with `x_i`
/// acting by restriction.
pub fn pi_star(f: &Sheaf) -> Result<SquarefreeModule, SrError> {
    let n = affine_dimension(f)?;
    let base = f.base();
    let ranks = (0..1u64 << n)
        .map(|p| f.rank(base.index_of(p).expect("full affine space")))
        .collect();
    let mut mult = HashMap::new();
    for x in 0..base.len() {
        for &y in base.covers_up(x) {
            let i = (base.key(y) & !base.key(x)).trailing_zeros() as usize;
            mult.insert((base.key(x), i), f.restriction(x, y));
        }
    }
    SquarefreeModule::new(n, f.ring(), ranks, mult)
}

/// The colimit of a sheaf over a set of points closed under going down, as the
/// quotient of `⊕ F_p` by `v ~ r_pq(v)`.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub module: FgModule,
    quotient: Quotient,
    blocks: HashMap<usize, (usize, usize)>,
}

impl Colimit {
    pub fn contains(&self, p: usize) -> bool {
        self.blocks.contains_key(&p)
    }

    /// The map of colimits induced by point-wise maps `F_p -> G_p`, on free parts.
    pub fn induced(
        &self,
        target: &Colimit,
        component: impl Fn(usize) -> Matrix,
        ring: Ring,
    ) -> Result<Matrix, SrError> {
        let reps = self.quotient.representatives();
        let total = target.quotient.representatives().rows();
        let mut lifted = Matrix::zeros(total, reps.cols());
        for (&p, &(off, len)) in &self.blocks {
            let Some(&(toff, tlen)) = target.blocks.get(&p) else {
                continue;
            };
            if len == 0 || tlen == 0 {
                continue;
            }
            let image = component(p).mul(
                &reps.select_rows(&(off..off + len).collect::<Vec<_>>()),
                ring,
            );
            for r in 0..tlen {
                for c in 0..reps.cols() {
                    lifted.set(
                        toff + r,
                        c,
                        ring.add(lifted.get(toff + r, c), image.get(r, c)),
                    );
                }
            }
        }
        Ok(target.quotient.project(&lifted, ring)?)
    }
}

pub fn colimit(f: &Sheaf, points: &[usize]) -> Result<Colimit, SrError> {
    let ring = f.ring();
    let base = f.base();
    let mut blocks = HashMap::new();
    let mut total = 0;
    for &p in points {
        blocks.insert(p, (total, f.rank(p)));
        total += f.rank(p);
    }
    let mut triplets = Vec::new();
    let mut col = 0;
    for &p in points {
        for &q in base.covers_up(p) {
            let Some(&(oq, _)) = blocks.get(&q) else {
                continue;
            };
            let r = f.restriction(p, q);
            for b in 0..f.rank(p) {
                triplets.push((blocks[&p].0 + b, col, 1));
                for a in 0..f.rank(q) {
                    triplets.push((oq + a, col, ring.neg(r.get(a, b))));
                }
                col += 1;
            }
        }
    }
    let relations = SparseMatrix::from_triplets(total, col, triplets, ring).to_dense();
    let quotient = Quotient::new(&Matrix::identity(total), &relations, ring)?;
    Ok(Colimit {
        module: quotient.module.clone(),
        quotient,
        blocks,
    })
}

/// The cokernel construction of the squarefree module evaluated literally in degree
/// `a`: the colimit of `F` over the points `p ⊆ supp a`, together with the rank of
/// `x_{i+1}` into degree `a + e_i` for every `i`.
pub fn pi_star_literal(f: &Sheaf, a: &[u32]) -> Result<(FgModule, Vec<usize>), SrError> {
    let n = affine_dimension(f)?;
    if a.len() != n {
        return Err(SrError::ExponentLength {
            expected: n,
            found: a.len(),
        });
    }
    let base = f.base();
    let ring = f.ring();
    let support = super::support_key(a);
    let below =
        |s: u64| -> Vec<usize> { (0..base.len()).filter(|&x| base.key(x) & !s == 0).collect() };
    let here = colimit(f, &below(support))?;
    let mut ranks = Vec::new();
    for i in 0..n {
        let there = colimit(f, &below(support | 1 << i))?;
        let induced = here.induced(&there, |p| Matrix::identity(f.rank(p)), ring)?;
        ranks.push(rank(&induced, ring));
    }
    Ok((here.module, ranks))
}

/// A `Z^n`-graded module known in the degrees `{0..=bound}^n`, with its
/// multiplication maps inside that box.
#[derive(Clone, Debug)]
pub struct BoxModule {
    n: usize,
    ring: Ring,
    bound: u32,
    ranks: Vec<usize>,
    mult: Vec<Vec<Matrix>>,
}

impl BoxModule {
    fn index(&self, a: &[u32]) -> usize {
        a.iter()
            .rev()
            .fold(0, |acc, &e| acc * (self.bound as usize + 1) + e as usize)
    }

    fn degrees(n: usize, bound: u32) -> Vec<Vec<u32>> {
        let side = bound as usize + 1;
        (0..side.pow(n as u32))
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let e = (k % side) as u32;
                        k /= side;
                        e
                    })
                    .collect()
            })
            .collect()
    }

    fn build(
        n: usize,
        ring: Ring,
        bound: u32,
        rank_of: impl Fn(&[u32]) -> usize,
        mult_of: impl Fn(&[u32], usize) -> Matrix,
    ) -> Self {
        let degrees = Self::degrees(n, bound);
        let ranks = degrees.iter().map(|a| rank_of(a)).collect();
        let mult = degrees
            .iter()
            .map(|a| {
                (0..n)
                    .map(|i| {
                        if a[i] < bound {
                            mult_of(a, i)
                        } else {
                            Matrix::zeros(0, 0)
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            n,
            ring,
            bound,
            ranks,
            mult,
        }
    }

    /// `⊕_j R(-b_j)`.
    pub fn free(
        n: usize,
        ring: Ring,
        generators: &[Vec<u32>],
        bound: u32,
    ) -> Result<Self, SrError> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(SrError::ExponentLength {
                expected: n,
                found: g.len(),
            });
        }
        let present = |a: &[u32]| -> Vec<usize> {
            (0..generators.len())
                .filter(|&j| super::divides(&generators[j], a))
                .collect()
        };
        Ok(Self::build(
            n,
            ring,
            bound,
            |a| present(a).len(),
            |a, i| {
                let mut b = a.to_vec();
                b[i] += 1;
                let (src, tgt) = (present(a), present(&b));
                Matrix::from_fn(tgt.len(), src.len(), |r, c| (tgt[r] == src[c]) as i64)
            },
        ))
    }

    /// `R / I`.
    pub fn quotient_ring(ideal: &MonomialIdeal, ring: Ring, bound: u32) -> Self {
        let alive = |a: &[u32]| !ideal.contains(a);
        Self::build(
            ideal.vars(),
            ring,
            bound,
            |a| alive(a) as usize,
            |a, i| {
                let mut b = a.to_vec();
                b[i] += 1;
                Matrix::from_fn(alive(&b) as usize, alive(a) as usize, |_, _| 1)
            },
        )
    }

    pub fn from_squarefree(m: &SquarefreeModule, bound: u32) -> Self {
        Self::build(
            m.vars(),
            m.ring(),
            bound,
            |a| m.rank(super::support_key(a)),
            |a, i| m.multiplication(super::support_key(a), i),
        )
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn rank(&self, a: &[u32]) -> usize {
        self.ranks[self.index(a)]
    }

    /// `x_{i+1}` out of degree `a`; requires `a_i < bound`.
    pub fn multiplication(&self, a: &[u32], i: usize) -> &Matrix {
        &self.mult[self.index(a)][i]
    }

    /// The squarefree window: the pieces in degrees `{0,1}^n`.
    pub fn window(&self) -> Result<SquarefreeModule, SrError> {
        if self.bound < 1 {
            return Err(SrError::InsufficientData(self.bound));
        }
        let n = self.n;
        let exps = |p: u64| super::key_exponents(p, n);
        let ranks = (0..1u64 << n).map(|p| self.rank(&exps(p))).collect();
        let mut mult = HashMap::new();
        for p in 0..1u64 << n {
            for i in (0..n).filter(|i| p >> i & 1 == 0) {
                mult.insert((p, i), self.multiplication(&exps(p), i).clone());
            }
        }
        SquarefreeModule::new(n, self.ring, ranks, mult)
    }

    /// Rank of the module of degree-preserving maps `self -> other` that commute
    /// with every multiplication inside the box.
    pub fn hom_rank(&self, other: &BoxModule) -> Result<usize, SrError> {
        if self.n != other.n || self.bound != other.bound {
            return Err(SrError::ExponentLength {
                expected: self.n,
                found: other.n,
            });
        }
        let ring = self.ring;
        let degrees = Self::degrees(self.n, self.bound);
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut total = 0;
        for a in &degrees {
            offsets.push(total);
            total += self.rank(a) * other.rank(a);
        }
        let mut triplets = Vec::new();
        let mut row = 0;
        for (k, a) in degrees.iter().enumerate() {
            for i in (0..self.n).filter(|&i| a[i] < self.bound) {
                let mut b = a.clone();
                b[i] += 1;
                let kb = self.index(&b);
                let (g, f) = (other.multiplication(a, i), self.multiplication(a, i));
                let (sa, sb) = (self.rank(a), self.rank(&b));
                // g * phi_a - phi_b * f, entry (r, c) of an other_b x self_a matrix.
                for r in 0..other.rank(&b) {
                    for c in 0..sa {
                        for t in 0..other.rank(a) {
                            let v = g.get(r, t);
                            if v != 0 {
                                triplets.push((row, offsets[k] + t * sa + c, v));
                            }
                        }
                        for t in 0..sb {
                            let v = f.get(t, c);
                            if v != 0 {
                                triplets.push((row, offsets[kb] + r * sb + t, ring.neg(v)));
                            }
                        }
                        row += 1;
                    }
                }
            }
        }
        let constraints = SparseMatrix::from_triplets(row, total, triplets, ring);
        Ok(total - crate::linalg::elim::rank(&constraints, ring))
    }
}
