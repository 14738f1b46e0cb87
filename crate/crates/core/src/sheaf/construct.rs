use std::sync::Arc;

use rand::Rng;

use crate::linalg::{rank_kernel_image, solve, Matrix, Ring};
use crate::poset::Poset;

use super::{Sheaf, SheafError, SheafMorphism};

/// `S` is locally closed: `p <= q <= r` with `p, r` in `S` forces `q` in `S`.
pub fn is_locally_closed(base: &Poset, set: &[usize]) -> bool {
    let mut member = vec![false; base.len()];
    for &p in set {
        member[p] = true;
    }
    set.iter().all(|&p| {
        base.above(p)
            .iter()
            .all(|&q| member[q] || !base.above(q).iter().any(|&r| member[r]))
    })
}

fn rank_one_on(base: Arc<Poset>, ring: Ring, member: Vec<bool>) -> Result<Sheaf, SheafError> {
    let ranks = member.iter().map(|&m| usize::from(m)).collect();
    Sheaf::from_rule(base, ring, ranks, |p, q| {
        if member[p] && member[q] {
            Matrix::identity(1)
        } else {
            Matrix::zeros(usize::from(member[q]), usize::from(member[p]))
        }
    })
}

impl Sheaf {
    /// Constant sheaf of the given rank.
    pub fn constant(base: Arc<Poset>, ring: Ring, rank: usize) -> Sheaf {
        let n = base.len();
        Sheaf::from_rule(base, ring, vec![rank; n], |_, _| Matrix::identity(rank))
            .expect("constant sheaf")
    }

    /// `k_{U_p}`: rank one on the points above `p`.
    pub fn unit_on_up_set(base: Arc<Poset>, ring: Ring, p: usize) -> Sheaf {
        let member = (0..base.len()).map(|q| base.leq(p, q)).collect();
        rank_one_on(base, ring, member).expect("up-sets are open")
    }

    /// `k_{C_p}`: rank one on the points below `p`.
    pub fn unit_on_down_set(base: Arc<Poset>, ring: Ring, p: usize) -> Sheaf {
        let member = (0..base.len()).map(|q| base.leq(q, p)).collect();
        rank_one_on(base, ring, member).expect("down-sets are closed")
    }

    /// Rank one at `p` only.
    pub fn skyscraper(base: Arc<Poset>, ring: Ring, p: usize) -> Sheaf {
        let member = (0..base.len()).map(|q| q == p).collect();
        rank_one_on(base, ring, member).expect("points are locally closed")
    }

    /// `k_S` for a locally closed subset `S`.
    pub fn indicator(base: Arc<Poset>, ring: Ring, set: &[usize]) -> Result<Sheaf, SheafError> {
        if !is_locally_closed(&base, set) {
            return Err(SheafError::NotLocallyClosed);
        }
        let mut member = vec![false; base.len()];
        for &p in set {
            member[p] = true;
        }
        rank_one_on(base, ring, member)
    }

    /// The canonical sheaf: rank one at the unique maximal point.
    pub fn canonical(base: Arc<Poset>, ring: Ring) -> Result<Sheaf, SheafError> {
        match base.maximal_points()[..] {
            [top] => Ok(Sheaf::skyscraper(base, ring, top)),
            _ => Err(SheafError::NoGenericPoint),
        }
    }

    /// `F_S`: the stalks of `F` on the locally closed set `S`, zero elsewhere.
    pub fn supported_on(&self, set: &[usize]) -> Result<Sheaf, SheafError> {
        let base = self.base().clone();
        if !is_locally_closed(&base, set) {
            return Err(SheafError::NotLocallyClosed);
        }
        let mut member = vec![false; base.len()];
        for &p in set {
            member[p] = true;
        }
        let ranks = (0..base.len())
            .map(|p| if member[p] { self.rank(p) } else { 0 })
            .collect();
        Sheaf::from_rule(base, self.ring(), ranks, |p, q| {
            if member[p] && member[q] {
                self.restriction(p, q)
            } else {
                Matrix::zeros(
                    if member[q] { self.rank(q) } else { 0 },
                    if member[p] { self.rank(p) } else { 0 },
                )
            }
        })
    }

    /// Restriction to a subposet whose points are points of the base.
    pub fn restrict_to(&self, sub: Arc<Poset>) -> Result<Sheaf, SheafError> {
        let map: Vec<usize> = (0..sub.len())
            .map(|i| {
                self.base()
                    .index_of(sub.key(i))
                    .ok_or_else(|| SheafError::NotASubspace(sub.label(i)))
            })
            .collect::<Result<_, _>>()?;
        let ranks = map.iter().map(|&p| self.rank(p)).collect();
        Sheaf::from_rule(sub, self.ring(), ranks, |i, j| {
            self.restriction(map[i], map[j])
        })
    }

    /// Extension by zero from a locally closed subposet to `base`.
    pub fn extend_by_zero(&self, base: Arc<Poset>) -> Result<Sheaf, SheafError> {
        let sub = self.base();
        let inv: Vec<Option<usize>> = (0..base.len()).map(|p| sub.index_of(base.key(p))).collect();
        let set: Vec<usize> = (0..base.len()).filter(|&p| inv[p].is_some()).collect();
        if set.len() != sub.len() {
            return Err(SheafError::NotASubspace(sub.label(0)));
        }
        if !is_locally_closed(&base, &set) {
            return Err(SheafError::NotLocallyClosed);
        }
        let rank = |p: usize| inv[p].map_or(0, |i| self.rank(i));
        let ranks = (0..base.len()).map(rank).collect();
        Sheaf::from_rule(base, self.ring(), ranks, |p, q| match (inv[p], inv[q]) {
            (Some(i), Some(j)) => self.restriction(i, j),
            _ => Matrix::zeros(rank(q), rank(p)),
        })
    }

    pub fn direct_sum(&self, other: &Sheaf) -> Result<Sheaf, SheafError> {
        Sheaf::sum_of(
            self.base().clone(),
            self.ring(),
            &[self.clone(), other.clone()],
        )
    }

    /// Direct sum of any number of sheaves on `base`.
    pub fn sum_of(base: Arc<Poset>, ring: Ring, parts: &[Sheaf]) -> Result<Sheaf, SheafError> {
        if parts.iter().any(|f| !f.same_base_poset(&base)) {
            return Err(SheafError::BaseMismatch);
        }
        let ranks = (0..base.len())
            .map(|p| parts.iter().map(|f| f.rank(p)).sum())
            .collect();
        Sheaf::from_rule(base, ring, ranks, |p, q| {
            let blocks: Vec<Matrix> = parts.iter().map(|f| f.restriction(p, q)).collect();
            Matrix::block_diagonal(&blocks)
        })
    }

    fn same_base_poset(&self, base: &Arc<Poset>) -> bool {
        Arc::ptr_eq(self.base(), base) || **self.base() == **base
    }

    /// Stalk-wise tensor product with Kronecker-product restrictions.
    pub fn tensor(&self, other: &Sheaf) -> Result<Sheaf, SheafError> {
        if !self.same_base(other) {
            return Err(SheafError::BaseMismatch);
        }
        let ring = self.ring();
        let ranks = (0..self.base().len())
            .map(|p| self.rank(p) * other.rank(p))
            .collect();
        Sheaf::from_rule(self.base().clone(), ring, ranks, |p, q| {
            self.restriction(p, q).kron(&other.restriction(p, q), ring)
        })
    }

    /// Basis (as columns of flattened component matrices) of the morphisms
    /// `F|_V -> G|_V` for a set `V` of points that is closed under covers inside it.
    pub fn hom_basis(&self, other: &Sheaf, points: &[usize]) -> HomBasis {
        let ring = self.ring();
        let base = self.base();
        let mut offsets = vec![usize::MAX; base.len()];
        let mut total = 0;
        for &p in points {
            offsets[p] = total;
            total += other.rank(p) * self.rank(p);
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for &p in points {
            for &q in base.covers_up(p) {
                if offsets[q] == usize::MAX {
                    continue;
                }
                // g_pq * phi_p - phi_q * f_pq = 0, entry (a, b) of a G_q x F_p matrix.
                let g = other.restriction(p, q);
                let f = self.restriction(p, q);
                for a in 0..other.rank(q) {
                    for b in 0..self.rank(p) {
                        let mut row = vec![0i64; total];
                        for c in 0..other.rank(p) {
                            let v = g.get(a, c);
                            if v != 0 {
                                let idx = offsets[p] + c * self.rank(p) + b;
                                row[idx] = ring.add(row[idx], v);
                            }
                        }
                        for c in 0..self.rank(q) {
                            let v = f.get(c, b);
                            if v != 0 {
                                let idx = offsets[q] + a * self.rank(q) + c;
                                row[idx] = ring.sub(row[idx], v);
                            }
                        }
                        if row.iter().any(|&x| x != 0) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let constraints = if rows.is_empty() {
            Matrix::zeros(0, total)
        } else {
            Matrix::from_rows(&rows).expect("uniform rows")
        };
        let basis = rank_kernel_image(&constraints, ring).kernel;
        HomBasis { offsets, basis }
    }

    /// Global morphisms `F -> G`.
    pub fn global_hom(&self, other: &Sheaf) -> Result<HomBasis, SheafError> {
        if !self.same_base(other) {
            return Err(SheafError::BaseMismatch);
        }
        let all: Vec<usize> = (0..self.base().len()).collect();
        Ok(self.hom_basis(other, &all))
    }

    /// The sheaf `x -> Hom(F|_{U_x}, G|_{U_x})`.
    pub fn hom_sheaf(&self, other: &Sheaf) -> Result<Sheaf, SheafError> {
        if !self.same_base(other) {
            return Err(SheafError::BaseMismatch);
        }
        let ring = self.ring();
        let base = self.base().clone();
        let local: Vec<HomBasis> = (0..base.len())
            .map(|x| self.hom_basis(other, &base.up_set(x)))
            .collect();
        let ranks = local.iter().map(|h| h.basis.cols()).collect();
        let mut err = None;
        let built = Sheaf::from_rule(base.clone(), ring, ranks, |x, y| {
            let (hx, hy) = (&local[x], &local[y]);
            if hx.basis.cols() == 0 || hy.basis.cols() == 0 {
                return Matrix::zeros(hy.basis.cols(), hx.basis.cols());
            }
            let rows: Vec<usize> = base
                .up_set(y)
                .into_iter()
                .flat_map(|p| {
                    let len = other.rank(p) * self.rank(p);
                    (0..len).map(move |k| (p, k))
                })
                .map(|(p, k)| hx.offsets[p] + k)
                .collect();
            let restricted = hx.basis.select_rows(&rows);
            solve(&hy.basis, &restricted, ring).unwrap_or_else(|e| {
                err = Some(e);
                Matrix::zeros(hy.basis.cols(), hx.basis.cols())
            })
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        built
    }
}

/// A basis of a module of sheaf morphisms, with the layout of its coordinates.
#[derive(Clone, Debug)]
pub struct HomBasis {
    /// Offset of the block of each point (`usize::MAX` when absent).
    pub offsets: Vec<usize>,
    /// Basis vectors as columns; the block at `p` is the row-major matrix `G_p x F_p`.
    pub basis: Matrix,
}

impl HomBasis {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

/// Random morphism `⊕ k_{U_{p_a}} -> ⊕ k_{C_{q_b}}` with small coefficients.
pub fn random_map(
    base: &Arc<Poset>,
    ring: Ring,
    rng: &mut impl Rng,
    sources: usize,
    targets: usize,
) -> SheafMorphism {
    let src: Vec<usize> = (0..sources).map(|_| rng.gen_range(0..base.len())).collect();
    let dst: Vec<usize> = (0..targets).map(|_| rng.gen_range(0..base.len())).collect();
    let coeff: Vec<Vec<i64>> = src
        .iter()
        .map(|&p| {
            dst.iter()
                .map(|&q| {
                    if base.leq(p, q) {
                        rng.gen_range(-2..=2)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let ups: Vec<Sheaf> = src
        .iter()
        .map(|&p| Sheaf::unit_on_up_set(base.clone(), ring, p))
        .collect();
    let downs: Vec<Sheaf> = dst
        .iter()
        .map(|&q| Sheaf::unit_on_down_set(base.clone(), ring, q))
        .collect();
    let source = Sheaf::sum_of(base.clone(), ring, &ups).expect("same base");
    let target = Sheaf::sum_of(base.clone(), ring, &downs).expect("same base");
    let comps = (0..base.len())
        .map(|x| {
            let cols: Vec<usize> = (0..sources).filter(|&a| base.leq(src[a], x)).collect();
            let rows: Vec<usize> = (0..targets).filter(|&b| base.leq(x, dst[b])).collect();
            Matrix::from_fn(rows.len(), cols.len(), |i, j| coeff[cols[j]][rows[i]])
        })
        .collect();
    SheafMorphism::new(source, target, comps).expect("maps between unit sheaves commute")
}

/// A random finitely generated sheaf: the image of a [`random_map`].
pub fn random_sheaf(base: &Arc<Poset>, ring: Ring, rng: &mut impl Rng, size: usize) -> Sheaf {
    let sources = rng.gen_range(1..=size.max(1));
    let targets = rng.gen_range(1..=size.max(1));
    random_map(base, ring, rng, sources, targets)
        .image()
        .expect("image of free-stalk map")
        .0
}
