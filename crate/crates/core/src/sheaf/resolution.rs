use std::collections::HashMap;
use std::sync::Arc;

use crate::linalg::{Matrix, Ring};
use crate::poset::{Poset, SimplicialComplex};

use super::{Sheaf, SheafComplex, SheafError, SheafMorphism};

fn all_chains(base: &Poset) -> Vec<Vec<Vec<usize>>> {
    let top = base.dimension().max(0) as usize;
    (0..=top).map(|i| base.chains(i)).collect()
}

fn block_offsets(sizes: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut offsets = Vec::new();
    let mut total = 0;
    for s in sizes {
        offsets.push(total);
        total += s;
    }
    (offsets, total)
}

/// The coresolution `F -> C^0 F -> C^1 F -> ...` with
/// `C^i F = ∏_{p_0 < ... < p_i} F_{p_i} ⊗ k_{C_{p_0}}`, in degrees `0..`,
/// together with the coaugmentation `F -> C^0 F`.
pub fn standard_coresolution(f: &Sheaf) -> Result<(SheafComplex, SheafMorphism), SheafError> {
    let base = f.base().clone();
    let ring = f.ring();
    let chains = all_chains(&base);
    // Stalk at x: chains with x <= p_0, each contributing F_{p_i}.
    let active = |i: usize, x: usize| -> Vec<usize> {
        (0..chains[i].len())
            .filter(|&c| base.leq(x, chains[i][c][0]))
            .collect()
    };
    let layout = |i: usize, x: usize| -> (Vec<usize>, Vec<usize>, usize) {
        let act = active(i, x);
        let (off, total) =
            block_offsets(act.iter().map(|&c| f.rank(*chains[i][c].last().unwrap())));
        (act, off, total)
    };
    let mut terms = Vec::new();
    for i in 0..chains.len() {
        let ranks = (0..base.len()).map(|x| layout(i, x).2).collect();
        let term = Sheaf::from_rule(base.clone(), ring, ranks, |x, y| {
            let (ax, ox, tx) = layout(i, x);
            let (ay, oy, ty) = layout(i, y);
            let mut m = Matrix::zeros(ty, tx);
            for (k, &c) in ay.iter().enumerate() {
                let j = ax.binary_search(&c).expect("chains above y are above x");
                for r in 0..f.rank(*chains[i][c].last().unwrap()) {
                    m.set(oy[k] + r, ox[j] + r, 1);
                }
            }
            m
        })?;
        terms.push(term);
    }
    let index: Vec<HashMap<&[usize], usize>> = chains
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(k, c)| (&c[..], k)).collect())
        .collect();
    let mut diffs = Vec::new();
    for i in 0..chains.len().saturating_sub(1) {
        let comps = (0..base.len())
            .map(|x| {
                let (ax, ox, tx) = layout(i, x);
                let (ay, oy, ty) = layout(i + 1, x);
                let mut m = Matrix::zeros(ty, tx);
                for (k, &c) in ay.iter().enumerate() {
                    let chain = &chains[i + 1][c];
                    for t in 0..chain.len() {
                        let mut face = chain.clone();
                        face.remove(t);
                        let src = index[i][&face[..]];
                        let Ok(j) = ax.binary_search(&src) else {
                            continue;
                        };
                        let block = if t == chain.len() - 1 {
                            f.restriction(face[face.len() - 1], chain[chain.len() - 1])
                        } else {
                            Matrix::identity(f.rank(*chain.last().unwrap()))
                        };
                        let sign = ring.sign(t);
                        for r in 0..block.rows() {
                            for s in 0..block.cols() {
                                let v = ring.add(
                                    m.get(oy[k] + r, ox[j] + s),
                                    ring.mul(sign, block.get(r, s)),
                                );
                                m.set(oy[k] + r, ox[j] + s, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        diffs.push(SheafMorphism::new(
            terms[i].clone(),
            terms[i + 1].clone(),
            comps,
        )?);
    }
    let coaug = (0..base.len())
        .map(|x| {
            let (ax, ox, tx) = layout(0, x);
            let mut m = Matrix::zeros(tx, f.rank(x));
            for (k, &c) in ax.iter().enumerate() {
                let r = f.restriction(x, chains[0][c][0]);
                for a in 0..r.rows() {
                    for b in 0..r.cols() {
                        m.set(ox[k] + a, b, r.get(a, b));
                    }
                }
            }
            m
        })
        .collect();
    let coaug = SheafMorphism::new(f.clone(), terms[0].clone(), coaug)?;
    Ok((SheafComplex::new(0, terms, diffs)?, coaug))
}

/// The resolution `... -> C_1 F -> C_0 F -> F` with
/// `C_i F = ⊕_{p_0 < ... < p_i} F_{p_0} ⊗ k_{U_{p_i}}`, `C_i` in degree `-i`,
/// together with the augmentation `C_0 F -> F`.
pub fn standard_resolution(f: &Sheaf) -> Result<(SheafComplex, SheafMorphism), SheafError> {
    let base = f.base().clone();
    let ring = f.ring();
    let chains = all_chains(&base);
    let top = chains.len() - 1;
    let layout = |i: usize, x: usize| -> (Vec<usize>, Vec<usize>, usize) {
        let act: Vec<usize> = (0..chains[i].len())
            .filter(|&c| base.leq(*chains[i][c].last().unwrap(), x))
            .collect();
        let (off, total) = block_offsets(act.iter().map(|&c| f.rank(chains[i][c][0])));
        (act, off, total)
    };
    // Degree -i term is C_i, stored from the highest i down.
    let mut terms = Vec::new();
    for i in (0..=top).rev() {
        let ranks = (0..base.len()).map(|x| layout(i, x).2).collect();
        let term = Sheaf::from_rule(base.clone(), ring, ranks, |x, y| {
            let (ax, ox, tx) = layout(i, x);
            let (ay, oy, ty) = layout(i, y);
            let mut m = Matrix::zeros(ty, tx);
            for (k, &c) in ax.iter().enumerate() {
                let j = ay.binary_search(&c).expect("chains below x are below y");
                for r in 0..f.rank(chains[i][c][0]) {
                    m.set(oy[j] + r, ox[k] + r, 1);
                }
            }
            m
        })?;
        terms.push(term);
    }
    let index: Vec<HashMap<&[usize], usize>> = chains
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(k, c)| (&c[..], k)).collect())
        .collect();
    let mut diffs = Vec::new();
    for i in (1..=top).rev() {
        let comps = (0..base.len())
            .map(|x| {
                let (ax, ox, tx) = layout(i, x);
                let (ay, oy, ty) = layout(i - 1, x);
                let mut m = Matrix::zeros(ty, tx);
                for (k, &c) in ax.iter().enumerate() {
                    let chain = &chains[i][c];
                    for t in 0..chain.len() {
                        let mut face = chain.clone();
                        face.remove(t);
                        let dst = index[i - 1][&face[..]];
                        let j = ay.binary_search(&dst).expect("faces stay below x");
                        let block = if t == 0 {
                            f.restriction(chain[0], chain[1])
                        } else {
                            Matrix::identity(f.rank(chain[0]))
                        };
                        let sign = ring.sign(t);
                        for r in 0..block.rows() {
                            for s in 0..block.cols() {
                                let v = ring.add(
                                    m.get(oy[j] + r, ox[k] + s),
                                    ring.mul(sign, block.get(r, s)),
                                );
                                m.set(oy[j] + r, ox[k] + s, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        let (src, dst) = (top - i, top - i + 1);
        diffs.push(SheafMorphism::new(
            terms[src].clone(),
            terms[dst].clone(),
            comps,
        )?);
    }
    let aug = (0..base.len())
        .map(|x| {
            let (ax, ox, tx) = layout(0, x);
            let mut m = Matrix::zeros(f.rank(x), tx);
            for (k, &c) in ax.iter().enumerate() {
                let r = f.restriction(chains[0][c][0], x);
                for a in 0..r.rows() {
                    for b in 0..r.cols() {
                        m.set(a, ox[k] + b, r.get(a, b));
                    }
                }
            }
            m
        })
        .collect();
    let aug = SheafMorphism::new(terms[top].clone(), f.clone(), aug)?;
    Ok((SheafComplex::new(-(top as i32), terms, diffs)?, aug))
}

/// Appends `last` after the final term of `c` (the map must start at that term).
pub fn append_term(c: &SheafComplex, map: SheafMorphism) -> Result<SheafComplex, SheafError> {
    let mut terms: Vec<Sheaf> = c
        .degrees()
        .map(|d| c.term(d).expect("in range").clone())
        .collect();
    let mut diffs: Vec<SheafMorphism> = (c.lo()..c.hi())
        .map(|d| c.differential(d).expect("in range").clone())
        .collect();
    terms.push(map.target().clone());
    diffs.push(map);
    SheafComplex::new(c.lo(), terms, diffs)
}

/// Prepends the source of `map` before the first term of `c`.
pub fn prepend_term(map: SheafMorphism, c: &SheafComplex) -> Result<SheafComplex, SheafError> {
    let mut terms = vec![map.source().clone()];
    terms.extend(c.degrees().map(|d| c.term(d).expect("in range").clone()));
    let mut diffs = vec![map];
    diffs.extend((c.lo()..c.hi()).map(|d| c.differential(d).expect("in range").clone()));
    SheafComplex::new(c.lo() - 1, terms, diffs)
}

/// One generator `k_{U_p}` of a complex of projective sheaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub degree: i32,
    pub position: usize,
}

/// A bounded complex whose terms are sums of `k_{U_p}`, given by generators and
/// the scalar coefficients of the differential.
#[derive(Clone, Debug)]
pub struct ProjectiveComplex {
    base: Arc<Poset>,
    ring: Ring,
    generators: Vec<Generator>,
    /// `(source, target, coefficient)` with `target` one degree higher.
    coefficients: Vec<(usize, usize, i64)>,
}

/// Labels the summands of the Koszul complex by subsets `S` of the minimal nonfaces.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub complex: ProjectiveComplex,
    /// Minimal nonfaces, as keys.
    pub nonfaces: Vec<u64>,
    /// For each generator, the subset `S` as a bit mask over `nonfaces`.
    pub subsets: Vec<u64>,
}

impl ProjectiveComplex {
    pub fn new(
        base: Arc<Poset>,
        ring: Ring,
        generators: Vec<Generator>,
        coefficients: Vec<(usize, usize, i64)>,
    ) -> Result<Self, SheafError> {
        for &(s, t, _) in &coefficients {
            let (gs, gt) = (generators[s], generators[t]);
            if gt.degree != gs.degree + 1 || !base.leq(gt.position, gs.position) {
                return Err(SheafError::BadGenerator(s));
            }
        }
        Ok(Self {
            base,
            ring,
            generators,
            coefficients,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn degree_range(&self) -> (i32, i32) {
        let lo = self.generators.iter().map(|g| g.degree).min().unwrap_or(0);
        let hi = self.generators.iter().map(|g| g.degree).max().unwrap_or(0);
        (lo, hi)
    }

    fn in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| self.generators[g].degree == d)
            .collect()
    }

    /// The complex of sheaves `⊕ k_{U_{p_g}}`.
    pub fn to_sheaf_complex(&self) -> Result<SheafComplex, SheafError> {
        let (lo, hi) = self.degree_range();
        let base = self.base.clone();
        let ring = self.ring;
        let mut terms = Vec::new();
        let mut gens_by_degree = Vec::new();
        for d in lo..=hi {
            let gens = self.in_degree(d);
            let parts: Vec<Sheaf> = gens
                .iter()
                .map(|&g| Sheaf::unit_on_up_set(base.clone(), ring, self.generators[g].position))
                .collect();
            terms.push(Sheaf::sum_of(base.clone(), ring, &parts)?);
            gens_by_degree.push(gens);
        }
        let mut diffs = Vec::new();
        for k in 0..terms.len().saturating_sub(1) {
            let (src, dst) = (&gens_by_degree[k], &gens_by_degree[k + 1]);
            let comps = (0..base.len())
                .map(|x| {
                    let cols: Vec<usize> = src
                        .iter()
                        .copied()
                        .filter(|&g| base.leq(self.generators[g].position, x))
                        .collect();
                    let rows: Vec<usize> = dst
                        .iter()
                        .copied()
                        .filter(|&g| base.leq(self.generators[g].position, x))
                        .collect();
                    let mut m = Matrix::zeros(rows.len(), cols.len());
                    for &(s, t, c) in &self.coefficients {
                        if let (Ok(j), Ok(i)) = (cols.binary_search(&s), rows.binary_search(&t)) {
                            m.set(i, j, ring.add(m.get(i, j), ring.normalize(c)));
                        }
                    }
                    m
                })
                .collect();
            diffs.push(SheafMorphism::new(
                terms[k].clone(),
                terms[k + 1].clone(),
                comps,
            )?);
        }
        SheafComplex::new(lo, terms, diffs)
    }

    /// `Hom(P, G)`: the summand for `k_{U_p}` is `x -> G_{p ∨ x}`, placed in degree `-deg`.
    /// Requires a base in which joins of comparable-from-below points exist (affine spaces).
    pub fn hom_into(&self, g: &Sheaf) -> Result<SheafComplex, SheafError> {
        self.hom_into_on(g, self.base.clone())
    }

    /// [`hom_into`](Self::hom_into) restricted to the points of `sub`, a subposet of the base.
    pub fn hom_into_on(&self, g: &Sheaf, sub: Arc<Poset>) -> Result<SheafComplex, SheafError> {
        let ambient = self.base.clone();
        if !g.same_base(&Sheaf::zero(ambient.clone(), self.ring)) {
            return Err(SheafError::BaseMismatch);
        }
        let ring = self.ring;
        let base = sub;
        let join = |p: usize, x: usize| -> Result<usize, SheafError> {
            ambient
                .index_of(ambient.key(p) | base.key(x))
                .ok_or(SheafError::NoJoin)
        };
        let (lo, hi) = self.degree_range();
        let mut terms = Vec::new();
        let mut gens_by_degree = Vec::new();
        for m in -hi..=-lo {
            let gens = self.in_degree(-m);
            let mut joins = vec![vec![0usize; base.len()]; gens.len()];
            for (a, &gi) in gens.iter().enumerate() {
                for x in 0..base.len() {
                    joins[a][x] = join(self.generators[gi].position, x)?;
                }
            }
            let ranks = (0..base.len())
                .map(|x| (0..gens.len()).map(|a| g.rank(joins[a][x])).sum())
                .collect();
            let term = Sheaf::from_rule(base.clone(), ring, ranks, |x, y| {
                let blocks: Vec<Matrix> = (0..gens.len())
                    .map(|a| g.restriction(joins[a][x], joins[a][y]))
                    .collect();
                Matrix::block_diagonal(&blocks)
            })?;
            terms.push(term);
            gens_by_degree.push(gens);
        }
        let mut diffs = Vec::new();
        for k in 0..terms.len().saturating_sub(1) {
            // Hom degree m -> m+1 is induced by P^{-m-1} -> P^{-m}.
            let (tgt_gens, src_gens) = (&gens_by_degree[k + 1], &gens_by_degree[k]);
            let comps = (0..base.len())
                .map(|x| -> Result<Matrix, SheafError> {
                    let offs = |gens: &[usize]| {
                        let mut o = Vec::new();
                        let mut t = 0;
                        for &gi in gens {
                            o.push(t);
                            t += g.rank(join(self.generators[gi].position, x)?);
                        }
                        Ok::<_, SheafError>((o, t))
                    };
                    let (os, ts) = offs(src_gens)?;
                    let (ot, tt) = offs(tgt_gens)?;
                    let mut m = Matrix::zeros(tt, ts);
                    for &(s, t, c) in &self.coefficients {
                        // P-generator s (degree -(m+1)) maps to t (degree -m); Hom sends block t to block s.
                        let (Ok(i), Ok(j)) =
                            (tgt_gens.binary_search(&s), src_gens.binary_search(&t))
                        else {
                            continue;
                        };
                        let from = join(self.generators[t].position, x)?;
                        let to = join(self.generators[s].position, x)?;
                        let r = g.restriction(from, to);
                        for a in 0..r.rows() {
                            for b in 0..r.cols() {
                                let v = ring.add(
                                    m.get(ot[i] + a, os[j] + b),
                                    ring.mul(ring.normalize(c), r.get(a, b)),
                                );
                                m.set(ot[i] + a, os[j] + b, v);
                            }
                        }
                    }
                    Ok(m)
                })
                .collect::<Result<Vec<_>, _>>()?;
            diffs.push(SheafMorphism::new(
                terms[k].clone(),
                terms[k + 1].clone(),
                comps,
            )?);
        }
        SheafComplex::new(-hi, terms, diffs)
    }
}

/// The Koszul complex `Kos(k_K)` on affine space: one generator `k_{U_{p_S}}` in
/// degree `-|S|` for every subset `S` of the minimal nonfaces, `p_S` their union,
/// with `d(S) = Σ_t (-1)^{t-1} (S - s_t)`.
pub fn koszul_complex(k: &SimplicialComplex, ring: Ring) -> Result<KoszulComplex, SheafError> {
    let base = Arc::new(Poset::affine_space(k.ambient())?);
    let nonfaces = k.minimal_nonfaces();
    let r = nonfaces.len();
    if r > 20 {
        return Err(SheafError::TooManyNonfaces(r));
    }
    let mut subsets: Vec<u64> = (0..1u64 << r).collect();
    subsets.sort_by_key(|&s| (s.count_ones(), s));
    let index: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let generators = subsets
        .iter()
        .map(|&s| {
            let key = (0..r)
                .filter(|&j| s >> j & 1 == 1)
                .fold(0u64, |acc, j| acc | nonfaces[j]);
            Generator {
                degree: -(s.count_ones() as i32),
                position: base.index_of(key).expect("subset of ground set"),
            }
        })
        .collect();
    let mut coefficients = Vec::new();
    for (gi, &s) in subsets.iter().enumerate() {
        for (t, j) in (0..r).filter(|&j| s >> j & 1 == 1).enumerate() {
            coefficients.push((gi, index[&(s & !(1 << j))], ring.sign(t)));
        }
    }
    let complex = ProjectiveComplex::new(base, ring, generators, coefficients)?;
    Ok(KoszulComplex {
        complex,
        nonfaces,
        subsets,
    })
}
