use std::collections::{BTreeMap, HashMap};

use crate::linalg::{ChainComplex, ChainMap, FgModule, Ring, SparseMatrix};
use crate::poset::Poset;
use crate::sheaf::{Sheaf, SheafComplex};

use super::graded::{Block, GradedBuilder};
use super::DerivedError;

/// Bound on the number of minimal points for the cover model.
pub const MAX_COVER: usize = 20;

type ChainKey = (Vec<usize>, i32);

fn support_union(c: &SheafComplex) -> Vec<bool> {
    let base = c.base();
    (0..base.len())
        .map(|x| c.degrees().any(|d| c.rank(d, x) > 0))
        .collect()
}

/// Chains of every length with all points in `region` and the top in `top`.
fn region_chains(
    base: &Poset,
    region: &dyn Fn(usize) -> bool,
    top: &dyn Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let max = base.dimension().max(0) as usize;
    (0..=max)
        .flat_map(|a| base.chains_where(a, region, region, top))
        .collect()
}

/// Sections of the standard coresolution over `region`, with the block layout.
fn standard_model(
    c: &SheafComplex,
    region: &dyn Fn(usize) -> bool,
) -> Result<(ChainComplex, HashMap<ChainKey, Block>), DerivedError> {
    let ring = c.ring();
    let supp = support_union(c);
    let chains = region_chains(c.base(), region, &|x| supp[x]);
    let mut b = GradedBuilder::new(ring);
    for ch in &chains {
        let a = ch.len() as i32 - 1;
        for j in c.degrees() {
            b.add_block((ch.clone(), j), a + j, c.rank(j, *ch.last().unwrap()));
        }
    }
    for ch in &chains {
        let a = ch.len() - 1;
        let top = ch[a];
        for j in c.degrees() {
            let to = (ch.clone(), j);
            if b.block(&to).is_none() {
                continue;
            }
            if a > 0 {
                for t in 0..=a {
                    let mut face = ch.clone();
                    face.remove(t);
                    let from = (face, j);
                    if t == a {
                        let f = c.term(j).expect("in range");
                        b.add(&from, &to, f.restriction_ref(ch[a - 1], top), ring.sign(t));
                    } else {
                        b.add_identity(&from, &to, ring.sign(t));
                    }
                }
            }
            if let Some(d) = c.differential(j - 1) {
                b.add(&(ch.clone(), j - 1), &to, d.component(top), ring.sign(a));
            }
        }
    }
    let blocks = b.blocks_snapshot();
    Ok((b.finish()?, blocks))
}

/// `RΓ(X, F)` from the standard coresolution.
pub fn r_gamma_standard(c: &SheafComplex) -> Result<ChainComplex, DerivedError> {
    Ok(standard_model(c, &|_| true)?.0)
}

/// `RΓ(X, F)` from the cover of a convex subset space by the open stars of its minimal
/// points; every nonempty intersection is again an open star and so acyclic.
pub fn r_gamma_cech(c: &SheafComplex) -> Result<ChainComplex, DerivedError> {
    let base = c.base();
    if !base.is_convex() {
        return Err(DerivedError::NotConvex);
    }
    let mins = base.minimal_points();
    if mins.len() > MAX_COVER {
        return Err(DerivedError::CoverTooLarge(mins.len()));
    }
    let ring = c.ring();
    let r = mins.len();
    let mut joins: HashMap<u64, usize> = HashMap::new();
    let mut subsets: Vec<u64> = (1..1u64 << r).collect();
    subsets.sort_by_key(|&s| (s.count_ones(), s));
    for &s in &subsets {
        let pts: Vec<usize> = (0..r)
            .filter(|&i| s >> i & 1 == 1)
            .map(|i| mins[i])
            .collect();
        if let Some(j) = base.join(&pts) {
            joins.insert(s, j);
        }
    }
    let mut b = GradedBuilder::new(ring);
    for &s in &subsets {
        if let Some(&p) = joins.get(&s) {
            for j in c.degrees() {
                b.add_block((s, j), s.count_ones() as i32 - 1 + j, c.rank(j, p));
            }
        }
    }
    for &s in &subsets {
        let Some(&p) = joins.get(&s) else { continue };
        let a = s.count_ones() as usize - 1;
        for j in c.degrees() {
            let to = (s, j);
            if b.block(&to).is_none() {
                continue;
            }
            if a > 0 {
                for (t, i) in (0..r).filter(|&i| s >> i & 1 == 1).enumerate() {
                    let face = s & !(1 << i);
                    let q = joins[&face];
                    let f = c.term(j).expect("in range");
                    b.add(&(face, j), &to, &f.restriction(q, p), ring.sign(t));
                }
            }
            if let Some(d) = c.differential(j - 1) {
                b.add(&(s, j - 1), &to, d.component(p), ring.sign(a));
            }
        }
    }
    Ok(b.finish()?)
}

/// `RΓ(X, F)`: the cover model on convex subset spaces, the standard model otherwise.
pub fn r_gamma(c: &SheafComplex) -> Result<ChainComplex, DerivedError> {
    let base = c.base();
    if base.is_convex() && base.minimal_points().len() <= MAX_COVER {
        r_gamma_cech(c)
    } else {
        r_gamma_standard(c)
    }
}

pub fn r_gamma_sheaf(f: &Sheaf) -> Result<ChainComplex, DerivedError> {
    r_gamma(&SheafComplex::concentrated(f.clone(), 0))
}

/// Projection between two standard models along shared blocks.
fn block_projection(
    big: &ChainComplex,
    big_blocks: &HashMap<ChainKey, Block>,
    small: &ChainComplex,
    small_blocks: &HashMap<ChainKey, Block>,
) -> ChainMap {
    let mut triplets: BTreeMap<i32, Vec<(usize, usize, i64)>> = BTreeMap::new();
    for (key, sb) in small_blocks {
        let bb = big_blocks[key];
        triplets
            .entry(sb.degree)
            .or_default()
            .extend((0..sb.size).map(|i| (sb.offset + i, bb.offset + i, 1)));
    }
    let mut map = ChainMap::new();
    for d in big.degrees() {
        let t = triplets.remove(&d).unwrap_or_default();
        map.insert(
            d,
            SparseMatrix::from_triplets(small.dim(d), big.dim(d), t, big.ring()),
        );
    }
    map
}

/// `RΓ_x(V, F) = Cone(RΓ(V, F) -> RΓ(V - x, F))[-1]` for the open set `V = U_x`
/// when `star` is set, else `V = X`; `x` must be closed in `V`.
fn local_cohomology_in(
    c: &SheafComplex,
    x: usize,
    star: bool,
) -> Result<ChainComplex, DerivedError> {
    let base = c.base().clone();
    let inside = |y: usize| !star || base.leq(x, y);
    if base.below(x).iter().any(|&y| inside(y)) {
        return Err(DerivedError::NotClosed(base.label(x)));
    }
    let (whole, wb) = standard_model(c, &inside)?;
    let (punct, pb) = standard_model(c, &|y| inside(y) && y != x)?;
    let map = block_projection(&whole, &wb, &punct, &pb);
    Ok(ChainComplex::cone(&whole, &punct, &map)?.shift(-1))
}

/// Local cohomology `RΓ_x(X, F)` at a closed point.
pub fn local_cohomology(c: &SheafComplex, x: usize) -> Result<ChainComplex, DerivedError> {
    local_cohomology_in(c, x, false)
}

/// `RΓ_p(U_p, F)`: local cohomology at the closed point of the open star of `p`.
pub fn local_cohomology_at(c: &SheafComplex, p: usize) -> Result<ChainComplex, DerivedError> {
    local_cohomology_in(c, p, true)
}

/// `𝕃(X, F)`: cosections of the standard resolution, `⊕_{p_0 < ... < p_a} F_{p_0}`
/// in degree `-a`, with alternating face maps.
pub fn l_homology(c: &SheafComplex) -> Result<ChainComplex, DerivedError> {
    Ok(l_model(c)?.0)
}

fn l_model(c: &SheafComplex) -> Result<(ChainComplex, HashMap<ChainKey, Block>), DerivedError> {
    let ring = c.ring();
    let base = c.base();
    let supp = support_union(c);
    let max = base.dimension().max(0) as usize;
    let chains: Vec<Vec<usize>> = (0..=max)
        .flat_map(|a| base.chains_where(a, |x| supp[x], |_| true, |_| true))
        .collect();
    let mut b = GradedBuilder::new(ring);
    for ch in &chains {
        let a = ch.len() as i32 - 1;
        for j in c.degrees() {
            b.add_block((ch.clone(), j), j - a, c.rank(j, ch[0]));
        }
    }
    for ch in &chains {
        let a = ch.len() - 1;
        for j in c.degrees() {
            let from = (ch.clone(), j);
            if b.block(&from).is_none() {
                continue;
            }
            if a > 0 {
                for t in 0..=a {
                    let mut face = ch.clone();
                    face.remove(t);
                    if t == 0 {
                        let f = c.term(j).expect("in range");
                        b.add(
                            &from,
                            &(face, j),
                            f.restriction_ref(ch[0], ch[1]),
                            ring.sign(t),
                        );
                    } else {
                        b.add_identity(&from, &(face, j), ring.sign(t));
                    }
                }
            }
            if let Some(d) = c.differential(j) {
                b.add(
                    &from,
                    &(ch.clone(), j + 1),
                    d.component(ch[0]),
                    ring.sign(a),
                );
            }
        }
    }
    let blocks = b.blocks_snapshot();
    Ok((b.finish()?, blocks))
}

/// `𝕃_red(X, k) = Cone(𝕃(X, k) -> k)[-1]`.
pub fn reduced_l(base: &Poset, ring: Ring) -> Result<ChainComplex, DerivedError> {
    let shared = std::sync::Arc::new(base.clone());
    let k = SheafComplex::concentrated(Sheaf::constant(shared, ring, 1), 0);
    let (l, blocks) = l_model(&k)?;
    let target = ChainComplex::concentrated(ring, 0, 1);
    let t: Vec<(usize, usize, i64)> = blocks
        .iter()
        .filter(|((ch, _), _)| ch.len() == 1)
        .map(|(_, blk)| (0, blk.offset, 1))
        .collect();
    let mut map = ChainMap::new();
    map.insert(0, SparseMatrix::from_triplets(1, l.dim(0), t, ring));
    Ok(ChainComplex::cone(&l, &target, &map)?.shift(-1))
}

/// Reduced homology `H̃_i(X, k)`, keyed by `i`, nonzero groups only.
pub fn reduced_homology(base: &Poset, ring: Ring) -> Result<BTreeMap<i32, FgModule>, DerivedError> {
    Ok(reduced_l(base, ring)?
        .nonzero_homology()
        .into_iter()
        .map(|(d, m)| (-d, m))
        .collect())
}

/// Cohomology of `RΓ(X, F)` for a single sheaf.
pub fn sheaf_cohomology(f: &Sheaf) -> Result<BTreeMap<i32, FgModule>, DerivedError> {
    Ok(r_gamma_sheaf(f)?.nonzero_homology())
}
