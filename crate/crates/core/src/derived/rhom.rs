use std::collections::HashMap;

use crate::linalg::{ChainComplex, Matrix};
use crate::sheaf::{Sheaf, SheafComplex, SheafMorphism};

use super::graded::{Block, GradedBuilder};
use super::DerivedError;

type HomKey = (Vec<usize>, i32, i32);

/// `Hom(C_•F, G)` over the open star of `lower` (or the whole space): blocks
/// `Hom_k(F^i_{p_0}, G^l_{p_a})` for chains `p_0 < ... < p_a`, in degree `l - i + a`.
fn hom_model(
    f: &SheafComplex,
    g: &SheafComplex,
    lower: Option<usize>,
) -> Result<(ChainComplex, HashMap<HomKey, Block>), DerivedError> {
    if !f
        .term(f.lo())
        .expect("nonempty")
        .same_base(g.term(g.lo()).expect("nonempty"))
    {
        return Err(DerivedError::BaseMismatch);
    }
    let ring = f.ring();
    let base = f.base().clone();
    let n = base.len();
    let f_supp: Vec<bool> = (0..n)
        .map(|x| f.degrees().any(|d| f.rank(d, x) > 0))
        .collect();
    let g_supp: Vec<bool> = (0..n)
        .map(|x| g.degrees().any(|d| g.rank(d, x) > 0))
        .collect();
    let inside = |x: usize| lower.is_none_or(|p| base.leq(p, x));
    let max = base.dimension().max(0) as usize;
    let chains: Vec<Vec<usize>> = (0..=max)
        .flat_map(|a| base.chains_where(a, |x| f_supp[x], inside, |x| g_supp[x]))
        .collect();
    let mut b = GradedBuilder::new(ring);
    for ch in &chains {
        let a = ch.len() as i32 - 1;
        let (bottom, top) = (ch[0], *ch.last().unwrap());
        for i in f.degrees() {
            for l in g.degrees() {
                b.add_block(
                    (ch.clone(), i, l),
                    l - i + a,
                    f.rank(i, bottom) * g.rank(l, top),
                );
            }
        }
    }
    for ch in &chains {
        let a = ch.len() - 1;
        let (bottom, top) = (ch[0], ch[a]);
        for i in f.degrees() {
            for l in g.degrees() {
                let to = (ch.clone(), i, l);
                let Some(blk) = b.block(&to) else { continue };
                let m = blk.degree;
                let sign = ring.sign(m.rem_euclid(2) as usize);
                let (fr, gr) = (f.rank(i, bottom), g.rank(l, top));
                if let Some(dg) = g.differential(l - 1) {
                    b.add_left(&(ch.clone(), i, l - 1), &to, dg.component(top), fr, 1);
                }
                if a > 0 {
                    for t in 0..=a {
                        let mut face = ch.clone();
                        face.remove(t);
                        let from = (face, i, l);
                        let coeff = ring.mul(sign, ring.sign(t));
                        if t == a {
                            let r = g.term(l).expect("in range").restriction_ref(ch[a - 1], top);
                            b.add_left(&from, &to, r, fr, coeff);
                        } else if t == 0 {
                            let r = f.term(i).expect("in range").restriction_ref(bottom, ch[1]);
                            b.add_right(&from, &to, r, gr, coeff);
                        } else {
                            b.add_identity(&from, &to, coeff);
                        }
                    }
                }
                if let Some(df) = f.differential(i) {
                    let coeff = ring.mul(sign, ring.sign(a));
                    b.add_right(
                        &(ch.clone(), i + 1, l),
                        &to,
                        df.component(bottom),
                        gr,
                        coeff,
                    );
                }
            }
        }
    }
    let blocks = b.blocks_snapshot();
    Ok((b.finish()?, blocks))
}

/// Global `RHom(F, G)` computed from the projective resolution `C_•F`.
pub fn r_hom_global(f: &SheafComplex, g: &SheafComplex) -> Result<ChainComplex, DerivedError> {
    Ok(hom_model(f, g, None)?.0)
}

/// The stalk `RHom(F, G)_x = RHom_{U_x}(F|, G|)`.
pub fn r_hom_stalk(
    f: &SheafComplex,
    g: &SheafComplex,
    x: usize,
) -> Result<ChainComplex, DerivedError> {
    Ok(hom_model(f, g, Some(x))?.0)
}

/// The complex of sheaves `RHom(F, G)`: stalks as in [`r_hom_stalk`], restrictions
/// the projections onto chains inside the smaller open star.
pub fn r_hom_sheaf(f: &SheafComplex, g: &SheafComplex) -> Result<SheafComplex, DerivedError> {
    let base = f.base().clone();
    let ring = f.ring();
    let models: Vec<(ChainComplex, HashMap<HomKey, Block>)> = (0..base.len())
        .map(|x| hom_model(f, g, Some(x)))
        .collect::<Result<_, _>>()?;
    let lo = models
        .iter()
        .filter(|m| m.0.total_dim() > 0)
        .map(|m| m.0.lo())
        .min();
    let hi = models
        .iter()
        .filter(|m| m.0.total_dim() > 0)
        .map(|m| m.0.hi())
        .max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(SheafComplex::concentrated(Sheaf::zero(base, ring), 0));
    };
    let mut terms = Vec::new();
    for d in lo..=hi {
        let ranks = models.iter().map(|m| m.0.dim(d)).collect();
        let term = Sheaf::from_rule(base.clone(), ring, ranks, |x, y| {
            let mut r = Matrix::zeros(models[y].0.dim(d), models[x].0.dim(d));
            for (key, yb) in models[y].1.iter().filter(|(_, b)| b.degree == d) {
                let xb = models[x].1[key];
                for k in 0..yb.size {
                    r.set(yb.offset + k, xb.offset + k, 1);
                }
            }
            r
        })?;
        terms.push(term);
    }
    let mut diffs = Vec::new();
    for d in lo..hi {
        let k = (d - lo) as usize;
        let comps = models
            .iter()
            .map(|m| match m.0.differential(d) {
                Some(s) => s.to_dense(),
                None => Matrix::zeros(m.0.dim(d + 1), m.0.dim(d)),
            })
            .collect();
        diffs.push(SheafMorphism::new(
            terms[k].clone(),
            terms[k + 1].clone(),
            comps,
        )?);
    }
    Ok(SheafComplex::new(lo, terms, diffs)?)
}

/// The sheaf `Ext^i(F, G)`.
pub fn ext_sheaf(i: i32, f: &SheafComplex, g: &SheafComplex) -> Result<Sheaf, DerivedError> {
    Ok(r_hom_sheaf(f, g)?.cohomology_sheaf(i)?)
}

/// `D(F) = RHom(F, ω)` with `ω` the skyscraper at the generic point.
pub fn dualize(f: &SheafComplex) -> Result<SheafComplex, DerivedError> {
    let omega = Sheaf::canonical(f.base().clone(), f.ring())?;
    r_hom_sheaf(f, &SheafComplex::concentrated(omega, 0))
}
