use crate::linalg::{rank_kernel_image, solve, Matrix, Quotient};

use super::{Sheaf, SheafError};

/// A morphism of sheaves on the same poset, given by one matrix per point.
#[derive(Clone, Debug)]
pub struct SheafMorphism {
    source: Sheaf,
    target: Sheaf,
    components: Vec<Matrix>,
}

impl SheafMorphism {
    /// Checks shapes and commutation with restrictions on every cover.
    pub fn new(source: Sheaf, target: Sheaf, components: Vec<Matrix>) -> Result<Self, SheafError> {
        if !source.same_base(&target) {
            return Err(SheafError::BaseMismatch);
        }
        let base = source.base().clone();
        let ring = source.ring();
        if components.len() != base.len() {
            return Err(SheafError::RankCount {
                expected: base.len(),
                found: components.len(),
            });
        }
        let components: Vec<Matrix> = components.into_iter().map(|m| m.normalized(ring)).collect();
        for (p, m) in components.iter().enumerate() {
            if m.rows() != target.rank(p) || m.cols() != source.rank(p) {
                return Err(SheafError::RestrictionShape(base.label(p), base.label(p)));
            }
        }
        for p in 0..base.len() {
            for &q in base.covers_up(p) {
                let left = target.restriction(p, q).mul(&components[p], ring);
                let right = components[q].mul(&source.restriction(p, q), ring);
                if left != right {
                    return Err(SheafError::NotNatural(base.label(p), base.label(q)));
                }
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    pub fn zero(source: Sheaf, target: Sheaf) -> Self {
        let components = (0..source.base().len())
            .map(|p| Matrix::zeros(target.rank(p), source.rank(p)))
            .collect();
        Self {
            source,
            target,
            components,
        }
    }

    pub fn identity(f: &Sheaf) -> Self {
        let components = (0..f.base().len())
            .map(|p| Matrix::identity(f.rank(p)))
            .collect();
        Self {
            source: f.clone(),
            target: f.clone(),
            components,
        }
    }

    pub fn source(&self) -> &Sheaf {
        &self.source
    }

    pub fn target(&self) -> &Sheaf {
        &self.target
    }

    pub fn component(&self, p: usize) -> &Matrix {
        &self.components[p]
    }

    pub fn compose(&self, after: &SheafMorphism) -> Result<SheafMorphism, SheafError> {
        let ring = self.source.ring();
        let components = self
            .components
            .iter()
            .zip(&after.components)
            .map(|(f, g)| g.mul(f, ring))
            .collect();
        SheafMorphism::new(self.source.clone(), after.target.clone(), components)
    }

    pub fn scaled(&self, c: i64) -> SheafMorphism {
        let ring = self.source.ring();
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|m| m.scale(c, ring).normalized(ring))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// Kernel sheaf with its inclusion into the source.
    pub fn kernel(&self) -> Result<(Sheaf, SheafMorphism), SheafError> {
        let ring = self.source.ring();
        let bases: Vec<Matrix> = self
            .components
            .iter()
            .map(|m| rank_kernel_image(m, ring).kernel)
            .collect();
        sub_by_bases(&self.source, bases)
    }

    /// Image sheaf with its inclusion into the target.
    pub fn image(&self) -> Result<(Sheaf, SheafMorphism), SheafError> {
        let ring = self.source.ring();
        let bases: Vec<Matrix> = self
            .components
            .iter()
            .map(|m| rank_kernel_image(m, ring).image)
            .collect();
        sub_by_bases(&self.target, bases)
    }

    /// Cokernel sheaf with the projection from the target. Over the integers the
    /// stalks must be free.
    pub fn cokernel(&self) -> Result<(Sheaf, SheafMorphism), SheafError> {
        let ring = self.source.ring();
        let base = self.source.base().clone();
        let quotients: Vec<Quotient> = (0..base.len())
            .map(|p| {
                Quotient::new(
                    &Matrix::identity(self.target.rank(p)),
                    &self.components[p],
                    ring,
                )
            })
            .collect::<Result<_, _>>()?;
        if let Some(p) = quotients.iter().position(|q| !q.module.is_free()) {
            return Err(SheafError::TorsionStalk(base.label(p)));
        }
        let ranks: Vec<usize> = quotients.iter().map(Quotient::rank).collect();
        let mut err = None;
        let built = Sheaf::from_rule(base.clone(), ring, ranks, |p, q| {
            let pushed = self
                .target
                .restriction(p, q)
                .mul(quotients[p].representatives(), ring);
            quotients[q].project(&pushed, ring).unwrap_or_else(|e| {
                err = Some(e);
                Matrix::zeros(quotients[q].rank(), quotients[p].rank())
            })
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        let sheaf = built?;
        let comps = (0..base.len())
            .map(|p| quotients[p].project(&Matrix::identity(self.target.rank(p)), ring))
            .collect::<Result<Vec<_>, _>>()?;
        let proj = SheafMorphism::new(self.target.clone(), sheaf.clone(), comps)?;
        Ok((sheaf, proj))
    }

    /// Whether every component is injective.
    pub fn is_injective(&self) -> bool {
        let ring = self.source.ring();
        self.components
            .iter()
            .all(|m| rank_kernel_image(m, ring).rank == m.cols())
    }
}

/// The subsheaf of `ambient` spanned at each point by the columns of `bases[p]`.
pub(crate) fn sub_by_bases(
    ambient: &Sheaf,
    bases: Vec<Matrix>,
) -> Result<(Sheaf, SheafMorphism), SheafError> {
    let ring = ambient.ring();
    let base = ambient.base().clone();
    let ranks: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let mut err = None;
    let built = Sheaf::from_rule(base, ring, ranks, |p, q| {
        if bases[p].cols() == 0 || bases[q].cols() == 0 {
            return Matrix::zeros(bases[q].cols(), bases[p].cols());
        }
        let pushed = ambient.restriction(p, q).mul(&bases[p], ring);
        solve(&bases[q], &pushed, ring).unwrap_or_else(|e| {
            err = Some(e);
            Matrix::zeros(bases[q].cols(), bases[p].cols())
        })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let sheaf = built?;
    let inclusion = SheafMorphism::new(sheaf.clone(), ambient.clone(), bases)?;
    Ok((sheaf, inclusion))
}
