use std::collections::HashMap;
use std::sync::Arc;

use crate::linalg::{Matrix, Ring};
use crate::poset::Poset;

use super::SheafError;

/// A sheaf of free modules on a finite poset: stalk ranks plus restriction
/// matrices `F_p -> F_q` for every `p <= q`.
///
/// Restrictions are supplied on covers and composed along cover paths; all
/// paths are checked to agree, so every stored map is functorial.
#[derive(Clone, Debug)]
pub struct Sheaf(Arc<SheafData>);

#[derive(Debug)]
struct SheafData {
    base: Arc<Poset>,
    ring: Ring,
    ranks: Vec<usize>,
    maps: HashMap<(usize, usize), Matrix>,
}

impl Sheaf {
    /// Builds a sheaf from restriction matrices on cover relations `(p, q)`.
    /// Missing covers between nonzero stalks are an error.
    pub fn from_covers(
        base: Arc<Poset>,
        ring: Ring,
        ranks: Vec<usize>,
        covers: HashMap<(usize, usize), Matrix>,
    ) -> Result<Self, SheafError> {
        if ranks.len() != base.len() {
            return Err(SheafError::RankCount {
                expected: base.len(),
                found: ranks.len(),
            });
        }
        let mut maps: HashMap<(usize, usize), Matrix> = HashMap::new();
        for i in (0..base.len()).rev() {
            for &c in base.covers_up(i) {
                let m = match covers.get(&(i, c)) {
                    Some(m) => m.normalized(ring),
                    None if ranks[i] == 0 || ranks[c] == 0 => Matrix::zeros(ranks[c], ranks[i]),
                    None => {
                        return Err(SheafError::MissingRestriction(base.label(i), base.label(c)))
                    }
                };
                if m.rows() != ranks[c] || m.cols() != ranks[i] {
                    return Err(SheafError::RestrictionShape(base.label(i), base.label(c)));
                }
                maps.insert((i, c), m);
            }
            for &k in base.above(i) {
                let mut composite: Option<Matrix> = None;
                for &c in base.covers_up(i) {
                    if !base.leq(c, k) {
                        continue;
                    }
                    let first = &maps[&(i, c)];
                    let candidate = if c == k {
                        first.clone()
                    } else {
                        maps[&(c, k)].mul(first, ring)
                    };
                    match &composite {
                        None => composite = Some(candidate),
                        Some(prev) if *prev != candidate => {
                            return Err(SheafError::NotFunctorial(base.label(i), base.label(k)));
                        }
                        Some(_) => {}
                    }
                }
                maps.insert((i, k), composite.expect("some cover lies below k"));
            }
        }
        Ok(Self(Arc::new(SheafData {
            base,
            ring,
            ranks,
            maps,
        })))
    }

    /// Builds a sheaf from a rule giving the restriction for every cover.
    pub fn from_rule(
        base: Arc<Poset>,
        ring: Ring,
        ranks: Vec<usize>,
        mut rule: impl FnMut(usize, usize) -> Matrix,
    ) -> Result<Self, SheafError> {
        let mut covers = HashMap::new();
        for i in 0..base.len() {
            for &c in base.covers_up(i) {
                covers.insert((i, c), rule(i, c));
            }
        }
        Self::from_covers(base, ring, ranks, covers)
    }

    /// The zero sheaf.
    pub fn zero(base: Arc<Poset>, ring: Ring) -> Self {
        let n = base.len();
        Self::from_rule(base, ring, vec![0; n], |_, _| Matrix::zeros(0, 0)).expect("zero sheaf")
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.0.base
    }

    pub fn ring(&self) -> Ring {
        self.0.ring
    }

    pub fn rank(&self, p: usize) -> usize {
        self.0.ranks[p]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.0.ranks.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.ranks.iter().all(|&r| r == 0)
    }

    /// Points with nonzero stalk.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.ranks.len())
            .filter(|&p| self.0.ranks[p] > 0)
            .collect()
    }

    /// Restriction `F_p -> F_q` for `p <= q`.
    pub fn restriction(&self, p: usize, q: usize) -> Matrix {
        if p == q {
            return Matrix::identity(self.rank(p));
        }
        self.0
            .maps
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| panic!("restriction requested for incomparable points {p}, {q}"))
    }

    /// Borrowed restriction for `p < q`.
    pub fn restriction_ref(&self, p: usize, q: usize) -> &Matrix {
        &self.0.maps[&(p, q)]
    }

    pub fn same_base(&self, other: &Sheaf) -> bool {
        Arc::ptr_eq(self.base(), other.base()) || **self.base() == **other.base()
    }

    /// Stalk ranks keyed by point label.
    pub fn rank_table(&self) -> Vec<(String, usize)> {
        (0..self.0.ranks.len())
            .map(|p| (self.base().label(p), self.rank(p)))
            .collect()
    }

    /// Whether the two sheaves have equal stalk ranks and restriction matrices.
    pub fn same_data(&self, other: &Sheaf) -> bool {
        self.same_base(other)
            && self.ranks() == other.ranks()
            && self
                .0
                .maps
                .iter()
                .all(|(k, m)| other.0.maps.get(k) == Some(m))
    }
}
