use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::linalg::{ChainComplex, LinalgError, Matrix, Ring, SparseMatrix};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Block {
    pub degree: i32,
    pub offset: usize,
    pub size: usize,
}

/// Assembles a cochain complex from labelled blocks of basis vectors and
/// block-wise differential contributions.
pub(crate) struct GradedBuilder<K> {
    ring: Ring,
    blocks: HashMap<K, Block>,
    dims: BTreeMap<i32, usize>,
    triplets: BTreeMap<i32, Vec<(usize, usize, i64)>>,
}

impl<K: Hash + Eq> GradedBuilder<K> {
    pub fn new(ring: Ring) -> Self {
        Self {
            ring,
            blocks: HashMap::new(),
            dims: BTreeMap::new(),
            triplets: BTreeMap::new(),
        }
    }

    /// Registers a block; empty blocks are skipped.
    pub fn add_block(&mut self, key: K, degree: i32, size: usize) {
        if size == 0 {
            return;
        }
        let dim = self.dims.entry(degree).or_insert(0);
        self.blocks.insert(
            key,
            Block {
                degree,
                offset: *dim,
                size,
            },
        );
        *dim += size;
    }

    pub fn block(&self, key: &K) -> Option<Block> {
        self.blocks.get(key).copied()
    }

    pub fn blocks_snapshot(&self) -> HashMap<K, Block>
    where
        K: Clone,
    {
        self.blocks.clone()
    }

    fn push(&mut self, from: Block, to: Block, entries: impl Iterator<Item = (usize, usize, i64)>) {
        debug_assert_eq!(to.degree, from.degree + 1);
        let ring = self.ring;
        let out = self.triplets.entry(from.degree).or_default();
        out.extend(
            entries
                .filter(|e| e.2 != 0)
                .map(|(r, c, v)| (to.offset + r, from.offset + c, ring.normalize(v))),
        );
    }

    /// Adds `coeff * m` as the component `from -> to`.
    pub fn add(&mut self, from: &K, to: &K, m: &Matrix, coeff: i64) {
        let (Some(f), Some(t)) = (self.block(from), self.block(to)) else {
            return;
        };
        debug_assert_eq!((m.rows(), m.cols()), (t.size, f.size));
        let ring = self.ring;
        let entries: Vec<_> = (0..m.rows())
            .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, ring.mul(coeff, m.get(r, c))))
            .collect();
        self.push(f, t, entries.into_iter());
    }

    /// Adds `coeff` times the identity.
    pub fn add_identity(&mut self, from: &K, to: &K, coeff: i64) {
        let (Some(f), Some(t)) = (self.block(from), self.block(to)) else {
            return;
        };
        debug_assert_eq!(f.size, t.size);
        self.push(f, t, (0..f.size).map(|i| (i, i, coeff)));
    }

    /// On blocks holding `g x f` matrices stored row-major, adds `E -> coeff * a E`
    /// where `a` is `g' x g`.
    pub fn add_left(&mut self, from: &K, to: &K, a: &Matrix, f: usize, coeff: i64) {
        let (Some(fb), Some(tb)) = (self.block(from), self.block(to)) else {
            return;
        };
        let ring = self.ring;
        let mut entries = Vec::new();
        for r2 in 0..a.rows() {
            for r in 0..a.cols() {
                let v = a.get(r2, r);
                if v == 0 {
                    continue;
                }
                for s in 0..f {
                    entries.push((r2 * f + s, r * f + s, ring.mul(coeff, v)));
                }
            }
        }
        self.push(fb, tb, entries.into_iter());
    }

    /// On blocks holding `g x f` matrices stored row-major, adds `E -> coeff * E b`
    /// where `b` is `f x f'`.
    pub fn add_right(&mut self, from: &K, to: &K, b: &Matrix, g: usize, coeff: i64) {
        let (Some(fb), Some(tb)) = (self.block(from), self.block(to)) else {
            return;
        };
        let ring = self.ring;
        let (f, f2) = (b.rows(), b.cols());
        let mut entries = Vec::new();
        for s in 0..f {
            for s2 in 0..f2 {
                let v = b.get(s, s2);
                if v == 0 {
                    continue;
                }
                for r in 0..g {
                    entries.push((r * f2 + s2, r * f + s, ring.mul(coeff, v)));
                }
            }
        }
        self.push(fb, tb, entries.into_iter());
    }

    pub fn finish(self) -> Result<ChainComplex, LinalgError> {
        let (Some(&lo), Some(&hi)) = (self.dims.keys().next(), self.dims.keys().next_back()) else {
            return Ok(ChainComplex::zero(self.ring));
        };
        let dims: Vec<usize> = (lo..=hi)
            .map(|d| self.dims.get(&d).copied().unwrap_or(0))
            .collect();
        let mut triplets = self.triplets;
        let diffs = (lo..hi)
            .map(|d| {
                let t = triplets.remove(&d).unwrap_or_default();
                SparseMatrix::from_triplets(
                    dims[(d + 1 - lo) as usize],
                    dims[(d - lo) as usize],
                    t,
                    self.ring,
                )
            })
            .collect();
        ChainComplex::new(self.ring, lo, dims, diffs)
    }
}
