use std::collections::{BTreeMap, HashSet};

use crate::linalg::{ChainComplex, FgModule, Ring, SparseMatrix};

use super::space::{elements, full_mask, subset_label, MAX_AMBIENT};
use super::{Poset, PosetError};

/// A closed subset of affine space over the field with one element: a
/// down-closed family of subsets of `{1..n}`.
///
/// Faces are bit keys (bit `i` is vertex `i + 1`) sorted by `(size, key)`.
/// The family is empty only for [`SimplicialComplex::void`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<u64>,
    faces: Vec<u64>,
    face_set: HashSet<u64>,
}

impl SimplicialComplex {
    /// Down-closure of the given facets (vertex labels `1..=n`) together with the empty face.
    pub fn from_facets(n: usize, facets: &[Vec<usize>]) -> Result<Self, PosetError> {
        let mut keys = Vec::with_capacity(facets.len());
        for f in facets {
            let mut key = 0u64;
            for &v in f {
                if v == 0 || v > n {
                    return Err(PosetError::VertexOutOfRange { vertex: v, n });
                }
                key |= 1 << (v - 1);
            }
            keys.push(key);
        }
        Self::from_keys(n, keys)
    }

    /// Down-closure of facet keys together with the empty face.
    pub fn from_keys(
        n: usize,
        facet_keys: impl IntoIterator<Item = u64>,
    ) -> Result<Self, PosetError> {
        if n > MAX_AMBIENT {
            return Err(PosetError::AmbientTooLarge(n));
        }
        let mut face_set: HashSet<u64> = HashSet::from([0]);
        let mut stack = Vec::new();
        for k in facet_keys {
            if k & !full_mask(n) != 0 {
                return Err(PosetError::KeyOutOfRange(k));
            }
            if face_set.insert(k) {
                stack.push(k);
            }
        }
        while let Some(k) = stack.pop() {
            let mut bits = k;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                if face_set.insert(k ^ b) {
                    stack.push(k ^ b);
                }
            }
        }
        Ok(Self::assemble(n, face_set))
    }

    fn assemble(n: usize, face_set: HashSet<u64>) -> Self {
        let mut faces: Vec<u64> = face_set.iter().copied().collect();
        faces.sort_unstable_by_key(|&k| (k.count_ones(), k));
        let mut facets: Vec<u64> = faces
            .iter()
            .copied()
            .filter(|&f| (0..n).all(|v| f >> v & 1 == 1 || !face_set.contains(&(f | 1 << v))))
            .collect();
        facets.sort_unstable_by_key(|&k| vertex_list(k));
        Self {
            n,
            facets,
            faces,
            face_set,
        }
    }

    /// All of affine `n`-space, i.e. the full simplex on `n` vertices.
    pub fn full(n: usize) -> Result<Self, PosetError> {
        Self::from_keys(n, [full_mask(n)])
    }

    /// The empty family (no faces at all).
    pub fn void(n: usize) -> Self {
        Self {
            n,
            facets: Vec::new(),
            faces: Vec::new(),
            face_set: HashSet::new(),
        }
    }

    /// Parses the facet-list format: first line `n`, then one facet per line as
    /// space-separated vertex labels; `#` starts a comment, `{}` is the empty facet.
    pub fn parse(text: &str) -> Result<Self, PosetError> {
        let mut n = None;
        let mut facets = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| PosetError::Parse {
                line: lineno + 1,
                message,
            };
            match n {
                None => {
                    let v: usize = line.parse().map_err(|_| {
                        parse_err(format!("expected ambient dimension, found `{line}`"))
                    })?;
                    if v > MAX_AMBIENT {
                        return Err(parse_err(format!(
                            "ambient dimension {v} exceeds {MAX_AMBIENT}"
                        )));
                    }
                    n = Some(v);
                }
                Some(n) => {
                    if line == "{}" {
                        facets.push(Vec::new());
                        continue;
                    }
                    let mut facet = Vec::new();
                    for tok in line.split_whitespace() {
                        let v: usize = tok
                            .parse()
                            .map_err(|_| parse_err(format!("invalid vertex `{tok}`")))?;
                        if v == 0 || v > n {
                            return Err(parse_err(format!("vertex {v} outside 1..={n}")));
                        }
                        facet.push(v);
                    }
                    facets.push(facet);
                }
            }
        }
        let n = n.ok_or(PosetError::Parse {
            line: 1,
            message: "missing ambient dimension".into(),
        })?;
        Self::from_facets(n, &facets)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[u64] {
        &self.faces
    }

    pub fn facets(&self) -> &[u64] {
        &self.facets
    }

    pub fn contains(&self, key: u64) -> bool {
        self.face_set.contains(&key)
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Longest chain length in the face poset, i.e. the largest face size.
    pub fn dimension(&self) -> i32 {
        self.faces.last().map_or(-1, |&k| k.count_ones() as i32)
    }

    /// Classical simplicial dimension (largest face size minus one).
    pub fn simplicial_dimension(&self) -> i32 {
        self.dimension() - 1
    }

    pub fn codimension(&self) -> i32 {
        self.n as i32 - self.dimension()
    }

    /// All facets have the same size.
    pub fn is_pure(&self) -> bool {
        self.facets
            .windows(2)
            .all(|w| w[0].count_ones() == w[1].count_ones())
    }

    /// Number of faces of each size `0..=dimension`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dimension() + 1).max(0) as usize];
        for &k in &self.faces {
            f[k.count_ones() as usize] += 1;
        }
        f
    }

    /// Minimal subsets not in the complex, sorted lexicographically by vertex list.
    pub fn minimal_nonfaces(&self) -> Vec<u64> {
        if self.is_empty() {
            return vec![0];
        }
        let mut out: Vec<u64> = Vec::new();
        let mut seen = HashSet::new();
        for &f in &self.faces {
            for v in 0..self.n {
                let cand = f | 1 << v;
                if cand == f || self.contains(cand) || !seen.insert(cand) {
                    continue;
                }
                let mut bits = cand;
                let mut minimal = true;
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    bits ^= b;
                    if !self.contains(cand ^ b) {
                        minimal = false;
                        break;
                    }
                }
                if minimal {
                    out.push(cand);
                }
            }
        }
        out.sort_unstable_by_key(|&k| vertex_list(k));
        out
    }

    /// `Link(p) = {q : p ∪ q ∈ K, p ∩ q = ∅}`, including the empty face.
    pub fn link(&self, p: u64) -> Result<SimplicialComplex, PosetError> {
        if !self.contains(p) {
            return Err(PosetError::NotAFace(subset_label(p, 1)));
        }
        let set: HashSet<u64> = self
            .faces
            .iter()
            .copied()
            .filter(|&q| q & p == 0 && self.contains(q | p))
            .collect();
        Ok(Self::assemble(self.n, set))
    }

    /// The complex as a closed subposet of affine space.
    pub fn poset(&self) -> Poset {
        Poset::from_subsets(self.n, 1, self.faces.iter().copied())
            .expect("faces fit the ambient space")
    }

    /// The complex with the empty face removed.
    pub fn punctured_poset(&self) -> Poset {
        Poset::from_subsets(self.n, 1, self.faces.iter().copied().filter(|&k| k != 0))
            .expect("faces fit the ambient space")
    }

    /// Faces strictly containing `p`, i.e. the punctured open star `U_p* ∩ K`.
    pub fn star_poset(&self, p: u64) -> Poset {
        Poset::from_subsets(
            self.n,
            1,
            self.faces.iter().copied().filter(|&q| q != p && q & p == p),
        )
        .expect("faces fit the ambient space")
    }

    /// Augmented simplicial chain complex: faces of size `s` sit in cohomological degree `1 - s`,
    /// so `H̃_i` is the cohomology in degree `-i`.
    pub fn reduced_chain_complex(&self, ring: Ring) -> ChainComplex {
        if self.is_empty() {
            return ChainComplex::zero(ring);
        }
        let top = self.dimension() as usize;
        let by_size: Vec<Vec<u64>> = (0..=top)
            .map(|s| {
                self.faces
                    .iter()
                    .copied()
                    .filter(|k| k.count_ones() as usize == s)
                    .collect()
            })
            .collect();
        let lookup: Vec<BTreeMap<u64, usize>> = by_size
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, &k)| (k, i)).collect())
            .collect();
        let dims: Vec<usize> = by_size.iter().rev().map(Vec::len).collect();
        let mut diffs = Vec::new();
        for s in (1..=top).rev() {
            let mut t = Vec::new();
            for (c, &face) in by_size[s].iter().enumerate() {
                for (pos, v) in elements(face, 0).into_iter().enumerate() {
                    let r = lookup[s - 1][&(face ^ 1 << v)];
                    t.push((r, c, ring.sign(pos)));
                }
            }
            diffs.push(SparseMatrix::from_triplets(
                by_size[s - 1].len(),
                by_size[s].len(),
                t,
                ring,
            ));
        }
        ChainComplex::new(ring, 1 - top as i32, dims, diffs)
            .expect("boundary of a boundary vanishes")
    }

    /// Reduced homology `H̃_i` keyed by `i`, zero groups omitted.
    pub fn reduced_homology(&self, ring: Ring) -> BTreeMap<i32, FgModule> {
        self.reduced_chain_complex(ring)
            .nonzero_homology()
            .into_iter()
            .map(|(d, m)| (-d, m))
            .collect()
    }
}

/// Sorted vertex labels `1..=n` of a face key.
pub fn vertex_list(key: u64) -> Vec<usize> {
    elements(key, 1)
}
