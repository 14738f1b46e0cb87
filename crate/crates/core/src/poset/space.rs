use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use super::PosetError;

/// Largest ambient dimension for which all subsets are enumerated.
pub const MAX_AMBIENT: usize = 20;

/// How point keys are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ground {
    /// Subsets of an `n`-element ground set; bit `i` is the element `i + base`.
    Subsets { n: usize, base: usize },
    /// Elements of an abstract poset; each key is the bit set of its down-set.
    Abstract { size: usize },
}

/// A finite T0 space, stored as a poset whose points are bit-set keys.
///
/// In both groundings `p <= q` is inclusion of keys. Points are kept sorted by
/// `(popcount, key)`, which is a linear extension of the order.
#[derive(Debug)]
pub struct Poset {
    ground: Ground,
    points: Vec<u64>,
    index: HashMap<u64, usize>,
    convex: bool,
    covers: OnceLock<(Vec<Vec<usize>>, Vec<Vec<usize>>)>,
    strict: OnceLock<(Vec<Vec<usize>>, Vec<Vec<usize>>)>,
}

impl Clone for Poset {
    fn clone(&self) -> Self {
        Self::build(self.ground, self.points.clone(), self.convex)
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.points == other.points
    }
}

impl Eq for Poset {}

impl Poset {
    fn build(ground: Ground, mut points: Vec<u64>, convex: bool) -> Self {
        points.sort_unstable_by_key(|&k| (k.count_ones(), k));
        points.dedup();
        let index = points.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        Self {
            ground,
            points,
            index,
            convex,
            covers: OnceLock::new(),
            strict: OnceLock::new(),
        }
    }

    /// All subsets of `{1..n}` under inclusion.
    pub fn affine_space(n: usize) -> Result<Self, PosetError> {
        Self::boolean(n, 1, |_| true)
    }

    /// Nonempty subsets of `{0..n}`.
    pub fn projective_space(n: usize) -> Result<Self, PosetError> {
        Self::boolean(n + 1, 0, |k| k != 0)
    }

    /// Nonempty proper subsets of `{0..n+1}`.
    pub fn hyperplane_union(n: usize) -> Result<Self, PosetError> {
        let full = full_mask(n + 2);
        Self::boolean(n + 2, 0, |k| k != 0 && k != full)
    }

    fn boolean(n: usize, base: usize, keep: impl Fn(u64) -> bool) -> Result<Self, PosetError> {
        if n > MAX_AMBIENT {
            return Err(PosetError::AmbientTooLarge(n));
        }
        let points = (0..1u64 << n).filter(|&k| keep(k)).collect();
        Ok(Self::build(Ground::Subsets { n, base }, points, true))
    }

    /// Subsets of an `n`-element ground set given by their keys; convexity is detected.
    pub fn from_subsets(
        n: usize,
        base: usize,
        keys: impl IntoIterator<Item = u64>,
    ) -> Result<Self, PosetError> {
        if n > MAX_AMBIENT {
            return Err(PosetError::AmbientTooLarge(n));
        }
        let full = full_mask(n);
        let points: Vec<u64> = keys.into_iter().collect();
        if let Some(&bad) = points.iter().find(|&&k| k & !full != 0) {
            return Err(PosetError::KeyOutOfRange(bad));
        }
        let mut p = Self::build(Ground::Subsets { n, base }, points, false);
        p.convex = p.detect_convex();
        Ok(p)
    }

    /// Abstract poset on `size <= 64` elements from pairs `(a, b)` meaning `a < b`.
    pub fn from_relations(size: usize, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        if size > 64 {
            return Err(PosetError::TooManyElements(size));
        }
        let mut down: Vec<u64> = (0..size).map(|i| 1u64 << i).collect();
        for &(a, b) in relations {
            if a >= size || b >= size {
                return Err(PosetError::KeyOutOfRange(a.max(b) as u64));
            }
        }
        loop {
            let mut changed = false;
            for &(a, b) in relations {
                let merged = down[b] | down[a];
                if merged != down[b] {
                    down[b] = merged;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (i, &d) in down.iter().enumerate() {
            if (0..size).any(|j| j != i && down[j] == d) {
                return Err(PosetError::NotAntisymmetric);
            }
        }
        let mut p = Self::build(Ground::Abstract { size }, down, false);
        p.convex = false;
        Ok(p)
    }

    pub fn ground(&self) -> Ground {
        self.ground
    }

    /// Ambient dimension for subset posets.
    pub fn ambient(&self) -> Option<usize> {
        match self.ground {
            Ground::Subsets { n, .. } => Some(n),
            Ground::Abstract { .. } => None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether the points form a convex (locally closed) family of subsets.
    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn key(&self, i: usize) -> u64 {
        self.points[i]
    }

    pub fn keys(&self) -> &[u64] {
        &self.points
    }

    pub fn index_of(&self, key: u64) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn contains(&self, key: u64) -> bool {
        self.index.contains_key(&key)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.points[i] & !self.points[j] == 0
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Human-readable label: `{1,3}` for subsets, `e2` for abstract elements.
    pub fn label(&self, i: usize) -> String {
        match self.ground {
            Ground::Subsets { base, .. } => subset_label(self.points[i], base),
            Ground::Abstract { .. } => {
                let d = self.points[i];
                let lower = self
                    .points
                    .iter()
                    .filter(|&&o| o != d && o & !d == 0)
                    .fold(0, |acc, &o| acc | o);
                format!("e{}", (d & !lower).trailing_zeros())
            }
        }
    }

    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(i, j)).collect()
    }

    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(j, i)).collect()
    }

    fn cover_lists(&self) -> &(Vec<Vec<usize>>, Vec<Vec<usize>>) {
        self.covers.get_or_init(|| {
            let n = self.len();
            let mut up = vec![Vec::new(); n];
            let mut down = vec![Vec::new(); n];
            for i in 0..n {
                for j in i + 1..n {
                    if !self.lt(i, j) {
                        continue;
                    }
                    let is_cover = if self.convex {
                        (self.points[j] & !self.points[i]).count_ones() == 1
                    } else {
                        !(i + 1..j).any(|k| self.lt(i, k) && self.lt(k, j))
                    };
                    if is_cover {
                        up[i].push(j);
                        down[j].push(i);
                    }
                }
            }
            (up, down)
        })
    }

    fn strict_lists(&self) -> &(Vec<Vec<usize>>, Vec<Vec<usize>>) {
        self.strict.get_or_init(|| {
            let n = self.len();
            let mut above = vec![Vec::new(); n];
            let mut below = vec![Vec::new(); n];
            for i in 0..n {
                for j in i + 1..n {
                    if self.lt(i, j) {
                        above[i].push(j);
                        below[j].push(i);
                    }
                }
            }
            (above, below)
        })
    }

    /// Points covering `i`.
    pub fn covers_up(&self, i: usize) -> &[usize] {
        &self.cover_lists().0[i]
    }

    /// Points covered by `i`.
    pub fn covers_down(&self, i: usize) -> &[usize] {
        &self.cover_lists().1[i]
    }

    /// Points strictly above `i`, increasing.
    pub fn above(&self, i: usize) -> &[usize] {
        &self.strict_lists().0[i]
    }

    /// Points strictly below `i`, increasing.
    pub fn below(&self, i: usize) -> &[usize] {
        &self.strict_lists().1[i]
    }

    pub fn minimal_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.covers_down(i).is_empty())
            .collect()
    }

    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.covers_up(i).is_empty())
            .collect()
    }

    /// Least upper bound of the given points inside a convex subset poset.
    pub fn join(&self, pts: &[usize]) -> Option<usize> {
        debug_assert!(self.convex);
        let key = pts.iter().fold(0u64, |acc, &i| acc | self.points[i]);
        self.index_of(key)
    }

    /// Length of the longest chain (`-1` for the empty poset).
    pub fn dimension(&self) -> i32 {
        if self.is_empty() {
            return -1;
        }
        let mut height = vec![0i32; self.len()];
        for j in 0..self.len() {
            height[j] = self
                .covers_down(j)
                .iter()
                .map(|&i| height[i] + 1)
                .max()
                .unwrap_or(0);
        }
        height.into_iter().max().unwrap_or(0)
    }

    /// The subposet of points whose keys satisfy `keep`.
    pub fn subposet(&self, keep: impl Fn(u64) -> bool) -> Poset {
        let points: Vec<u64> = self.points.iter().copied().filter(|&k| keep(k)).collect();
        let mut p = Self::build(self.ground, points, false);
        p.convex = match self.ground {
            Ground::Subsets { .. } => p.detect_convex(),
            Ground::Abstract { .. } => false,
        };
        p
    }

    /// Strictly increasing chains `p_0 < ... < p_len`, in lexicographic order of indices.
    pub fn chains(&self, len: usize) -> Vec<Vec<usize>> {
        self.chains_where(len, |_| true, |_| true, |_| true)
    }

    /// Chains whose first point passes `start`, every point passes `inner`, and last point passes `end`.
    pub fn chains_where(
        &self,
        len: usize,
        start: impl Fn(usize) -> bool,
        inner: impl Fn(usize) -> bool,
        end: impl Fn(usize) -> bool,
    ) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(len + 1);
        for s in 0..self.len() {
            if start(s) && inner(s) {
                stack.push(s);
                self.extend_chain(&mut stack, len, &inner, &end, &mut out);
                stack.pop();
            }
        }
        out
    }

    fn extend_chain(
        &self,
        stack: &mut Vec<usize>,
        len: usize,
        inner: &impl Fn(usize) -> bool,
        end: &impl Fn(usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *stack.last().expect("nonempty chain");
        if stack.len() == len + 1 {
            if end(last) {
                out.push(stack.clone());
            }
            return;
        }
        for &nx in self.above(last) {
            if inner(nx) {
                stack.push(nx);
                self.extend_chain(stack, len, inner, end, out);
                stack.pop();
            }
        }
    }

    fn detect_convex(&self) -> bool {
        for (i, &p) in self.points.iter().enumerate() {
            for &r in &self.points[i + 1..] {
                if p & !r != 0 || p == r {
                    continue;
                }
                let gap = r & !p;
                if gap.count_ones() < 2 {
                    continue;
                }
                let mut sub = (gap - 1) & gap;
                while sub != 0 {
                    if !self.contains(p | sub) {
                        return false;
                    }
                    sub = (sub - 1) & gap;
                }
            }
        }
        true
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Elements of a subset key, with labels starting at `base`.
pub fn elements(key: u64, base: usize) -> Vec<usize> {
    (0..64)
        .filter(|&b| key >> b & 1 == 1)
        .map(|b| b + base)
        .collect()
}

pub fn subset_label(key: u64, base: usize) -> String {
    let mut s = String::from("{");
    for (k, e) in elements(key, base).into_iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{e}");
    }
    s.push('}');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_plane_covers() {
        let a = Poset::affine_space(2).unwrap();
        assert_eq!(a.len(), 4);
        let zero = a.index_of(0).unwrap();
        assert_eq!(a.covers_up(zero).len(), 2);
        assert_eq!(a.dimension(), 2);
    }

    #[test]
    fn projective_line_and_h0() {
        let p1 = Poset::projective_space(1).unwrap();
        assert_eq!(p1.len(), 3);
        let h0 = Poset::hyperplane_union(0).unwrap();
        assert_eq!(h0.len(), 2);
        assert!(!h0.leq(0, 1) && !h0.leq(1, 0));
    }

    #[test]
    fn abstract_relations_close_transitively() {
        let p = Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.dimension(), 2);
        assert!(p.leq(0, 2));
        assert_eq!(p.label(2), "e2");
        assert!(Poset::from_relations(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn convexity_detection() {
        let gap = Poset::from_subsets(2, 1, [0b00, 0b11]).unwrap();
        assert!(!gap.is_convex());
        assert_eq!(gap.covers_up(0), &[1]);
        let star = Poset::from_subsets(2, 1, [0b00, 0b01, 0b10]).unwrap();
        assert!(star.is_convex());
    }
}
