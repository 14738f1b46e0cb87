use std::collections::HashMap;

use crate::linalg::{ChainComplex, Ring, SparseMatrix};

use super::ProjectiveError;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// Dimensions of `H^i(ℙⁿ, O(d))` for `i = 0..=n`, from the binomial formulas.
pub fn line_bundle_cohomology(n: usize, d: i64) -> Vec<usize> {
    let mut dims = vec![0; n + 1];
    if d >= 0 {
        dims[0] = binomial(n as u64 + d as u64, n as u64) as usize;
    }
    if d < -(n as i64) {
        dims[n] = binomial((-d - 1) as u64, n as u64) as usize;
    }
    dims
}

/// Čech complex of the Laurent monomials whose negative exponents sit exactly on
/// `negative`: one copy of `k` for every nonempty `S ⊇ negative`, in degree `|S| - 1`.
fn pattern_complex(n: usize, negative: u64) -> Result<ChainComplex, ProjectiveError> {
    let ring = Ring::Rationals;
    let full = (1u64 << (n + 1)) - 1;
    let mut by_degree: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for s in 1..=full {
        if s & negative == negative {
            by_degree[s.count_ones() as usize - 1].push(s);
        }
    }
    let dims = by_degree.iter().map(Vec::len).collect();
    let diffs = (0..n)
        .map(|p| {
            let targets: HashMap<u64, usize> = by_degree[p + 1]
                .iter()
                .enumerate()
                .map(|(i, &s)| (s, i))
                .collect();
            let mut triplets = Vec::new();
            for (col, &s) in by_degree[p].iter().enumerate() {
                for j in (0..=n).filter(|&j| s >> j & 1 == 0) {
                    let before = (s & ((1u64 << j) - 1)).count_ones() as usize;
                    triplets.push((targets[&(s | 1 << j)], col, ring.sign(before)));
                }
            }
            SparseMatrix::from_triplets(by_degree[p + 1].len(), by_degree[p].len(), triplets, ring)
        })
        .collect();
    Ok(ChainComplex::new(ring, 0, dims, diffs)?)
}

/// Number of `e ∈ ℤ^{n+1}` with `Σe = d`, `e_j < 0` exactly for `j ∈ negative`, and `|e_j| <= bound`.
fn pattern_count(n: usize, negative: u64, d: i64, bound: i64) -> u128 {
    let mut counts: HashMap<i64, u128> = HashMap::from([(0, 1)]);
    for j in 0..=n {
        let range = if negative >> j & 1 == 1 {
            -bound..=-1
        } else {
            0..=bound
        };
        let mut next = HashMap::new();
        for (&sum, &c) in &counts {
            for v in range.clone() {
                *next.entry(sum + v).or_insert(0) += c;
            }
        }
        counts = next;
    }
    counts.get(&d).copied().unwrap_or(0)
}

/// Dimensions of `H^i(ℙⁿ, O(d))` from the Čech complex of the standard affine cover,
/// split by the sign pattern of the Laurent monomial basis.
pub fn line_bundle_cech(n: usize, d: i64) -> Result<Vec<usize>, ProjectiveError> {
    if n == 0 || n >= 63 {
        return Err(ProjectiveError::DimensionOutOfRange { n, max: 62 });
    }
    let full = (1u64 << (n + 1)) - 1;
    let bound = d.abs() + n as i64 + 1;
    let mut dims = vec![0usize; n + 1];
    for negative in 0..=full {
        let h = pattern_complex(n, negative)?.homology();
        let betti: Vec<usize> = (0..=n as i32)
            .map(|i| h.get(&i).map_or(0, |m| m.rank))
            .collect();
        if betti.iter().all(|&b| b == 0) {
            continue;
        }
        if negative != 0 && negative != full {
            return Err(ProjectiveError::InfinitePattern(negative));
        }
        let count = pattern_count(n, negative, d, bound) as usize;
        for (i, b) in betti.into_iter().enumerate() {
            dims[i] += b * count;
        }
    }
    Ok(dims)
}
