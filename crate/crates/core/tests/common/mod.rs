#![allow(dead_code)]

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srgeom::linalg::Ring;
use srgeom::poset::{Poset, SimplicialComplex};
use srgeom::sheaf::{random_sheaf, Sheaf};

pub fn affine(n: usize) -> Arc<Poset> {
    Arc::new(Poset::affine_space(n).unwrap())
}

pub fn key(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |k, &v| k | 1 << (v - 1))
}

pub fn point(base: &Poset, vertices: &[usize]) -> usize {
    base.index_of(key(vertices)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random(base: &Arc<Poset>, ring: Ring, seed: u64, size: usize) -> Sheaf {
    random_sheaf(base, ring, &mut rng(seed), size)
}

pub fn boundary_triangle() -> SimplicialComplex {
    SimplicialComplex::from_facets(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
}

pub fn bowtie() -> SimplicialComplex {
    SimplicialComplex::from_facets(5, &[vec![1, 2, 3], vec![3, 4, 5]]).unwrap()
}

pub fn rp2() -> SimplicialComplex {
    let facets = [
        "123", "134", "145", "156", "162", "235", "346", "452", "563", "624",
    ];
    let facets: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| f.bytes().map(|b| (b - b'0') as usize).collect())
        .collect();
    SimplicialComplex::from_facets(6, &facets).unwrap()
}

/// Down-closure of a few random facets on `1..=n`.
pub fn random_complex(n: usize, seed: u64) -> SimplicialComplex {
    use rand::Rng;
    let mut r = rng(seed);
    let count = r.gen_range(1..=4);
    let facets: Vec<u64> = (0..count).map(|_| r.gen_range(0..1u64 << n)).collect();
    SimplicialComplex::from_keys(n, facets).unwrap()
}

/// Indices in `base` of the faces of `k`.
pub fn face_points(base: &Poset, k: &SimplicialComplex) -> Vec<usize> {
    k.faces()
        .iter()
        .map(|&f| base.index_of(f).unwrap())
        .collect()
}

/// Rank of an integer matrix modulo a prime, by plain Gaussian elimination.
pub fn rank_mod_p(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v = v.rem_euclid(p);
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = (1..p).find(|&x| x * m[rank][c] % p == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced Betti numbers `b̃_i` for `i >= -1` of the complex with the given faces
/// (keys, including the empty face), over `F_p`.
pub fn reduced_betti(faces: &[u64], p: i64) -> Vec<usize> {
    let top = faces
        .iter()
        .map(|f| f.count_ones() as usize)
        .max()
        .unwrap_or(0);
    let by_size: Vec<Vec<u64>> = (0..=top)
        .map(|s| {
            faces
                .iter()
                .copied()
                .filter(|f| f.count_ones() as usize == s)
                .collect()
        })
        .collect();
    // boundary from size s+1 to size s
    let boundary_rank = |s: usize| -> usize {
        if s + 1 > top {
            return 0;
        }
        let rows = &by_size[s];
        let cols = &by_size[s + 1];
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, &f) in cols.iter().enumerate() {
            let verts: Vec<u32> = (0..64).filter(|b| f >> b & 1 == 1).collect();
            for (t, &v) in verts.iter().enumerate() {
                let face = f & !(1 << v);
                let i = rows.iter().position(|&g| g == face).unwrap();
                m[i][j] = if t % 2 == 0 { 1 } else { -1 };
            }
        }
        rank_mod_p(m, p)
    };
    (0..=top)
        .map(|s| {
            let into = if s == 0 { 0 } else { boundary_rank(s - 1) };
            by_size[s].len() - into - boundary_rank(s)
        })
        .collect()
}
