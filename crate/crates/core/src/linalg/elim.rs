use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::smith::BigSmith;
use super::{LinalgError, Ring, SparseMatrix};

type Row = Vec<(usize, i64)>;

/// Rank of a sparse matrix over `ring`.
pub fn rank(m: &SparseMatrix, ring: Ring) -> usize {
    match ring {
        Ring::Integers => invariant_factors(m).0,
        _ => match schur(m, ring) {
            Ok(s) => s.pivots,
            Err(_) => dense_big(m).rank,
        },
    }
}

/// Rank and the invariant factors greater than one, over the integers.
pub fn invariant_factors(m: &SparseMatrix) -> (usize, Vec<u64>) {
    let (pivots, rest) = match schur(m, Ring::Integers) {
        Ok(s) => (s.pivots, s.remainder()),
        Err(_) => (0, m.clone()),
    };
    if rest.is_zero() {
        return (pivots, Vec::new());
    }
    let s = dense_big(&rest);
    let torsion = s
        .diagonal()
        .into_iter()
        .map(|d| d.abs())
        .filter(|d| *d > BigInt::from(1))
        .map(|d| d.to_u64().expect("torsion coefficient exceeds u64"))
        .collect();
    (pivots + s.rank, torsion)
}

fn dense_big(m: &SparseMatrix) -> BigSmith {
    let mut a = vec![vec![BigInt::from(0); m.cols()]; m.rows()];
    for (i, j, v) in m.triplets() {
        a[i][j] = BigInt::from(v);
    }
    BigSmith::compute(a, m.rows(), m.cols(), false)
}

struct Schur {
    pivots: usize,
    rows: Vec<Row>,
}

impl Schur {
    /// Rows that were never used as pivots, compacted onto the columns they touch.
    fn remainder(&self) -> SparseMatrix {
        let live: Vec<&Row> = self.rows.iter().filter(|r| !r.is_empty()).collect();
        let mut used: Vec<usize> = live.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
        used.sort_unstable();
        used.dedup();
        let mut triplets = Vec::new();
        for (i, row) in live.iter().enumerate() {
            for &(c, v) in row.iter() {
                triplets.push((i, used.binary_search(&c).expect("column present"), v));
            }
        }
        SparseMatrix::from_triplets_raw(live.len(), used.len(), triplets)
    }
}

fn eligible(ring: Ring, v: i64) -> bool {
    match ring {
        Ring::Integers => v == 1 || v == -1,
        _ => v != 0,
    }
}

/// Schur-complement elimination. Over a field it runs to completion; over the
/// integers only unit pivots are used and the leftover block is returned.
fn schur(m: &SparseMatrix, ring: Ring) -> Result<Schur, LinalgError> {
    let mut rows = m.row_lists();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols()];
    for (i, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].push(i);
        }
    }
    let mut done = vec![false; rows.len()];
    let mut pivots = 0;
    loop {
        let mut order: Vec<usize> = (0..rows.len())
            .filter(|&i| !done[i] && !rows[i].is_empty())
            .collect();
        order.sort_by_key(|&i| (rows[i].len(), i));
        let mut progressed = false;
        for r in order {
            if done[r] || rows[r].is_empty() {
                continue;
            }
            let Some(&(pc, pv)) = rows[r]
                .iter()
                .filter(|e| eligible(ring, e.1))
                .min_by_key(|e| (col_rows[e.0].len(), e.0))
            else {
                continue;
            };
            done[r] = true;
            pivots += 1;
            progressed = true;
            let pivot_row = std::mem::take(&mut rows[r]);
            let targets = std::mem::take(&mut col_rows[pc]);
            for i in targets {
                if done[i] {
                    continue;
                }
                let Ok(k) = rows[i].binary_search_by_key(&pc, |e| e.0) else {
                    continue;
                };
                let a = rows[i][k].1;
                let (new_row, added) = combine(&rows[i], &pivot_row, a, pv, ring)?;
                rows[i] = new_row;
                for c in added {
                    col_rows[c].push(i);
                }
            }
        }
        if !progressed || ring.is_field() {
            break;
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        if done[i] {
            row.clear();
        }
    }
    Ok(Schur { pivots, rows })
}

/// Eliminates the pivot column from `row` using `pivot_row` (leading value `pv`, row value `a`).
/// Returns the new row and the columns that were filled in.
fn combine(
    row: &Row,
    pivot_row: &Row,
    a: i64,
    pv: i64,
    ring: Ring,
) -> Result<(Row, Vec<usize>), LinalgError> {
    // new = alpha * row - beta * pivot_row
    let (alpha, beta) = match ring {
        Ring::PrimeField(_) => (1, ring.mul(a, ring.inverse(pv).expect("nonzero pivot"))),
        Ring::Integers => (1, a * pv),
        Ring::Rationals => {
            let g = a.gcd(&pv);
            (pv / g, a / g)
        }
    };
    let mut out = Vec::with_capacity(row.len() + pivot_row.len());
    let mut added = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < row.len() || y < pivot_row.len() {
        let cx = row.get(x).map_or(usize::MAX, |e| e.0);
        let cy = pivot_row.get(y).map_or(usize::MAX, |e| e.0);
        let (c, v) = if cx < cy {
            x += 1;
            (cx, scale(ring, alpha, row[x - 1].1)?)
        } else if cy < cx {
            y += 1;
            added.push(cy);
            (cy, negate(ring, scale(ring, beta, pivot_row[y - 1].1)?)?)
        } else {
            x += 1;
            y += 1;
            let l = scale(ring, alpha, row[x - 1].1)?;
            let r = scale(ring, beta, pivot_row[y - 1].1)?;
            (cx, subtract(ring, l, r)?)
        };
        if v != 0 {
            out.push((c, v));
        }
    }
    if ring == Ring::Rationals {
        let g = out.iter().fold(0i64, |g, e| g.gcd(&e.1));
        if g > 1 {
            for e in out.iter_mut() {
                e.1 /= g;
            }
        }
    }
    Ok((out, added))
}

fn scale(ring: Ring, a: i64, b: i64) -> Result<i64, LinalgError> {
    match ring {
        Ring::PrimeField(_) => Ok(ring.mul(a, b)),
        _ => a.checked_mul(b).ok_or(LinalgError::Overflow),
    }
}

fn subtract(ring: Ring, a: i64, b: i64) -> Result<i64, LinalgError> {
    match ring {
        Ring::PrimeField(_) => Ok(ring.sub(a, b)),
        _ => a.checked_sub(b).ok_or(LinalgError::Overflow),
    }
}

fn negate(ring: Ring, a: i64) -> Result<i64, LinalgError> {
    match ring {
        Ring::PrimeField(_) => Ok(ring.neg(a)),
        _ => a.checked_neg().ok_or(LinalgError::Overflow),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn rank_over_each_ring() {
        let m = Matrix::from_rows(&[vec![2, 0, 0], vec![0, 2, 0], vec![2, 2, 0]])
            .unwrap()
            .to_sparse();
        assert_eq!(rank(&m, Ring::Rationals), 2);
        assert_eq!(
            rank(&m.scale(1, Ring::PrimeField(2)), Ring::PrimeField(2)),
            0
        );
        assert_eq!(invariant_factors(&m), (2, vec![2, 2]));
    }

    #[test]
    fn mixed_units_and_torsion() {
        let m = Matrix::from_rows(&[vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 3]])
            .unwrap()
            .to_sparse();
        assert_eq!(invariant_factors(&m), (3, vec![6]));
    }

    #[test]
    fn rational_fraction_free() {
        let m = Matrix::from_rows(&[vec![2, 3], vec![4, 6], vec![3, 5]])
            .unwrap()
            .to_sparse();
        assert_eq!(rank(&m, Ring::Rationals), 2);
    }
}
