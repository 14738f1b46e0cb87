use super::{Matrix, Ring};

/// Column-major sparse matrix with exact integer entries.
///
/// Differentials of the large complexes built from chain enumerations are
/// stored this way; every column is sorted by row and holds no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Sums duplicate positions, normalizes in `ring` and drops zeros.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, i64)>,
        ring: Ring,
    ) -> Self {
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r},{c}) outside {rows}x{cols}"
            );
            columns[c].push((r, v));
        }
        for col in &mut columns {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 = ring.add(last.1, v),
                    _ => merged.push((r, ring.normalize(v))),
                }
            }
            merged.retain(|e| e.1 != 0);
            *col = merged;
        }
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub(crate) fn from_triplets_raw(
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, i64)>,
    ) -> Self {
        Self::from_triplets(rows, cols, triplets, Ring::Integers)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j]
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0, |k| self.columns[j][k].1)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let t = self.triplets().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets_raw(self.cols, self.rows, t)
    }

    pub fn scale(&self, c: i64, ring: Ring) -> Self {
        let t = self
            .triplets()
            .map(|(i, j, v)| (i, j, ring.mul(v, c)))
            .collect();
        Self::from_triplets(self.rows, self.cols, t, ring)
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &SparseMatrix, ring: Ring) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "sparse product shape mismatch");
        let mut triplets = Vec::new();
        for (j, col) in other.columns.iter().enumerate() {
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    triplets.push((i, j, ring.mul(a, b)));
                }
            }
        }
        SparseMatrix::from_triplets(self.rows, other.cols, triplets, ring)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m.set(i, j, v);
        }
        m
    }

    /// Row lists, each sorted by column.
    pub(crate) fn row_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                rows[i].push((j, v));
            }
        }
        rows
    }
}
