use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LinalgError, Matrix};

/// Output of [`smith_normal_form`]: `u * m * v == d`, `u` and `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `d`, in order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .take_while(|&x| x != 0)
            .collect()
    }
}

/// Smith normal form over the integers.
///
/// The pivot at each stage is the first nonzero entry of the remaining
/// submatrix in row-major order, so the transforms are reproducible.
pub fn smith_normal_form(m: &Matrix) -> Result<SmithForm, LinalgError> {
    let s = BigSmith::compute(to_big(m), m.rows(), m.cols(), true);
    Ok(SmithForm {
        u: from_big(s.u.as_ref().expect("tracked"))?,
        d: from_big(&s.a)?,
        v: from_big(s.v.as_ref().expect("tracked"))?,
    })
}

pub(crate) fn to_big(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub(crate) fn from_big(a: &[Vec<BigInt>]) -> Result<Matrix, LinalgError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Matrix::zeros(rows, cols);
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out.set(i, j, x.to_i64().ok_or(LinalgError::Overflow)?);
        }
    }
    Ok(out)
}

/// Working state of the integer Smith reduction.
pub(crate) struct BigSmith {
    pub a: Vec<Vec<BigInt>>,
    pub u: Option<Vec<Vec<BigInt>>>,
    pub u_inv: Option<Vec<Vec<BigInt>>>,
    pub v: Option<Vec<Vec<BigInt>>>,
    pub rank: usize,
    rows: usize,
    cols: usize,
}

fn big_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

impl BigSmith {
    pub fn compute(a: Vec<Vec<BigInt>>, rows: usize, cols: usize, track: bool) -> Self {
        let mut s = BigSmith {
            a,
            u: track.then(|| big_identity(rows)),
            u_inv: track.then(|| big_identity(rows)),
            v: track.then(|| big_identity(cols)),
            rank: 0,
            rows,
            cols,
        };
        s.reduce();
        s
    }

    /// Diagonal entries `d_1 | d_2 | ...` (all nonzero).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.a[i][i].clone()).collect()
    }

    fn reduce(&mut self) {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.first_nonzero(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    self.row_sub(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        self.swap_rows(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    self.col_sub(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        self.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                let piv = self.a[t][t].clone();
                let offender = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !(&self.a[i][j] % &piv).is_zero()));
                match offender {
                    Some(i) => self.row_add_into_pivot(t, i),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        self.rank = t;
    }

    fn first_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        (t..self.rows)
            .flat_map(|i| (t..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| !self.a[i][j].is_zero())
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if let Some(u) = &mut self.u {
            u.swap(i, k);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        for j in 0..self.cols {
            if !self.a[t][j].is_zero() {
                let delta = q * &self.a[t][j];
                self.a[i][j] -= delta;
            }
        }
        if let Some(u) = &mut self.u {
            for j in 0..u[t].len() {
                if !u[t][j].is_zero() {
                    let delta = q * &u[t][j];
                    u[i][j] -= delta;
                }
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                if !row[i].is_zero() {
                    let delta = q * &row[i];
                    row[t] += delta;
                }
            }
        }
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                let delta = q * &row[t];
                row[j] -= delta;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[t].is_zero() {
                    let delta = q * &row[t];
                    row[j] -= delta;
                }
            }
        }
    }

    /// row_t += row_i
    fn row_add_into_pivot(&mut self, t: usize, i: usize) {
        for j in 0..self.cols {
            let x = self.a[i][j].clone();
            self.a[t][j] += x;
        }
        if let Some(u) = &mut self.u {
            for j in 0..u[i].len() {
                let x = u[i][j].clone();
                u[t][j] += x;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                let x = row[t].clone();
                row[i] -= x;
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;

    fn check(m: &Matrix) -> SmithForm {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m, Ring::Integers).mul(&s.v, Ring::Integers), s.d);
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&Matrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap());
        assert_eq!(s.invariant_factors(), vec![1, 6]);
    }

    #[test]
    fn one_two_three_four() {
        let s = check(&Matrix::from_rows(&[vec![1, 2], vec![3, 4]]).unwrap());
        assert_eq!(s.invariant_factors(), vec![1, 2]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&Matrix::zeros(2, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn tracks_inverse_of_u() {
        let m = Matrix::from_rows(&[vec![4, 6, 2], vec![6, 9, 3], vec![2, 5, 7]]).unwrap();
        let s = BigSmith::compute(to_big(&m), 3, 3, true);
        let u = from_big(s.u.as_ref().unwrap()).unwrap();
        let ui = from_big(s.u_inv.as_ref().unwrap()).unwrap();
        assert!(u.mul(&ui, Ring::Integers).is_identity());
    }
}
