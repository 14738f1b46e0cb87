use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::smith::{from_big, to_big, BigSmith};
use super::{elim, FgModule, LinalgError, Matrix, Ring};

/// Rank together with bases of kernel (as columns) and image (as columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelImage {
    pub rank: usize,
    pub kernel: Matrix,
    pub image: Matrix,
}

/// Exact rank, kernel and image of `m`.
///
/// Over `Q` and `Z` the kernel basis spans the kernel lattice (it is saturated),
/// and the image basis spans the image lattice.
pub fn rank_kernel_image(m: &Matrix, ring: Ring) -> KernelImage {
    match ring {
        Ring::PrimeField(_) => {
            let e = Echelon::compute(&m.normalized(ring), ring);
            let free: Vec<usize> = (0..m.cols()).filter(|c| !e.pivots.contains(c)).collect();
            let mut kernel = Matrix::zeros(m.cols(), free.len());
            for (k, &f) in free.iter().enumerate() {
                kernel.set(f, k, 1);
                for (r, &pc) in e.pivots.iter().enumerate() {
                    kernel.set(pc, k, ring.neg(e.reduced.get(r, f)));
                }
            }
            KernelImage {
                rank: e.pivots.len(),
                kernel,
                image: m.normalized(ring).select_cols(&e.pivots),
            }
        }
        _ => {
            let s = BigSmith::compute(to_big(m), m.rows(), m.cols(), true);
            let v = from_big(s.v.as_ref().expect("tracked")).expect("kernel basis fits in i64");
            let r = s.rank;
            let kernel = v.select_cols(&(r..m.cols()).collect::<Vec<_>>());
            let image = m.mul(&v.select_cols(&(0..r).collect::<Vec<_>>()), ring);
            KernelImage {
                rank: r,
                kernel,
                image,
            }
        }
    }
}

/// Rank of a dense matrix.
pub fn rank(m: &Matrix, ring: Ring) -> usize {
    elim::rank(&m.normalized(ring).to_sparse(), ring)
}

/// Solves `basis * x = targets` column by column.
///
/// `basis` should have independent columns. Over `Q` and `Z` the solution must be
/// integral; callers pass saturated bases, for which this always holds.
pub fn solve(basis: &Matrix, targets: &Matrix, ring: Ring) -> Result<Matrix, LinalgError> {
    if basis.rows() != targets.rows() {
        return Err(LinalgError::Shape {
            expected: basis.rows(),
            found: targets.rows(),
        });
    }
    let aug = basis.hstack(targets);
    let k = basis.cols();
    match ring {
        Ring::PrimeField(_) => {
            let e = Echelon::compute(&aug.normalized(ring), ring);
            if e.pivots.iter().any(|&c| c >= k) {
                return Err(LinalgError::NoSolution);
            }
            let mut x = Matrix::zeros(k, targets.cols());
            for (r, &pc) in e.pivots.iter().enumerate() {
                for j in 0..targets.cols() {
                    x.set(pc, j, e.reduced.get(r, k + j));
                }
            }
            Ok(x)
        }
        _ => {
            let (reduced, pivots) = rational_rref(&aug);
            if pivots.iter().any(|&c| c >= k) {
                return Err(LinalgError::NoSolution);
            }
            let mut x = Matrix::zeros(k, targets.cols());
            for (r, &pc) in pivots.iter().enumerate() {
                for j in 0..targets.cols() {
                    let q = &reduced[r][k + j];
                    if !q.is_integer() {
                        return Err(LinalgError::NonIntegral);
                    }
                    x.set(pc, j, q.to_integer().to_i64().ok_or(LinalgError::Overflow)?);
                }
            }
            Ok(x)
        }
    }
}

/// The quotient `Z / B` of a saturated lattice `Z` (columns of `sub`) by a
/// sublattice `B` (columns of `gens`, each in `Z`).
///
/// `projection` maps `Z`-coordinates onto the free part of the quotient and
/// `representatives` lifts it back, in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FgModule,
    basis: Matrix,
    projection: Matrix,
    representatives: Matrix,
}

impl Quotient {
    pub fn new(sub: &Matrix, gens: &Matrix, ring: Ring) -> Result<Self, LinalgError> {
        let k = sub.cols();
        let coords = if gens.cols() == 0 {
            Matrix::zeros(k, 0)
        } else {
            solve(sub, gens, ring)?
        };
        let (u, u_inv, rank, torsion) = match ring {
            Ring::PrimeField(_) => {
                let (u, r) = Echelon::left_transform(&coords, ring);
                let u_inv = inverse_mod(&u, ring);
                (u, u_inv, r, Vec::new())
            }
            _ => {
                let s = BigSmith::compute(to_big(&coords), k, coords.cols(), true);
                let torsion = if ring == Ring::Integers {
                    s.diagonal()
                        .into_iter()
                        .map(|d| d.abs())
                        .filter(|d| !d.is_one())
                        .map(|d| d.to_u64().ok_or(LinalgError::Overflow))
                        .collect::<Result<Vec<_>, _>>()?
                } else {
                    Vec::new()
                };
                (
                    from_big(s.u.as_ref().expect("tracked"))?,
                    from_big(s.u_inv.as_ref().expect("tracked"))?,
                    s.rank,
                    torsion,
                )
            }
        };
        let rest: Vec<usize> = (rank..k).collect();
        let projection = u.select_rows(&rest);
        let representatives = sub.mul(&u_inv.select_cols(&rest), ring);
        Ok(Self {
            module: FgModule::with_torsion(k - rank, torsion),
            basis: sub.clone(),
            projection,
            representatives,
        })
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.projection.rows()
    }

    /// Ambient vectors (columns, each in `Z`) to free-part coordinates.
    pub fn project(&self, vectors: &Matrix, ring: Ring) -> Result<Matrix, LinalgError> {
        if vectors.cols() == 0 {
            return Ok(Matrix::zeros(self.rank(), 0));
        }
        if self.basis.cols() == 0 {
            return Ok(Matrix::zeros(0, vectors.cols()));
        }
        let coords = solve(&self.basis, vectors, ring)?;
        Ok(self.projection.mul(&coords, ring))
    }

    /// Lifts of the free-part basis, as ambient columns.
    pub fn representatives(&self) -> &Matrix {
        &self.representatives
    }
}

/// Reduced row echelon form over `F_p`.
struct Echelon {
    reduced: Matrix,
    pivots: Vec<usize>,
}

impl Echelon {
    fn compute(m: &Matrix, ring: Ring) -> Self {
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols() {
            if row == a.rows() {
                break;
            }
            let Some(p) = (row..a.rows()).find(|&i| a.get(i, col) != 0) else {
                continue;
            };
            swap_rows(&mut a, row, p);
            let inv = ring.inverse(a.get(row, col)).expect("nonzero pivot");
            for j in 0..a.cols() {
                a.set(row, j, ring.mul(a.get(row, j), inv));
            }
            for i in 0..a.rows() {
                let f = a.get(i, col);
                if i != row && f != 0 {
                    for j in 0..a.cols() {
                        let v = ring.sub(a.get(i, j), ring.mul(f, a.get(row, j)));
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Self { reduced: a, pivots }
    }

    /// Invertible `u` with `u * m` in echelon form; returns `u` and the rank.
    fn left_transform(m: &Matrix, ring: Ring) -> (Matrix, usize) {
        let aug = m.normalized(ring).hstack(&Matrix::identity(m.rows()));
        let e = Self::compute(&aug, ring);
        let rank = e.pivots.iter().filter(|&&c| c < m.cols()).count();
        let u = e
            .reduced
            .select_cols(&(m.cols()..aug.cols()).collect::<Vec<_>>());
        (u, rank)
    }
}

fn swap_rows(a: &mut Matrix, i: usize, k: usize) {
    if i == k {
        return;
    }
    for j in 0..a.cols() {
        let t = a.get(i, j);
        a.set(i, j, a.get(k, j));
        a.set(k, j, t);
    }
}

fn inverse_mod(u: &Matrix, ring: Ring) -> Matrix {
    let n = u.rows();
    let e = Echelon::compute(&u.hstack(&Matrix::identity(n)), ring);
    e.reduced.select_cols(&(n..2 * n).collect::<Vec<_>>())
}

fn rational_rref(m: &Matrix) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.rows() {
            if i == row || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..m.cols() {
                if !a[row][j].is_zero() {
                    let delta = &f * &a[row][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        for ring in [Ring::Rationals, Ring::Integers, Ring::PrimeField(5)] {
            let ki = rank_kernel_image(&m, ring);
            assert_eq!(ki.rank, 1);
            assert_eq!(ki.kernel.cols(), 2);
            assert!(m
                .normalized(ring)
                .mul(&ki.kernel, ring)
                .normalized(ring)
                .is_zero());
        }
    }

    #[test]
    fn solve_and_reject() {
        let b = Matrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let t = Matrix::column_vector(&[2, 5, 3]);
        assert_eq!(
            solve(&b, &t, Ring::Rationals).unwrap(),
            Matrix::column_vector(&[2, 3])
        );
        let bad = Matrix::column_vector(&[1, 0, 0]);
        assert!(matches!(
            solve(&b, &bad, Ring::Integers),
            Err(LinalgError::NoSolution)
        ));
        let half = Matrix::column_vector(&[2]);
        assert!(matches!(
            solve(&Matrix::column_vector(&[4]), &half, Ring::Integers),
            Err(LinalgError::NonIntegral)
        ));
    }

    #[test]
    fn quotient_by_even_vectors() {
        let z = Matrix::identity(2);
        let b = Matrix::from_rows(&[vec![2], vec![0]]).unwrap();
        let q = Quotient::new(&z, &b, Ring::Integers).unwrap();
        assert_eq!(q.module, FgModule::with_torsion(1, [2]));
        let q = Quotient::new(&z, &b, Ring::PrimeField(2)).unwrap();
        assert_eq!(q.module, FgModule::free(2));
        let q = Quotient::new(&z, &b, Ring::Rationals).unwrap();
        assert_eq!(q.module, FgModule::free(1));
        assert_eq!(q.project(&b, Ring::Rationals).unwrap(), Matrix::zeros(1, 1));
    }
}
