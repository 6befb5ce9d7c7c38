use num::rational::BigRational;
use num::{One, Zero};

/// A dense matrix of exact rationals. Desk-scale: plain Gauss-Jordan with
/// exact arithmetic is all the catalog needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<BigRational>>,
    pub ncols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RatMatrix { rows, ncols }
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        RatMatrix {
            rows: vec![vec![BigRational::zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigRational::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.ncols, other.nrows());
        let mut out = RatMatrix::zero(self.nrows(), other.ncols);
        for i in 0..self.nrows() {
            for k in 0..self.ncols {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let t = &self.rows[i][k] * &other.rows[k][j];
                    out.rows[i][j] += t;
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let nrows = self.nrows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row >= nrows {
                break;
            }
            let Some(pr) = (row..nrows).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, pr);
            let inv = BigRational::one() / self.rows[row][col].clone();
            for c in col..self.ncols {
                let v = std::mem::take(&mut self.rows[row][c]);
                self.rows[row][c] = v * &inv;
            }
            for r in 0..nrows {
                if r != row && !self.rows[r][col].is_zero() {
                    let factor = self.rows[r][col].clone();
                    for c in col..self.ncols {
                        let t = &factor * &self.rows[row][c];
                        self.rows[r][c] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Kernel dimension and an exact basis of the right nullspace.
    pub fn nullspace(&self) -> (usize, Vec<Vec<BigRational>>) {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.ncols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.rows[r][f].clone();
            }
            basis.push(v);
        }
        (free.len(), basis)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "inverse of a non-square matrix");
        let mut aug = RatMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.rows[i][j] = self.rows[i][j].clone();
            }
            aug.rows[i][n + i] = BigRational::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let rows = aug
            .rows
            .into_iter()
            .take(n)
            .map(|r| r[n..].to_vec())
            .collect();
        Some(RatMatrix::new(rows, n))
    }

    /// Exact determinant by fraction-producing elimination.
    #[allow(clippy::needless_range_loop)] // rows above and below the pivot are borrowed together
    pub fn det(&self) -> BigRational {
        let n = self.nrows();
        assert_eq!(n, self.ncols);
        let mut m = self.rows.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if pr != col {
                m.swap(col, pr);
                det = -det;
            }
            det *= &m[col][col];
            let inv = BigRational::one() / m[col][col].clone();
            for r in (col + 1)..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
        det
    }
}

/// Solution of `A x = b`: one particular solution plus a basis of the
/// homogeneous kernel.
pub struct AffineSolution {
    pub particular: Vec<BigRational>,
    pub kernel: Vec<Vec<BigRational>>,
}

/// Solves `A x = b` exactly. `None` when inconsistent.
pub fn solve_affine(a: &RatMatrix, b: &[BigRational]) -> Option<AffineSolution> {
    assert_eq!(a.nrows(), b.len());
    let n = a.ncols;
    let mut aug = RatMatrix::new(
        a.rows
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut row = r.clone();
                row.push(bi.clone());
                row
            })
            .collect(),
        n + 1,
    );
    let pivots = aug.rref();
    if pivots.last().is_some_and(|&p| p == n) {
        return None; // a pivot in the augmented column: inconsistent
    }
    let mut particular = vec![BigRational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = aug.rows[r][n].clone();
    }
    let (_, kernel) = a.nullspace();
    Some(AffineSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, ratq};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        let ncols = rows[0].len();
        RatMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
            ncols,
        )
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let (dim, basis) = RatMatrix::identity(3).nullspace();
        assert_eq!(dim, 0);
        assert!(basis.is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let (dim, basis) = RatMatrix::zero(2, 5).nullspace();
        assert_eq!(dim, 5);
        assert_eq!(basis.len(), 5);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let (dim, basis) = a.nullspace();
        assert_eq!(dim, 2);
        for v in &basis {
            for row in &a.rows {
                let s: BigRational = row
                    .iter()
                    .zip(v)
                    .map(|(r, x)| r * x)
                    .fold(rat(0), |acc, t| acc + t);
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert_eq!(inv.mul(&a), RatMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn determinant_values() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).det(), rat(1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), rat(0));
        let a = RatMatrix::new(
            vec![
                vec![ratq(1, 2), rat(0)],
                vec![rat(3), ratq(2, 3)],
            ],
            2,
        );
        assert_eq!(a.det(), ratq(1, 3));
    }

    #[test]
    fn affine_solve() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let sol = solve_affine(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(sol.particular, vec![rat(2), rat(1)]);
        assert!(sol.kernel.is_empty());

        // inconsistent
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve_affine(&b, &[rat(1), rat(3)]).is_none());

        // underdetermined
        let c = m(&[&[1, 1]]);
        let sol = solve_affine(&c, &[rat(5)]).unwrap();
        assert_eq!(sol.kernel.len(), 1);
    }
}
