//! Dense integer and rational matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn neg(&self) -> IntMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// The leading `k` columns.
    pub fn left_columns(&self, k: usize) -> IntMatrix {
        assert!(k <= self.cols);
        let mut out = Self::zeros(self.rows, k);
        for i in 0..self.rows {
            for j in 0..k {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    /// The leading `k` rows.
    pub fn top_rows(&self, k: usize) -> IntMatrix {
        assert!(k <= self.rows);
        Self { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == -self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| rat(x)).collect())
            .collect();
        row_reduce(&mut rows, self.cols).len()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// In-place Gaussian elimination; returns the pivot columns in row order.
fn row_reduce(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// A dense rational matrix, as produced by exact inversion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RatMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul_int(&self, rhs: &IntMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows());
        let mut data = vec![BigRational::zero(); self.rows * rhs.cols()];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols() {
                    data[i * rhs.cols() + j] += a * rat(rhs[(k, j)]);
                }
            }
        }
        RatMatrix { rows: self.rows, cols: rhs.cols(), data }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    /// The same matrix over the integers, if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_integer() {
                    return None;
                }
                out[(i, j)] = x.to_integer().to_i64()?;
            }
        }
        Some(out)
    }
}

/// Exact inverse over the rationals by Gauss-Jordan elimination.
pub fn invert_integer_matrix(a: &IntMatrix) -> Result<RatMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> = a.row(i).iter().map(|&x| rat(x)).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut rows, n);
    if pivots.len() < n {
        return Err(Error::NotInvertible);
    }
    let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
    Ok(RatMatrix { rows: n, cols: n, data })
}

/// Solves `B e = d` exactly for a full-column-rank integer matrix `B`.
///
/// The pivot rows of `B` are found once; each solve inverts the square pivot
/// block and then checks the remaining rows, so `solve` returns `Some` only
/// for genuine integer solutions.
#[derive(Clone, Debug)]
pub struct FullRankSolver {
    matrix: IntMatrix,
    pivot_rows: Vec<usize>,
    block_inverse: RatMatrix,
}

impl FullRankSolver {
    pub fn new(matrix: &IntMatrix) -> Result<Self> {
        let n = matrix.cols();
        // Pivot columns of the transpose are a maximal independent row set.
        let t = matrix.transpose();
        let mut rows: Vec<Vec<BigRational>> =
            (0..t.rows()).map(|i| t.row(i).iter().map(|&x| rat(x)).collect()).collect();
        let pivot_rows = row_reduce(&mut rows, t.cols());
        if pivot_rows.len() < n {
            return Err(Error::Shape(format!("matrix has rank {} < {n}", pivot_rows.len())));
        }
        let block = IntMatrix::from_rows(
            &pivot_rows.iter().map(|&r| matrix.row(r).to_vec()).collect::<Vec<_>>(),
        );
        let block_inverse = invert_integer_matrix(&block)?;
        Ok(Self { matrix: matrix.clone(), pivot_rows, block_inverse })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn solve(&self, d: &[i64]) -> Option<Vec<i64>> {
        let n = self.matrix.cols();
        let mut e = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = BigRational::zero();
            for (k, &r) in self.pivot_rows.iter().enumerate() {
                acc += self.block_inverse.get(i, k) * rat(d[r]);
            }
            if !acc.is_integer() {
                return None;
            }
            e.push(acc.to_integer().to_i64()?);
        }
        (self.matrix.mul_vec(&e) == d).then_some(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_inverse() {
        let a = IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]);
        let inv = invert_integer_matrix(&a).unwrap();
        assert_eq!(inv.to_integer().unwrap(), IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]));
    }

    #[test]
    fn identity_inverse() {
        let i4 = IntMatrix::identity(4);
        assert_eq!(invert_integer_matrix(&i4).unwrap().to_integer().unwrap(), i4);
    }

    #[test]
    fn singular_is_rejected() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(invert_integer_matrix(&a), Err(Error::NotInvertible));
        assert_eq!(invert_integer_matrix(&IntMatrix::zeros(3, 3)), Err(Error::NotInvertible));
    }

    #[test]
    fn a2_extended_inverse_is_exact() {
        // skew-symmetric matrix of the 4-vertex quiver 1->2, 2->3, 3->1, 4->2
        let b = IntMatrix::from_rows(&[
            vec![0, 1, -1, 0],
            vec![-1, 0, 1, -1],
            vec![1, -1, 0, 0],
            vec![0, 1, 0, 0],
        ]);
        let inv = invert_integer_matrix(&b).unwrap();
        assert!(inv.mul_int(&b).is_identity());
    }

    #[test]
    fn full_rank_solver() {
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0], vec![1, -1], vec![0, 1]]);
        let s = FullRankSolver::new(&b).unwrap();
        assert_eq!(s.solve(&[0, -1, 1, 0]), Some(vec![1, 0]));
        assert_eq!(s.solve(&[1, -1, 0, 1]), Some(vec![1, 1]));
        assert_eq!(s.solve(&[1, 0, 0, 0]), None);
        assert!(FullRankSolver::new(&IntMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn rank() {
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(IntMatrix::identity(3).rank(), 3);
    }
}
