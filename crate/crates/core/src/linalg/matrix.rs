use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::vector::{rat, IntVector, RationalVector};

/// A dense integer matrix stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
}

impl IntMatrix {
    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Self { rows, ncols }
    }

    pub fn from_vectors(rows: &[IntVector], ncols: usize) -> Self {
        Self::from_rows(rows.iter().map(|r| r.entries().to_vec()).collect(), ncols)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            ncols,
        )
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { rows: vec![vec![BigInt::zero(); ncols]; nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector::new(self.rows[i].clone())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.nrows()).map(|i| self.row_vector(i)).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Vec<BigInt>> {
        &mut self.rows
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows(), "incompatible matrix product");
        let mut out = Self::zeros(self.nrows(), other.ncols);
        for i in 0..self.nrows() {
            for k in 0..self.ncols {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out.rows[i][j] += a * &other.rows[k][j];
                }
            }
        }
        out
    }

    /// `A · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &IntVector) -> IntVector {
        assert_eq!(self.ncols, x.len());
        self.rows.iter().map(|r| r.iter().zip(x.iter()).map(|(a, b)| a * b).sum()).collect()
    }

    /// `x^T · A` for a row vector `x`.
    pub fn vec_mul(&self, x: &IntVector) -> IntVector {
        assert_eq!(self.nrows(), x.len());
        let mut out = vec![BigInt::zero(); self.ncols];
        for (xi, r) in x.iter().zip(&self.rows) {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(r) {
                *o += xi * a;
            }
        }
        IntVector::new(out)
    }

    /// `x^T · A` for a rational row vector.
    pub fn rational_vec_mul(&self, x: &RationalVector) -> RationalVector {
        assert_eq!(self.nrows(), x.len());
        let mut out = vec![BigRational::zero(); self.ncols];
        for (xi, r) in x.iter().zip(&self.rows) {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(r) {
                *o += xi * rat(a);
            }
        }
        RationalVector::new(out)
    }

    /// `A · x` for a rational column vector.
    pub fn mul_rational_vec(&self, x: &RationalVector) -> RationalVector {
        assert_eq!(self.ncols, x.len());
        self.rows.iter().map(|r| r.iter().zip(x.iter()).map(|(a, b)| rat(a) * b).sum()).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        Self::from_rows(idx.iter().map(|&i| self.rows[i].clone()).collect(), self.ncols)
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        Self::from_rows(
            self.rows.iter().map(|r| idx.iter().map(|&j| r[j].clone()).collect()).collect(),
            idx.len(),
        )
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.rows.iter().map(|r| r.iter().map(rat).collect()).collect()
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.nrows(), self.ncols, "determinant of a non-square matrix");
        let n = self.ncols;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        rational_rank(self.to_rational())
    }
}

pub(crate) fn rational_rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[rank][col];
            for j in col..ncols {
                let t = &f * &a[rank][j];
                a[i][j] -= t;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Rank of a list of integer vectors.
pub fn rank_of(vectors: &[IntVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rational_rank(vectors.iter().map(|v| v.iter().map(rat).collect()).collect())
}

/// Rank of a list of rational vectors.
pub fn rank_of_rational(vectors: &[RationalVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rational_rank(vectors.iter().map(|v| v.entries().to_vec()).collect())
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant(), BigInt::from(18));
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.determinant(), BigInt::zero());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(IntMatrix::zeros(2, 2).rank(), 0);
    }

    #[test]
    fn products_agree_with_transpose() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4], &[5, 6]]);
        let x = IntVector::from_i64s(&[1, -1, 2]);
        assert_eq!(a.vec_mul(&x), a.transpose().mul_vec(&x));
        assert_eq!(a.vec_mul(&x), IntVector::from_i64s(&[8, 10]));
    }
}
