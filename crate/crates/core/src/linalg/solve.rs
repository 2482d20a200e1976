use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::vector::{rat, IntVector, RationalVector};

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<T> {
    Solved(T),
    Inconsistent,
}

impl<T> Solution<T> {
    pub fn ok(self) -> Option<T> {
        match self {
            Solution::Solved(x) => Some(x),
            Solution::Inconsistent => None,
        }
    }
}

/// Saturated basis of `{x ∈ ℤⁿ : A·x = 0}`, returned as the rows of a matrix
/// in Hermite normal form (so the basis is canonical).
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.ncols();
    let (h, u) = hermite_normal_form(&a.transpose());
    let rank = (0..h.nrows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let rows: Vec<usize> = (rank..n).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, n);
    }
    hermite_normal_form(&u.select_rows(&rows)).0
}

/// Solves `A·x = b` over the rationals.
///
/// Pivots are taken leftmost in reduced row echelon form and free
/// variables are set to zero, so the answer is deterministic.
pub fn solve_rational(a: &IntMatrix, b: &IntVector) -> Solution<RationalVector> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length");
    let n = a.ncols();
    let mut rows: Vec<Vec<BigRational>> = a
        .to_rational()
        .into_iter()
        .zip(b.iter())
        .map(|(mut r, bi)| {
            r.push(rat(bi));
            r
        })
        .collect();
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::from_integer(1.into()) / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..=n {
                let t = &f * &rows[r][j];
                rows[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    Solution::Solved(RationalVector::new(x))
}

/// Solves `A·x = b` over the integers.
///
/// The returned solution is reduced modulo the canonical kernel basis, so it
/// does not depend on how the system was presented beyond `A` and `b`.
pub fn solve_integer(a: &IntMatrix, b: &IntVector) -> Solution<IntVector> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length");
    let (d, l, r) = smith_normal_form(a);
    let lb = l.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.ncols()];
    for (i, v) in lb.iter().enumerate() {
        let di = if i < d.ncols() { d.get(i, i).clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !v.is_zero() {
                return Solution::Inconsistent;
            }
            continue;
        }
        let (q, rem) = v.div_rem(&di);
        if !rem.is_zero() {
            return Solution::Inconsistent;
        }
        y[i] = q;
    }
    let mut x = r.mul_vec(&IntVector::new(y)).into_inner();
    let kernel = integer_kernel(a);
    for k in kernel.row_vectors() {
        let c = k.iter().position(|v| !v.is_zero()).expect("kernel rows are nonzero");
        let q = x[c].div_floor(&k[c]);
        for (xi, ki) in x.iter_mut().zip(k.iter()) {
            *xi -= &q * ki;
        }
    }
    Solution::Solved(IntVector::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.row_vectors(), vec![IntVector::from_i64s(&[1, -1])]);
        assert_eq!(integer_kernel(&IntMatrix::identity(2)).nrows(), 0);
        let k = integer_kernel(&IntMatrix::from_i64(&[&[2, 4]]));
        assert_eq!(k.row_vectors(), vec![IntVector::from_i64s(&[2, -1])]);
    }

    #[test]
    fn kernel_of_wide_matrix_is_saturated() {
        let a = IntMatrix::from_i64(&[&[2, 4, 6, 8], &[1, 1, 1, 1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.nrows(), 2);
        for row in k.row_vectors() {
            assert!(a.mul_vec(&row).is_zero());
            assert_eq!(row.content(), BigInt::from(1));
        }
        assert!(super::super::normal_form::rows_span_direct_summand(&k));
    }

    #[test]
    fn rational_solve_examples() {
        let a = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(
            solve_rational(&a, &IntVector::from_i64s(&[1])),
            Solution::Solved(RationalVector::new(vec![q(1, 2)]))
        );
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(
            solve_rational(&a, &IntVector::from_i64s(&[2])),
            Solution::Solved(RationalVector::new(vec![q(2, 1), q(0, 1)]))
        );
        let a = IntMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(solve_rational(&a, &IntVector::from_i64s(&[1, 2])), Solution::Inconsistent);
    }

    #[test]
    fn integer_solve() {
        let a = IntMatrix::from_i64(&[&[2, 4]]);
        let x = solve_integer(&a, &IntVector::from_i64s(&[6])).ok().unwrap();
        assert_eq!(a.mul_vec(&x), IntVector::from_i64s(&[6]));
        assert_eq!(solve_integer(&a, &IntVector::from_i64s(&[3])), Solution::Inconsistent);
        let a = IntMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert_eq!(solve_integer(&a, &IntVector::from_i64s(&[1, 1])), Solution::Inconsistent);
    }
}
