use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

fn row_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (a, b) = rows.split_at_mut(source);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -&*x;
    }
}

fn col_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in rows.iter_mut() {
        let v = q * &r[source];
        r[target] -= v;
    }
}

fn swap_cols(rows: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for r in rows.iter_mut() {
            r.swap(a, b);
        }
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·A = H`, `U` unimodular.
///
/// `H` is in row echelon form. Pivots are positive, zero rows sit at the
/// bottom and every entry above a pivot lies in `[0, pivot)`. Among the
/// candidate rows of a column the one of smallest absolute value wins, ties
/// going to the lowest index.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&i, &j| h.get(i, c).abs().cmp(&h.get(j, c).abs()).then(i.cmp(&j)));
            let Some(p) = pivot else { break };
            h.rows_mut().swap(r, p);
            u.rows_mut().swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                row_axpy(h.rows_mut(), i, r, &q);
                row_axpy(u.rows_mut(), i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            negate_row(&mut h.rows_mut()[r]);
            negate_row(&mut u.rows_mut()[r]);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            row_axpy(h.rows_mut(), i, r, &q);
            row_axpy(u.rows_mut(), i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(D, L, R)` with `L·A·R = D`.
///
/// `D` is diagonal with nonnegative entries `d₁ | d₂ | …`, and `L`, `R` are
/// unimodular.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let m = a.nrows();
    let n = a.ncols();
    let mut d = a.clone();
    let mut l = IntMatrix::identity(m);
    let mut r = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block, row-major first
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return (d, l, r) };
            d.rows_mut().swap(t, pi);
            l.rows_mut().swap(t, pi);
            swap_cols(d.rows_mut(), t, pj);
            swap_cols(r.rows_mut(), t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(d.get(t, t));
                row_axpy(d.rows_mut(), i, t, &q);
                row_axpy(l.rows_mut(), i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = d.get(t, j).div_floor(d.get(t, t));
                col_axpy(d.rows_mut(), j, t, &q);
                col_axpy(r.rows_mut(), j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let p = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    row_axpy(d.rows_mut(), t, i, &BigInt::from(-1));
                    row_axpy(l.rows_mut(), t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d.rows_mut()[t]);
            negate_row(&mut l.rows_mut()[t]);
        }
    }
    (d, l, r)
}

/// Nonzero diagonal entries of the Smith form (the elementary divisors).
pub fn elementary_divisors(a: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = smith_normal_form(a);
    (0..d.nrows().min(d.ncols())).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
}

/// True iff the rows of `a` are a basis of a direct summand of `ℤⁿ`.
pub fn rows_span_direct_summand(a: &IntMatrix) -> bool {
    let divisors = elementary_divisors(a);
    divisors.len() == a.nrows() && divisors.iter().all(One::is_one)
}

impl IntMatrix {
    /// Inverse of a unimodular matrix, or `None` if `|det| ≠ 1`.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.nrows() != self.ncols() {
            return None;
        }
        let (h, u) = hermite_normal_form(self);
        (h == IntMatrix::identity(self.nrows())).then_some(u)
    }
}
