//! Ehrhart counts and h-vectors of a polytope, its interior and boundary.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polytope::VPolytope;

/// Numerator coefficients `h₀ … h_d` of a rational generating function
/// over `(1 − t)^e`, where `e` is `denominator_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HVector {
    pub coefficients: Vec<BigInt>,
    pub denominator_exponent: usize,
}

impl HVector {
    /// Trims trailing zeros.
    pub fn new(mut coefficients: Vec<BigInt>, denominator_exponent: usize) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients, denominator_exponent }
    }

    pub fn from_i64s(c: &[i64], denominator_exponent: usize) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect(), denominator_exponent)
    }

    pub fn to_i64s(&self) -> Vec<i64> {
        self.coefficients.iter().map(|x| i64::try_from(x).expect("h-vector entry fits in i64")).collect()
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn sum(&self) -> BigInt {
        self.coefficients.iter().sum()
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Raw counts behind the h-vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartData {
    /// `E(P, m)` for `m = 0 … D`, with `E(P, 0) = 1`.
    pub counts: Vec<u64>,
    /// `E(relint P, m)` for `m = 1 … D + 1`.
    pub interior_counts: Vec<u64>,
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `hⱼ = Σᵢ (−1)^{j−i} C(e, j−i) vᵢ` for `j < len(v)`.
pub(crate) fn binomial_transform(values: &[BigInt], e: usize) -> Vec<BigInt> {
    (0..values.len())
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let t = binomial(e, j - i) * &values[i];
                    if (j - i) % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect()
}

pub fn ehrhart_data(p: &VPolytope) -> EhrhartData {
    let d = p.dim() as u64;
    let mut counts = vec![1];
    counts.extend((1..=d).map(|m| p.count_lattice_points(m) as u64));
    let interior_counts = (1..=d + 1).map(|m| p.count_relint_lattice_points(m) as u64).collect();
    EhrhartData { counts, interior_counts }
}

/// Ehrhart h-vector from the counts `E(P, 0 … D)`.
pub fn h_vector(p: &VPolytope) -> HVector {
    h_vector_from_counts(&ehrhart_data(p).counts)
}

pub fn h_vector_from_counts(counts: &[u64]) -> HVector {
    let e = counts.len();
    let v: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
    HVector::new(binomial_transform(&v, e), e)
}

/// Coefficients of the numerator of `Σ_{m≥1} E(relint P, m) tᵐ` over
/// `(1 − t)^{D+1}`, indexed by power of `t`.
pub fn interior_h_numerator(p: &VPolytope) -> Vec<BigInt> {
    interior_numerator_from_counts(&ehrhart_data(p).interior_counts)
}

pub fn interior_numerator_from_counts(interior: &[u64]) -> Vec<BigInt> {
    let e = interior.len();
    let mut v = vec![BigInt::zero()];
    v.extend(interior.iter().map(|&c| BigInt::from(c)));
    let mut n = binomial_transform(&v, e);
    while n.last().is_some_and(Zero::is_zero) {
        n.pop();
    }
    n
}

/// Numerator of the boundary series over `(1 − t)^D`.
pub fn boundary_h_vector(p: &VPolytope) -> Result<HVector> {
    if p.dim() == 0 {
        return Err(Error::Precondition("boundary h-vector needs dim P ≥ 1".into()));
    }
    boundary_from_data(&ehrhart_data(p))
}

pub fn boundary_from_data(data: &EhrhartData) -> Result<HVector> {
    let h = h_vector_from_counts(&data.counts);
    let n = interior_numerator_from_counts(&data.interior_counts);
    let len = h.coefficients.len().max(n.len());
    let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    let diff: Vec<BigInt> = (0..len).map(|i| get(&h.coefficients, i) - get(&n, i)).collect();
    // divide by (1 − t): quotient coefficients are the partial sums
    let mut q = Vec::with_capacity(len);
    let mut acc = BigInt::zero();
    for c in &diff {
        acc += c;
        q.push(acc.clone());
    }
    if !acc.is_zero() {
        return Err(Error::SeriesNotDivisible);
    }
    Ok(HVector::new(q, data.counts.len() - 1))
}

pub fn is_symmetric(h: &HVector) -> bool {
    let c = &h.coefficients;
    c.iter().eq(c.iter().rev())
}

pub fn is_unimodal(h: &HVector) -> bool {
    let c = &h.coefficients;
    let mut i = 0;
    while i + 1 < c.len() && c[i] <= c[i + 1] {
        i += 1;
    }
    while i + 1 < c.len() && c[i] >= c[i + 1] {
        i += 1;
    }
    i + 1 >= c.len()
}

/// Sum of the h-vector: the normalized volume of a lattice polytope.
pub fn normalized_volume(p: &VPolytope) -> BigInt {
    h_vector(p).sum()
}

pub fn all_nonnegative(h: &HVector) -> bool {
    h.coefficients.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn square() -> VPolytope {
        VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn cube() -> VPolytope {
        let mut v = Vec::new();
        for i in 0..8i64 {
            v.push(crate::linalg::IntVector::from_i64s(&[i & 1, (i >> 1) & 1, (i >> 2) & 1]));
        }
        VPolytope::new(3, v).unwrap()
    }

    #[test]
    fn h_vectors() {
        assert_eq!(h_vector(&square()).to_i64s(), vec![1, 1]);
        let c = cube();
        assert_eq!(ehrhart_data(&c).counts, vec![1, 8, 27, 64]);
        assert_eq!(h_vector(&c).to_i64s(), vec![1, 4, 1]);
        assert_eq!(h_vector(&c).denominator_exponent, 4);
        let pt = VPolytope::from_i64(&[&[0, 0]]).unwrap();
        assert_eq!(h_vector(&pt).to_i64s(), vec![1]);
    }

    #[test]
    fn interior_numerators() {
        assert_eq!(ehrhart_data(&square()).interior_counts, vec![0, 1, 4]);
        assert_eq!(interior_h_numerator(&square()), big(&[0, 0, 1, 1]));
        let seg = VPolytope::from_i64(&[&[0], &[1]]).unwrap();
        assert_eq!(interior_h_numerator(&seg), big(&[0, 0, 1]));
    }

    #[test]
    fn boundary_vectors() {
        assert_eq!(boundary_h_vector(&square()).unwrap().to_i64s(), vec![1, 2, 1]);
        let seg = VPolytope::from_i64(&[&[0], &[2]]).unwrap();
        assert_eq!(boundary_h_vector(&seg).unwrap().to_i64s(), vec![1, 1]);
        // E_∂(m) = 3m gives 1 + 3t/(1 − t)² = (1 + t + t²)/(1 − t)²
        let tri = VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(boundary_h_vector(&tri).unwrap().to_i64s(), vec![1, 1, 1]);
        assert!(boundary_h_vector(&VPolytope::from_i64(&[&[1]]).unwrap()).is_err());
    }

    #[test]
    fn undivisible_series_is_reported() {
        let bad = EhrhartData { counts: vec![1, 4, 9], interior_counts: vec![0, 2, 4] };
        assert_eq!(boundary_from_data(&bad), Err(Error::SeriesNotDivisible));
    }

    #[test]
    fn symmetry_and_unimodality() {
        let h = |v: &[i64]| HVector::from_i64s(v, v.len());
        assert!(is_symmetric(&h(&[1, 4, 1])));
        assert!(!is_symmetric(&h(&[1, 3])));
        assert!(is_symmetric(&h(&[1, 1, 1])));
        assert!(is_unimodal(&h(&[1, 4, 1])));
        assert!(!is_unimodal(&h(&[1, 0, 1])));
        assert!(is_unimodal(&h(&[1, 2, 2, 1])));
    }
}
