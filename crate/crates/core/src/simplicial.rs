//! Abstract simplicial complexes, their f- and h-vectors, and Macaulay's
//! numerical characterization of M-sequences.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::ehrhart::{binomial, is_symmetric, HVector};
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

/// A complex given by its facets on the vertices `0 … vertex_count − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Sorts the facets and drops any contained in another.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut f in facets {
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::Precondition(format!("vertex {v} out of range 0..{vertex_count}")));
            }
            set.insert(f);
        }
        let all: Vec<Vec<usize>> = set.into_iter().collect();
        let facets = all
            .iter()
            .filter(|f| !all.iter().any(|g| g.len() > f.len() && f.iter().all(|v| g.binary_search(v).is_ok())))
            .cloned()
            .collect();
        Ok(Self { vertex_count, facets })
    }

    /// The complex of a triangulation, on its point indices.
    pub fn from_triangulation(t: &Triangulation) -> Self {
        Self::new(t.points.len(), t.cells.clone()).expect("cells index the points")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// `d − 1` for facets of size `d`; `−1` for the complex `{∅}`.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize).max().unwrap_or(0) - 1
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.facets[0].len())
    }

    /// All faces, including the empty face.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        out.insert(Vec::new());
        for f in &self.facets {
            for mask in 1u64..(1u64 << f.len()) {
                out.insert(f.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect());
            }
        }
        out
    }

    pub fn is_face(&self, s: &[usize]) -> bool {
        self.facets.iter().any(|f| s.iter().all(|v| f.binary_search(v).is_ok()))
    }

    /// `(f₋₁, f₀, …, f_{d−1})`.
    pub fn f_vector(&self) -> Vec<u64> {
        let d = (self.dim() + 1) as usize;
        let mut f = vec![0u64; d + 1];
        for face in self.faces() {
            f[face.len()] += 1;
        }
        f
    }

    /// `h_k = Σ_{i≤k} (−1)^{k−i} C(d−i, k−i) f_{i−1}`; needs a pure complex.
    pub fn h_vector(&self) -> Result<HVector> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        let f = self.f_vector();
        let d = f.len() - 1;
        let h = (0..=d)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let t = binomial(d - i, k - i) * BigInt::from(f[i]);
                        if (k - i) % 2 == 0 {
                            t
                        } else {
                            -t
                        }
                    })
                    .sum()
            })
            .collect();
        Ok(HVector::new(h, d))
    }

    /// `Σ_{i≥0} (−1)ⁱ fᵢ` over the nonempty faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().skip(1).enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Inclusion-minimal vertex sets that are not faces.
    pub fn minimal_nonfaces(&self) -> Vec<Vec<usize>> {
        let faces = self.faces();
        let mut out = Vec::new();
        for face in &faces {
            let start = face.last().map_or(0, |&m| m + 1);
            for v in start..self.vertex_count {
                let mut s = face.clone();
                s.push(v);
                if faces.contains(&s) {
                    continue;
                }
                let minimal = (0..s.len()).all(|i| {
                    let mut t = s.clone();
                    t.remove(i);
                    faces.contains(&t)
                });
                if minimal {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }

    /// Pure, and every codimension-one face lies in exactly two facets.
    pub fn is_pseudomanifold(&self) -> bool {
        if !self.is_pure() {
            return false;
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in &self.facets {
            if f.is_empty() {
                continue;
            }
            for i in 0..f.len() {
                let mut r = f.clone();
                r.remove(i);
                *ridges.entry(r).or_insert(0) += 1;
            }
        }
        ridges.values().all(|&c| c == 2)
    }
}

/// Facets are unions of one facet from each; vertices of `b` are shifted
/// past those of `a`.
pub fn join(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let shift = a.vertex_count;
    let mut facets = Vec::new();
    for f in &a.facets {
        for g in &b.facets {
            facets.push(f.iter().copied().chain(g.iter().map(|v| v + shift)).collect());
        }
    }
    SimplicialComplex::new(a.vertex_count + b.vertex_count, facets).expect("shifted vertices in range")
}

/// `h_i = h_{d−i}` for `0 ≤ i ≤ d` on the pure complex `k`, counting
/// trailing zeros up to `h_d`.
pub fn dehn_sommerville_check(k: &SimplicialComplex) -> Result<bool> {
    let h = k.h_vector()?;
    let d = h.denominator_exponent;
    let at = |i: usize| h.coefficients.get(i).cloned().unwrap_or_default();
    Ok((0..=d).all(|i| at(i) == at(d - i)))
}

/// Macaulay representation `a = C(a_i, i) + C(a_{i−1}, i−1) + ⋯ + C(a_j, j)`
/// with `a_i > ⋯ > a_j ≥ j ≥ 1`, as `(a_k, k)` pairs.
pub fn macaulay_representation(a: u64, i: usize) -> Vec<(u64, usize)> {
    let mut rem = BigInt::from(a);
    let mut out = Vec::new();
    let mut k = i;
    while rem > BigInt::from(0) && k >= 1 {
        let mut n = k as u64;
        while binomial(n as usize + 1, k) <= rem {
            n += 1;
        }
        rem -= binomial(n as usize, k);
        out.push((n, k));
        k -= 1;
    }
    out
}

/// `a^{⟨i⟩} = Σ C(a_k + 1, k + 1)` over the Macaulay representation.
pub fn macaulay_bound(a: u64, i: usize) -> BigInt {
    macaulay_representation(a, i).iter().map(|&(n, k)| binomial(n as usize + 1, k + 1)).sum()
}

/// `v₀ = 1`, all entries nonnegative, and `v_{i+1} ≤ v_i^{⟨i⟩}` for `i ≥ 1`.
pub fn is_m_sequence(v: &[i64]) -> bool {
    if v.first() != Some(&1) || v.iter().any(|&x| x < 0) {
        return false;
    }
    (1..v.len().saturating_sub(1)).all(|i| BigInt::from(v[i + 1]) <= macaulay_bound(v[i] as u64, i))
}

/// `(1, h₁ − h₀, …, h_s' − h_{s'−1})` with `s' = ⌊s/2⌋` for a symmetric h-vector of
/// degree `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVector {
    pub entries: Vec<i64>,
}

impl GVector {
    pub fn from_h(h: &HVector) -> Result<Self> {
        if !is_symmetric(h) {
            return Err(Error::NotSymmetric);
        }
        let c: Vec<i64> = h
            .coefficients
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Precondition(format!("h-entry {x} exceeds 64 bits"))))
            .collect::<Result<_>>()?;
        let half = h.degree() / 2;
        let mut entries = vec![c.first().copied().unwrap_or(0)];
        entries.extend((1..=half).map(|i| c[i] - c[i - 1]));
        Ok(Self { entries })
    }

    pub fn is_m_sequence(&self) -> bool {
        is_m_sequence(&self.entries)
    }
}

/// The necessity half of the g-theorem for `h`: its g-vector is an
/// M-sequence.
pub fn g_theorem_necessity(h: &HVector) -> Result<bool> {
    Ok(GVector::from_h(h)?.is_m_sequence())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(n: usize, facets: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::new(n, facets.iter().map(|f| f.to_vec()).collect()).unwrap()
    }

    fn cycle4() -> SimplicialComplex {
        cx(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])
    }

    fn tetra_boundary() -> SimplicialComplex {
        cx(4, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
    }

    #[test]
    fn f_vectors() {
        assert_eq!(cycle4().f_vector(), vec![1, 4, 4]);
        assert_eq!(tetra_boundary().f_vector(), vec![1, 4, 6, 4]);
        assert_eq!(cx(2, &[&[0, 1]]).f_vector(), vec![1, 2, 1]);
    }

    #[test]
    fn h_vectors() {
        assert_eq!(cycle4().h_vector().unwrap().to_i64s(), vec![1, 2, 1]);
        assert_eq!(tetra_boundary().h_vector().unwrap().to_i64s(), vec![1, 1, 1, 1]);
        assert_eq!(cx(3, &[&[0, 1, 2]]).h_vector().unwrap().to_i64s(), vec![1]);
        assert_eq!(cx(3, &[&[0, 1], &[2]]).h_vector(), Err(Error::NotPure));
        let octahedron = cx(6, &[&[0, 2, 4], &[0, 2, 5], &[0, 3, 4], &[0, 3, 5], &[1, 2, 4], &[1, 2, 5], &[1, 3, 4], &[1, 3, 5]]);
        assert_eq!(octahedron.f_vector(), vec![1, 6, 12, 8]);
        assert_eq!(octahedron.h_vector().unwrap().to_i64s(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn minimal_nonfaces_examples() {
        assert_eq!(cycle4().minimal_nonfaces(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(cx(3, &[&[0, 1], &[1, 2], &[0, 2]]).minimal_nonfaces(), vec![vec![0, 1, 2]]);
        assert_eq!(cx(4, &[&[0, 1], &[2, 3]]).minimal_nonfaces(), vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        // an unused vertex is a minimal nonface
        assert_eq!(cx(3, &[&[0, 1]]).minimal_nonfaces(), vec![vec![2]]);
    }

    #[test]
    fn joins() {
        let edge = cx(2, &[&[0, 1]]);
        let point = cx(1, &[&[0]]);
        assert_eq!(join(&edge, &point).facets(), &[vec![0, 1, 2]]);
        assert_eq!(join(&cycle4(), &point).facets().len(), 4);
        assert_eq!(join(&point, &point).facets(), &[vec![0, 1]]);
    }

    #[test]
    fn dehn_sommerville() {
        assert!(dehn_sommerville_check(&cycle4()).unwrap());
        let path = cx(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(path.h_vector().unwrap().to_i64s(), vec![1, 1]);
        assert!(!dehn_sommerville_check(&path).unwrap());
    }

    #[test]
    fn euler_characteristic_and_pseudomanifolds() {
        assert_eq!(cycle4().euler_characteristic(), 0);
        assert_eq!(tetra_boundary().euler_characteristic(), 2);
        assert!(cycle4().is_pseudomanifold());
        assert!(!cx(3, &[&[0, 1], &[1, 2]]).is_pseudomanifold());
        let empty = SimplicialComplex::new(0, vec![vec![]]).unwrap();
        assert_eq!(empty.dim(), -1);
        assert_eq!(empty.h_vector().unwrap().to_i64s(), vec![1]);
    }

    #[test]
    fn macaulay_representations() {
        // 5 = C(4,2) − 1 = C(3,2) + C(2,1)
        assert_eq!(macaulay_representation(5, 2), vec![(3, 2), (2, 1)]);
        assert_eq!(macaulay_bound(5, 2), BigInt::from(7));
        assert_eq!(macaulay_bound(3, 1), BigInt::from(6));
        assert_eq!(macaulay_bound(0, 3), BigInt::from(0));
    }

    #[test]
    fn m_sequences() {
        assert!(is_m_sequence(&[1, 3, 6]));
        assert!(!is_m_sequence(&[1, 2, 4]));
        assert!(is_m_sequence(&[1]));
        assert!(!is_m_sequence(&[2]));
        assert!(is_m_sequence(&[1, 0]));
        assert!(!is_m_sequence(&[1, 0, 1]));
        assert!(is_m_sequence(&[1, 3, 5, 7]));
        assert!(!is_m_sequence(&[1, 3, 5, 8]));
    }

    #[test]
    fn g_theorem() {
        let h = |v: &[i64]| HVector::from_i64s(v, v.len());
        assert_eq!(GVector::from_h(&h(&[1, 4, 1])).unwrap().entries, vec![1, 3]);
        assert!(g_theorem_necessity(&h(&[1, 4, 1])).unwrap());
        assert!(g_theorem_necessity(&h(&[1, 1, 1])).unwrap());
        assert!(!g_theorem_necessity(&h(&[1, 0, 1])).unwrap());
        assert_eq!(g_theorem_necessity(&h(&[1, 3])), Err(Error::NotSymmetric));
    }
}
