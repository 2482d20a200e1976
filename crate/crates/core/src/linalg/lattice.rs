use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::solve::integer_kernel;
use super::vector::{IntVector, RationalVector};
use crate::error::{Error, Result};

/// Completes a basis of a direct summand (the rows of `b`) to a unimodular
/// `n × n` matrix whose first rows are `b`.
pub fn extend_to_unimodular(b: &IntMatrix) -> Result<IntMatrix> {
    let d = b.nrows();
    let n = b.ncols();
    let (snf, _, r) = smith_normal_form(b);
    if (0..d).any(|i| !snf.get(i, i).is_one()) {
        return Err(Error::Precondition("rows do not span a direct summand".into()));
    }
    let rinv = r.inverse_unimodular().expect("Smith transform is unimodular");
    let mut rows: Vec<IntVector> = b.row_vectors();
    rows.extend((d..n).map(|i| rinv.row_vector(i)));
    Ok(IntMatrix::from_vectors(&rows, n))
}

/// The lattice `span(gens) ∩ ℤⁿ` with a canonical (HNF) basis and an exact
/// coordinate map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    basis: IntMatrix,
    /// Inverse of the basis completed to a unimodular matrix.
    coordinate_map: IntMatrix,
    /// HNF basis of the integer functionals vanishing on the lattice.
    annihilator: IntMatrix,
}

impl LatticeBasis {
    /// Saturated lattice of the linear span of `gens` (vectors in `ℤⁿ`).
    pub fn saturated_span(gens: &[IntVector], n: usize) -> Self {
        let g = IntMatrix::from_vectors(gens, n);
        let basis = if gens.is_empty() {
            IntMatrix::zeros(0, n)
        } else {
            let normals = integer_kernel(&g);
            if normals.nrows() == 0 {
                IntMatrix::identity(n)
            } else {
                integer_kernel(&normals)
            }
        };
        Self::from_saturated_basis(basis)
    }

    /// The full lattice `ℤⁿ`.
    pub fn full(n: usize) -> Self {
        Self::from_saturated_basis(IntMatrix::identity(n))
    }

    fn from_saturated_basis(basis: IntMatrix) -> Self {
        let w = extend_to_unimodular(&basis).expect("saturated basis");
        let coordinate_map = w.inverse_unimodular().expect("unimodular completion");
        let annihilator = if basis.nrows() == 0 {
            IntMatrix::identity(basis.ncols())
        } else {
            integer_kernel(&basis)
        };
        Self { basis, coordinate_map, annihilator }
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Integer coordinates of `x` in the basis, or `None` if `x` is not a
    /// lattice vector.
    pub fn coords(&self, x: &IntVector) -> Option<IntVector> {
        let c = self.coordinate_map.vec_mul(x);
        let d = self.rank();
        c[d..].iter().all(Zero::is_zero).then(|| c[..d].iter().cloned().collect())
    }

    /// Rational coordinates of a vector of the real span.
    pub fn coords_rational(&self, x: &RationalVector) -> Option<RationalVector> {
        let c = self.coordinate_map.rational_vec_mul(x);
        let d = self.rank();
        c[d..].iter().all(Zero::is_zero).then(|| c[..d].iter().cloned().collect())
    }

    pub fn embed(&self, c: &IntVector) -> IntVector {
        self.basis.vec_mul(c)
    }

    pub fn embed_rational(&self, c: &RationalVector) -> RationalVector {
        self.basis.rational_vec_mul(c)
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.coords(x).is_some()
    }

    /// The `rank × n` integer matrix sending a lattice vector to its
    /// coordinates.
    pub fn coordinate_matrix(&self) -> IntMatrix {
        let d = self.rank();
        let n = self.ambient_dim();
        IntMatrix::from_rows(
            (0..d).map(|j| (0..n).map(|i| self.coordinate_map.get(i, j).clone()).collect()).collect(),
            n,
        )
    }

    /// Integer functionals vanishing on the lattice (HNF rows).
    pub fn annihilator(&self) -> &IntMatrix {
        &self.annihilator
    }

    /// An integer functional on `ℤⁿ` restricting to `a` in lattice
    /// coordinates, reduced modulo the annihilator so it is canonical.
    pub fn functional_to_ambient(&self, a: &IntVector) -> IntVector {
        let d = self.rank();
        assert_eq!(a.len(), d);
        let n = self.ambient_dim();
        let mut v: Vec<BigInt> = (0..n)
            .map(|i| (0..d).map(|j| self.coordinate_map.get(i, j) * &a[j]).sum())
            .collect();
        for k in self.annihilator.row_vectors() {
            let c = k.iter().position(|x| !x.is_zero()).expect("nonzero annihilator row");
            let q = v[c].div_floor(&k[c]);
            for (vi, ki) in v.iter_mut().zip(k.iter()) {
                *vi -= &q * ki;
            }
        }
        IntVector::new(v)
    }
}

/// An affine lattice `origin + L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLattice {
    pub origin: IntVector,
    pub lattice: LatticeBasis,
}

impl AffineLattice {
    /// The affine lattice `aff(points) ∩ ℤⁿ` for lattice points.
    pub fn through(points: &[IntVector]) -> Result<Self> {
        let origin = points.first().ok_or(Error::Empty)?.clone();
        let diffs: Vec<IntVector> = points.iter().map(|p| p.sub(&origin)).collect();
        let lattice = LatticeBasis::saturated_span(&diffs, origin.len());
        Ok(Self { origin, lattice })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn coords(&self, x: &IntVector) -> Option<IntVector> {
        self.lattice.coords(&x.sub(&self.origin))
    }

    pub fn coords_rational(&self, x: &RationalVector) -> Option<RationalVector> {
        self.lattice.coords_rational(&x.sub(&self.origin.to_rational()))
    }

    pub fn embed(&self, c: &IntVector) -> IntVector {
        self.lattice.embed(c).add(&self.origin)
    }

    pub fn embed_rational(&self, c: &RationalVector) -> RationalVector {
        self.lattice.embed_rational(c).add(&self.origin.to_rational())
    }
}

/// Whether the rows generate the full lattice of their span.
pub fn is_saturated(rows: &[IntVector], n: usize) -> bool {
    if rows.is_empty() {
        return true;
    }
    let (h, _) = hermite_normal_form(&IntMatrix::from_vectors(rows, n));
    let sat = LatticeBasis::saturated_span(rows, n);
    let nonzero: Vec<IntVector> = h.row_vectors().into_iter().filter(|r| !r.is_zero()).collect();
    IntMatrix::from_vectors(&nonzero, n) == *sat.basis()
}
