//! Pointed rational cones, their support forms and Hilbert bases.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{cone_facets, pulling_triangulation, sort_forms_by};
use crate::linalg::{rank_of, smith_normal_form, IntMatrix, IntVector, LatticeBasis, RationalVector};
use crate::polytope::VPolytope;

/// A pointed cone together with its irredundant primitive support forms.
///
/// Forms are primitive with respect to the lattice of the linear span and
/// are stored in a fixed canonical order; all index sets in this crate
/// refer to that order (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_dim: usize,
    generators: Vec<IntVector>,
    lattice: LatticeBasis,
    support_forms: Vec<IntVector>,
    intrinsic_forms: Vec<IntVector>,
    rays: Vec<IntVector>,
}

impl Cone {
    pub fn new(ambient_dim: usize, generators: Vec<IntVector>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: g.len() });
            }
        }
        let lattice = LatticeBasis::saturated_span(&generators, ambient_dim);
        let r = lattice.rank();
        let coords: Vec<IntVector> =
            generators.iter().map(|g| lattice.coords(g).expect("generator in its span")).collect();
        let facets = cone_facets(&coords, r)?;
        let mut pairs: Vec<(IntVector, IntVector)> =
            facets.into_iter().map(|f| (lattice.functional_to_ambient(&f.normal), f.normal)).collect();
        sort_forms_by(&mut pairs, |p| &p.0);
        let (support_forms, intrinsic_forms): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        if r > 0 && rank_of(&intrinsic_forms) < r {
            return Err(Error::NotPointed);
        }
        let mut rays = BTreeSet::new();
        for (g, c) in generators.iter().zip(&coords) {
            if g.is_zero() {
                continue;
            }
            let on: Vec<IntVector> = intrinsic_forms.iter().filter(|f| f.dot(c).is_zero()).cloned().collect();
            if rank_of(&on) + 1 == r {
                rays.insert(g.primitive()?);
            }
        }
        Ok(Self {
            ambient_dim,
            generators,
            lattice,
            support_forms,
            intrinsic_forms,
            rays: rays.into_iter().collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank()
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Lattice of the linear span, taken as `gp(M)`.
    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn support_forms(&self) -> &[IntVector] {
        &self.support_forms
    }

    /// Support forms in lattice coordinates of the span.
    pub fn intrinsic_forms(&self) -> &[IntVector] {
        &self.intrinsic_forms
    }

    /// Primitive generators of the extreme rays, sorted.
    pub fn extreme_rays(&self) -> &[IntVector] {
        &self.rays
    }

    /// `σ(a) = (σ₁(a), …, σ_s(a))` for `a` in the span.
    pub fn standard_embedding(&self, a: &IntVector) -> IntVector {
        self.support_forms.iter().map(|f| f.dot(a)).collect()
    }

    pub fn standard_embedding_rational(&self, a: &RationalVector) -> RationalVector {
        self.support_forms.iter().map(|f| a.dot_int(f)).collect()
    }

    pub fn in_span(&self, x: &RationalVector) -> bool {
        self.lattice.coords_rational(x).is_some()
    }

    pub fn contains_rational(&self, x: &RationalVector) -> bool {
        self.in_span(x) && self.standard_embedding_rational(x).iter().all(|v| !v.is_negative())
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.contains_rational(&x.to_rational())
    }

    /// Lattice point of the cone (in `gp(M)`), as opposed to a real point.
    pub fn contains_lattice_point(&self, x: &IntVector) -> bool {
        self.lattice.contains(x) && self.standard_embedding(x).iter().all(|v| !v.is_negative())
    }

    pub fn in_relative_interior(&self, x: &RationalVector) -> bool {
        self.in_span(x) && self.standard_embedding_rational(x).iter().all(|v| v.is_positive())
    }

    /// `{i : σᵢ(x) > 0}`, the facets not containing `x`.
    pub fn sigma_positive_support(&self, x: &IntVector) -> Result<Vec<usize>> {
        if !self.contains(x) {
            return Err(Error::NotInCone(x.to_string()));
        }
        Ok(self.standard_embedding(x).iter().enumerate().filter(|(_, v)| v.is_positive()).map(|(i, _)| i).collect())
    }

    /// Extreme rays lying on every facet in `forms`.
    pub fn face_rays(&self, forms: &[usize]) -> Vec<IntVector> {
        self.rays
            .iter()
            .filter(|r| forms.iter().all(|&j| self.support_forms[j].dot(r).is_zero()))
            .cloned()
            .collect()
    }

    /// Unique minimal generating set of `C ∩ gp(M)`, sorted.
    pub fn hilbert_basis(&self) -> Result<Vec<IntVector>> {
        let r = self.dim();
        if r == 0 {
            return Ok(Vec::new());
        }
        let rays: Vec<IntVector> =
            self.rays.iter().map(|v| self.lattice.coords(v).expect("ray in lattice")).collect();
        let mut candidates: BTreeSet<IntVector> = rays.iter().cloned().collect();
        for cell in pulling_triangulation(&rays)? {
            let gens: Vec<IntVector> = cell.iter().map(|&i| rays[i].clone()).collect();
            candidates.extend(parallelepiped_points(&gens));
        }
        let cands: Vec<IntVector> = candidates.into_iter().filter(|c| !c.is_zero()).collect();
        let inside = |x: &IntVector| self.intrinsic_forms.iter().all(|f| !f.dot(x).is_negative());
        let mut basis: Vec<IntVector> = cands
            .iter()
            .filter(|x| !cands.iter().any(|c| c != *x && inside(&x.sub(c))))
            .map(|x| self.lattice.embed(x))
            .collect();
        basis.sort();
        Ok(basis)
    }
}

/// Lattice points `Σ λᵢ gᵢ` with `0 ≤ λᵢ < 1` for linearly independent
/// generators spanning `ℝ^k`.
fn parallelepiped_points(gens: &[IntVector]) -> Vec<IntVector> {
    let k = gens.len();
    let a = IntMatrix::from_vectors(gens, k);
    let (d, _, r) = smith_normal_form(&a);
    let rinv = r.inverse_unimodular().expect("Smith transform is unimodular");
    let ainv: Vec<Vec<BigRational>> = rational_inverse(&a);
    let divisors: Vec<BigInt> = (0..k).map(|i| d.get(i, i).clone()).collect();
    let mut out = Vec::new();
    let mut y = vec![BigInt::zero(); k];
    loop {
        let x = rinv.vec_mul(&IntVector::new(y.clone()));
        // λ = x·A⁻¹, then keep fractional parts
        let lambda: Vec<BigRational> = (0..k)
            .map(|j| (0..k).map(|i| BigRational::from_integer(x[i].clone()) * &ainv[i][j]).sum())
            .collect();
        let frac: RationalVector = lambda.iter().map(|l| l - l.floor()).collect();
        let p: RationalVector = (0..k)
            .map(|j| (0..k).map(|i| &frac[i] * BigRational::from_integer(a.get(i, j).clone())).sum())
            .collect();
        out.push(p.to_integral().expect("parallelepiped point is integral"));
        // odometer over 0 ≤ yᵢ < dᵢ
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            y[i] += 1;
            if y[i] < divisors[i] {
                break;
            }
            y[i] = BigInt::zero();
            i += 1;
        }
    }
}

fn rational_inverse(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    let n = a.nrows();
    let mut m: Vec<Vec<BigRational>> = a
        .to_rational()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).expect("invertible matrix");
        m.swap(c, p);
        let inv = BigRational::one() / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// The cone over `P × {1}`.
pub fn cone_over_polytope(p: &VPolytope) -> Result<Cone> {
    let gens = p.vertices().iter().map(|v| v.extended(BigInt::one())).collect();
    Cone::new(p.ambient_dim() + 1, gens)
}

/// A positive affine monoid `C ∩ gp(M)` with a grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMonoid {
    pub cone: Cone,
    pub hilbert_basis: Vec<IntVector>,
    pub degree_functional: IntVector,
}

impl AffineMonoid {
    pub fn new(cone: Cone, degree_functional: IntVector) -> Result<Self> {
        let hilbert_basis = cone.hilbert_basis()?;
        Ok(Self { cone, hilbert_basis, degree_functional })
    }

    /// The Ehrhart monoid `E(P) = C(P) ∩ ℤⁿ`, graded by the last coordinate.
    pub fn of_polytope(p: &VPolytope) -> Result<Self> {
        let cone = cone_over_polytope(p)?;
        let deg = IntVector::unit(p.ambient_dim() + 1, p.ambient_dim());
        Self::new(cone, deg)
    }

    pub fn lattice_basis(&self) -> &IntMatrix {
        self.cone.lattice().basis()
    }

    pub fn degree(&self, a: &IntVector) -> BigInt {
        self.degree_functional.dot(a)
    }

    /// Largest total σ-degree among Hilbert basis elements; irreducibility
    /// was certified by subtraction among candidates up to this bound.
    pub fn degree_bound(&self) -> BigInt {
        self.hilbert_basis
            .iter()
            .map(|h| self.cone.standard_embedding(h).iter().sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }

    pub fn is_generated_in_degree_one(&self) -> bool {
        self.hilbert_basis.iter().all(|h| self.degree(h).is_one())
    }
}

/// Outcome of the integral-closedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralClosure {
    pub closed: bool,
    /// A Hilbert basis element of degree at least 2, when not closed.
    pub witness: Option<IntVector>,
}

pub fn is_integrally_closed(p: &VPolytope) -> Result<IntegralClosure> {
    let m = AffineMonoid::of_polytope(p)?;
    Ok(integral_closure_of(&m))
}

pub fn integral_closure_of(m: &AffineMonoid) -> IntegralClosure {
    let witness = m.hilbert_basis.iter().find(|h| m.degree(h) > BigInt::one()).cloned();
    IntegralClosure { closed: witness.is_none(), witness }
}
