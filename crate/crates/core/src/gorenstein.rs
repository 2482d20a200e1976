//! Gorenstein certificates, the reduction `P ↦ Q` and the Hilbert series
//! identity behind it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::{integral_closure_of, AffineMonoid, Cone};
use crate::ehrhart::{boundary_h_vector, h_vector, HVector};
use crate::error::{Error, Result};
use crate::linalg::{
    integer_kernel, rows_span_direct_summand, solve_integer, solve_rational, IntMatrix, IntVector, RationalVector,
};
use crate::polytope::{lattice_points_in_hull, VPolytope};

/// The interior point `y` with `σ(y) = (1, …, 1)` and a decomposition into
/// degree-one Hilbert basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinCertificate {
    pub y: IntVector,
    pub decomposition: Vec<IntVector>,
    /// `σ^>(yᵢ)` for each part, 0-based form indices.
    pub support_partition: Vec<Vec<usize>>,
    /// `kᵢ = |σ^>(yᵢ)|`.
    pub k: Vec<usize>,
}

impl GorensteinCertificate {
    pub fn m(&self) -> usize {
        self.decomposition.len()
    }

    /// `k₁ ⋯ k_m`, the common graded degree of the `yᵢ`.
    pub fn k_product(&self) -> BigInt {
        self.k.iter().map(|&k| BigInt::from(k)).product()
    }
}

/// Solves `σ(y) = (1, …, 1)` in `gp(M)`; `None` when no lattice solution
/// exists.
pub fn find_gorenstein_point(m: &AffineMonoid) -> Option<IntVector> {
    let cone = &m.cone;
    let forms = cone.intrinsic_forms();
    let r = cone.dim();
    if forms.is_empty() {
        return None;
    }
    let a = IntMatrix::from_vectors(forms, r);
    let ones = IntVector::new(vec![BigInt::one(); forms.len()]);
    let x = solve_rational(&a, &ones).ok()?;
    let x = x.to_integral()?;
    Some(cone.lattice().embed(&x))
}

/// Lexicographically first decomposition `y = y₁ + ⋯ + y_m` into degree-one
/// Hilbert basis elements with 0/1 σ-vectors and disjoint supports.
pub fn decompose_gorenstein_point(m: &AffineMonoid, y: &IntVector) -> Result<Vec<IntVector>> {
    let cone = &m.cone;
    let s = cone.support_forms().len();
    if cone.standard_embedding(y).iter().any(|v| !v.is_one()) {
        return Err(Error::Precondition(format!("{y} is not the Gorenstein point")));
    }
    let candidates: Vec<(IntVector, Vec<usize>)> = m
        .hilbert_basis
        .iter()
        .filter(|h| m.degree(h).is_one())
        .filter_map(|h| {
            let sig = cone.standard_embedding(h);
            sig.iter().all(|v| v.is_zero() || v.is_one()).then(|| {
                let support = (0..s).filter(|&i| sig[i].is_one()).collect::<Vec<_>>();
                (h.clone(), support)
            })
        })
        .filter(|(_, sup)| !sup.is_empty())
        .collect();
    let mut chosen = Vec::new();
    let mut covered = vec![false; s];
    if search(&candidates, 0, &mut covered, &mut chosen) {
        Ok(chosen.into_iter().map(|i| candidates[i].0.clone()).collect())
    } else {
        Err(Error::NotDecomposable)
    }
}

fn search(cands: &[(IntVector, Vec<usize>)], from: usize, covered: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    if covered.iter().all(|&c| c) {
        return true;
    }
    for i in from..cands.len() {
        let sup = &cands[i].1;
        if sup.iter().any(|&j| covered[j]) {
            continue;
        }
        for &j in sup {
            covered[j] = true;
        }
        chosen.push(i);
        if search(cands, i + 1, covered, chosen) {
            return true;
        }
        chosen.pop();
        for &j in sup {
            covered[j] = false;
        }
    }
    false
}

/// Full certificate, or `None` if the monoid is not Gorenstein.
pub fn gorenstein_certificate(m: &AffineMonoid) -> Result<Option<GorensteinCertificate>> {
    let Some(y) = find_gorenstein_point(m) else { return Ok(None) };
    let decomposition = decompose_gorenstein_point(m, &y)?;
    let cone = &m.cone;
    let support_partition: Vec<Vec<usize>> = decomposition
        .iter()
        .map(|yi| cone.sigma_positive_support(yi))
        .collect::<Result<_>>()?;
    let mut seen = vec![false; cone.support_forms().len()];
    for part in &support_partition {
        for &i in part {
            if seen[i] {
                return Err(Error::verification("support partition", format!("form {i} covered twice")));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::verification("support partition", "forms left uncovered"));
    }
    let total = decomposition.iter().skip(1).fold(decomposition[0].clone(), |acc, v| acc.add(v));
    if total != y {
        return Err(Error::verification("decomposition sum", format!("{total} ≠ {y}")));
    }
    let k = support_partition.iter().map(Vec::len).collect();
    Ok(Some(GorensteinCertificate { y, decomposition, support_partition, k }))
}

/// The grading `deg(a) = Σ_r (Π_{j≠r} k_j) Σ_{i∈σ^>(y_r)} σᵢ(a)` as an
/// integer linear form on the ambient space.
pub fn graded_degree_functional(cone: &Cone, cert: &GorensteinCertificate) -> IntVector {
    let forms = cone.support_forms();
    let mut g = IntVector::zeros(cone.ambient_dim());
    for (r, part) in cert.support_partition.iter().enumerate() {
        let coeff: BigInt = cert.k.iter().enumerate().filter(|(j, _)| *j != r).map(|(_, &k)| BigInt::from(k)).product();
        for &i in part {
            g = g.add(&forms[i].scale(&coeff));
        }
    }
    g
}

pub fn graded_degree(cone: &Cone, cert: &GorensteinCertificate, a: &IntVector) -> BigInt {
    graded_degree_functional(cone, cert).dot(a)
}

/// `π: ℤⁿ → U`, with rows `(Q-coordinates…, degree)`.
///
/// The kernel on `gp(M)` is spanned by `yᵢ − yᵢ₊₁`; the last row reads the
/// original degree and `π(y₁) = (0, …, 0, 1)`.
pub fn quotient_projection(cone: &Cone, cert: &GorensteinCertificate, degree: &IntVector) -> Result<IntMatrix> {
    let lat = cone.lattice();
    let r = lat.rank();
    let cy: Vec<IntVector> = cert
        .decomposition
        .iter()
        .map(|y| lat.coords(y).ok_or_else(|| Error::NotInLattice(y.to_string())))
        .collect::<Result<_>>()?;
    let kernel: Vec<IntVector> = cy.windows(2).map(|w| w[0].sub(&w[1])).collect();
    let pi0 = if kernel.is_empty() {
        IntMatrix::identity(r)
    } else {
        let k = IntMatrix::from_vectors(&kernel, r);
        if !rows_span_direct_summand(&k) {
            return Err(Error::verification("kernel basis is a direct summand", format!("{kernel:?}")));
        }
        integer_kernel(&k)
    };
    let u_dim = pi0.nrows();
    let deg_int: IntVector = (0..r).map(|j| lat.basis().row_vector(j).dot(degree)).collect();
    let deg_u = solve_integer(&pi0.transpose(), &deg_int)
        .ok()
        .ok_or_else(|| Error::verification("degree descends to U", deg_int.to_string()))?;
    let e = pi0.mul_vec(&cy[0]);
    let mut cols = integer_kernel(&IntMatrix::from_vectors(&[deg_u], u_dim)).row_vectors();
    cols.push(e);
    let t = IntMatrix::from_vectors(&cols, u_dim)
        .transpose()
        .inverse_unimodular()
        .ok_or_else(|| Error::verification("U basis change is unimodular", String::new()))?;
    Ok(t.mul(&pi0).mul(&lat.coordinate_matrix()))
}

/// Outcome of reducing a Gorenstein integrally closed polytope.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub certificate: GorensteinCertificate,
    /// `(dim Q + 1) × n` integer matrix; the last row is the degree.
    pub projection: IntMatrix,
    /// `yᵢ − yᵢ₊₁`.
    pub kernel_basis: Vec<IntVector>,
    pub q: VPolytope,
    /// `π(y₁)` in Q-coordinates.
    pub interior_point: IntVector,
    pub h_p: HVector,
    pub h_q: HVector,
    pub h_boundary_q: HVector,
}

impl ReductionResult {
    /// Image of an ambient vector of `gp(M)` in `U` (degree last).
    pub fn project(&self, x: &IntVector) -> IntVector {
        self.projection.mul_vec(x)
    }

    /// Q-coordinates of a degree-one point.
    pub fn project_to_q(&self, x: &IntVector) -> IntVector {
        let u = self.project(x);
        u.truncated()
    }
}

/// Reduces `P` to the polytope `Q` with a single interior lattice point.
pub fn reduce_polytope(p: &VPolytope) -> Result<ReductionResult> {
    let monoid = AffineMonoid::of_polytope(p)?;
    reduce_with_monoid(p, &monoid)
}

pub fn reduce_with_monoid(p: &VPolytope, monoid: &AffineMonoid) -> Result<ReductionResult> {
    let closure = integral_closure_of(monoid);
    if let Some(w) = closure.witness {
        return Err(Error::NotIntegrallyClosed(w.to_string()));
    }
    let cert = gorenstein_certificate(monoid)?.ok_or(Error::NotGorenstein)?;
    let mut pi = quotient_projection(&monoid.cone, &cert, &monoid.degree_functional)?;
    let dq = pi.nrows() - 1;
    let lifted: Vec<IntVector> = p.lattice_points(1).iter().map(|x| x.extended(BigInt::one())).collect();
    let images: Vec<IntVector> = lifted.iter().map(|x| pi.mul_vec(x)).collect();
    if let Some(bad) = images.iter().find(|u| !u.last().is_some_and(One::is_one)) {
        return Err(Error::verification("degree-one points map to height one", bad.to_string()));
    }
    // shift so every Q-coordinate has minimum 0 over Q
    for j in 0..dq {
        let min = images.iter().map(|u| u[j].clone()).min().expect("nonempty polytope");
        let last = pi.row_vector(dq);
        let row = pi.row_vector(j).sub(&last.scale(&min));
        for (c, v) in row.into_inner().into_iter().enumerate() {
            pi.set(j, c, v);
        }
    }
    let points: Vec<IntVector> = lifted.iter().map(|x| pi.mul_vec(x).truncated()).collect();
    let q = VPolytope::hull(dq, &points)?;
    let interior_point = pi.mul_vec(&cert.decomposition[0]).truncated();

    let q_closure = crate::cone::is_integrally_closed(&q)?;
    if !q_closure.closed {
        return Err(Error::verification("Q integrally closed", format!("{:?}", q_closure.witness)));
    }
    let interior = q.relint_lattice_points(1);
    if interior != vec![interior_point.clone()] {
        return Err(Error::verification("Q has a unique interior point", format!("{interior:?}")));
    }
    let h_p = h_vector(p);
    let h_q = h_vector(&q);
    if h_p.coefficients != h_q.coefficients {
        return Err(Error::verification("h(P) = h(Q)", format!("{h_p} vs {h_q}")));
    }
    let h_boundary_q = if q.dim() == 0 {
        HVector::from_i64s(&[1], 0)
    } else {
        boundary_h_vector(&q)?
    };
    if h_boundary_q.coefficients != h_q.coefficients {
        return Err(Error::verification("h(Q) = h(∂Q)", format!("{h_q} vs {h_boundary_q}")));
    }
    let kernel_basis = cert.decomposition.windows(2).map(|w| w[0].sub(&w[1])).collect();
    Ok(ReductionResult { certificate: cert, projection: pi, kernel_basis, q, interior_point, h_p, h_q, h_boundary_q })
}

/// Coefficient table comparing `H_{K[N]}` with `(1 − t^{k₁⋯k_m})^{m−1} H_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesIdentity {
    pub k_product: BigInt,
    pub m: usize,
    /// Coefficients of `t⁰ … t^D` of `H_R`.
    pub h_r: Vec<BigInt>,
    pub h_n: Vec<BigInt>,
    pub predicted: Vec<BigInt>,
    pub holds: bool,
}

fn graded_counts(rays: &[IntVector], deg: &IntVector, d_max: u64) -> Result<Vec<BigInt>> {
    let k = deg.len();
    let bound = BigRational::from_integer(BigInt::from(d_max));
    let mut verts = vec![RationalVector::zeros(k)];
    for r in rays {
        let dr = deg.dot(r);
        if !dr.is_positive() {
            return Err(Error::verification("grading is positive on rays", r.to_string()));
        }
        verts.push(r.to_rational().scale(&(&bound / BigRational::from_integer(dr))));
    }
    let mut counts = vec![BigInt::zero(); d_max as usize + 1];
    for x in lattice_points_in_hull(&verts)? {
        let d = deg.dot(&x);
        let i = usize::try_from(&d).expect("degree within bound");
        counts[i] += 1;
    }
    Ok(counts)
}

/// Checks the identity coefficientwise up to `t^{d_max}` by enumerating
/// `C ∩ gp(M)` and `π(C) ∩ U` graded by `deg`.
pub fn hilbert_series_identity_check(
    monoid: &AffineMonoid,
    cert: &GorensteinCertificate,
    d_max: u64,
) -> Result<SeriesIdentity> {
    let cone = &monoid.cone;
    let lat = cone.lattice();
    let g = graded_degree_functional(cone, cert);
    let g_int: IntVector = (0..lat.rank()).map(|j| lat.basis().row_vector(j).dot(&g)).collect();
    let rays_int: Vec<IntVector> = cone.extreme_rays().iter().map(|r| lat.coords(r).expect("ray in lattice")).collect();
    let h_r = graded_counts(&rays_int, &g_int, d_max)?;

    let pi = quotient_projection(cone, cert, &monoid.degree_functional)?;
    let pi_int = pi.mul(&lat.basis().transpose());
    let g_u = solve_integer(&pi_int.transpose(), &g_int)
        .ok()
        .ok_or_else(|| Error::verification("graded degree descends to U", g_int.to_string()))?;
    let rays_u: Vec<IntVector> = cone.extreme_rays().iter().map(|r| pi.mul_vec(r)).collect();
    let h_n = graded_counts(&rays_u, &g_u, d_max)?;

    let kp = cert.k_product();
    let kp_usize = usize::try_from(&kp).unwrap_or(usize::MAX);
    // (1 − t^K)^{m−1} truncated to degree d_max
    let len = d_max as usize + 1;
    let mut factor = vec![BigInt::zero(); len];
    factor[0] = BigInt::one();
    for _ in 1..cert.m() {
        let mut next = factor.clone();
        for i in kp_usize..len {
            next[i] -= &factor[i - kp_usize];
        }
        factor = next;
    }
    let predicted: Vec<BigInt> =
        (0..len).map(|j| (0..=j).map(|i| &factor[i] * &h_r[j - i]).sum()).collect();
    let holds = predicted == h_n;
    Ok(SeriesIdentity { k_product: kp, m: cert.m(), h_r, h_n, predicted, holds })
}

/// Groups points by their value under a functional (used by reports).
pub fn histogram_by(points: &[IntVector], f: &IntVector) -> BTreeMap<BigInt, usize> {
    let mut out = BTreeMap::new();
    for p in points {
        *out.entry(f.dot(p)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    fn square() -> VPolytope {
        VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn square_certificate() {
        let m = AffineMonoid::of_polytope(&square()).unwrap();
        let c = gorenstein_certificate(&m).unwrap().unwrap();
        assert_eq!(c.y, v(&[1, 1, 2]));
        assert_eq!(c.decomposition, vec![v(&[0, 0, 1]), v(&[1, 1, 1])]);
        assert_eq!(c.support_partition, vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(c.k, vec![2, 2]);
        assert_eq!(graded_degree(&m.cone, &c, &c.y), BigInt::from(8));
        assert_eq!(graded_degree(&m.cone, &c, &v(&[0, 0, 0])), BigInt::zero());
        assert_eq!(graded_degree(&m.cone, &c, &v(&[1, 0, 1])), BigInt::from(4));
    }

    #[test]
    fn rectangle_is_not_gorenstein() {
        let r = VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 2], &[1, 2]]).unwrap();
        let m = AffineMonoid::of_polytope(&r).unwrap();
        assert_eq!(find_gorenstein_point(&m), None);
        assert_eq!(reduce_polytope(&r).unwrap_err(), Error::NotGorenstein);
    }

    #[test]
    fn segment_has_trivial_decomposition() {
        let s = VPolytope::from_i64(&[&[0], &[2]]).unwrap();
        let m = AffineMonoid::of_polytope(&s).unwrap();
        let c = gorenstein_certificate(&m).unwrap().unwrap();
        assert_eq!(c.y, v(&[1, 1]));
        assert_eq!(c.decomposition, vec![v(&[1, 1])]);
    }

    #[test]
    fn square_reduces_to_a_segment_of_length_two() {
        let r = reduce_polytope(&square()).unwrap();
        assert_eq!(r.q.dim(), 1);
        assert_eq!(r.q.vertices(), &[v(&[0]), v(&[2])]);
        assert_eq!(r.interior_point, v(&[1]));
        assert_eq!(r.h_q.to_i64s(), vec![1, 1]);
        assert_eq!(r.project(&v(&[1, 1, 1])).truncated(), r.project(&v(&[0, 0, 1])).truncated());
    }

    #[test]
    fn unimodular_simplex_reduces_to_a_point() {
        let t = VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let r = reduce_polytope(&t).unwrap();
        assert_eq!(r.certificate.m(), 3);
        assert_eq!(r.q.dim(), 0);
        assert_eq!(r.h_q.to_i64s(), vec![1]);
    }

    #[test]
    fn series_identity_for_the_square() {
        let m = AffineMonoid::of_polytope(&square()).unwrap();
        let c = gorenstein_certificate(&m).unwrap().unwrap();
        let s = hilbert_series_identity_check(&m, &c, 20).unwrap();
        assert!(s.holds, "{s:?}");
        assert_eq!(s.k_product, BigInt::from(4));
    }
}
