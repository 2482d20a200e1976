//! Lattice polytopes: vertex and halfspace descriptions, faces and
//! lattice points of dilations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{polytope_facets, rational_polytope_facets, sort_facets, PolytopeFacet};
use crate::linalg::{ceil, floor, rank_of, AffineLattice, IntVector, RationalVector};

/// `normal·x + offset ≥ 0` (inequality) or `= 0` (equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: IntVector,
    pub offset: BigInt,
}

impl HalfSpace {
    pub fn eval(&self, x: &IntVector) -> BigInt {
        self.normal.dot(x) + &self.offset
    }

    pub fn eval_rational(&self, x: &RationalVector) -> BigRational {
        x.dot_int(&self.normal) + BigRational::from_integer(self.offset.clone())
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x + {}", self.normal, self.offset)
    }
}

/// Irredundant halfspace description of a polytope inside its affine hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub inequalities: Vec<HalfSpace>,
    pub equations: Vec<HalfSpace>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    /// −1 for the empty face.
    pub dim: isize,
    pub vertices: Vec<usize>,
}

/// All faces of a polytope by vertex index sets, with the covering relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    /// Sorted by dimension, then vertex sets.
    pub faces: Vec<Face>,
    /// Pairs `(i, j)` where face `i` is a facet of face `j`.
    pub incidence: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn count_of_dim(&self, dim: isize) -> usize {
        self.faces.iter().filter(|f| f.dim == dim).count()
    }

    pub fn contains(&self, vertices: &[usize]) -> bool {
        self.faces.iter().any(|f| f.vertices == vertices)
    }
}

/// Everything derived from the vertex list, computed once per polytope.
#[derive(Debug)]
struct Geometry {
    affine: AffineLattice,
    /// Vertex coordinates in the intrinsic lattice of the affine hull.
    coords: Vec<IntVector>,
    /// Facets in intrinsic coordinates, in the same order as `hrep`.
    facets: Vec<PolytopeFacet>,
    hrep: HRep,
    /// `prefix[k]` holds the facets of the projection onto the first
    /// `k + 1` intrinsic coordinates; the last entry equals `facets`.
    prefix: Vec<Vec<PolytopeFacet>>,
}

/// A lattice polytope given by its vertices.
#[derive(Clone)]
pub struct VPolytope {
    ambient_dim: usize,
    vertices: Vec<IntVector>,
    name: Option<String>,
    geometry: OnceLock<Arc<Geometry>>,
}

impl fmt::Debug for VPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VPolytope")
            .field("ambient_dim", &self.ambient_dim)
            .field("vertices", &self.vertices)
            .field("name", &self.name)
            .finish()
    }
}

impl PartialEq for VPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for VPolytope {}

fn check_points(ambient_dim: usize, points: &[IntVector]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    for p in points {
        if p.len() != ambient_dim {
            return Err(Error::DimensionMismatch { expected: ambient_dim, got: p.len() });
        }
    }
    Ok(())
}

fn build_geometry(points: &[IntVector]) -> Result<Geometry> {
    let affine = AffineLattice::through(points)?;
    let d = affine.rank();
    let coords: Vec<IntVector> = points
        .iter()
        .map(|p| affine.coords(p).expect("point lies in its own affine lattice"))
        .collect();
    let mut facets = polytope_facets(&coords, d)?;
    let origin = &affine.origin;
    let ambient = |f: &PolytopeFacet| {
        let normal = affine.lattice.functional_to_ambient(&f.normal);
        let offset = &f.offset - normal.dot(origin);
        HalfSpace { normal, offset }
    };
    // sort through the ambient forms so both lists share one order
    let mut paired: Vec<(PolytopeFacet, PolytopeFacet)> = facets
        .drain(..)
        .map(|f| {
            let h = ambient(&f);
            (PolytopeFacet { normal: h.normal, offset: h.offset, incidence: f.incidence.clone() }, f)
        })
        .collect();
    let mut amb: Vec<PolytopeFacet> = paired.iter().map(|p| p.0.clone()).collect();
    sort_facets(&mut amb);
    let mut ordered = Vec::with_capacity(paired.len());
    for a in &amb {
        let pos = paired.iter().position(|p| p.0 == *a).expect("sorted facet present");
        ordered.push(paired.swap_remove(pos).1);
    }
    let facets = ordered;
    let inequalities = amb.into_iter().map(|f| HalfSpace { normal: f.normal, offset: f.offset }).collect();
    let equations = affine
        .lattice
        .annihilator()
        .row_vectors()
        .into_iter()
        .map(|u| {
            let offset = -u.dot(origin);
            HalfSpace { normal: u, offset }
        })
        .collect();

    let mut prefix = Vec::with_capacity(d);
    for k in 1..d {
        let proj: BTreeSet<IntVector> = coords.iter().map(|c| c[..k].iter().cloned().collect()).collect();
        let proj: Vec<IntVector> = proj.into_iter().collect();
        prefix.push(polytope_facets(&proj, k)?);
    }
    if d > 0 {
        prefix.push(facets.clone());
    }
    Ok(Geometry { affine, coords, facets, hrep: HRep { inequalities, equations }, prefix })
}

fn incident_rank(g: &Geometry, i: usize) -> usize {
    let normals: Vec<IntVector> =
        g.facets.iter().filter(|f| f.incidence.contains(&i)).map(|f| f.normal.clone()).collect();
    rank_of(&normals)
}

impl VPolytope {
    /// Builds a polytope from its vertex list; every point must be a vertex.
    pub fn new(ambient_dim: usize, vertices: Vec<IntVector>) -> Result<Self> {
        check_points(ambient_dim, &vertices)?;
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v.to_string()));
            }
        }
        let geometry = build_geometry(&vertices)?;
        let d = geometry.affine.rank();
        for (i, v) in vertices.iter().enumerate() {
            if incident_rank(&geometry, i) < d {
                return Err(Error::NotAVertex(v.to_string()));
            }
        }
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(geometry));
        Ok(Self { ambient_dim, vertices, name: None, geometry: cell })
    }

    /// Convex hull of arbitrary lattice points; vertices come out sorted.
    pub fn hull(ambient_dim: usize, points: &[IntVector]) -> Result<Self> {
        check_points(ambient_dim, points)?;
        let distinct: Vec<IntVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let g = build_geometry(&distinct)?;
        let d = g.affine.rank();
        let vertices: Vec<IntVector> =
            (0..distinct.len()).filter(|&i| incident_rank(&g, i) >= d).map(|i| distinct[i].clone()).collect();
        Self::new(ambient_dim, vertices)
    }

    pub fn from_i64(vertices: &[&[i64]]) -> Result<Self> {
        let n = vertices.first().map_or(0, |v| v.len());
        Self::new(n, vertices.iter().map(|v| IntVector::from_i64s(v)).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    fn geometry(&self) -> &Geometry {
        self.geometry.get_or_init(|| Arc::new(build_geometry(&self.vertices).expect("validated vertices")))
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.geometry().affine.rank()
    }

    pub fn affine_lattice(&self) -> &AffineLattice {
        &self.geometry().affine
    }

    /// Vertices in intrinsic lattice coordinates of the affine hull.
    pub fn intrinsic_vertices(&self) -> &[IntVector] {
        &self.geometry().coords
    }

    /// Facets in intrinsic coordinates, aligned with `hrep().inequalities`.
    pub fn intrinsic_facets(&self) -> &[PolytopeFacet] {
        &self.geometry().facets
    }

    /// Irredundant H-representation in ambient coordinates.
    pub fn hrep(&self) -> &HRep {
        &self.geometry().hrep
    }

    /// Vertex indices on each facet, aligned with `hrep().inequalities`.
    pub fn facet_incidence(&self) -> Vec<Vec<usize>> {
        self.geometry().facets.iter().map(|f| f.incidence.clone()).collect()
    }

    pub fn barycenter(&self) -> RationalVector {
        let n = BigRational::from_integer(BigInt::from(self.vertices.len()));
        let mut acc = RationalVector::zeros(self.ambient_dim);
        for v in &self.vertices {
            acc = acc.add(&v.to_rational());
        }
        acc.scale(&(BigRational::one() / n))
    }

    /// Whether the rational point lies in `m·P` (in its relative interior if
    /// `strict`).
    pub fn contains_dilated(&self, x: &RationalVector, m: &BigInt, strict: bool) -> bool {
        let mr = BigRational::from_integer(m.clone());
        let h = self.hrep();
        let on_hull = h.equations.iter().all(|e| {
            (x.dot_int(&e.normal) + &mr * BigRational::from_integer(e.offset.clone())).is_zero()
        });
        on_hull
            && h.inequalities.iter().all(|f| {
                let v = x.dot_int(&f.normal) + &mr * BigRational::from_integer(f.offset.clone());
                if strict {
                    v.is_positive()
                } else {
                    !v.is_negative()
                }
            })
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.contains_dilated(x, &BigInt::one(), false)
    }

    /// Lattice points of `m·P` in intrinsic coordinates, in scan order.
    pub fn intrinsic_lattice_points(&self, m: u64, strict: bool) -> Vec<IntVector> {
        if m == 0 {
            return Vec::new();
        }
        let g = self.geometry();
        let d = g.affine.rank();
        if d == 0 {
            return vec![IntVector::new(Vec::new())];
        }
        let m = BigInt::from(m);
        let scaled: Vec<Vec<(IntVector, BigInt)>> = g
            .prefix
            .iter()
            .map(|fs| fs.iter().map(|f| (f.normal.clone(), &f.offset * &m)).collect())
            .collect();
        let mut out = Vec::new();
        let mut cur: Vec<BigInt> = Vec::with_capacity(d);
        scan(&scaled, &mut cur, strict, &mut out);
        out
    }

    /// Lattice points of `m·P` sorted lexicographically; empty for `m = 0`.
    pub fn lattice_points(&self, m: u64) -> Vec<IntVector> {
        self.to_ambient(self.intrinsic_lattice_points(m, false), m)
    }

    /// Lattice points of the relative interior of `m·P`, sorted.
    pub fn relint_lattice_points(&self, m: u64) -> Vec<IntVector> {
        self.to_ambient(self.intrinsic_lattice_points(m, true), m)
    }

    pub fn count_lattice_points(&self, m: u64) -> usize {
        self.intrinsic_lattice_points(m, false).len()
    }

    pub fn count_relint_lattice_points(&self, m: u64) -> usize {
        self.intrinsic_lattice_points(m, true).len()
    }

    fn to_ambient(&self, pts: Vec<IntVector>, m: u64) -> Vec<IntVector> {
        let a = &self.geometry().affine;
        let shift = a.origin.scale(&BigInt::from(m));
        let mut out: Vec<IntVector> = pts.iter().map(|c| a.lattice.embed(c).add(&shift)).collect();
        out.sort();
        out
    }

    /// The full face lattice, including the empty face and `P` itself.
    pub fn face_lattice(&self) -> FaceLattice {
        let g = self.geometry();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(all.clone());
        found.insert(Vec::new());
        let mut queue = vec![all];
        while let Some(face) = queue.pop() {
            for f in &g.facets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| f.incidence.contains(i)).collect();
                if found.insert(meet.clone()) {
                    queue.push(meet);
                }
            }
        }
        let mut faces: Vec<Face> = found
            .into_iter()
            .map(|vs| {
                let dim = match vs.first() {
                    None => -1,
                    Some(&o) => {
                        let diffs: Vec<IntVector> = vs.iter().map(|&i| g.coords[i].sub(&g.coords[o])).collect();
                        rank_of(&diffs) as isize
                    }
                };
                Face { dim, vertices: vs }
            })
            .collect();
        faces.sort();
        let mut incidence = Vec::new();
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate() {
                if b.dim == a.dim + 1 && a.vertices.iter().all(|v| b.vertices.contains(v)) {
                    incidence.push((i, j));
                }
            }
        }
        FaceLattice { faces, incidence }
    }
}

/// Lattice points of the convex hull of rational points spanning `ℝ^k`,
/// sorted lexicographically.
pub fn lattice_points_in_hull(points: &[RationalVector]) -> Result<Vec<IntVector>> {
    let k = points.first().ok_or(Error::Empty)?.len();
    if k == 0 {
        return Ok(vec![IntVector::new(Vec::new())]);
    }
    let mut levels = Vec::with_capacity(k);
    for j in 1..=k {
        let proj: BTreeSet<RationalVector> = points.iter().map(|p| p[..j].iter().cloned().collect()).collect();
        let proj: Vec<RationalVector> = proj.into_iter().collect();
        let fs = rational_polytope_facets(&proj, j)?;
        levels.push(fs.into_iter().map(|f| (f.normal, f.offset)).collect::<Vec<_>>());
    }
    let mut out = Vec::new();
    scan(&levels, &mut Vec::with_capacity(k), false, &mut out);
    Ok(out)
}

fn scan(levels: &[Vec<(IntVector, BigInt)>], cur: &mut Vec<BigInt>, strict: bool, out: &mut Vec<IntVector>) {
    let k = cur.len();
    let d = levels.len();
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for (a, b) in &levels[k] {
        let ak = &a[k];
        if ak.is_zero() {
            continue;
        }
        // a_k·c_k ≥ −(b + Σ_{j<k} a_j c_j)
        let rest: BigInt = b + a.iter().zip(cur.iter()).map(|(x, y)| x * y).sum::<BigInt>();
        let bound = BigRational::new(-rest, ak.clone());
        if ak.is_positive() {
            let c = ceil(&bound);
            if lo.as_ref().is_none_or(|l| c > *l) {
                lo = Some(c);
            }
        } else {
            let c = floor(&bound);
            if hi.as_ref().is_none_or(|h| c < *h) {
                hi = Some(c);
            }
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        panic!("unbounded fiber in a polytope scan");
    };
    let mut c = lo;
    while c <= hi {
        cur.push(c.clone());
        if k + 1 == d {
            let keep = !strict
                || levels[k].iter().all(|(a, b)| (a.iter().zip(cur.iter()).map(|(x, y)| x * y).sum::<BigInt>() + b).is_positive());
            if keep {
                out.push(IntVector::new(cur.clone()));
            }
        } else {
            scan(levels, cur, strict, out);
        }
        cur.pop();
        c += 1;
    }
}

impl fmt::Display for VPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> VPolytope {
        VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn hs(n: &[i64], o: i64) -> HalfSpace {
        HalfSpace { normal: IntVector::from_i64s(n), offset: BigInt::from(o) }
    }

    #[test]
    fn square_dual_description() {
        let h = square().hrep().clone();
        assert_eq!(h.inequalities, vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, 0], 1), hs(&[0, -1], 1)]);
        assert!(h.equations.is_empty());
    }

    #[test]
    fn point_and_segment_descriptions() {
        let p = VPolytope::from_i64(&[&[3, 5]]).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(p.hrep().inequalities.is_empty());
        assert_eq!(p.hrep().equations, vec![hs(&[1, 0], -3), hs(&[0, 1], -5)]);
        let s = VPolytope::from_i64(&[&[0, 0], &[2, 0]]).unwrap();
        assert_eq!(s.hrep().equations, vec![hs(&[0, 1], 0)]);
        assert_eq!(s.hrep().inequalities, vec![hs(&[1, 0], 0), hs(&[-1, 0], 2)]);
    }

    #[test]
    fn rejects_bad_vertex_lists() {
        assert_eq!(VPolytope::from_i64(&[&[0, 0], &[0, 0]]), Err(Error::DuplicateVertex("(0,0)".into())));
        assert!(matches!(VPolytope::from_i64(&[&[0, 0], &[1, 1], &[2, 2]]), Err(Error::NotAVertex(_))));
        assert!(VPolytope::new(2, vec![]).is_err());
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts: Vec<IntVector> = [[0, 0], [2, 0], [0, 2], [1, 1], [1, 0]].iter().map(|p| IntVector::from_i64s(p)).collect();
        let p = VPolytope::hull(2, &pts).unwrap();
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn square_lattice_points() {
        let s = square();
        assert_eq!(s.lattice_points(2).len(), 9);
        assert!(s.lattice_points(0).is_empty());
        assert_eq!(s.relint_lattice_points(2), vec![IntVector::from_i64s(&[1, 1])]);
        assert!(s.relint_lattice_points(1).is_empty());
        let pts = s.lattice_points(3);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn face_lattices() {
        let t = VPolytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(t.face_lattice().faces.len(), 8);
        let f = square().face_lattice();
        assert_eq!((f.count_of_dim(0), f.count_of_dim(1), f.count_of_dim(2), f.count_of_dim(-1)), (4, 4, 1, 1));
        let mut v = Vec::new();
        for i in 0..8i64 {
            v.push(IntVector::from_i64s(&[i & 1, (i >> 1) & 1, (i >> 2) & 1]));
        }
        let c = VPolytope::new(3, v).unwrap().face_lattice();
        assert_eq!((c.count_of_dim(2), c.count_of_dim(1), c.count_of_dim(0)), (6, 12, 8));
    }

    #[test]
    fn rational_hull_points() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let pts = vec![
            RationalVector::new(vec![q(0, 1), q(0, 1)]),
            RationalVector::new(vec![q(5, 2), q(0, 1)]),
            RationalVector::new(vec![q(0, 1), q(5, 2)]),
        ];
        // x, y ≥ 0 and x + y ≤ 2.5
        assert_eq!(lattice_points_in_hull(&pts).unwrap().len(), 6);
    }

    #[test]
    fn point_counts_in_a_lower_dimensional_polytope() {
        let s = VPolytope::from_i64(&[&[0, 0, 1], &[2, 2, 1]]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.lattice_points(1).len(), 3);
        assert_eq!(s.relint_lattice_points(2), vec![
            IntVector::from_i64s(&[1, 1, 2]),
            IntVector::from_i64s(&[2, 2, 2]),
            IntVector::from_i64s(&[3, 3, 2]),
        ]);
        let p = VPolytope::from_i64(&[&[3, 5]]).unwrap();
        assert_eq!(p.lattice_points(2), vec![IntVector::from_i64s(&[6, 10])]);
    }
}
