//! A simplicial polytope `P′` whose boundary complex is that of a regular
//! triangulation restricted to the boundary of `Q`.
//!
//! The triangulation is lifted to the graph of a convex piecewise affine
//! function, coned from a point far enough below, and cut by a hyperplane.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{rational_polytope_facets, satisfies};
use crate::linalg::{solve_rational, IntMatrix, IntVector, RationalVector};
use crate::polytope::VPolytope;
use crate::simplicial::SimplicialComplex;
use crate::triangulation::{regular_subdivision, restrict_to_boundary, Triangulation, WeightVector};

/// The graph of `f` over a regular triangulation, in intrinsic coordinates
/// of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedGraph {
    pub triangulation: Triangulation,
    /// Intrinsic coordinates of the triangulation points.
    pub coords: Vec<IntVector>,
    /// `f(v) = w_v − min w + 1`.
    pub heights: Vec<BigRational>,
    /// Per cell, `(a, b)` with `f(x) = a·x + b` on the cell.
    pub planes: Vec<(RationalVector, BigRational)>,
}

/// Affine function through `(cᵢ, fᵢ)` for affinely independent `cᵢ`.
fn affine_interpolant(coords: &[IntVector], values: &[BigRational]) -> Option<(RationalVector, BigRational)> {
    let d = coords[0].len();
    let rows: Vec<IntVector> = coords.iter().map(|c| c.extended(BigInt::one())).collect();
    let l = values.iter().fold(BigInt::one(), |l, v| num_integer::Integer::lcm(&l, v.denom()));
    let lr = BigRational::from_integer(l);
    let rhs: IntVector = values.iter().map(|v| (v * &lr).to_integer()).collect();
    let sol = solve_rational(&IntMatrix::from_vectors(&rows, d + 1), &rhs).ok()?;
    let mut s: Vec<BigRational> = sol.iter().map(|x| x / &lr).collect();
    let b = s.pop()?;
    Some((RationalVector::new(s), b))
}

/// Lifts the regular triangulation induced by `w` on the lattice points of
/// `q` to the graph of its convex height function.
pub fn lift_graph(q: &VPolytope, w: &WeightVector) -> Result<LiftedGraph> {
    let triangulation = regular_subdivision(w)?.into_triangulation()?;
    let aff = q.affine_lattice();
    let coords: Vec<IntVector> = triangulation
        .points
        .iter()
        .map(|p| aff.coords(p).ok_or_else(|| Error::NotInLattice(p.to_string())))
        .collect::<Result<_>>()?;
    let min = w.weights.iter().min().ok_or(Error::Empty)?;
    let heights: Vec<BigRational> = w.weights.iter().map(|x| x - min + BigRational::one()).collect();
    let mut planes = Vec::new();
    if q.dim() > 0 {
        for c in &triangulation.cells {
            let cs: Vec<IntVector> = c.iter().map(|&i| coords[i].clone()).collect();
            let vs: Vec<BigRational> = c.iter().map(|&i| heights[i].clone()).collect();
            planes.push(
                affine_interpolant(&cs, &vs)
                    .ok_or_else(|| Error::NotTriangulation(triangulation.describe_cell(c)))?,
            );
        }
    }
    Ok(LiftedGraph { triangulation, coords, heights, planes })
}

/// A point `(x, z)` below every cell hyperplane of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Apex {
    pub x: RationalVector,
    pub z: BigRational,
}

/// `x` is the barycenter of the vertices of `q`; `z` lies one unit below
/// every plane value at `x` and every height.
pub fn choose_apex(q: &VPolytope, graph: &LiftedGraph) -> Apex {
    let x = q.affine_lattice().coords_rational(&q.barycenter()).expect("barycenter in the affine hull");
    let plane_values = graph.planes.iter().map(|(a, b)| a.iter().zip(x.iter()).map(|(ai, xi)| ai * xi).sum::<BigRational>() + b);
    let low = plane_values.chain(graph.heights.iter().cloned()).min().unwrap_or_else(BigRational::zero);
    Apex { x, z: low - BigRational::one() }
}

/// The polytope `P′` and its boundary complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPolytope {
    pub apex: Apex,
    /// Indices of the boundary vertices of the triangulation, one per vertex
    /// of `P′`.
    pub source_points: Vec<usize>,
    /// Vertices of `P′`, parallel to `source_points`.
    pub vertices: Vec<RationalVector>,
    /// Facets of `P′` as indices into `vertices`.
    pub facets: Vec<Vec<usize>>,
    pub boundary_complex: SimplicialComplex,
    /// Whether the apex had to be lowered once.
    pub retried: bool,
}

impl LiftedPolytope {
    /// The boundary complex is a pseudomanifold whose Euler characteristic
    /// matches a sphere of its dimension.
    pub fn has_sphere_conditions(&self) -> bool {
        let d = self.boundary_complex.dim() + 1;
        let sphere = if d % 2 == 0 { 0 } else { 2 };
        self.boundary_complex.is_pseudomanifold() && self.boundary_complex.euler_characteristic() == sphere
    }
}

fn direction(graph: &LiftedGraph, apex: &Apex, i: usize) -> Result<RationalVector> {
    let h = &graph.heights[i] - &apex.z;
    if !h.is_positive() {
        return Err(Error::ApexDegenerate(format!("apex not below point {}", graph.triangulation.points[i])));
    }
    let c = graph.coords[i].to_rational();
    Ok(c.sub(&apex.x).scale(&h.recip()))
}

/// Cones the boundary of the graph from `apex` and cuts at height one;
/// checks that the facets of `P′` are exactly the boundary cells.
pub fn cross_section_polytope(q: &VPolytope, graph: &LiftedGraph, apex: &Apex) -> Result<LiftedPolytope> {
    let t = &graph.triangulation;
    let boundary = restrict_to_boundary(t, q);
    let source_points = boundary.used_points();
    let d = q.dim();
    let local = |i: usize| source_points.binary_search(&i).expect("boundary vertex");
    let expected: Vec<Vec<usize>> = boundary.cells.iter().map(|c| c.iter().map(|&i| local(i)).collect()).collect();
    let vertices: Vec<RationalVector> =
        source_points.iter().map(|&i| direction(graph, apex, i)).collect::<Result<_>>()?;
    let mut facets: Vec<Vec<usize>> = if d == 0 {
        Vec::new()
    } else {
        rational_polytope_facets(&vertices, d)?.into_iter().map(|f| f.incidence).collect()
    };
    facets.sort();
    let mut want = expected.clone();
    want.sort();
    if facets != want {
        return Err(Error::ApexDegenerate(format!("{} facets of P′ against {} boundary cells", facets.len(), want.len())));
    }
    if d > 0 {
        let hs = rational_polytope_facets(&vertices, d)?;
        for i in t.used_points().into_iter().filter(|i| source_points.binary_search(i).is_err()) {
            if !satisfies(&hs, &direction(graph, apex, i)?, true) {
                return Err(Error::ApexDegenerate(format!("interior point {} is not inside P′", t.points[i])));
            }
        }
    }
    let complex_facets = if d == 0 { vec![Vec::new()] } else { facets.clone() };
    let boundary_complex = SimplicialComplex::new(vertices.len(), complex_facets)?;
    Ok(LiftedPolytope { apex: apex.clone(), source_points, vertices, facets, boundary_complex, retried: false })
}

/// Full construction with one automatic retry at `z′ = min(2z, z − 1)`.
pub fn lift(q: &VPolytope, w: &WeightVector) -> Result<LiftedPolytope> {
    let graph = lift_graph(q, w)?;
    let apex = choose_apex(q, &graph);
    match cross_section_polytope(q, &graph, &apex) {
        Err(Error::ApexDegenerate(_)) => {
            let two = BigRational::from_integer(BigInt::from(2));
            let lower = (&apex.z * two).min(&apex.z - BigRational::one());
            let mut out = cross_section_polytope(q, &graph, &Apex { x: apex.x, z: lower })?;
            out.retried = true;
            Ok(out)
        }
        other => other,
    }
}
