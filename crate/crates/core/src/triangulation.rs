//! Triangulations of polytopes and cones.
//!
//! Regular subdivisions from weights, unimodularity, the subfan `Γ` with its
//! join triangulation `Δ`, point location, the projected triangulation `Δ′`,
//! the induced polytope triangulations and the weight modification that
//! realizes `Δ₁` as a regular triangulation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::gorenstein::{GorensteinCertificate, ReductionResult};
use crate::hull::{pulling_triangulation, rational_polytope_facets};
use crate::linalg::{
    elementary_divisors, integer_kernel, rank_of, rank_of_rational, rows_span_direct_summand, solve_rational,
    AffineLattice, IntMatrix, IntVector, LatticeBasis, RationalVector,
};
use crate::polytope::VPolytope;

/// Number of sample points used by the cover checks.
pub const SAMPLE_COUNT: usize = 1000;
pub const SAMPLE_SEED: u64 = 0x5eed_2003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangulationKind {
    /// Cells are simplices spanned by points.
    Polytope,
    /// Cells are simplicial cones spanned by vectors.
    Fan,
}

/// Cells stored as sorted point-index sets, themselves sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub points: Vec<IntVector>,
    pub cells: Vec<Vec<usize>>,
    pub kind: TriangulationKind,
}

fn canonical_cells(cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = cells
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    set.into_iter().collect()
}

fn describe(points: &[IntVector]) -> String {
    let mut s = String::from("{");
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{p}");
    }
    s.push('}');
    s
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Keeps the inclusion-maximal sets; an empty family becomes `[[]]`.
fn maximal_sets(sets: BTreeSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let all: Vec<Vec<usize>> = sets.into_iter().collect();
    let mut out: Vec<Vec<usize>> = all
        .iter()
        .filter(|s| !all.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
        .cloned()
        .collect();
    if out.is_empty() {
        out.push(Vec::new());
    }
    out
}

fn combinations(items: &[usize], k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            if go(items, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// Coefficients of `x` on linearly independent `gens`, if `x` is in their span.
pub fn cone_coefficients(gens: &[IntVector], x: &RationalVector) -> Option<Vec<BigRational>> {
    if gens.is_empty() {
        return x.iter().all(Zero::is_zero).then(Vec::new);
    }
    let l = x.iter().fold(BigInt::one(), |l, v| num_integer::Integer::lcm(&l, v.denom()));
    let lr = BigRational::from_integer(l.clone());
    let b: IntVector = x.iter().map(|v| (v * &lr).to_integer()).collect();
    let a = IntMatrix::from_vectors(gens, x.len()).transpose();
    let sol = solve_rational(&a, &b).ok()?;
    Some(sol.iter().map(|c| c / &lr).collect())
}

/// `[F : span] ` for independent `gens`, the normalized volume of their cone.
pub fn multiplicity(gens: &[IntVector]) -> BigInt {
    if gens.is_empty() {
        return BigInt::one();
    }
    let n = gens[0].len();
    elementary_divisors(&IntMatrix::from_vectors(gens, n)).iter().product()
}

fn is_unimodular_generators(gens: &[IntVector]) -> bool {
    if gens.is_empty() {
        return true;
    }
    rank_of(gens) == gens.len() && rows_span_direct_summand(&IntMatrix::from_vectors(gens, gens[0].len()))
}

/// Whether the simplex on `points` is unimodular with respect to `lattice`:
/// the differences `sᵢ − s₀` must extend to a basis of it.
pub fn is_unimodular(points: &[IntVector], lattice: &LatticeBasis) -> bool {
    let Some((s0, rest)) = points.split_first() else { return true };
    let diffs: Option<Vec<IntVector>> = rest.iter().map(|s| lattice.coords(&s.sub(s0))).collect();
    diffs.is_some_and(|d| is_unimodular_generators(&d))
}

/// Whether the cone on `gens` is unimodular with respect to `lattice`.
pub fn is_unimodular_cone(gens: &[IntVector], lattice: &LatticeBasis) -> bool {
    let coords: Option<Vec<IntVector>> = gens.iter().map(|g| lattice.coords(g)).collect();
    coords.is_some_and(|c| is_unimodular_generators(&c))
}

impl Triangulation {
    pub fn new(points: Vec<IntVector>, cells: Vec<Vec<usize>>, kind: TriangulationKind) -> Self {
        Self { points, cells: canonical_cells(cells), kind }
    }

    pub fn cell_points(&self, cell: &[usize]) -> Vec<IntVector> {
        cell.iter().map(|&i| self.points[i].clone()).collect()
    }

    /// Vectors spanning the cone over a cell: `(p, 1)` for polytopes.
    pub fn generators(&self, cell: &[usize]) -> Vec<IntVector> {
        match self.kind {
            TriangulationKind::Fan => self.cell_points(cell),
            TriangulationKind::Polytope => cell.iter().map(|&i| self.points[i].extended(BigInt::one())).collect(),
        }
    }

    /// Indices of points used by some cell.
    pub fn used_points(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.cells.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    pub fn point_index(&self, p: &IntVector) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// Cells as sorted point lists, independent of point indexing.
    pub fn cell_sets(&self) -> BTreeSet<Vec<IntVector>> {
        self.cells
            .iter()
            .map(|c| {
                let mut v = self.cell_points(c);
                v.sort();
                v
            })
            .collect()
    }

    /// First cell (as points) in which the two cell families differ.
    pub fn first_difference(&self, other: &Triangulation) -> Option<Vec<IntVector>> {
        let (a, b) = (self.cell_sets(), other.cell_sets());
        a.symmetric_difference(&b).next().cloned()
    }

    pub fn same_cells(&self, other: &Triangulation) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn describe_cell(&self, cell: &[usize]) -> String {
        describe(&self.cell_points(cell))
    }

    /// The fan of cones over the cells of a polytope triangulation.
    pub fn cone_over(&self) -> Triangulation {
        match self.kind {
            TriangulationKind::Fan => self.clone(),
            TriangulationKind::Polytope => Triangulation {
                points: self.points.iter().map(|p| p.extended(BigInt::one())).collect(),
                cells: self.cells.clone(),
                kind: TriangulationKind::Fan,
            },
        }
    }

    /// Every cell is a simplex (simplicial cone).
    pub fn check_simplicial(&self) -> Result<()> {
        for c in &self.cells {
            let g = self.generators(c);
            if rank_of(&g) != g.len() {
                return Err(Error::NotTriangulation(self.describe_cell(c)));
            }
        }
        Ok(())
    }

    /// Every cell is unimodular with respect to the saturated lattice of the
    /// ambient space.
    pub fn check_unimodular(&self) -> Result<()> {
        for c in &self.cells {
            if !is_unimodular_generators(&self.generators(c)) {
                return Err(Error::NotUnimodular(self.describe_cell(c)));
            }
        }
        Ok(())
    }

    /// A circuit `Z` with `Z⁺` in one cell and `Z⁻` in the other witnesses an
    /// improper intersection; returns its support.
    fn improper_circuit(&self, a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
        let only_a: Vec<usize> = a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect();
        let only_b: Vec<usize> = b.iter().copied().filter(|x| a.binary_search(x).is_err()).collect();
        if only_a.is_empty() || only_b.is_empty() {
            return None;
        }
        let union: Vec<usize> = a.iter().chain(&only_b).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let rk = rank_of(&self.generators(&union));
        let mut found = None;
        for size in 2..=(rk + 1).min(union.len()) {
            let hit = combinations(&union, size, &mut |s| {
                if !s.iter().any(|x| only_a.contains(x)) || !s.iter().any(|x| only_b.contains(x)) {
                    return false;
                }
                let g = self.generators(s);
                let dim = g[0].len();
                let k = integer_kernel(&IntMatrix::from_vectors(&g, dim).transpose());
                if k.nrows() != 1 {
                    return false;
                }
                let lambda = k.row_vector(0);
                if lambda.iter().any(Zero::is_zero) {
                    return false;
                }
                let pos: Vec<usize> = s.iter().zip(lambda.iter()).filter(|(_, l)| l.is_positive()).map(|(&i, _)| i).collect();
                let neg: Vec<usize> = s.iter().zip(lambda.iter()).filter(|(_, l)| l.is_negative()).map(|(&i, _)| i).collect();
                let bad = (is_subset(&pos, a) && is_subset(&neg, b)) || (is_subset(&neg, a) && is_subset(&pos, b));
                if bad {
                    found = Some(s.to_vec());
                }
                bad
            });
            if hit {
                break;
            }
        }
        found
    }

    /// Any two cells meet in a common face.
    pub fn check_pairwise_faces(&self) -> Result<()> {
        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                if let Some(z) = self.improper_circuit(a, b) {
                    return Err(Error::NotTriangulation(format!(
                        "{} meets {} improperly (circuit {})",
                        self.describe_cell(a),
                        self.describe_cell(b),
                        self.describe_cell(&z)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cells lie in `p`, are full-dimensional, and their normalized volumes
    /// add up to that of `p`.
    pub fn check_cover_by_volume(&self, p: &VPolytope) -> Result<()> {
        let mut total = BigInt::zero();
        for c in &self.cells {
            let pts = self.cell_points(c);
            if pts.len() != p.dim() + 1 || pts.iter().any(|x| !p.contains(&x.to_rational())) {
                return Err(Error::NotTriangulation(self.describe_cell(c)));
            }
            total += multiplicity(&self.generators(c));
        }
        let vol = polytope_normalized_volume(p)?;
        if total != vol {
            return Err(Error::NotTriangulation(format!("cell volumes add up to {total}, polytope has {vol}")));
        }
        Ok(())
    }

    /// Finds a cell whose cone contains `x` with nonnegative coefficients.
    pub fn find_cell(&self, x: &RationalVector) -> Option<(usize, Vec<BigRational>)> {
        self.cells.iter().enumerate().find_map(|(i, c)| {
            let coeffs = cone_coefficients(&self.generators(c), x)?;
            coeffs.iter().all(|v| !v.is_negative()).then_some((i, coeffs))
        })
    }

    /// Every sample lies in the cone over some cell.
    pub fn check_cover_by_sampling(&self, samples: &[RationalVector]) -> Result<()> {
        for x in samples {
            if self.find_cell(x).is_none() {
                return Err(Error::NotTriangulation(format!("no cell contains sample {}", crate::format::format_rational_vector(x))));
            }
        }
        Ok(())
    }
}

/// Normalized volume of `p` in its affine lattice, from a pulling
/// triangulation of its vertices.
pub fn polytope_normalized_volume(p: &VPolytope) -> Result<BigInt> {
    let lifted: Vec<IntVector> = p.vertices().iter().map(|v| v.extended(BigInt::one())).collect();
    let cells = pulling_triangulation(&lifted)?;
    Ok(cells
        .iter()
        .map(|c| multiplicity(&c.iter().map(|&i| lifted[i].clone()).collect::<Vec<_>>()))
        .sum())
}

/// Deterministic pseudo-random rational points of `cone`: nonnegative
/// combinations of the extreme rays with a common denominator.
pub fn sample_cone_points(cone: &Cone, count: usize, seed: u64) -> Vec<RationalVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rays = cone.extreme_rays();
    let n = cone.ambient_dim();
    (0..count)
        .map(|_| {
            let den = BigRational::from_integer(BigInt::from(rng.gen_range(1..=7)));
            let mut x = RationalVector::zeros(n);
            for r in rays {
                let c: i64 = rng.gen_range(0..=6);
                x = x.add(&r.to_rational().scale(&BigRational::from_integer(c.into())));
            }
            x.scale(&den.recip())
        })
        .collect()
}

/// Weights `w_x` on the lattice points of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub points: Vec<IntVector>,
    pub weights: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(points: Vec<IntVector>, weights: Vec<BigRational>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: weights.len() });
        }
        Ok(Self { points, weights })
    }

    /// Total weight vector on `points` from parsed entries; unlisted points
    /// get weight 0 and are returned alongside.
    pub fn from_entries(points: Vec<IntVector>, entries: &[(IntVector, BigRational)]) -> Result<(Self, Vec<IntVector>)> {
        let mut map: BTreeMap<&IntVector, &BigRational> = BTreeMap::new();
        for (p, w) in entries {
            if !points.contains(p) {
                return Err(Error::Precondition(format!("weighted point {p} is not a lattice point of the polytope")));
            }
            map.insert(p, w);
        }
        let mut defaulted = Vec::new();
        let weights = points
            .iter()
            .map(|p| match map.get(p) {
                Some(w) => (*w).clone(),
                None => {
                    defaulted.push(p.clone());
                    BigRational::zero()
                }
            })
            .collect();
        Ok((Self { points, weights }, defaulted))
    }

    pub fn weight_of(&self, p: &IntVector) -> Option<&BigRational> {
        self.points.iter().position(|q| q == p).map(|i| &self.weights[i])
    }
}

/// A regular subdivision; cells that are not simplices are flagged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub points: Vec<IntVector>,
    pub cells: Vec<Vec<usize>>,
    /// Indices into `cells`.
    pub non_simplicial: Vec<usize>,
}

impl Subdivision {
    pub fn is_triangulation(&self) -> bool {
        self.non_simplicial.is_empty()
    }

    pub fn into_triangulation(self) -> Result<Triangulation> {
        if let Some(&i) = self.non_simplicial.first() {
            let pts: Vec<IntVector> = self.cells[i].iter().map(|&j| self.points[j].clone()).collect();
            return Err(Error::NotTriangulation(describe(&pts)));
        }
        Ok(Triangulation::new(self.points, self.cells, TriangulationKind::Polytope))
    }
}

/// Projects the lower hull of the lifted points `(x, w_x)` back onto
/// `conv(points)`.
pub fn regular_subdivision(w: &WeightVector) -> Result<Subdivision> {
    let points = &w.points;
    let aff = AffineLattice::through(points)?;
    let d = aff.rank();
    let all: Vec<usize> = (0..points.len()).collect();
    let trivial = |pts: &Vec<IntVector>| {
        let simplicial = pts.len() == d + 1;
        Subdivision { points: pts.clone(), cells: vec![all.clone()], non_simplicial: if simplicial { vec![] } else { vec![0] } }
    };
    if d == 0 {
        return Ok(trivial(points));
    }
    let lifted: Vec<RationalVector> = points
        .iter()
        .zip(&w.weights)
        .map(|(p, wt)| {
            let c = aff.coords(p).expect("point on its affine lattice");
            let mut v: Vec<BigRational> = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            v.push(wt.clone());
            RationalVector::new(v)
        })
        .collect();
    let diffs: Vec<RationalVector> = lifted[1..].iter().map(|l| l.sub(&lifted[0])).collect();
    if rank_of_rational(&diffs) == d {
        return Ok(trivial(points));
    }
    let facets = rational_polytope_facets(&lifted, d + 1)?;
    let cells = canonical_cells(facets.into_iter().filter(|f| f.normal[d].is_positive()).map(|f| f.incidence).collect());
    let non_simplicial = cells.iter().enumerate().filter(|(_, c)| c.len() != d + 1).map(|(i, _)| i).collect();
    Ok(Subdivision { points: points.clone(), cells, non_simplicial })
}

/// Regular triangulation induced by `w`, or an error naming a cell that is
/// not a simplex.
pub fn triangulation_from_weights(w: &WeightVector) -> Result<Triangulation> {
    regular_subdivision(w)?.into_triangulation()
}

/// Non-vertex lattice points first, then vertices, each in lex order.
pub fn pulling_order(p: &VPolytope, points: &[IntVector]) -> Vec<usize> {
    let (mut inner, mut verts): (Vec<usize>, Vec<usize>) = (0..points.len()).partition(|&i| !p.vertices().contains(&points[i]));
    inner.sort_by(|&a, &b| points[a].cmp(&points[b]));
    verts.sort_by(|&a, &b| points[a].cmp(&points[b]));
    inner.extend(verts);
    inner
}

/// `w = −B^{N−1−i}` for the point pulled `i`-th.
pub fn pulling_weights(points: &[IntVector], order: &[usize], base: &BigInt) -> WeightVector {
    let n = order.len();
    let mut weights = vec![BigRational::zero(); points.len()];
    for (i, &j) in order.iter().enumerate() {
        weights[j] = -BigRational::from_integer(num_traits::pow(base.clone(), n - 1 - i));
    }
    WeightVector { points: points.to_vec(), weights }
}

/// Pulling triangulation of the lattice points of `p` in [`pulling_order`],
/// together with weights that realize it as a regular triangulation.
pub fn default_triangulation(p: &VPolytope) -> Result<(Triangulation, WeightVector)> {
    let points = p.lattice_points(1);
    let order = pulling_order(p, &points);
    let ordered: Vec<IntVector> = order.iter().map(|&i| points[i].extended(BigInt::one())).collect();
    let cells: Vec<Vec<usize>> = if points.len() == 1 {
        vec![vec![0]]
    } else {
        pulling_triangulation(&ordered)?.into_iter().map(|c| c.into_iter().map(|j| order[j]).collect()).collect()
    };
    let t = Triangulation::new(points.clone(), cells, TriangulationKind::Polytope);
    let mut base = BigInt::from(points.len() + 1);
    for _ in 0..8 {
        let w = pulling_weights(&points, &order, &base);
        let sub = regular_subdivision(&w)?;
        if sub.is_triangulation() && sub.into_triangulation()?.same_cells(&t) {
            return Ok((t, w));
        }
        base = &base * &base;
    }
    Err(Error::verification("pulling weights realize the pulling triangulation", describe(&points)))
}

/// The subfan `Γ` and the restriction `Σ = Ξ|Γ` of a triangulation of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSubfan {
    /// Maximal faces `F_J`, as indices of the points of `Ξ` lying on them.
    pub faces: Vec<Vec<usize>>,
    /// Fan triangulation of `Γ` on the points of `Ξ`.
    pub sigma: Triangulation,
}

fn for_each_choice(parts: &[Vec<usize>], cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == parts.len() {
        f(cur);
        return;
    }
    for &j in &parts[cur.len()] {
        cur.push(j);
        for_each_choice(parts, cur, f);
        cur.pop();
    }
}

/// Enumerates the faces `F_J = ⋂ F_{jᵢ}`, `jᵢ ∈ σ^>(yᵢ)`, and restricts the
/// unimodular fan `xi` of `C` to them.
pub fn gamma_subfan(cone: &Cone, cert: &GorensteinCertificate, xi: &Triangulation) -> Result<GammaSubfan> {
    if xi.kind != TriangulationKind::Fan {
        return Err(Error::Precondition("Γ needs a fan triangulation of the cone".into()));
    }
    let r = cone.dim();
    for c in &xi.cells {
        let g = xi.generators(c);
        if let Some(x) = g.iter().find(|x| !cone.contains_lattice_point(x)) {
            return Err(Error::NotInCone(format!("{x} in cell {}", describe(&g))));
        }
        if g.len() != r || rank_of(&g) != r {
            return Err(Error::NotTriangulation(describe(&g)));
        }
        if !is_unimodular_cone(&g, cone.lattice()) {
            return Err(Error::NotUnimodular(describe(&g)));
        }
    }
    let sig: Vec<IntVector> = xi.points.iter().map(|p| cone.standard_embedding(p)).collect();
    let mut faces = BTreeSet::new();
    for_each_choice(&cert.support_partition, &mut Vec::new(), &mut |j| {
        let on: Vec<usize> = (0..xi.points.len()).filter(|&i| j.iter().all(|&f| sig[i][f].is_zero())).collect();
        faces.insert(on);
    });
    let faces = maximal_sets(faces);
    let mut pieces = BTreeSet::new();
    for s in &xi.cells {
        for f in &faces {
            pieces.insert(intersection(s, f));
        }
    }
    let sigma = Triangulation::new(xi.points.clone(), maximal_sets(pieces), TriangulationKind::Fan);
    Ok(GammaSubfan { faces, sigma })
}

fn y_indices(points: &[IntVector], cert: &GorensteinCertificate) -> Result<Vec<usize>> {
    cert.decomposition
        .iter()
        .map(|y| {
            points
                .iter()
                .position(|p| p == y)
                .ok_or_else(|| Error::Precondition(format!("{y} is not among the triangulation points")))
        })
        .collect()
}

fn internal(check: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::verification(check, e.to_string())
}

/// `Δ`: the cones `cn(G, y₁, …, y_m)` over the maximal cells `G` of `Σ`,
/// verified to be a (unimodular) triangulation of `C`.
pub fn delta_triangulation(cone: &Cone, cert: &GorensteinCertificate, gamma: &GammaSubfan) -> Result<Triangulation> {
    let sigma = &gamma.sigma;
    let ys = y_indices(&sigma.points, cert)?;
    let cells = sigma.cells.iter().map(|g| g.iter().chain(&ys).copied().collect()).collect();
    let delta = Triangulation::new(sigma.points.clone(), cells, TriangulationKind::Fan);
    delta.check_simplicial().map_err(internal("Δ is simplicial"))?;
    delta.check_pairwise_faces().map_err(internal("Δ cells meet in faces"))?;
    let ones = cone.standard_embedding(&cert.y).iter().all(One::is_one);
    if ones && sigma.check_unimodular().is_ok() {
        delta.check_unimodular().map_err(internal("Δ is unimodular"))?;
    }
    for x in sample_cone_points(cone, SAMPLE_COUNT, SAMPLE_SEED) {
        locate(&x, cone, cert, &delta)?;
    }
    Ok(delta)
}

/// Where a point of `C` sits in `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    /// `λᵢ = min{σⱼ(x)/σⱼ(yᵢ) : j ∈ σ^>(yᵢ)}`.
    pub lambda: Vec<BigRational>,
    /// `x′ = x − Σ λᵢ yᵢ`, a point of `|Γ|`.
    pub x_prime: RationalVector,
    /// Index into `Δ.cells`.
    pub cell: usize,
    /// Coefficients of `x` on the generators of the cell, in cell order.
    pub coefficients: Vec<BigRational>,
}

pub fn locate(x: &RationalVector, cone: &Cone, cert: &GorensteinCertificate, delta: &Triangulation) -> Result<Location> {
    if !cone.contains_rational(x) {
        return Err(Error::NotInCone(crate::format::format_rational_vector(x)));
    }
    let sx = cone.standard_embedding_rational(x);
    let lambda: Vec<BigRational> = cert
        .decomposition
        .iter()
        .zip(&cert.support_partition)
        .map(|(y, part)| {
            let sy = cone.standard_embedding(y);
            part.iter()
                .map(|&j| &sx[j] / BigRational::from_integer(sy[j].clone()))
                .min()
                .expect("nonempty part")
        })
        .collect();
    let mut x_prime = x.clone();
    for (y, l) in cert.decomposition.iter().zip(&lambda) {
        x_prime = x_prime.sub(&y.to_rational().scale(l));
    }
    let sp = cone.standard_embedding_rational(&x_prime);
    if sp.iter().any(Signed::is_negative) {
        return Err(Error::verification("σ(x′) ≥ 0", crate::format::format_rational_vector(&x_prime)));
    }
    if !cert.support_partition.iter().all(|part| part.iter().any(|&j| sp[j].is_zero())) {
        return Err(Error::verification("x′ lies on a face F_J", crate::format::format_rational_vector(&x_prime)));
    }
    let ys = y_indices(&delta.points, cert)?;
    for (ci, cell) in delta.cells.iter().enumerate() {
        let g: Vec<usize> = cell.iter().copied().filter(|i| !ys.contains(i)).collect();
        let Some(mu) = cone_coefficients(&delta.cell_points(&g), &x_prime) else { continue };
        if mu.iter().any(Signed::is_negative) {
            continue;
        }
        let coefficients = cell
            .iter()
            .map(|i| match ys.iter().position(|y| y == i) {
                Some(k) => lambda[k].clone(),
                None => mu[g.iter().position(|j| j == i).expect("generator of G")].clone(),
            })
            .collect();
        return Ok(Location { lambda, x_prime, cell: ci, coefficients });
    }
    Err(Error::verification("x′ lies in a cell of Σ", crate::format::format_rational_vector(&x_prime)))
}

/// `Δ′`: the images `cn(π(G), π(y₁))` in `U`, verified to be a unimodular
/// triangulation of `π(C)`.
pub fn project_triangulation(
    delta: &Triangulation,
    cone: &Cone,
    cert: &GorensteinCertificate,
    reduction: &ReductionResult,
) -> Result<Triangulation> {
    let ys = y_indices(&delta.points, cert)?;
    let used = delta.used_points();
    let images: BTreeSet<IntVector> = used.iter().map(|&i| reduction.project(&delta.points[i])).collect();
    let points: Vec<IntVector> = images.into_iter().collect();
    let index = |v: &IntVector| points.binary_search(v).expect("image recorded");
    let mut cells = Vec::new();
    for c in &delta.cells {
        let g: Vec<usize> = c.iter().copied().filter(|i| !ys.contains(i)).collect();
        let mut img: BTreeSet<usize> = g.iter().map(|&i| index(&reduction.project(&delta.points[i]))).collect();
        img.insert(index(&reduction.project(&delta.points[ys[0]])));
        if img.len() != g.len() + 1 {
            return Err(Error::verification("π is injective on |Γ|", delta.describe_cell(c)));
        }
        cells.push(img.into_iter().collect());
    }
    let n_cells = cells.len();
    let dp = Triangulation::new(points, cells, TriangulationKind::Fan);
    if dp.cells.len() != n_cells {
        return Err(Error::verification("π is injective on |Γ|", "two cells have the same image"));
    }
    dp.check_simplicial().map_err(internal("Δ′ is simplicial"))?;
    dp.check_unimodular().map_err(internal("Δ′ is unimodular over U"))?;
    dp.check_pairwise_faces().map_err(internal("Δ′ cells meet in faces"))?;
    let samples: Vec<RationalVector> = sample_cone_points(cone, SAMPLE_COUNT, SAMPLE_SEED)
        .iter()
        .map(|x| reduction.projection.mul_rational_vec(x))
        .collect();
    dp.check_cover_by_sampling(&samples).map_err(internal("Δ′ covers π(C)"))?;
    Ok(dp)
}

/// Cross-section at height one of a fan whose generators have last
/// coordinate 1.
pub fn induced_polytope_triangulation(fan: &Triangulation) -> Result<Triangulation> {
    let used = fan.used_points();
    for &i in &used {
        let p = &fan.points[i];
        if !p.last().is_some_and(One::is_one) {
            return Err(Error::Precondition(format!("generator {p} does not have degree 1")));
        }
    }
    let points: Vec<IntVector> = used.iter().map(|&i| fan.points[i].truncated()).collect();
    let cells = fan
        .cells
        .iter()
        .map(|c| c.iter().map(|i| used.binary_search(i).expect("used point")).collect())
        .collect();
    Ok(Triangulation::new(points, cells, TriangulationKind::Polytope))
}

/// `Δ₁ = (Ξ|Γ₁) ∗ δ`: the base cells and the simplex `δ` on `y₁ … y_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinStructure {
    pub base: Vec<Vec<IntVector>>,
    pub apex: Vec<IntVector>,
}

pub fn join_structure(delta1: &Triangulation, ys: &[IntVector]) -> Result<JoinStructure> {
    let mut base = BTreeSet::new();
    for c in &delta1.cells {
        let pts = delta1.cell_points(c);
        if let Some(y) = ys.iter().find(|y| !pts.contains(y)) {
            return Err(Error::verification("every cell of Δ₁ contains δ", format!("{y} ∉ {}", describe(&pts))));
        }
        let mut rest: Vec<IntVector> = pts.into_iter().filter(|p| !ys.contains(p)).collect();
        rest.sort();
        base.insert(rest);
    }
    Ok(JoinStructure { base: base.into_iter().collect(), apex: ys.to_vec() })
}

/// Rescales `w` into `[1, 1 + 1/n)`, sets the weights at `ys` to 0, and
/// checks that the new weights induce `delta1`.
pub fn modify_weights(w: &WeightVector, ys: &[IntVector], n: usize, delta1: &Triangulation) -> Result<WeightVector> {
    let min = w.weights.iter().min().ok_or(Error::Empty)?;
    let max = w.weights.iter().max().ok_or(Error::Empty)?;
    // constant weights only induce a triangulation on a single simplex
    if min == max && !regular_subdivision(w)?.is_triangulation() {
        return Err(Error::DegenerateWeights("all weights are equal".into()));
    }
    let scale = (max - min) * BigRational::from_integer(BigInt::from(n + 1));
    let mut weights: Vec<BigRational> = w
        .weights
        .iter()
        .map(|x| if min == max { BigRational::one() } else { BigRational::one() + (x - min) / &scale })
        .collect();
    for y in ys {
        let i = w
            .points
            .iter()
            .position(|p| p == y)
            .ok_or_else(|| Error::Precondition(format!("{y} carries no weight")))?;
        weights[i] = BigRational::zero();
    }
    let modified = WeightVector { points: w.points.clone(), weights };
    check_induces(&modified, delta1)?;
    Ok(modified)
}

/// Errors with the first differing cell unless `w` induces exactly `t`.
pub fn check_induces(w: &WeightVector, t: &Triangulation) -> Result<()> {
    let sub = regular_subdivision(w)?;
    let induced = Triangulation::new(sub.points, sub.cells, TriangulationKind::Polytope);
    match induced.first_difference(t) {
        Some(cell) => Err(Error::SubdivisionMismatch(describe(&cell))),
        None => Ok(()),
    }
}

/// Weights on the points of `Δ′₁` inherited from `w′`: the interior point
/// gets 0 and every other point the weight of its preimage.
pub fn quotient_weights(w_prime: &WeightVector, ys: &[IntVector], reduction: &ReductionResult, q_points: &[IntVector]) -> Result<WeightVector> {
    let mut inherited: BTreeMap<IntVector, BigRational> = BTreeMap::new();
    for (p, wt) in w_prime.points.iter().zip(&w_prime.weights) {
        if ys.contains(p) {
            continue;
        }
        let img = reduction.project_to_q(&p.extended(BigInt::one()));
        if let Some(old) = inherited.insert(img.clone(), wt.clone()) {
            if &old != wt {
                return Err(Error::verification("π is injective on |Γ₁|", img.to_string()));
            }
        }
    }
    let weights = q_points
        .iter()
        .map(|q| {
            if *q == reduction.interior_point {
                Ok(BigRational::zero())
            } else {
                inherited.get(q).cloned().ok_or_else(|| Error::verification("Q point has a preimage", q.to_string()))
            }
        })
        .collect::<Result<_>>()?;
    Ok(WeightVector { points: q_points.to_vec(), weights })
}

/// Maximal simplices of `t` lying in the boundary of `p`.
pub fn restrict_to_boundary(t: &Triangulation, p: &VPolytope) -> Triangulation {
    let d = p.dim();
    let mut cells = BTreeSet::new();
    if d > 0 {
        for c in &t.cells {
            for h in &p.hrep().inequalities {
                let on: Vec<usize> = c.iter().copied().filter(|&i| h.eval(&t.points[i]).is_zero()).collect();
                if on.len() == d {
                    cells.insert(on);
                }
            }
        }
    }
    Triangulation::new(t.points.clone(), cells.into_iter().collect(), TriangulationKind::Polytope)
}

/// `Σ_I (−1)^{|I|+1} Σ_{a ∈ ⋂_{i∈I} Cᵢ} t^{deg a}` up to `t^{d_max}`, over the
/// maximal cones of a unimodular fan.
pub fn inclusion_exclusion_series(fan: &Triangulation, deg: &IntVector, d_max: usize) -> Result<Vec<BigInt>> {
    let t = fan.cells.len();
    if t > 20 {
        return Err(Error::Precondition(format!("{t} cells are too many for inclusion-exclusion")));
    }
    let mut signed: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for mask in 1u32..(1u32 << t) {
        let mut inter: Option<Vec<usize>> = None;
        for (i, c) in fan.cells.iter().enumerate() {
            if mask & (1 << i) != 0 {
                inter = Some(match inter {
                    None => c.clone(),
                    Some(s) => intersection(&s, c),
                });
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        *signed.entry(inter.expect("nonempty subset")).or_insert(0) += sign;
    }
    let mut out = vec![BigInt::zero(); d_max + 1];
    for (cell, sign) in signed {
        if sign == 0 {
            continue;
        }
        let mut series = vec![BigInt::zero(); d_max + 1];
        series[0] = BigInt::one();
        for g in fan.cell_points(&cell) {
            let dg = deg.dot(&g);
            if !dg.is_positive() {
                return Err(Error::verification("grading is positive on generators", g.to_string()));
            }
            let step = usize::try_from(&dg).unwrap_or(usize::MAX);
            for i in step..=d_max {
                let prev = series[i - step].clone();
                series[i] += prev;
            }
        }
        for (o, s) in out.iter_mut().zip(series) {
            *o += s * sign;
        }
    }
    Ok(out)
}
