//! Facet enumeration by the double description method.
//!
//! Everything here works on full-dimensional input in `ℝ^D`. Callers with
//! lower-dimensional data first pass to intrinsic lattice coordinates.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rank_of, IntVector, LatticeBasis, RationalVector};

/// A facet of a full-dimensional cone: its inward primitive normal and the
/// indices of the generators lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    pub normal: IntVector,
    pub incidence: Vec<usize>,
}

struct Ray {
    v: IntVector,
    zeros: FixedBitSet,
}

fn sign_of(x: &BigInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

/// Columns of the inverse of a square integer matrix, each scaled to a
/// primitive integer vector.
fn inverse_columns(rows: &[IntVector]) -> Vec<IntVector> {
    let d = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&i| !a[i][c].is_zero()).expect("invertible basis");
        a.swap(c, p);
        let inv = BigRational::one() / &a[c][c];
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * d {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    (0..d)
        .map(|j| RationalVector::new((0..d).map(|i| a[i][d + j].clone()).collect()).clear_denominators())
        .collect()
}

/// Facets of the cone generated by `gens`, which must span `ℝ^dim`.
///
/// The result is unsorted; see [`sort_facets`] for the canonical order.
pub fn cone_facets(gens: &[IntVector], dim: usize) -> Result<Vec<ConeFacet>> {
    if gens.iter().any(|g| g.len() != dim) {
        let bad = gens.iter().find(|g| g.len() != dim).map_or(0, |g| g.len());
        return Err(Error::DimensionMismatch { expected: dim, got: bad });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    // greedy independent subset, in input order
    let mut basis_idx = Vec::new();
    let mut basis: Vec<IntVector> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        basis.push(g.clone());
        if rank_of(&basis) == basis.len() {
            basis_idx.push(i);
            if basis.len() == dim {
                break;
            }
        } else {
            basis.pop();
        }
    }
    if basis.len() < dim {
        return Err(Error::Degenerate);
    }
    let n = gens.len();
    let mut rays: Vec<Ray> = inverse_columns(&basis)
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            let mut zeros = FixedBitSet::with_capacity(n);
            for (i, &bi) in basis_idx.iter().enumerate() {
                if i != j {
                    zeros.insert(bi);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (gi, g) in gens.iter().enumerate() {
        if basis_idx.contains(&gi) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| r.v.dot(g)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| sign_of(&vals[i]) == Ordering::Greater).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| sign_of(&vals[i]) == Ordering::Less).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let blocked = (0..rays.len()).any(|r| r != p && r != q && common.is_subset(&rays[r].zeros));
                if blocked {
                    continue;
                }
                let v = rays[q].v.scale(&vals[p]).sub(&rays[p].v.scale(&vals[q]));
                let v = v.primitive().expect("adjacent rays are independent");
                let mut zeros = common;
                zeros.insert(gi);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            match sign_of(&vals[i]) {
                Ordering::Less => {}
                Ordering::Equal => {
                    r.zeros.insert(gi);
                    next.push(r);
                }
                Ordering::Greater => next.push(r),
            }
        }
        next.extend(fresh);
        rays = next;
    }
    Ok(rays
        .into_iter()
        .map(|r| ConeFacet { incidence: r.zeros.ones().collect(), normal: r.v })
        .collect())
}

/// A facet `normal·x + offset ≥ 0` of a full-dimensional polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeFacet {
    pub normal: IntVector,
    pub offset: BigInt,
    pub incidence: Vec<usize>,
}

fn split_homogeneous(f: ConeFacet) -> PolytopeFacet {
    let mut v = f.normal.into_inner();
    let offset = v.pop().expect("homogenized normal");
    PolytopeFacet { normal: IntVector::new(v), offset, incidence: f.incidence }
}

/// Facets of `conv(points)` for lattice points spanning `ℝ^dim` affinely.
pub fn polytope_facets(points: &[IntVector], dim: usize) -> Result<Vec<PolytopeFacet>> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    let lifted: Vec<IntVector> = points.iter().map(|p| p.extended(BigInt::one())).collect();
    Ok(cone_facets(&lifted, dim + 1)?.into_iter().map(split_homogeneous).collect())
}

/// Facets of `conv(points)` for rational points spanning `ℝ^dim` affinely.
pub fn rational_polytope_facets(points: &[RationalVector], dim: usize) -> Result<Vec<PolytopeFacet>> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    let lifted: Vec<IntVector> = points
        .iter()
        .map(|p| {
            let l = p.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let scaled: IntVector = p.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
            scaled.extended(l)
        })
        .collect();
    Ok(cone_facets(&lifted, dim + 1)?.into_iter().map(split_homogeneous).collect())
}

/// Canonical comparison of homogenized forms `(a, b)`: by `b` ascending,
/// then by the position of the first nonzero entry of `a`, then by `a`
/// lexicographically descending.
pub fn canonical_form_cmp(a: &[BigInt], b: &BigInt, a2: &[BigInt], b2: &BigInt) -> Ordering {
    let lead = |v: &[BigInt]| v.iter().position(|x| !x.is_zero()).unwrap_or(v.len());
    b.cmp(b2).then(lead(a).cmp(&lead(a2))).then_with(|| a2.cmp(a))
}

/// Sorts polytope facets into the canonical order.
pub fn sort_facets(facets: &mut [PolytopeFacet]) {
    facets.sort_by(|f, g| canonical_form_cmp(&f.normal, &f.offset, &g.normal, &g.offset));
}

/// Sorts linear forms, reading the last coordinate as the offset.
pub fn sort_forms_by<T>(items: &mut [T], form: impl Fn(&T) -> &IntVector) {
    items.sort_by(|x, y| {
        let (fx, fy) = (form(x), form(y));
        let (lx, ax) = fx.split_last().expect("nonempty form");
        let (ly, ay) = fy.split_last().expect("nonempty form");
        canonical_form_cmp(ax, lx, ay, ly)
    });
}

/// Whether a rational point satisfies all facets (strictly if `strict`).
pub fn satisfies(facets: &[PolytopeFacet], x: &RationalVector, strict: bool) -> bool {
    facets.iter().all(|f| {
        let v = x.dot_int(&f.normal) + BigRational::from_integer(f.offset.clone());
        if strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    })
}

/// Pulling triangulation of the vector configuration `points` (which must
/// span a pointed cone), pulling points in index order.
///
/// Each cell is a sorted list of point indices spanning a simplicial cone of
/// full dimension; cells come out sorted.
pub fn pulling_triangulation(points: &[IntVector]) -> Result<Vec<Vec<usize>>> {
    let all: Vec<usize> = (0..points.len()).collect();
    let mut cells = pull(&all, points)?;
    for c in cells.iter_mut() {
        c.sort_unstable();
    }
    cells.sort();
    Ok(cells)
}

fn pull(subset: &[usize], points: &[IntVector]) -> Result<Vec<Vec<usize>>> {
    let vs: Vec<IntVector> = subset.iter().map(|&i| points[i].clone()).collect();
    let k = rank_of(&vs);
    if k == vs.len() {
        return Ok(vec![subset.to_vec()]);
    }
    let n = points[subset[0]].len();
    let span = LatticeBasis::saturated_span(&vs, n);
    let coords: Vec<IntVector> = vs.iter().map(|v| span.coords(v).expect("vector in its span")).collect();
    let mut cells = Vec::new();
    for f in cone_facets(&coords, k)? {
        if f.incidence.contains(&0) {
            continue;
        }
        let face: Vec<usize> = f.incidence.iter().map(|&j| subset[j]).collect();
        for mut cell in pull(&face, points)? {
            cell.insert(0, subset[0]);
            cells.push(cell);
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<IntVector> {
        v.iter().map(|p| IntVector::from_i64s(p)).collect()
    }

    #[test]
    fn square_facets_in_canonical_order() {
        let mut f = polytope_facets(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 2).unwrap();
        sort_facets(&mut f);
        let got: Vec<(Vec<i64>, i64)> = f
            .iter()
            .map(|f| (f.normal.to_i64s().unwrap(), i64::try_from(&f.offset).unwrap()))
            .collect();
        assert_eq!(got, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, 0], 1), (vec![0, -1], 1)]);
        assert_eq!(f[0].incidence, vec![0, 2]);
    }

    #[test]
    fn cube_has_six_facets_with_four_vertices_each() {
        let mut v = Vec::new();
        for i in 0..8i64 {
            v.push(IntVector::from_i64s(&[i & 1, (i >> 1) & 1, (i >> 2) & 1]));
        }
        let f = polytope_facets(&v, 3).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|f| f.incidence.len() == 4));
    }

    #[test]
    fn redundant_points_are_ignored() {
        let f = polytope_facets(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 0], &[1, 1], &[0, 1]]), 2).unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn degenerate_input_is_rejected() {
        assert_eq!(polytope_facets(&pts(&[&[0, 0], &[1, 1], &[2, 2]]), 2), Err(Error::Degenerate));
    }

    #[test]
    fn pulling_the_square() {
        let p = pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(pulling_triangulation(&p).unwrap(), vec![vec![0, 1, 3], vec![0, 2, 3]]);
        let p = pts(&[&[1, 1, 1], &[0, 0, 1], &[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(pulling_triangulation(&p).unwrap(), vec![vec![0, 1, 2], vec![0, 1, 3]]);
    }

    #[test]
    fn pulling_a_segment_from_its_midpoint() {
        let p = pts(&[&[1, 1], &[0, 1], &[2, 1]]);
        assert_eq!(pulling_triangulation(&p).unwrap(), vec![vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn rational_points() {
        let h = BigRational::new(1.into(), 2.into());
        let z = BigRational::zero();
        let o = BigRational::one();
        let p = vec![
            RationalVector::new(vec![z.clone(), z.clone()]),
            RationalVector::new(vec![h.clone(), z.clone()]),
            RationalVector::new(vec![z, o]),
        ];
        let f = rational_polytope_facets(&p, 2).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.iter().any(|f| f.normal == IntVector::from_i64s(&[-2, -1]) && f.offset == BigInt::one()));
    }
}
