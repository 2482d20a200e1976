use gorenstein_core::ehrhart::{all_nonnegative, h_vector};
use gorenstein_core::lifting::lift;
use gorenstein_core::linalg::{
    elementary_divisors, hermite_normal_form, integer_kernel, rows_span_direct_summand, smith_normal_form, solve_integer,
    solve_rational, IntMatrix, IntVector,
};
use gorenstein_core::polytope::VPolytope;
use gorenstein_core::simplicial::{is_m_sequence, SimplicialComplex};
use gorenstein_core::triangulation::{polytope_normalized_volume, regular_subdivision, restrict_to_boundary, WeightVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let n = rows.first().map_or(0, Vec::len);
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), n)
}

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-4i64..=4, n), m))
}

fn unimodular(u: &IntMatrix) -> bool {
    u.determinant().abs().is_one()
}

/// Lattice points in a small box, at least three of them.
fn planar_points() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::btree_set((-3i64..=3, -3i64..=3), 3..8).prop_map(|s| s.into_iter().collect())
}

/// Convex hull by monotone chain, counterclockwise without collinear points.
fn hull_2d(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &x in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], x) <= 0 {
            lower.pop();
        }
        lower.push(x);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &x in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], x) <= 0 {
            upper.pop();
        }
        upper.push(x);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon(pts: &[(i64, i64)]) -> Option<VPolytope> {
    let v: Vec<IntVector> = pts.iter().map(|&(x, y)| IntVector::from_i64s(&[x, y])).collect();
    let p = VPolytope::hull(2, &v).ok()?;
    (p.dim() == 2).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_form_is_a_unimodular_echelon_reduction(rows in small_matrix(4, 5)) {
        let a = matrix(&rows);
        let (h, u) = hermite_normal_form(&a);
        prop_assert!(unimodular(&u));
        prop_assert_eq!(u.mul(&a), h.clone());
        let mut last_pivot: Option<usize> = None;
        let mut zero_seen = false;
        for i in 0..h.nrows() {
            match h.row(i).iter().position(|x| !x.is_zero()) {
                None => zero_seen = true,
                Some(c) => {
                    prop_assert!(!zero_seen);
                    prop_assert!(last_pivot.is_none_or(|l| c > l));
                    prop_assert!(h.get(i, c).is_positive());
                    for k in 0..i {
                        prop_assert!(!h.get(k, c).is_negative() && h.get(k, c) < h.get(i, c));
                    }
                    last_pivot = Some(c);
                }
            }
        }
    }

    #[test]
    fn smith_form_is_a_divisor_chain(rows in small_matrix(4, 4)) {
        let a = matrix(&rows);
        let (d, l, r) = smith_normal_form(&a);
        prop_assert!(unimodular(&l) && unimodular(&r));
        prop_assert_eq!(l.mul(&a).mul(&r), d.clone());
        let divisors = elementary_divisors(&a);
        prop_assert_eq!(divisors.len(), a.rank());
        for w in divisors.windows(2) {
            prop_assert!(w[0].is_positive() && (&w[1] % &w[0]).is_zero());
        }
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                prop_assert!(i == j || d.get(i, j).is_zero());
            }
        }
        if a.nrows() == a.ncols() {
            let det = a.determinant().abs();
            if divisors.len() == a.nrows() {
                prop_assert_eq!(divisors.iter().product::<BigInt>(), det);
            } else {
                prop_assert!(det.is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_a_saturated_basis(rows in small_matrix(3, 5)) {
        let a = matrix(&rows);
        let k = integer_kernel(&a);
        prop_assert_eq!(k.nrows(), a.ncols() - a.rank());
        for v in k.row_vectors() {
            prop_assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
        if k.nrows() > 0 {
            prop_assert!(rows_span_direct_summand(&k));
        }
    }

    #[test]
    fn consistent_systems_are_solved(rows in small_matrix(4, 4), x0 in prop::collection::vec(-5i64..=5, 4)) {
        let a = matrix(&rows);
        let x0 = IntVector::from_i64s(&x0[..a.ncols()]);
        let b = a.mul_vec(&x0);
        let x = solve_rational(&a, &b).ok().expect("consistent");
        prop_assert_eq!(a.mul_rational_vec(&x), b.to_rational());
        let xi = solve_integer(&a, &b).ok().expect("integral solution exists");
        prop_assert_eq!(a.mul_vec(&xi), b);
    }

    #[test]
    fn polygon_counts_follow_pick(pts in planar_points()) {
        let Some(p) = polygon(&pts) else { return Ok(()) };
        let h = hull_2d(&pts);
        let n = h.len();
        let twice_area: i64 = (0..n).map(|i| h[i].0 * h[(i + 1) % n].1 - h[(i + 1) % n].0 * h[i].1).sum();
        let boundary: i64 = (0..n).map(|i| (h[(i + 1) % n].0 - h[i].0).gcd(&(h[(i + 1) % n].1 - h[i].1))).sum();
        prop_assert_eq!(p.vertices().len(), n);
        for m in 1..=3i64 {
            // Pick: 2·E(mP) = 2A·m² + B·m + 2
            let expected = (twice_area * m * m + boundary * m + 2) / 2;
            prop_assert_eq!(p.count_lattice_points(m as u64) as i64, expected);
            prop_assert_eq!(p.count_relint_lattice_points(m as u64) as i64, expected - boundary * m);
        }
        let hv = h_vector(&p);
        prop_assert!(all_nonnegative(&hv));
        prop_assert_eq!(hv.sum(), BigInt::from(twice_area));
    }

    #[test]
    fn h_vector_sums_to_the_volume(pts in prop::collection::btree_set((0i64..=2, 0i64..=2, 0i64..=2), 4..7)) {
        let v: Vec<IntVector> = pts.iter().map(|&(x, y, z)| IntVector::from_i64s(&[x, y, z])).collect();
        let p = VPolytope::hull(3, &v).unwrap();
        let hv = h_vector(&p);
        prop_assert!(all_nonnegative(&hv));
        prop_assert_eq!(hv.sum(), polytope_normalized_volume(&p).unwrap());
        prop_assert!(hv.coefficients[0].is_one());
    }

    #[test]
    fn m_sequences_are_prefix_closed(v in prop::collection::vec(0i64..=8, 1..6)) {
        if is_m_sequence(&v) {
            for k in 1..v.len() {
                prop_assert!(is_m_sequence(&v[..k]));
            }
        }
    }

    #[test]
    fn h_vector_of_a_pure_complex_sums_to_its_facets(facets in prop::collection::btree_set(prop::collection::btree_set(0usize..7, 3), 1..8)) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
        let k = SimplicialComplex::new(7, facets.clone()).unwrap();
        let hv = k.h_vector().unwrap();
        prop_assert_eq!(hv.sum(), BigInt::from(facets.len()));
        prop_assert_eq!(k.f_vector()[3], facets.len() as u64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regular_triangulations_tile_and_lift(pts in planar_points(), seed in prop::collection::vec(0i64..=30, 49)) {
        let Some(p) = polygon(&pts) else { return Ok(()) };
        let points = p.lattice_points(1);
        let weights: Vec<BigRational> = (0..points.len()).map(|i| BigRational::from_integer(seed[i % seed.len()].into())).collect();
        let w = WeightVector::new(points, weights).unwrap();
        let sub = regular_subdivision(&w).unwrap();
        prop_assume!(sub.is_triangulation());
        let t = sub.into_triangulation().unwrap();
        t.check_pairwise_faces().unwrap();
        t.check_cover_by_volume(&p).unwrap();
        let l = lift(&p, &w).unwrap();
        let boundary = restrict_to_boundary(&t, &p);
        prop_assert_eq!(l.facets.len(), boundary.cells.len());
        prop_assert!(l.has_sphere_conditions());
        // the boundary of an n-gon has h = (1, n − 2, 1)
        prop_assert_eq!(l.boundary_complex.h_vector().unwrap().to_i64s(), vec![1, l.vertices.len() as i64 - 2, 1]);
    }
}
