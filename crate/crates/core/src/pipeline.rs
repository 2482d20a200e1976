//! The full chain from a Gorenstein polytope to the simplicial polytope `P′`,
//! and the staged analysis that drives it.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cone::{integral_closure_of, AffineMonoid, Cone};
use crate::ehrhart::{binomial, boundary_from_data, h_vector_from_counts, is_symmetric, is_unimodal, normalized_volume, EhrhartData, HVector};
use crate::error::{Error, ErrorKind, Result};
use crate::gorenstein::{gorenstein_certificate, reduce_with_monoid, GorensteinCertificate, ReductionResult};
use crate::lifting::{lift, LiftedPolytope};
use crate::linalg::IntVector;
use crate::polytope::VPolytope;
use crate::report::{
    hvec, int, ints, matrix, rat, rats, AnalysisReport, CertificateReport, ClosureReport, DeltaReport, EhrhartReport,
    GTheoremReport, GorensteinReport, LiftReport, ReductionReport, StageReport, StageStatus, TriangulationReport,
    SCHEMA_VERSION,
};
use crate::simplicial::GVector;
use crate::triangulation::{
    check_induces, default_triangulation, delta_triangulation, gamma_subfan, induced_polytope_triangulation,
    join_structure, modify_weights, project_triangulation, quotient_weights, regular_subdivision, restrict_to_boundary,
    GammaSubfan, Triangulation, WeightVector,
};

/// A triangulation `Ξ` of `P` with weights that induce it.
#[derive(Clone, Debug)]
pub struct XiStage {
    pub weights: WeightVector,
    /// Lattice points missing from the weights file, set to 0.
    pub defaulted: Vec<IntVector>,
    pub from_file: bool,
    pub xi: Triangulation,
}

/// Uses the given `(point, weight)` entries or, without them, a pulling
/// triangulation; checks regularity, unimodularity and cover.
pub fn build_xi(p: &VPolytope, entries: Option<&[(IntVector, BigRational)]>) -> Result<XiStage> {
    let stage = match entries {
        Some(e) => {
            let (weights, defaulted) = WeightVector::from_entries(p.lattice_points(1), e)?;
            let xi = regular_subdivision(&weights)?.into_triangulation()?;
            XiStage { weights, defaulted, from_file: true, xi }
        }
        None => {
            let (xi, weights) = default_triangulation(p)?;
            XiStage { weights, defaulted: Vec::new(), from_file: false, xi }
        }
    };
    stage.xi.check_unimodular()?;
    stage.xi.check_cover_by_volume(p)?;
    Ok(stage)
}

/// `Γ`, `Δ` and the cross-section `Δ₁` with its join structure.
#[derive(Clone, Debug)]
pub struct DeltaStage {
    pub gamma: GammaSubfan,
    pub delta: Triangulation,
    pub delta_one: Triangulation,
    /// The `yᵢ` as points of `P`.
    pub ys: Vec<IntVector>,
}

pub fn build_delta(p: &VPolytope, cone: &Cone, cert: &GorensteinCertificate, xi: &Triangulation) -> Result<DeltaStage> {
    let gamma = gamma_subfan(cone, cert, &xi.cone_over())?;
    let delta = delta_triangulation(cone, cert, &gamma)?;
    let delta_one = induced_polytope_triangulation(&delta)?;
    delta_one.check_cover_by_volume(p)?;
    let ys: Vec<IntVector> = cert.decomposition.iter().map(IntVector::truncated).collect();
    join_structure(&delta_one, &ys)?;
    Ok(DeltaStage { gamma, delta, delta_one, ys })
}

/// `Δ′₁` on `Q`, the weights inducing it and its restriction to `∂Q`.
#[derive(Clone, Debug)]
pub struct QuotientStage {
    pub delta_prime_one: Triangulation,
    pub weights: WeightVector,
    pub boundary: Triangulation,
}

pub fn build_quotient(
    cone: &Cone,
    reduction: &ReductionResult,
    delta: &DeltaStage,
    modified: &WeightVector,
) -> Result<QuotientStage> {
    let q = &reduction.q;
    let dp = project_triangulation(&delta.delta, cone, &reduction.certificate, reduction)?;
    let delta_prime_one = induced_polytope_triangulation(&dp)?;
    delta_prime_one.check_cover_by_volume(q)?;
    let weights = quotient_weights(modified, &delta.ys, reduction, &q.lattice_points(1))?;
    check_induces(&weights, &delta_prime_one)?;
    let boundary = restrict_to_boundary(&delta_prime_one, q);
    Ok(QuotientStage { delta_prime_one, weights, boundary })
}

/// Every object built on the way from `P` to `P′`.
#[derive(Clone, Debug)]
pub struct Chain {
    pub reduction: ReductionResult,
    pub xi: XiStage,
    pub delta: DeltaStage,
    pub modified_weights: WeightVector,
    pub quotient: QuotientStage,
    pub lifted: LiftedPolytope,
}

impl Chain {
    /// Whether `h(P)` equals the h-vector of the boundary complex of `P′`.
    pub fn h_matches(&self) -> Result<bool> {
        Ok(self.lifted.boundary_complex.h_vector()?.coefficients == self.reduction.h_p.coefficients)
    }
}

/// Runs the chain for an integrally closed Gorenstein polytope.
pub fn run_chain(p: &VPolytope, entries: Option<&[(IntVector, BigRational)]>) -> Result<Chain> {
    let monoid = AffineMonoid::of_polytope(p)?;
    let reduction = reduce_with_monoid(p, &monoid)?;
    let xi = build_xi(p, entries)?;
    let delta = build_delta(p, &monoid.cone, &reduction.certificate, &xi.xi)?;
    let modified_weights = modify_weights(&xi.weights, &delta.ys, p.ambient_dim() + 1, &delta.delta_one)?;
    let quotient = build_quotient(&monoid.cone, &reduction, &delta, &modified_weights)?;
    let lifted = lift(&reduction.q, &quotient.weights)?;
    Ok(Chain { reduction, xi, delta, modified_weights, quotient, lifted })
}

#[derive(Clone, Debug, Default)]
pub struct AnalysisOptions {
    /// Largest dilation counted; at least `dim P`.
    pub max_dilate: Option<u64>,
    pub weights: Option<Vec<(IntVector, BigRational)>>,
    pub timings: bool,
}

/// Counts `E(P, m)` up to `max(max_dilate, dim P)` and checks the counts
/// beyond `dim P` against the Ehrhart polynomial given by `h`.
pub fn ehrhart_counts(p: &VPolytope, max_dilate: Option<u64>) -> Result<(EhrhartData, Vec<u64>, HVector)> {
    let d = p.dim() as u64;
    let top = max_dilate.unwrap_or(d).max(d);
    let mut counts = vec![1u64];
    counts.extend((1..=top).map(|m| p.count_lattice_points(m) as u64));
    let interior_counts = (1..=d + 1).map(|m| p.count_relint_lattice_points(m) as u64).collect();
    let data = EhrhartData { counts: counts[..=d as usize].to_vec(), interior_counts };
    let h = h_vector_from_counts(&data.counts);
    let du = d as usize;
    for (m, &c) in counts.iter().enumerate().skip(du + 1) {
        let predicted: BigInt =
            h.coefficients.iter().enumerate().map(|(j, hj)| hj * binomial(m - j + du, du)).sum();
        if predicted != BigInt::from(c) {
            return Err(Error::verification("Ehrhart polynomial predicts the counts", format!("m = {m}: {predicted} vs {c}")));
        }
    }
    Ok((data, counts, h))
}

struct Stages {
    timings: bool,
    list: Vec<StageReport>,
    halted: bool,
}

impl Stages {
    /// Runs `f` unless an earlier stage failed. `Ok(Err(reason))` marks
    /// the stage as skipped.
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<std::result::Result<T, String>>) -> Option<T> {
        let push = |list: &mut Vec<StageReport>, status, message, error_kind, elapsed_ms| {
            list.push(StageReport { name: name.to_string(), status, message, error_kind, elapsed_ms })
        };
        if self.halted {
            push(&mut self.list, StageStatus::Skipped, Some("earlier stage failed".into()), None, None);
            return None;
        }
        let start = Instant::now();
        let out = f();
        let elapsed = self.timings.then(|| start.elapsed().as_secs_f64() * 1000.0);
        match out {
            Ok(Ok(v)) => {
                push(&mut self.list, StageStatus::Ok, None, None, elapsed);
                Some(v)
            }
            Ok(Err(reason)) => {
                push(&mut self.list, StageStatus::Skipped, Some(reason), None, elapsed);
                None
            }
            Err(e) => {
                let kind = match e.kind() {
                    ErrorKind::Input => "input",
                    ErrorKind::Internal => "internal",
                };
                push(&mut self.list, StageStatus::Failed, Some(e.to_string()), Some(kind.into()), elapsed);
                self.halted = true;
                None
            }
        }
    }
}

fn certificate_report(c: &GorensteinCertificate) -> CertificateReport {
    CertificateReport {
        y: ints(&c.y),
        decomposition: c.decomposition.iter().map(ints).collect(),
        m: c.m(),
        k: c.k.clone(),
        support_partition: c.support_partition.clone(),
    }
}

/// Runs every stage that applies to `p` and collects the results.
pub fn analyze(p: &VPolytope, name: &str, opts: &AnalysisOptions) -> AnalysisReport {
    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        ambient_dim: p.ambient_dim(),
        dim: p.dim(),
        vertices: p.vertices().iter().map(ints).collect(),
        facets: p.hrep().inequalities.len(),
        ehrhart: None,
        integral_closure: None,
        gorenstein: None,
        reduction: None,
        triangulation: None,
        delta: None,
        lift: None,
        g_theorem: None,
        stages: Vec::new(),
    };
    let mut st = Stages { timings: opts.timings, list: Vec::new(), halted: false };

    let h = st.run("ehrhart", || {
        let (data, counts, h) = ehrhart_counts(p, opts.max_dilate)?;
        let h_boundary = if p.dim() == 0 { None } else { Some(hvec(&boundary_from_data(&data)?)) };
        report.ehrhart = Some(EhrhartReport {
            counts: counts.iter().map(u64::to_string).collect(),
            interior_counts: data.interior_counts.iter().map(u64::to_string).collect(),
            h_vector: hvec(&h),
            h_boundary,
            normalized_volume: int(&normalized_volume(p)),
            symmetric: is_symmetric(&h),
            unimodal: is_unimodal(&h),
        });
        Ok(Ok(h))
    });

    let monoid = st.run("integral-closure", || {
        let monoid = AffineMonoid::of_polytope(p)?;
        let closure = integral_closure_of(&monoid);
        report.integral_closure =
            Some(ClosureReport { integrally_closed: closure.closed, witness: closure.witness.as_ref().map(ints) });
        Ok(Ok((monoid, closure.closed)))
    });

    let gorenstein = st.run("gorenstein", || {
        let Some((monoid, _)) = &monoid else { return Ok(Err("no monoid".to_string())) };
        let cert = gorenstein_certificate(monoid)?;
        report.gorenstein =
            Some(GorensteinReport { gorenstein: cert.is_some(), certificate: cert.as_ref().map(certificate_report) });
        Ok(Ok(cert.is_some()))
    });

    let reduction = st.run("reduction", || {
        let Some((monoid, closed)) = &monoid else { return Ok(Err("no monoid".to_string())) };
        if gorenstein != Some(true) {
            return Ok(Err("not Gorenstein".to_string()));
        }
        if !closed {
            return Ok(Err("not integrally closed".to_string()));
        }
        let r = reduce_with_monoid(p, monoid)?;
        report.reduction = Some(ReductionReport {
            q_dim: r.q.dim(),
            q_vertices: r.q.vertices().iter().map(ints).collect(),
            projection: matrix(&r.projection),
            interior_point: ints(&r.interior_point),
            h_q: hvec(&r.h_q),
            h_boundary_q: hvec(&r.h_boundary_q),
        });
        Ok(Ok(r))
    });

    let xi = st.run("triangulation", || {
        if reduction.is_none() {
            return Ok(Err("no reduction".to_string()));
        }
        let entries = opts.weights.as_deref();
        let mut t = TriangulationReport {
            weights_source: if entries.is_some() { "file" } else { "default" }.to_string(),
            defaulted_points: Vec::new(),
            points: p.lattice_points(1).iter().map(ints).collect(),
            weights: Vec::new(),
            cells: Vec::new(),
            regular: false,
            unimodular: false,
        };
        let out = build_xi(p, entries);
        match &out {
            Ok(x) => {
                t.defaulted_points = x.defaulted.iter().map(ints).collect();
                t.weights = x.weights.weights.iter().map(rat).collect();
                t.cells = x.xi.cells.clone();
                t.regular = true;
                t.unimodular = true;
            }
            Err(Error::NotUnimodular(_)) => t.regular = true,
            Err(_) => {}
        }
        report.triangulation = Some(t);
        out.map(Ok)
    });

    let chain = st.run("delta", || {
        let (Some((monoid, _)), Some(r), Some(x)) = (&monoid, &reduction, &xi) else {
            return Ok(Err("no triangulation".to_string()));
        };
        let d = build_delta(p, &monoid.cone, &r.certificate, &x.xi)?;
        let w = modify_weights(&x.weights, &d.ys, p.ambient_dim() + 1, &d.delta_one)?;
        let q = build_quotient(&monoid.cone, r, &d, &w)?;
        report.delta = Some(DeltaReport {
            gamma_faces: d.gamma.faces.len(),
            delta_cells: d.delta.cells.len(),
            delta_one_cells: d.delta_one.cells.len(),
            modified_weights: w.weights.iter().map(rat).collect(),
            modified_weights_induce_delta_one: true,
            quotient_cells: q.delta_prime_one.cells.len(),
            quotient_weights: q.weights.weights.iter().map(rat).collect(),
            quotient_weights_induce: true,
            boundary_cells: q.boundary.cells.len(),
        });
        Ok(Ok(q))
    });

    let lifted = st.run("lifting", || {
        let (Some(r), Some(q)) = (&reduction, &chain) else { return Ok(Err("no quotient triangulation".to_string())) };
        let l = lift(&r.q, &q.weights)?;
        report.lift = Some(LiftReport {
            vertices: l.vertices.iter().map(rats).collect(),
            facets: l.facets.clone(),
            apex_x: rats(&l.apex.x),
            apex_z: rat(&l.apex.z),
            retried: l.retried,
            h_boundary_complex: hvec(&l.boundary_complex.h_vector()?),
            sphere_conditions: l.has_sphere_conditions(),
        });
        Ok(Ok(l))
    });

    st.run("g-theorem", || {
        let Some(h) = &h else { return Ok(Err("no h-vector".to_string())) };
        if !is_symmetric(h) {
            return Ok(Err("h-vector is not symmetric".to_string()));
        }
        let g = GVector::from_h(h)?;
        let h_matches = match &lifted {
            Some(l) => Some(l.boundary_complex.h_vector()?.coefficients == h.coefficients),
            None => None,
        };
        if h_matches == Some(false) {
            return Err(Error::verification("h(P) equals the h-vector of the boundary of P′", String::new()));
        }
        report.g_theorem = Some(GTheoremReport {
            g_vector: g.entries.iter().map(i64::to_string).collect(),
            m_sequence: g.is_m_sequence(),
            h_matches_boundary_complex: h_matches,
        });
        Ok(Ok(()))
    });

    report.stages = st.list;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{entry, load};

    fn analyze_corpus(name: &str) -> AnalysisReport {
        let p = load(name);
        analyze(&p, name, &AnalysisOptions::default())
    }

    #[test]
    fn unit_square_report() {
        let r = analyze_corpus("unit-square");
        assert!(r.failed_stage().is_none(), "{}", r.to_text());
        assert_eq!(r.ehrhart.as_ref().unwrap().h_vector, vec!["1", "1"]);
        let g = r.gorenstein.as_ref().unwrap();
        assert!(g.gorenstein);
        assert_eq!(g.certificate.as_ref().unwrap().m, 2);
        assert_eq!(r.reduction.as_ref().unwrap().q_dim, 1);
        let l = r.lift.as_ref().unwrap();
        assert_eq!(l.vertices.len(), 2);
        assert_eq!(r.g_theorem.as_ref().unwrap().h_matches_boundary_complex, Some(true));
    }

    #[test]
    fn non_gorenstein_control_skips_the_reduction() {
        let r = analyze_corpus("rect-1x2");
        assert_eq!(r.ehrhart.as_ref().unwrap().h_vector, vec!["1", "3"]);
        assert!(!r.gorenstein.as_ref().unwrap().gorenstein);
        let red = r.stages.iter().find(|s| s.name == "reduction").unwrap();
        assert_eq!(red.status, StageStatus::Skipped);
        assert!(r.reduction.is_none() && r.lift.is_none() && r.g_theorem.is_none());
    }

    #[test]
    fn extra_dilations_are_checked() {
        let p = load("unit-square");
        let (_, counts, h) = ehrhart_counts(&p, Some(5)).unwrap();
        assert_eq!(counts, vec![1, 4, 9, 16, 25, 36]);
        assert_eq!(h.to_i64s(), vec![1, 1]);
    }

    #[test]
    fn supplied_weights_are_used() {
        let p = load("hexagon");
        let e = entry("hexagon").unwrap();
        let entries = crate::format::parse_weights(e.weights.unwrap(), 2).unwrap();
        let chain = run_chain(&p, Some(&entries)).unwrap();
        assert!(chain.xi.from_file);
        assert_eq!(chain.lifted.vertices.len(), 6);
        assert!(chain.h_matches().unwrap());
    }

    #[test]
    fn non_unimodular_weights_fail_the_triangulation_stage() {
        let p = load("segment-0-2");
        let flat: Vec<(IntVector, BigRational)> =
            p.lattice_points(1).into_iter().map(|x| (x, BigRational::from_integer(0.into()))).collect();
        let r = analyze(&p, "segment", &AnalysisOptions { weights: Some(flat), ..Default::default() });
        let failed = r.failed_stage().unwrap();
        assert_eq!(failed.name, "triangulation");
        assert_eq!(failed.error_kind.as_deref(), Some("input"));
        assert!(r.stages.iter().skip_while(|s| s.name != "triangulation").skip(1).all(|s| s.status == StageStatus::Skipped));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = analyze_corpus("join-tetrahedron");
        let b = analyze_corpus("join-tetrahedron");
        assert_eq!(a, b);
        assert!(a.stages.iter().all(|s| s.elapsed_ms.is_none()));
    }
}
