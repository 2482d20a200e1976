//! The analysis report and its text rendering.
//!
//! Integers are serialized as decimal strings and rationals as `p/q` so that
//! arbitrarily large values survive a JSON round trip.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::ehrhart::HVector;
use crate::format::format_rational;
use crate::linalg::{IntMatrix, IntVector, RationalVector};

pub const SCHEMA_VERSION: u32 = 1;

pub(crate) fn int(x: &BigInt) -> String {
    x.to_string()
}

pub(crate) fn ints(v: &IntVector) -> Vec<String> {
    v.iter().map(int).collect()
}

pub(crate) fn rats(v: &RationalVector) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub(crate) fn rat(x: &BigRational) -> String {
    format_rational(x)
}

pub(crate) fn hvec(h: &HVector) -> Vec<String> {
    h.coefficients.iter().map(int).collect()
}

pub(crate) fn matrix(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| ints(&m.row_vector(i))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Ok,
    Skipped,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageReport {
    pub name: String,
    pub status: StageStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// `input` or `internal` for failed stages.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartReport {
    /// `E(P, m)` for `m = 0 … max_dilate`.
    pub counts: Vec<String>,
    /// `E(relint P, m)` for `m = 1 … dim + 1`.
    pub interior_counts: Vec<String>,
    pub h_vector: Vec<String>,
    pub h_boundary: Option<Vec<String>>,
    pub normalized_volume: String,
    pub symmetric: bool,
    pub unimodal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub integrally_closed: bool,
    /// A Hilbert basis element of degree above one.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub y: Vec<String>,
    pub decomposition: Vec<Vec<String>>,
    pub m: usize,
    pub k: Vec<usize>,
    /// Blocks of support forms, 0-based.
    pub support_partition: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GorensteinReport {
    pub gorenstein: bool,
    pub certificate: Option<CertificateReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub q_dim: usize,
    pub q_vertices: Vec<Vec<String>>,
    pub projection: Vec<Vec<String>>,
    pub interior_point: Vec<String>,
    pub h_q: Vec<String>,
    pub h_boundary_q: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulationReport {
    /// `file` or `default`.
    pub weights_source: String,
    pub defaulted_points: Vec<Vec<String>>,
    pub points: Vec<Vec<String>>,
    pub weights: Vec<String>,
    pub cells: Vec<Vec<usize>>,
    pub regular: bool,
    pub unimodular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub gamma_faces: usize,
    pub delta_cells: usize,
    pub delta_one_cells: usize,
    pub modified_weights: Vec<String>,
    pub modified_weights_induce_delta_one: bool,
    pub quotient_cells: usize,
    pub quotient_weights: Vec<String>,
    pub quotient_weights_induce: bool,
    pub boundary_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<Vec<usize>>,
    pub apex_x: Vec<String>,
    pub apex_z: String,
    pub retried: bool,
    pub h_boundary_complex: Vec<String>,
    /// Pseudomanifold with the Euler characteristic of a sphere. Necessary
    /// for a simplicial sphere, not sufficient.
    pub sphere_conditions: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GTheoremReport {
    pub g_vector: Vec<String>,
    pub m_sequence: bool,
    /// `h(P)` against the boundary complex of `P′`, when it was built.
    pub h_matches_boundary_complex: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub name: String,
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub facets: usize,
    pub ehrhart: Option<EhrhartReport>,
    pub integral_closure: Option<ClosureReport>,
    pub gorenstein: Option<GorensteinReport>,
    pub reduction: Option<ReductionReport>,
    pub triangulation: Option<TriangulationReport>,
    pub delta: Option<DeltaReport>,
    pub lift: Option<LiftReport>,
    pub g_theorem: Option<GTheoremReport>,
    pub stages: Vec<StageReport>,
}

impl AnalysisReport {
    pub fn failed_stage(&self) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.status == StageStatus::Failed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let j = |v: &[String]| if v.is_empty() { "()".to_string() } else { v.join(" ") };
        let yn = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(s, "polytope {} (dim {}, ambient {}, {} vertices, {} facets)", self.name, self.dim, self.ambient_dim, self.vertices.len(), self.facets);
        if let Some(e) = &self.ehrhart {
            let _ = writeln!(s, "counts = {}", j(&e.counts));
            let _ = writeln!(s, "h = {}", j(&e.h_vector));
            if let Some(b) = &e.h_boundary {
                let _ = writeln!(s, "h_boundary = {}", j(b));
            }
            let _ = writeln!(s, "normalized volume = {}", e.normalized_volume);
            let _ = writeln!(s, "symmetric = {}, unimodal = {}", yn(e.symmetric), yn(e.unimodal));
        }
        if let Some(c) = &self.integral_closure {
            let _ = write!(s, "integrally closed = {}", yn(c.integrally_closed));
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(s, ", witness {}", j(w));
                }
                None => s.push('\n'),
            }
        }
        if let Some(g) = &self.gorenstein {
            let _ = writeln!(s, "gorenstein = {}", yn(g.gorenstein));
            if let Some(c) = &g.certificate {
                let _ = writeln!(s, "  y = {}, m = {}, k = {:?}", j(&c.y), c.m, c.k);
                for y in &c.decomposition {
                    let _ = writeln!(s, "  y_i = {}", j(y));
                }
            }
        }
        if let Some(r) = &self.reduction {
            let _ = writeln!(s, "reduction: Q of dim {} with {} vertices", r.q_dim, r.q_vertices.len());
            for v in &r.q_vertices {
                let _ = writeln!(s, "  {}", j(v));
            }
            let _ = writeln!(s, "  interior point = {}", j(&r.interior_point));
            let _ = writeln!(s, "  h(Q) = {}, h(boundary Q) = {}", j(&r.h_q), j(&r.h_boundary_q));
        }
        if let Some(t) = &self.triangulation {
            let _ = writeln!(
                s,
                "triangulation ({} weights): {} cells, regular = {}, unimodular = {}",
                t.weights_source,
                t.cells.len(),
                yn(t.regular),
                yn(t.unimodular)
            );
            if !t.defaulted_points.is_empty() {
                let pts: Vec<String> = t.defaulted_points.iter().map(|p| format!("({})", p.join(","))).collect();
                let _ = writeln!(s, "  weight 0 assumed at {}", pts.join(" "));
            }
        }
        if let Some(d) = &self.delta {
            let _ = writeln!(s, "Delta: {} cells over {} faces of Gamma; Delta_1: {} cells", d.delta_cells, d.gamma_faces, d.delta_one_cells);
            let _ = writeln!(s, "  w' = {} (induces Delta_1 = {})", j(&d.modified_weights), yn(d.modified_weights_induce_delta_one));
            let _ = writeln!(s, "  Delta'_1: {} cells, induced by quotient weights = {}", d.quotient_cells, yn(d.quotient_weights_induce));
            let _ = writeln!(s, "  boundary cells = {}", d.boundary_cells);
        }
        if let Some(l) = &self.lift {
            let _ = writeln!(s, "P': {} vertices, {} facets{}", l.vertices.len(), l.facets.len(), if l.retried { " (apex lowered)" } else { "" });
            let _ = writeln!(s, "  h(boundary P') = {}", j(&l.h_boundary_complex));
            let _ = writeln!(s, "  pseudomanifold with sphere Euler characteristic = {}", if l.sphere_conditions { "yes" } else { "no" });
        }
        if let Some(g) = &self.g_theorem {
            let _ = writeln!(s, "g = {}, M-sequence = {}", j(&g.g_vector), yn(g.m_sequence));
            if let Some(b) = g.h_matches_boundary_complex {
                let _ = writeln!(s, "h(P) = h(boundary P') : {}", yn(b));
            }
        }
        for st in &self.stages {
            let status = match st.status {
                StageStatus::Ok => "ok",
                StageStatus::Skipped => "skipped",
                StageStatus::Failed => "FAILED",
            };
            let _ = write!(s, "stage {:<18} {status}", st.name);
            if let Some(m) = &st.message {
                let _ = write!(s, ": {m}");
            }
            if let Some(ms) = st.elapsed_ms {
                let _ = write!(s, " [{ms:.3} ms]");
            }
            s.push('\n');
        }
        s
    }
}
