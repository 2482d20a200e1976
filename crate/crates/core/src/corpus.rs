//! The bundled example polytopes and weight files.

use crate::error::Result;
use crate::format::{parse_weights, PolytopeFile};
use crate::linalg::IntVector;
use crate::polytope::VPolytope;
use crate::triangulation::WeightVector;

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    /// Weights inducing a regular unimodular triangulation, if shipped.
    pub weights: Option<&'static str>,
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry { name: $name, text: include_str!(concat!("../../../corpus/", $name, ".poly")), weights: None }
    };
    ($name:literal, $w:literal) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../../../corpus/", $name, ".poly")),
            weights: Some(include_str!(concat!("../../../corpus/", $w, ".weights"))),
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("unit-interval"),
    entry!("unit-square", "unit-square"),
    entry!("unit-cube3"),
    entry!("simplex2"),
    entry!("simplex3"),
    entry!("segment-0-2", "segment-0-2"),
    entry!("rect-1x2"),
    entry!("join-tetrahedron", "join-tetrahedron"),
    entry!("birkhoff3"),
    entry!("hexagon", "hexagon-fan"),
    entry!("point"),
];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

impl CorpusEntry {
    pub fn polytope(&self) -> Result<VPolytope> {
        Ok(PolytopeFile::parse(self.text)?.to_polytope()?.with_name(self.name))
    }

    /// The shipped weights on the lattice points of `p`, with the points
    /// that defaulted to 0.
    pub fn weights(&self, p: &VPolytope) -> Option<Result<(WeightVector, Vec<IntVector>)>> {
        let text = self.weights?;
        Some(parse_weights(text, p.ambient_dim()).and_then(|e| WeightVector::from_entries(p.lattice_points(1), &e)))
    }
}

/// Loads a bundled polytope by name; panics on unknown names.
pub fn load(name: &str) -> VPolytope {
    entry(name).unwrap_or_else(|| panic!("no corpus entry '{name}'")).polytope().expect("corpus files are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for e in CORPUS {
            let p = e.polytope().unwrap();
            assert_eq!(p.name(), Some(e.name));
        }
        assert_eq!(load("birkhoff3").dim(), 4);
    }
}
