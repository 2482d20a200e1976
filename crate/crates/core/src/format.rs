//! Text formats for polytopes and weight vectors.
//!
//! Polytope files start with `dim n`, may carry a `lattice full` line, and
//! then list one vertex per line as `n` integers. Weight files list one
//! lattice point per line followed by its weight (`p/q` or an integer).
//! In both, `#` starts a comment.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{IntVector, RationalVector};
use crate::polytope::VPolytope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeFile {
    pub dim: usize,
    /// Set by a `lattice full` line: the points live in `ℤ^dim` itself.
    pub lattice_full: bool,
    pub vertices: Vec<IntVector>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_int(tok: &str, line: usize) -> Result<BigInt> {
    tok.parse().map_err(|_| parse_error(line, format!("expected an integer, found '{tok}'")))
}

pub fn parse_rational(tok: &str, line: usize) -> Result<BigRational> {
    let bad = || parse_error(line, format!("expected p/q, found '{tok}'"));
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(parse_error(line, "zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

impl PolytopeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text).peekable();
        let (l0, header) = lines.next().ok_or_else(|| parse_error(1, "missing 'dim n' header"))?;
        let dim = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["dim", n] => n.parse::<usize>().map_err(|_| parse_error(l0, format!("bad dimension '{n}'")))?,
            _ => return Err(parse_error(l0, format!("expected 'dim n', found '{header}'"))),
        };
        let mut lattice_full = false;
        if let Some((_, l)) = lines.peek() {
            if l.split_whitespace().eq(["lattice", "full"]) {
                lattice_full = true;
                lines.next();
            }
        }
        let mut vertices = Vec::new();
        for (ln, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != dim {
                return Err(parse_error(ln, format!("expected {dim} integers, found {}", toks.len())));
            }
            vertices.push(toks.iter().map(|t| parse_int(t, ln)).collect::<Result<IntVector>>()?);
        }
        if vertices.is_empty() {
            return Err(parse_error(l0, "no vertices"));
        }
        Ok(Self { dim, lattice_full, vertices })
    }

    pub fn to_polytope(&self) -> Result<VPolytope> {
        VPolytope::new(self.dim, self.vertices.clone())
    }
}

/// Serializes a polytope in the polytope file format.
pub fn write_polytope(p: &VPolytope, comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    let _ = writeln!(s, "dim {}", p.ambient_dim());
    if p.dim() == p.ambient_dim() {
        let _ = writeln!(s, "lattice full");
    }
    for v in p.vertices() {
        let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "{}", parts.join(" "));
    }
    s
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_rational_vector(v: &RationalVector) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

/// Raw `(point, weight)` entries of a weight file.
pub fn parse_weights(text: &str, dim: usize) -> Result<Vec<(IntVector, BigRational)>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != dim + 1 {
            return Err(parse_error(ln, format!("expected {dim} coordinates and a weight, found {} tokens", toks.len())));
        }
        let point = toks[..dim].iter().map(|t| parse_int(t, ln)).collect::<Result<IntVector>>()?;
        if out.iter().any(|(p, _)| *p == point) {
            return Err(parse_error(ln, format!("point {point} listed twice")));
        }
        out.push((point, parse_rational(toks[dim], ln)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_polytope_file() {
        let f = PolytopeFile::parse("# square\ndim 2\nlattice full\n0 0\n1 0 # right\n0 1\n1 1\n").unwrap();
        assert_eq!(f.dim, 2);
        assert!(f.lattice_full);
        assert_eq!(f.vertices.len(), 4);
        let p = f.to_polytope().unwrap();
        assert_eq!(PolytopeFile::parse(&write_polytope(&p, Some("again"))).unwrap(), f);
    }

    #[test]
    fn reports_line_numbers() {
        let e = PolytopeFile::parse("dim 2\n0 0\n1\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, message: "expected 2 integers, found 1".into() });
        let e = PolytopeFile::parse("\n# c\ndimension 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = PolytopeFile::parse("dim 1\nx\n").unwrap_err();
        assert_eq!(e.to_string(), "parse error at line 2: expected an integer, found 'x'");
    }

    #[test]
    fn parses_weights() {
        let w = parse_weights("1 1  3/2\n0 0 -1\n", 2).unwrap();
        assert_eq!(w[0].1, BigRational::new(3.into(), 2.into()));
        assert_eq!(w[1].1, BigRational::from_integer((-1).into()));
        assert!(parse_weights("1 1 1/0\n", 2).is_err());
        assert!(parse_weights("1 1\n", 2).is_err());
    }
}
