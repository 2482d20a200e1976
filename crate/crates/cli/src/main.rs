use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gorenstein_core::corpus;
use gorenstein_core::ehrhart::{boundary_from_data, interior_numerator_from_counts};
use gorenstein_core::format::{format_rational_vector, parse_weights, write_polytope, PolytopeFile};
use gorenstein_core::gorenstein::reduce_polytope;
use gorenstein_core::linalg::IntVector;
use gorenstein_core::pipeline::{analyze, ehrhart_counts, run_chain, AnalysisOptions};
use gorenstein_core::polytope::VPolytope;
use gorenstein_core::report::StageStatus;
use gorenstein_core::triangulation::{default_triangulation, regular_subdivision, WeightVector};
use gorenstein_core::{Error, ErrorKind};
use num_rational::BigRational;

/// Exact analysis of Gorenstein lattice polytopes.
///
/// Every POLYTOPE argument is a polytope file or the name of a bundled
/// example such as `unit-cube3`.
#[derive(Parser)]
#[command(name = "gorenstein", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable stage and print a report.
    Analyze {
        polytope: String,
        /// Count lattice points of the dilations up to this factor.
        #[arg(long)]
        max_dilate: Option<u64>,
        /// Weights inducing the triangulation; a pulling triangulation is
        /// used otherwise.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Also write the report as JSON (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record the wall time of each stage.
        #[arg(long)]
        timings: bool,
    },
    /// Print the Ehrhart h-vector and the counts it comes from.
    Hvector {
        polytope: String,
        /// Also print the numerator of the interior series.
        #[arg(long)]
        interior: bool,
        /// Also print the boundary h-vector.
        #[arg(long)]
        boundary: bool,
    },
    /// Print the reduced polytope Q as a polytope file.
    Reduce {
        polytope: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the regular triangulation induced by the weights.
    Triangulate {
        polytope: String,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Print the simplicial polytope P′ built from the triangulation.
    Lift {
        polytope: String,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Input => 2,
            ErrorKind::Internal => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

/// Reads a polytope file, falling back to the bundled examples by name.
fn load_polytope(arg: &str) -> Result<(VPolytope, String), Failure> {
    let path = Path::new(arg);
    let name = path.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    let text = if path.exists() {
        read(path)?
    } else if let Some(e) = corpus::entry(arg) {
        e.text.to_string()
    } else {
        return Err(input_failure(format!("{arg}: no such file or bundled polytope")));
    };
    let p = PolytopeFile::parse(&text).and_then(|f| f.to_polytope()).map_err(|e| input_failure(format!("{arg}: {e}")))?;
    Ok((p, name))
}

fn load_weights(path: &Path, dim: usize) -> Result<Vec<(IntVector, BigRational)>, Failure> {
    parse_weights(&read(path)?, dim).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn defaulted_note(out: &mut String, defaulted: &[IntVector]) {
    if !defaulted.is_empty() {
        let pts: Vec<String> = defaulted.iter().map(|p| format!("({})", p.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))).collect();
        let _ = writeln!(out, "# weight 0 assumed at {}", pts.join(" "));
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match cli.command {
        Command::Analyze { polytope, max_dilate, weights, json, timings } => {
            let (p, name) = load_polytope(&polytope)?;
            let weights = weights.map(|w| load_weights(&w, p.ambient_dim())).transpose()?;
            let report = analyze(&p, &name, &AnalysisOptions { max_dilate, weights, timings });
            out.push_str(&report.to_text());
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
                if path.as_os_str() == "-" {
                    out.push_str(&text);
                } else {
                    std::fs::write(&path, text).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
                }
            }
            if let Some(failed) = report.stages.iter().find(|s| s.status == StageStatus::Failed) {
                let code = if failed.error_kind.as_deref() == Some("internal") { 3 } else { 2 };
                print!("{out}");
                return Err(Failure {
                    code,
                    message: format!("stage {} failed: {}", failed.name, failed.message.clone().unwrap_or_default()),
                });
            }
        }
        Command::Hvector { polytope, interior, boundary } => {
            let (p, _) = load_polytope(&polytope)?;
            let (data, _, h) = ehrhart_counts(&p, None)?;
            let join = |v: &[String]| v.join(" ");
            let _ = writeln!(out, "h = {h}");
            let _ = writeln!(out, "counts = {}", join(&data.counts.iter().map(u64::to_string).collect::<Vec<_>>()));
            if interior {
                let n = interior_numerator_from_counts(&data.interior_counts);
                let _ = writeln!(out, "h_interior = {}", join(&n.iter().map(ToString::to_string).collect::<Vec<_>>()));
                let _ = writeln!(
                    out,
                    "interior_counts = {}",
                    join(&data.interior_counts.iter().map(u64::to_string).collect::<Vec<_>>())
                );
            }
            if boundary {
                if p.dim() == 0 {
                    return Err(input_failure("a point has no boundary".into()));
                }
                let _ = writeln!(out, "h_boundary = {}", boundary_from_data(&data)?);
            }
        }
        Command::Reduce { polytope, output } => {
            let (p, name) = load_polytope(&polytope)?;
            let r = reduce_polytope(&p)?;
            let comment = format!(
                "Q reduced from {name}\ninterior point {}\nh = {}",
                r.interior_point.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                r.h_q
            );
            let text = write_polytope(&r.q, Some(&comment));
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| input_failure(format!("{}: {e}", path.display())))?,
                None => out.push_str(&text),
            }
        }
        Command::Triangulate { polytope, weights } => {
            let (p, _) = load_polytope(&polytope)?;
            let (t, defaulted) = match weights {
                Some(w) => {
                    let entries = load_weights(&w, p.ambient_dim())?;
                    let (w, defaulted) = WeightVector::from_entries(p.lattice_points(1), &entries)?;
                    (regular_subdivision(&w)?.into_triangulation()?, defaulted)
                }
                None => (default_triangulation(&p)?.0, Vec::new()),
            };
            defaulted_note(&mut out, &defaulted);
            let unimodular = t.check_unimodular().is_ok();
            let _ = writeln!(out, "# {} cells, unimodular: {}", t.cells.len(), if unimodular { "yes" } else { "no" });
            let _ = writeln!(out, "points");
            for (i, x) in t.points.iter().enumerate() {
                let _ = writeln!(out, "{i}: {}", x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            }
            let _ = writeln!(out, "cells");
            for c in &t.cells {
                let _ = writeln!(out, "{}", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            }
        }
        Command::Lift { polytope, weights } => {
            let (p, _) = load_polytope(&polytope)?;
            let entries = weights.map(|w| load_weights(&w, p.ambient_dim())).transpose()?;
            let chain = run_chain(&p, entries.as_deref())?;
            defaulted_note(&mut out, &chain.xi.defaulted);
            let l = &chain.lifted;
            let h = l.boundary_complex.h_vector()?;
            let _ = writeln!(out, "# P': {} vertices, {} facets, boundary h = {h}", l.vertices.len(), l.facets.len());
            let _ = writeln!(out, "dim {}", chain.reduction.q.dim());
            let _ = writeln!(out, "vertices");
            for v in &l.vertices {
                let _ = writeln!(out, "{}", format_rational_vector(v));
            }
            let _ = writeln!(out, "facets");
            for f in &l.facets {
                let _ = writeln!(out, "{}", f.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
