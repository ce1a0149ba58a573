//! Command-line front end. Documents go in through `--in` (or stdin) and out
//! through `--out` (or stdout).
//!
//! Exit status: 0 when the requested claim was verified, 1 when it was
//! falsified, 2 on usage or format errors.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use multiconf::axioms;
use multiconf::covering::{Covering, Method};
use multiconf::error::{Error, Result};
use multiconf::generators;
use multiconf::io::{self, Document};
use multiconf::multiply;
use multiconf::representation;
use multiconf::search;
use multiconf::structure::{Builder, IncidenceStructure};

#[derive(Parser, Debug)]
#[command(name = "multiconf", version, about = "Multiplied incidence configurations")]
struct Cli {
    /// Input document (stdin when absent).
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for any choice the command has to make.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a named structure.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Dual of the input structure.
    Dual,
    /// Correlative multiplying of the input structure.
    MultiplyCor {
        /// Cycle length (at least 3).
        k: String,
        /// Map document of a self-correlation; defaults to an involutive one
        /// when the input has one, else to any correlation.
        #[arg(long, value_name = "FILE")]
        correlation: Option<PathBuf>,
    },
    /// Dualisation multiplying of the input structure.
    MultiplyDual {
        /// Even cycle length (at least 4).
        k: String,
    },
    /// Glue the chain described by a glue-spec document.
    Glue {
        spec: PathBuf,
    },
    /// Covering of the input structure.
    Cover {
        #[arg(long, value_enum, default_value_t = MethodArg::Meta)]
        method: MethodArg,
    },
    /// Tack relation of the input structure.
    Tack {
        #[arg(long, value_enum, default_value_t = MethodArg::Meta)]
        method: MethodArg,
    },
    /// Check conditions (1)-(7) and the successor cycle for a covering.
    Axioms(CoverSource),
    /// Rebuild the input as a glue of its blocks and verify the isomorphism.
    Rebuild(CoverSource),
    /// Search for an isomorphism between two structures.
    Iso {
        a: PathBuf,
        b: PathBuf,
    },
    /// Levi graph in Graphviz format.
    ExportDot,
    /// Full pipeline: covering, conditions, correlations, rebuild.
    Verify(CoverSource),
    /// Toggle one point-line incidence, chosen by --seed.
    Flip,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Two points on one line.
    Segment,
    /// m-subsets of an n-set, joined by (m+1)-subsets.
    Grassmannian { m: usize, n: usize },
    /// AG(2,p) with one parallel class removed.
    Ht { p: u64 },
    /// AG(2,p).
    Affine { p: u64 },
    /// PG(2,p).
    Projective { p: u64 },
    /// The Pappus configuration.
    Pappus,
    /// The Desargues configuration.
    Desargues,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Meta,
    Rank,
    Tack1,
    Tack2,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Meta => Method::Meta,
            MethodArg::Rank => Method::Rank,
            MethodArg::Tack1 => Method::Tack1,
            MethodArg::Tack2 => Method::Tack2,
        }
    }
}

#[derive(clap::Args, Debug)]
struct CoverSource {
    /// Covering document; overrides --method.
    #[arg(long, value_name = "FILE")]
    covering: Option<PathBuf>,
    /// How to obtain the covering (defaults to meta when coordinates exist).
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

/// A finished command: what to write, and whether the claim held.
struct Outcome {
    text: String,
    verified: bool,
    note: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            verified: true,
            note: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                report_error(&cli, &e);
                return ExitCode::from(2);
            }
            if let Some(note) = out.note.filter(|_| !cli.quiet) {
                eprintln!("{note}");
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            report_error(&cli, &e);
            ExitCode::from(if e.is_falsification() { 1 } else { 2 })
        }
    }
}

fn report_error(cli: &Cli, e: &Error) {
    if !cli.quiet {
        eprintln!("multiconf: {e}");
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_input(cli: &Cli) -> Result<String> {
    match &cli.input {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn input_structure(cli: &Cli) -> Result<IncidenceStructure> {
    io::structure_from_str(&read_input(cli)?)
}

fn read_doc(path: &Path) -> Result<Document> {
    Document::parse(&std::fs::read_to_string(path)?)
}

fn parse_k(k: &str) -> Result<usize> {
    if matches!(k, "Z" | "ℤ" | "z" | "inf" | "infinite") {
        return Err(Error::InvalidParameter(
            "the infinite cycle ℤ is not supported: structures are finite, give a finite cycle length".into(),
        ));
    }
    k.parse()
        .map_err(|_| Error::InvalidParameter(format!("cycle length must be a positive integer, got `{k}`")))
}

fn covering_for(host: &IncidenceStructure, src: &CoverSource) -> Result<(Covering, String)> {
    if let Some(path) = &src.covering {
        return Ok((io::covering_from_document(&read_doc(path)?, host)?, path.display().to_string()));
    }
    let method = match src.method {
        Some(m) => m,
        None if host.coordinates().is_some() => MethodArg::Meta,
        None => {
            return Err(Error::InvalidParameter(
                "structure has no coordinates: pass --method or --covering".into(),
            ))
        }
    };
    let name = format!("{method:?}").to_lowercase();
    Ok((Method::from(method).covering(host)?, name))
}

fn render(kind: &str, payload: serde_json::Value) -> String {
    Document::new(kind, payload).expect("plain JSON").render()
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen { family } => {
            let s = match family {
                Family::Segment => generators::segment(),
                Family::Grassmannian { m, n } => generators::grassmannian(*m, *n)?,
                Family::Ht { p } => generators::ht_config(*p)?,
                Family::Affine { p } => generators::affine_plane(*p)?.0,
                Family::Projective { p } => generators::projective_plane(*p)?,
                Family::Pappus => generators::pappus(),
                Family::Desargues => generators::desargues(),
            };
            Ok(Outcome::ok(io::structure_to_string(&s)))
        }
        Command::Dual => Ok(Outcome::ok(io::structure_to_string(&input_structure(cli)?.dual()))),
        Command::MultiplyCor { k, correlation } => {
            let k = parse_k(k)?;
            let base = input_structure(cli)?;
            let kappa = match correlation {
                Some(path) => io::map_from_document(&read_doc(path)?, &base, &base)?,
                None => search::find_involutive_correlation(&base)
                    .or_else(|| search::find_correlation(&base))
                    .ok_or_else(|| Error::InvalidMap(format!("{} is not self-dual", base.name())))?,
            };
            let m = multiply::multiply_correlative(k, &kappa, &base)?;
            Ok(Outcome::ok(io::structure_to_string(&m)))
        }
        Command::MultiplyDual { k } => {
            let k = parse_k(k)?;
            let m = multiply::multiply_dual(k, &input_structure(cli)?)?;
            Ok(Outcome::ok(io::structure_to_string(&m)))
        }
        Command::Glue { spec } => {
            let doc = read_doc(spec)?;
            let spec = io::glue_spec_from_document(&doc, spec.parent())?;
            Ok(Outcome::ok(io::structure_to_string(&multiply::glue(&spec))))
        }
        Command::Cover { method } => {
            let host = input_structure(cli)?;
            let c = Method::from(*method).covering(&host)?;
            Ok(Outcome::ok(io::covering_to_document(&c, &host).render()))
        }
        Command::Tack { method } => {
            let host = input_structure(cli)?;
            let t = Method::from(*method).tack(&host)?;
            Ok(Outcome::ok(io::tack_to_document(&t, &host).render()))
        }
        Command::Axioms(src) => {
            let host = input_structure(cli)?;
            let (cov, _) = covering_for(&host, src)?;
            let report = axioms::check_conditions(&host, &cov)?;
            let rho = if report.all_pass() { Some(axioms::rho(&host, &cov)) } else { None };
            let verified = report.all_pass() && matches!(rho, Some(Ok(_)));
            let note = if let Some(f) = report.first_failure() {
                Some(format!("condition ({}) fails: {:?}", f.condition, f.witness))
            } else if let Some(Err(e)) = &rho {
                Some(e.to_string())
            } else {
                None
            };
            let rho_json = match rho {
                Some(Ok(r)) => serde_json::to_value(r)?,
                Some(Err(e)) => json!({ "error": e.to_string() }),
                None => serde_json::Value::Null,
            };
            let text = render(
                "report",
                json!({ "conditions": report, "rho": rho_json, "all_pass": verified }),
            );
            Ok(Outcome { text, verified, note })
        }
        Command::Rebuild(src) => {
            let host = input_structure(cli)?;
            let (cov, _) = covering_for(&host, src)?;
            let r = representation::rebuild(&host, &cov)?;
            Ok(Outcome {
                text: io::structure_to_string(&r.rebuilt),
                verified: r.verdict,
                note: Some(format!(
                    "δ verified: {} points and {} lines over {} blocks",
                    host.num_points(),
                    host.num_lines(),
                    r.family.blocks.len()
                )),
            })
        }
        Command::Iso { a, b } => {
            let sa = io::structure_from_document(&read_doc(a)?)?;
            let sb = io::structure_from_document(&read_doc(b)?)?;
            match search::find_isomorphism(&sa, &sb) {
                Some(m) => Ok(Outcome::ok(io::map_to_document(&m, &sa, &sb).render())),
                None => Ok(Outcome {
                    text: String::new(),
                    verified: false,
                    note: Some(format!("{} and {} are not isomorphic", sa.name(), sb.name())),
                }),
            }
        }
        Command::ExportDot => Ok(Outcome::ok(io::export_levi_dot(&input_structure(cli)?))),
        Command::Verify(src) => {
            let host = input_structure(cli)?;
            let (cov, source) = covering_for(&host, src)?;
            let bundle = representation::verify_pipeline(&host, &cov)?;
            let note = if bundle.verdict {
                None
            } else if let Some(f) = bundle.conditions.as_ref().and_then(|c| c.first_failure()) {
                Some(format!("condition ({}) fails: {:?}", f.condition, f.witness))
            } else {
                bundle.error.clone()
            };
            let verified = bundle.verdict;
            let text = render("report", json!({ "covering": source, "pipeline": bundle }));
            Ok(Outcome { text, verified, note })
        }
        Command::Flip => {
            let s = input_structure(cli)?;
            let total = (s.num_points() * s.num_lines()) as u64;
            if total == 0 {
                return Err(Error::InvalidParameter("structure has no point-line pairs".into()));
            }
            let idx = (cli.seed % total) as usize;
            let (p, l) = (idx / s.num_lines(), idx % s.num_lines());
            let flipped = flip(&s, p, l)?;
            let note = format!(
                "{} ({}, {})",
                if s.incident(p, l) { "removed flag" } else { "added flag" },
                s.point_id(p),
                s.line_id(l)
            );
            Ok(Outcome {
                text: io::structure_to_string(&flipped),
                verified: true,
                note: Some(note),
            })
        }
    }
}

/// Toggles one incidence, keeping identifiers and coordinates.
fn flip(s: &IncidenceStructure, p: usize, l: usize) -> Result<IncidenceStructure> {
    let mut b = Builder::new(format!("{}~", s.name()));
    for id in s.point_ids() {
        b.point(id.clone())?;
    }
    for m in 0..s.num_lines() {
        let mut pts: Vec<usize> = s.points_on(m).to_vec();
        if m == l {
            match pts.iter().position(|&q| q == p) {
                Some(i) => {
                    pts.remove(i);
                }
                None => pts.push(p),
            }
        }
        b.line(s.line_id(m).to_string(), pts)?;
    }
    let out = b.build();
    match s.coordinates() {
        Some(c) => out.with_coordinates(c.clone()),
        None => Ok(out),
    }
}
