//! `g52`: tables, verification, orbit sampling, flows, equivalences and cross-sections for
//! the seven-dimensional solvable Lie algebra families.

mod csv;
mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use g52::foliation::integrate_trajectory;
use g52::lie::{skew_rank, DUAL_BASIS};
use g52::orbits::{in_v, orbit_dimension};
use g52::verify::Tolerances;
use g52::{
    classify, cross_section, eigenvalues_closed, eigenvalues_numeric, exp_ad, exp_ad_closed,
    invariant, leaf_correspondence_check, leaf_id, run_verify, sample_orbit, Algebra,
    AlgebraElement, Covector, Error, FamilyId, Homeomorphism, Scope, VectorField, VerifyConfig,
};
use serde::Serialize;

use crate::csv::{Cell, CsvWriter};

#[derive(Parser)]
#[command(name = "g52", version, about = "Coadjoint orbits and foliations of 7-dimensional solvable Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump ad_U, its eigenvalues, exp(ad_U), the Kirillov form B_F and its rank (JSON).
    Tables(TablesArgs),
    /// Run every property check and print a JSON report; exits nonzero on any failure.
    Verify(VerifyArgs),
    /// Sample the coadjoint orbit of F (CSV, with classification and leaf as # lines).
    Orbit(OrbitArgs),
    /// Points of the leaf {invariant = c} on the slice {x3* = a}, projected to (x2*, x4*, x5*) (CSV).
    Crosssection(CrossArgs),
    /// Integrate one of the six foliation vector fields with RK4 (CSV with drift column).
    Flow(FlowArgs),
    /// Check that a homeomorphism carries leaves to leaves (JSON).
    Equiv(EquivArgs),
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut w = self.open()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn csv(&self) -> Result<CsvWriter<Box<dyn Write>>> {
        Ok(CsvWriter::new(self.open()?))
    }
}

fn family(s: &str) -> Result<FamilyId, Error> {
    s.parse()
}

fn scope(s: &str) -> Result<Scope, Error> {
    s.parse()
}

#[derive(Args)]
struct TablesArgs {
    /// Family string, e.g. `G2`, `G10:lambda=0.5`, `G4:lambda1=0,lambda2=0`.
    #[arg(long, value_parser = family)]
    family: FamilyId,
    /// Element U = (x1, ..., x5, x, y).
    #[arg(long, value_parser = parse::vector, allow_hyphen_values = true, default_value = "0,0,0,0,0,0,0")]
    u: [f64; 7],
    /// Covector F = (alpha1, ..., alpha5, alpha, beta).
    #[arg(long, value_parser = parse::vector, allow_hyphen_values = true, default_value = "0,0,0,0,0,0,0")]
    f: [f64; 7],
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict every check to one family: a family string, or a bare tag for random parameters.
    #[arg(long, value_parser = scope, default_value = "all")]
    family: Scope,
    /// Overrides as `key=value,...`.
    #[arg(long, value_parser = parse::tolerances, help = tol_help())]
    tol: Option<Tolerances>,
    #[command(flatten)]
    output: Output,
}

fn tol_help() -> String {
    format!("Tolerance overrides as key=value,...; keys: {}", Tolerances::KEYS.join(", "))
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, value_parser = family)]
    family: FamilyId,
    #[arg(long, value_parser = parse::vector, allow_hyphen_values = true)]
    f: [f64; 7],
    /// Number of orbit points.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CrossArgs {
    #[arg(long, value_parser = family)]
    family: FamilyId,
    /// Leaf constant.
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    /// Slice value of x3*.
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Grid points per axis over [-2, 2]^2 in (x4*, x5*).
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long, value_parser = family)]
    family: FamilyId,
    /// Field index k of X_k, 1..=6.
    #[arg(long)]
    field: usize,
    /// Starting point v0 in V.
    #[arg(long, value_parser = parse::vector, allow_hyphen_values = true)]
    f: [f64; 7],
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = g52::foliation::DEFAULT_STEPS)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EquivArgs {
    /// One of `h1`, `h2`, `h3:lambda=<value>`, `h`.
    #[arg(long)]
    pair: String,
    /// Number of random points of V.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Serialize)]
struct ExpTable {
    source: &'static str,
    matrix: g52::Matrix7,
}

#[derive(Serialize)]
struct Eigenvalues {
    closed: g52::EigenvalueMultiset,
    numeric: g52::EigenvalueMultiset,
}

#[derive(Serialize)]
struct Tables {
    family: String,
    u: [f64; 7],
    f: [f64; 7],
    ad_u: g52::Matrix7,
    eigenvalues: Eigenvalues,
    exp_ad_u: ExpTable,
    kirillov: g52::Matrix7,
    kirillov_rank: usize,
}

fn cmd_tables(a: TablesArgs) -> Result<ExitCode> {
    let alg = Algebra::new(a.family)?;
    let u = AlgebraElement(a.u);
    let ad = alg.ad(&u);
    // The closed forms refuse arguments past their overflow guard; fall back to the oracle.
    let exp = match exp_ad_closed(&a.family, &u) {
        Ok(m) => ExpTable { source: "closed", matrix: m },
        Err(Error::InvalidFamily(_) | Error::Overflow(_)) => ExpTable {
            source: "oracle",
            matrix: exp_ad(&alg, &u)?,
        },
        Err(e) => return Err(e.into()),
    };
    let kirillov = alg.kirillov(&Covector(a.f));
    let tables = Tables {
        family: a.family.to_string(),
        u: a.u,
        f: a.f,
        ad_u: ad,
        eigenvalues: Eigenvalues {
            closed: eigenvalues_closed(&a.family, &u),
            numeric: eigenvalues_numeric(&ad)?,
        },
        exp_ad_u: exp,
        kirillov,
        kirillov_rank: skew_rank(&kirillov)?,
    };
    a.output.json(&tables)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let cfg = VerifyConfig {
        seed: a.seed,
        scope: a.family,
        tol: a.tol.unwrap_or_default(),
    };
    let start = Instant::now();
    let (report, timings) = run_verify(&cfg)?;
    for (name, d) in &timings {
        eprintln!("{name} {:.3} s", d.as_secs_f64());
    }
    eprintln!("total {:.3} s", start.elapsed().as_secs_f64());
    a.output.json(&report)?;
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        for name in &report.failed_checks {
            eprintln!("FAILED {name}");
        }
        Ok(ExitCode::FAILURE)
    }
}

fn coordinate_header(extra: &[&'static str]) -> Vec<&'static str> {
    DUAL_BASIS.iter().copied().chain(extra.iter().copied()).collect()
}

fn cmd_orbit(a: OrbitArgs) -> Result<ExitCode> {
    let id = a.family;
    let f = Covector(a.f);
    let points = sample_orbit(&id, &f, a.n, a.seed)?;
    let studied = id.studied().is_some();
    let class = if studied {
        serde_json::to_string(&classify(&id, &f)?)?
    } else {
        serde_json::json!({ "dimension": orbit_dimension(&id, &f)? }).to_string()
    };
    let leaf = if studied && in_v(&f) {
        serde_json::to_string(&leaf_id(&id, &f)?)?
    } else {
        "null".to_string()
    };
    let mut w = a.output.csv()?;
    w.comment(&format!("family: {id}"))?;
    w.comment(&format!("class: {class}"))?;
    w.comment(&format!("leaf: {leaf}"))?;
    w.header(&coordinate_header(&["invariant"]))?;
    for p in &points {
        let inv = if studied && in_v(p) { Some(invariant(&id, p)?) } else { None };
        w.row(p.0.iter().map(|&x| Cell::from(x)).chain([Cell::from(inv)]))?;
    }
    w.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_crosssection(a: CrossArgs) -> Result<ExitCode> {
    let points = cross_section(&a.family, a.c, a.a, a.n)?;
    let mut w = a.output.csv()?;
    w.header(&["x2*", "x4*", "x5*", "residual"])?;
    for p in points {
        w.row([p.x2, p.x4, p.x5, p.residual].map(Cell::from))?;
    }
    w.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_flow(a: FlowArgs) -> Result<ExitCode> {
    let field = VectorField::new(&a.family, a.field)?;
    let v0 = Covector(a.f);
    let c = invariant(&a.family, &v0)?;
    let path = integrate_trajectory(field, &v0, a.t, a.steps)?;
    let dt = if path.len() > 1 { a.t / (path.len() - 1) as f64 } else { 0.0 };
    let mut w = a.output.csv()?;
    w.comment(&format!("field: {field}"))?;
    w.comment(&format!("invariant: {}", csv::format_f64(c)))?;
    let mut header = vec!["step", "t"];
    header.extend(coordinate_header(&["drift"]));
    w.header(&header)?;
    for (k, p) in path.iter().enumerate() {
        let drift = (invariant(&a.family, p)? - c).abs();
        let cells = [Cell::from(k), Cell::from(k as f64 * dt)]
            .into_iter()
            .chain(p.0.iter().map(|&x| Cell::from(x)))
            .chain([Cell::from(drift)]);
        w.row(cells)?;
    }
    w.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(a: EquivArgs) -> Result<ExitCode> {
    let h: Homeomorphism = a.pair.parse()?;
    let mut rng = g52::sampling::rng(a.seed);
    let samples: Vec<Covector> = (0..a.n).map(|_| g52::sampling::point_in_v(&mut rng)).collect();
    let report = leaf_correspondence_check(h, &samples)?;
    a.output.json(&report)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Tables(a) => cmd_tables(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Orbit(a) => cmd_orbit(a),
        Command::Crosssection(a) => cmd_crosssection(a),
        Command::Flow(a) => cmd_flow(a),
        Command::Equiv(a) => cmd_equiv(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
