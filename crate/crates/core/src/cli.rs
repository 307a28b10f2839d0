//! Command-line front end. Every subcommand prints JSON to stdout; failures
//! print a one-line diagnostic JSON to stderr and exit 3, a failed `verify`
//! exits 1, and usage errors exit 2.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::{lattice_data, DEFAULT_TOL};
use crate::monodromy::{classify, commutator_defect, monodromy_pair, monodromy_report};
use crate::recurrence::{
    apparent_polynomial, lame_spectral, problem_params, second_elliptic_polynomial,
    spectral_polynomial,
};
use crate::roots::{certify_real_distinct, find_roots};
use crate::sympoly::{NumPoly, WeightedPoly};
use crate::verify;
use crate::{Error, Result};

type C = Complex64;

fn parse_complex(s: &str) -> std::result::Result<C, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.len() {
        1 => parts[0]
            .trim()
            .parse::<f64>()
            .map(|re| C::new(re, 0.0))
            .map_err(|e| format!("bad real number '{}': {e}", parts[0])),
        2 => {
            let re = parts[0]
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad real part '{}': {e}", parts[0]))?;
            let im = parts[1]
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad imaginary part '{}': {e}", parts[1]))?;
            Ok(C::new(re, im))
        }
        _ => Err("expected RE or RE,IM".into()),
    }
}

#[derive(Parser)]
#[command(
    name = "lame3",
    version,
    about = "Symbolic and numeric tools for a third-order equation with elliptic coefficients"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice invariants and branch values for a period ratio.
    Invariants {
        #[arg(long, value_parser = parse_complex)]
        tau: C,
    },
    /// Obstruction / spectral polynomials, symbolic or specialized.
    Poly(PolyArgs),
    /// Roots of a polynomial stored as JSON coefficients.
    Roots {
        #[arg(long)]
        poly_file: PathBuf,
        /// Also certify that the roots are real and simple.
        #[arg(long)]
        certify_real: bool,
    },
    /// Monodromy generators, commutator defect, and classification.
    Monodromy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long = "B", value_parser = parse_complex)]
        b: C,
        #[arg(long, value_parser = parse_complex)]
        tau: C,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run a named self-check suite.
    Verify {
        /// One of: weierstrass, parity-odd-odd, parity-odd-even,
        /// parity-even, lame-bridge.
        suite: String,
    },
    /// Batch-process a grid of cases from a JSON config.
    Scan {
        #[arg(long)]
        config: PathBuf,
    },
    /// Classify the monodromy at every root of the obstruction polynomial.
    UnitaritySearch {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = parse_complex)]
        tau: C,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Pole-series obstruction polynomial.
    P,
    /// Descending-series obstruction (odd-odd only).
    Ptilde,
    /// Spectral polynomial of the symmetric square.
    Q,
    /// Classical second-order spectral polynomial.
    Lame,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    /// Index of the classical chain member (family `lame` only).
    #[arg(long)]
    m: Option<u32>,
    /// Emit exact coefficients in B, g2, g3 (the default).
    #[arg(long, conflicts_with = "tau")]
    symbolic: bool,
    /// Specialize g2, g3 at this period ratio and emit complex coefficients.
    #[arg(long, value_parser = parse_complex)]
    tau: Option<C>,
}

fn complex_pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_invariants(tau: C) -> Result<()> {
    let lat = lattice_data(tau, DEFAULT_TOL)?;
    emit(&serde_json::json!({
        "tau": complex_pair(lat.tau),
        "g2": complex_pair(lat.g2),
        "g3": complex_pair(lat.g3),
        "e1": complex_pair(lat.e1),
        "e2": complex_pair(lat.e2),
        "e3": complex_pair(lat.e3),
        "eta1": complex_pair(lat.eta1),
        "eta2": complex_pair(lat.eta2),
    }))
}

fn symbolic_poly(args: &PolyArgs) -> Result<WeightedPoly> {
    let need_nl = || -> Result<(u32, u32)> {
        match (args.n, args.l) {
            (Some(n), Some(l)) => Ok((n, l)),
            _ => Err(Error::BadInput("this family needs --n and --l".into())),
        }
    };
    match args.family {
        Family::P => {
            let (n, l) = need_nl()?;
            apparent_polynomial(&problem_params(n, l)?)
        }
        Family::Ptilde => {
            let (n, l) = need_nl()?;
            second_elliptic_polynomial(&problem_params(n, l)?)
        }
        Family::Q => {
            let (n, l) = need_nl()?;
            Ok(spectral_polynomial(&problem_params(n, l)?)?.q)
        }
        Family::Lame => {
            let m = args
                .m
                .ok_or_else(|| Error::BadInput("family 'lame' needs --m".into()))?;
            lame_spectral(m)
        }
    }
}

fn cmd_poly(args: &PolyArgs) -> Result<()> {
    let poly = symbolic_poly(args)?;
    match args.tau {
        None => emit(&poly.to_records()),
        Some(tau) => {
            let lat = lattice_data(tau, DEFAULT_TOL)?;
            emit(&poly.specialize(lat.g2, lat.g3))
        }
    }
}

fn cmd_roots(path: &PathBuf, certify: bool) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let poly: NumPoly = serde_json::from_str(&text)?;
    let rep = find_roots(&poly)?;
    let mut out = serde_json::json!({
        "roots": rep.roots.iter().map(|&z| complex_pair(z)).collect::<Vec<_>>(),
        "residuals": rep.residuals,
        "method": rep.method.as_str(),
    });
    if certify {
        let cert = certify_real_distinct(&rep.roots, 1e-8, 1e-6);
        out["certification"] = serde_json::json!({
            "all_real": cert.all_real,
            "distinct": cert.distinct,
            "max_imag": cert.max_imag,
            "min_gap": cert.min_gap,
            "scale": cert.scale,
        });
    }
    emit(&out)
}

fn cmd_monodromy(n: u32, l: u32, b: C, tau: C, tol: f64) -> Result<()> {
    let rep = monodromy_report(n, l, b, tau, tol)?;
    emit(&rep)
}

fn cmd_verify(suite_name: &str) -> Result<i32> {
    let checks = verify::suite(suite_name)?;
    let mut failed = 0usize;
    for ck in &checks {
        let tag = if ck.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} {} — {}", ck.id, ck.name, ck.detail);
        if !ck.passed {
            failed += 1;
        }
    }
    println!(
        "{}: {} of {} checks passed",
        suite_name,
        checks.len() - failed,
        checks.len()
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

#[derive(Deserialize)]
struct ScanConfig {
    tau: [f64; 2],
    cases: Vec<ScanCase>,
    #[serde(default = "default_ode_tol")]
    ode_tol: f64,
    #[serde(default)]
    classify: bool,
}

fn default_ode_tol() -> f64 {
    1e-10
}

#[derive(Deserialize)]
struct ScanCase {
    n: u32,
    l: u32,
}

#[derive(Serialize)]
struct ScanRow {
    n: u32,
    l: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classifications: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    defects: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn scan_row(case: &ScanCase, tau: C, ode_tol: f64, do_classify: bool) -> ScanRow {
    let body = || -> Result<(Vec<C>, Option<(Vec<String>, Vec<f64>)>)> {
        let pp = problem_params(case.n, case.l)?;
        let lat = lattice_data(tau, DEFAULT_TOL)?;
        let poly = apparent_polynomial(&pp)?.specialize(lat.g2, lat.g3);
        let roots = find_roots(&poly)?.roots;
        if !do_classify {
            return Ok((roots, None));
        }
        let mut classes = Vec::with_capacity(roots.len());
        let mut defects = Vec::with_capacity(roots.len());
        for &b in &roots {
            let pair = monodromy_pair(&pp, b, &lat, ode_tol)?;
            defects.push(commutator_defect(&pair.n1, &pair.n2));
            let (class, _) = classify(&pair.n1, &pair.n2, 1e-6);
            classes.push(class.to_string());
        }
        Ok((roots, Some((classes, defects))))
    };
    match body() {
        Ok((roots, extra)) => {
            let (classifications, defects) = match extra {
                Some((c, d)) => (Some(c), Some(d)),
                None => (None, None),
            };
            ScanRow {
                n: case.n,
                l: case.l,
                roots: Some(roots.iter().map(|&z| complex_pair(z)).collect()),
                classifications,
                defects,
                error: None,
            }
        }
        Err(e) => ScanRow {
            n: case.n,
            l: case.l,
            roots: None,
            classifications: None,
            defects: None,
            error: Some(e.to_string()),
        },
    }
}

fn cmd_scan(path: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let cfg: ScanConfig = serde_json::from_str(&text)?;
    let tau = C::new(cfg.tau[0], cfg.tau[1]);
    let rows: Vec<ScanRow> = cfg
        .cases
        .par_iter()
        .map(|case| scan_row(case, tau, cfg.ode_tol, cfg.classify))
        .collect();
    emit(&rows)
}

fn cmd_unitarity_search(n: u32, l: u32, tau: C, tol: f64) -> Result<()> {
    let pp = problem_params(n, l)?;
    let lat = lattice_data(tau, DEFAULT_TOL)?;
    let poly = apparent_polynomial(&pp)?.specialize(lat.g2, lat.g3);
    let roots = find_roots(&poly)?.roots;
    let results: Vec<serde_json::Value> = roots
        .par_iter()
        .map(|&b| {
            match monodromy_pair(&pp, b, &lat, tol) {
                Ok(pair) => {
                    let defect = commutator_defect(&pair.n1, &pair.n2);
                    let (class, lambdas) = classify(&pair.n1, &pair.n2, 1e-6);
                    serde_json::json!({
                        "B": complex_pair(b),
                        "classification": class.to_string(),
                        "defect": defect,
                        "lambdas": lambdas.map(|v| v.iter().map(|&z| complex_pair(z)).collect::<Vec<_>>()),
                    })
                }
                Err(e) => serde_json::json!({
                    "B": complex_pair(b),
                    "error": e.to_string(),
                }),
            }
        })
        .collect();
    emit(&serde_json::json!({
        "n": n,
        "l": l,
        "tau": complex_pair(tau),
        "results": results,
    }))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::DegenerateLattice(_) => "degenerate-lattice",
        Error::PoleProximity { .. } => "pole-proximity",
        Error::ConvergenceFailure(_) => "convergence-failure",
        Error::Regime(_) => "regime",
        Error::NumericalInstability(_) => "numerical-instability",
        Error::NotApparent { .. } => "not-apparent",
        Error::CaseDegeneracy(_) => "case-degeneracy",
        Error::NonzeroRemainder(_) => "nonzero-remainder",
        Error::StepUnderflow { .. } => "step-underflow",
        Error::ToleranceNotMet(_) => "tolerance-not-met",
        Error::PathBlocked(_) => "path-blocked",
        Error::BadInput(_) => "bad-input",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Invariants { tau } => cmd_invariants(tau).map(|_| 0),
        Cmd::Poly(args) => cmd_poly(&args).map(|_| 0),
        Cmd::Roots {
            poly_file,
            certify_real,
        } => cmd_roots(&poly_file, certify_real).map(|_| 0),
        Cmd::Monodromy { n, l, b, tau, tol } => cmd_monodromy(n, l, b, tau, tol).map(|_| 0),
        Cmd::Verify { suite } => cmd_verify(&suite),
        Cmd::Scan { config } => cmd_scan(&config).map(|_| 0),
        Cmd::UnitaritySearch { n, l, tau, tol } => {
            cmd_unitarity_search(n, l, tau, tol).map(|_| 0)
        }
    }
}

/// Parse the process arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            let diag = serde_json::json!({
                "error": e.to_string(),
                "kind": error_kind(&e),
            });
            eprintln!("{diag}");
            3
        }
    }
}
