//! Command implementations behind the `rotrange` binary.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rotrange_core::boundary::{self, FLAT_DERIV_TOL};
use rotrange_core::cert::{self, SimplifiedConditions, DEFAULT_TOL};
use rotrange_core::families::{self, oracle_sign, resultant_oracle};
use rotrange_core::io::{render_svg, write_boundary_csv, write_polar_csv};
use rotrange_core::{
    ComplexMatrix, D4FamilySpec, Error, ExtractedP, GeometryReport, MatrixFile, PermFamilySpec,
    SymmetryCertificate,
};
use serde::Serialize;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "rotrange", version, about = "Rotational symmetry of numerical ranges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify 2π/d rotational symmetry of W(A).
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sample the boundary of W(A) and run the shape checks.
    Boundary(BoundaryArgs),
    /// Write a matrix from one of the built-in families.
    Family {
        #[command(subcommand)]
        kind: FamilyKind,
    },
    /// Closed-form flat-part resultant against the Sylvester oracle.
    Resultant {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
    },
    /// Sweep the oracle resultant and flat-part detection over a weight grid.
    Scan {
        #[arg(long)]
        d: usize,
        /// `lo:hi:n` for n evenly spaced values, or a comma list.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        exclude_diagonal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 720)]
    pub samples: usize,
    /// Interior points per half-sector for the shape checks.
    #[arg(long, default_value_t = 180)]
    pub sector_samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub polar: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FamilyKind {
    /// Cyclic weighted shift `M(α)`.
    Perm {
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `diag(1, i, -1, -i) + E` families.
    D4 {
        #[arg(long, value_enum)]
        variant: D4Variant,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 3×3 matrix with W(A) the unit disk.
    Disk {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum D4Variant {
    BFamily,
    APlus,
    AMinus,
    AlphagammaPlus,
    AlphagammaMinus,
    RhoTheta,
}

/// Settings shared by the sampling commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub samples: usize,
}

impl RunConfig {
    pub fn validate(&self, d: usize) -> Result<(), Error> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidSpec(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.samples < 8 * d {
            return Err(Error::InvalidSampleCount { min: 8 * d, got: self.samples });
        }
        Ok(())
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } | Error::NotHermitian { .. } => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

type CmdResult = Result<u8, Error>;

/// Runs one command and maps errors to exit codes, reporting them on stderr.
pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Check { file, tol, json } => cmd_check(&file, tol, json.as_deref()),
        Command::Boundary(args) => cmd_boundary(&args),
        Command::Family { kind } => cmd_family(kind),
        Command::Resultant { d, alphas } => cmd_resultant(d, &alphas),
        Command::Scan { d, grid, exclude_diagonal, out } => cmd_scan(d, &grid, exclude_diagonal, out.as_deref()),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err}");
        exit_code(&err)
    })
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(path: &Path) -> Result<(MatrixFile, ComplexMatrix), Error> {
    let file = MatrixFile::read(path)?;
    let m = file.to_matrix()?;
    Ok((file, m))
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub label: Option<String>,
    pub certificate: SymmetryCertificate,
    pub extracted_p: Option<ExtractedP>,
    pub simplified: Option<SimplifiedConditions>,
}

pub fn check_report(m: &ComplexMatrix, label: Option<String>, tol: f64) -> Result<CheckReport, Error> {
    let certificate = cert::certify(m, tol)?;
    let extracted_p = if certificate.passes && !certificate.disk_regime {
        Some(cert::extract_P(m, tol)?)
    } else {
        None
    };
    let simplified = match cert::simplified_conditions(m, tol) {
        Ok(s) => Some(s),
        Err(Error::UnsupportedDimension(_) | Error::SingularMatrix { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CheckReport { label, certificate, extracted_p, simplified })
}

pub fn cmd_check(file: &Path, tol: f64, json: Option<&Path>) -> CmdResult {
    if !(tol > 0.0) {
        return Err(Error::InvalidSpec(format!("tolerance {tol} must be positive")));
    }
    let (meta, m) = load(file)?;
    let report = check_report(&m, meta.label, tol)?;
    emit_json(&report, json)?;
    Ok(if report.certificate.passes { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub certified: bool,
    pub samples: usize,
    pub flat_parts: Vec<rotrange_core::FlatSegment>,
    pub geometry: GeometryReport,
}

pub fn cmd_boundary(args: &BoundaryArgs) -> CmdResult {
    let (_, m) = load(&args.file)?;
    let config = RunConfig { tolerance: args.tol, samples: args.samples };
    config.validate(m.dim())?;
    let certified = m.dim() >= 3 && cert::certify(&m, config.tolerance)?.passes;
    let samples = boundary::boundary_curve(&m, config.samples)?;
    let polygon = boundary::detect_polygon(&m, boundary::POLYGON_TOL).is_ok_and(|r| r.is_polygon);
    let flat_parts = if certified && !polygon {
        match boundary::detect_flat_parts(&m, FLAT_DERIV_TOL) {
            Ok(v) => v,
            Err(Error::SingularMatrix { .. }) => Vec::new(),
            Err(e) => return Err(e),
        }
    } else {
        Vec::new()
    };
    let geometry = boundary::validate_geometry(&m, args.sector_samples)?;

    if let Some(path) = &args.csv {
        write_boundary_csv(BufWriter::new(File::create(path)?), &samples)?;
    }
    if let Some(path) = &args.svg {
        fs::write(path, render_svg(&samples, &flat_parts, m.dim()))?;
    }
    if let Some(path) = &args.polar {
        let n = config.samples;
        let radii: Vec<(f64, f64)> = (0..n)
            .into_par_iter()
            .map(|j| {
                let psi = 2.0 * PI * j as f64 / n as f64;
                boundary::polar_radius(&m, psi, &samples).map(|r| (psi, r))
            })
            .collect::<Result<_, _>>()?;
        write_polar_csv(BufWriter::new(File::create(path)?), &radii)?;
    }
    emit_json(&BoundaryReport { certified, samples: samples.len(), flat_parts, geometry }, args.json.as_deref())?;
    Ok(EXIT_PASS)
}

fn need(name: &str, value: Option<f64>) -> Result<f64, Error> {
    value.ok_or_else(|| Error::InvalidSpec(format!("--{name} is required for this variant")))
}

pub fn d4_spec(
    variant: D4Variant,
    a: Option<f64>,
    b: Option<f64>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    rho: Option<f64>,
    theta: Option<f64>,
) -> Result<D4FamilySpec, Error> {
    Ok(match variant {
        D4Variant::BFamily => D4FamilySpec::BFamily { b: need("b", b)? },
        D4Variant::APlus => D4FamilySpec::APlus { a: need("a", a)? },
        D4Variant::AMinus => D4FamilySpec::AMinus { a: need("a", a)? },
        D4Variant::AlphagammaPlus => {
            D4FamilySpec::AlphagammaPlus { alpha: need("alpha", alpha)?, gamma: need("gamma", gamma)? }
        }
        D4Variant::AlphagammaMinus => {
            D4FamilySpec::AlphagammaMinus { alpha: need("alpha", alpha)?, gamma: need("gamma", gamma)? }
        }
        D4Variant::RhoTheta => D4FamilySpec::RhoTheta { rho: need("rho", rho)?, theta: need("theta", theta)? },
    })
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn cmd_family(kind: FamilyKind) -> CmdResult {
    let (file, out) = match kind {
        FamilyKind::Perm { alphas, out } => {
            let m = families::perm_family(&PermFamilySpec::real(&alphas))?;
            let file = MatrixFile::from_matrix(&m, Some(format!("M({})", join(&alphas))), Some("perm".into()));
            (file, out)
        }
        FamilyKind::D4 { variant, a, b, alpha, gamma, rho, theta, out } => {
            let spec = d4_spec(variant, a, b, alpha, gamma, rho, theta)?;
            let params = families::d4_params(&spec)?;
            let label = serde_json::to_string(&spec)?;
            let source = if params.sign_flipped { "d4 (conjugated by diag(1,1,-1,1))" } else { "d4" };
            (MatrixFile::from_matrix(&params.matrix(), Some(label), Some(source.into())), out)
        }
        FamilyKind::Disk { a, out } => {
            let m = families::disk_counterexample(a)?;
            (MatrixFile::from_matrix(&m, Some(format!("disk a={a}")), Some("disk".into())), out)
        }
    };
    match out {
        Some(path) => file.write(path)?,
        None => println!("{}", file.to_json()?),
    }
    Ok(EXIT_PASS)
}

pub fn cmd_resultant(d: usize, alphas: &[f64]) -> CmdResult {
    emit_json(&families::resultant_closed(d, alphas)?, None)?;
    Ok(EXIT_PASS)
}

/// `lo:hi:n` (n evenly spaced points, endpoints included) or `a,b,c`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = |msg: &str| Error::InvalidSpec(format!("grid '{spec}': {msg}"));
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad("expected lo:hi:n"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad("bad lower bound"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("bad upper bound"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("bad point count"))?;
        match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad("bad value")))
            .collect::<Result<_, _>>()?
    };
    if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(bad(&format!("value {v} must be positive")));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub alphas: Vec<f64>,
    pub oracle: f64,
    pub sign: i8,
    pub flat: bool,
}

/// All `d`-tuples over `values`, lexicographic with the last index fastest.
fn grid_points(d: usize, values: &[f64], exclude_diagonal: bool) -> Vec<Vec<f64>> {
    if values.is_empty() {
        return Vec::new();
    }
    let n = values.len();
    let total = n.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut point = vec![0.0; d];
            for slot in point.iter_mut().rev() {
                *slot = values[idx % n];
                idx /= n;
            }
            point
        })
        .filter(|p| !(exclude_diagonal && p.iter().all(|&x| x == p[0])))
        .collect()
}

pub fn scan(d: usize, values: &[f64], exclude_diagonal: bool) -> Result<Vec<ScanRow>, Error> {
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    grid_points(d, values, exclude_diagonal)
        .into_par_iter()
        .map(|alphas| {
            let (oracle, _) = resultant_oracle(&alphas)?;
            let m = families::perm_family(&PermFamilySpec::real(&alphas))?;
            let polygon = boundary::detect_polygon(&m, boundary::POLYGON_TOL)?.is_polygon;
            let flat = polygon || !boundary::detect_flat_parts(&m, FLAT_DERIV_TOL)?.is_empty();
            let sign = oracle_sign(&alphas, oracle);
            Ok(ScanRow { alphas, oracle, sign, flat })
        })
        .collect()
}

pub fn write_scan_csv<W: Write>(out: W, d: usize, rows: &[ScanRow]) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=d).map(|k| format!("alpha{k}")).collect();
    header.extend(["oracle", "sign", "flat"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut record: Vec<String> = r.alphas.iter().map(|a| a.to_string()).collect();
        record.push(r.oracle.to_string());
        record.push(r.sign.to_string());
        record.push(r.flat.to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_scan(d: usize, grid: &str, exclude_diagonal: bool, out: Option<&Path>) -> CmdResult {
    let values = parse_grid(grid)?;
    let rows = scan(d, &values, exclude_diagonal)?;
    match out {
        Some(path) => write_scan_csv(BufWriter::new(File::create(path)?), d, &rows)?,
        None => write_scan_csv(io::stdout().lock(), d, &rows)?,
    }
    Ok(EXIT_PASS)
}
