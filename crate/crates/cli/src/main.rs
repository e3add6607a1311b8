//! `mahler`: batch front end for the alpha, bound, localization and
//! inequality pipelines.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 search or
//! halving failure, 3 invalid input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mahler_core::alpha::{alpha_search, alpha_term, alpha_tower, lemma_floor, SearchConfig, TowerConfig};
use mahler_core::bodynd::{
    exact_reference, random_rotation, remark_bound, santalo_check, verify_main, BoundReport, ReferenceBody,
    SphereSample,
};
use mahler_core::inequalities::{
    closing_chain, inequality_batch, saint_raymond_batch, shadow_batch, MomentVector,
};
use mahler_core::io::{body_from_json, polygon_from_json, AlphaReport, NeedleReport, PartitionDump};
use mahler_core::localize::{
    axis_cut_sequence, cut_iterate, extract_needle, needle_product, Arc, BodyFunctions, CutPolicy, SphereGrid,
    SphericalRegion, DEFAULT_LEVEL,
};
use mahler_core::measure2d::ConeInterval;
use mahler_core::{Body, Error};

#[derive(Parser, Debug)]
#[command(name = "mahler", version, about = "Mahler volume lower-bound toolkit")]
struct Cli {
    /// Directory for report files; reports always go to stdout as well.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Minimum number of nodes of the sphere quadrature grid.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Number of sphere directions for Monte-Carlo volumes.
    #[arg(long, global = true)]
    mc_samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate or search the planar alpha functional.
    Alpha(AlphaArgs),
    /// Compare Mahler volumes with the lower and upper bounds.
    Verify(VerifyArgs),
    /// Cut the sphere by halving hemispheres and extract needles.
    Localize(LocalizeArgs),
    /// Planar moment inequalities and the closing chain.
    Ineq(IneqArgs),
}

#[derive(Args, Debug)]
struct AlphaArgs {
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Polygon file: JSON array of half the vertices.
    #[arg(long)]
    body: Option<PathBuf>,
    /// Evaluate a single term at this rotation (needs --start and --length).
    #[arg(long, requires_all = ["start", "length"])]
    theta: Option<f64>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    /// Search over shell bodies instead of evaluating one body.
    #[arg(long)]
    search: bool,
    /// Search configuration file; overrides the search flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 6])]
    vertex_pairs: Vec<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// cube, cross, ball, random, or a body file.
    #[arg(long, default_value = "cube")]
    body: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Number of random bodies for `--body random`.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Alpha report whose `alpha_hat` replaces the floor value.
    #[arg(long)]
    alpha_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LocalizeArgs {
    /// cube3, cross3, or a body file in R³.
    #[arg(long, default_value = "cube3")]
    body: String,
    /// Halving rounds, or cuts with --pancake.
    #[arg(long, default_value_t = 5)]
    steps: usize,
    /// Shrink a hemisphere around a target arc instead of halving.
    #[arg(long)]
    pancake: bool,
    /// Target arc for --pancake: `equator` or `a1,a2,a3,b1,b2,b3`.
    #[arg(long, default_value = "equator")]
    target: String,
    /// Multiplier of the mean values in the cutting functions.
    #[arg(long, default_value_t = 1.2)]
    offset: f64,
}

#[derive(Args, Debug)]
struct IneqArgs {
    #[arg(long)]
    saint_raymond: bool,
    #[arg(long)]
    chain: bool,
    #[arg(long)]
    frad: bool,
    #[arg(long)]
    shadow: bool,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure carrying the exit code and an optional partial report.
struct Failure {
    code: u8,
    message: String,
    partial: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchFailed(_)
            | Error::HalvingFailed { .. }
            | Error::PlaneSearchFailed { .. }
            | Error::GenerationFailed { .. }
            | Error::NormalizationFailed(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string(), partial: None }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into(), partial: None }
}

/// Output of a command: files to write and the exit code.
struct Outcome {
    files: Vec<(String, String)>,
    code: u8,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn sphere_grid(quad_nodes: Option<usize>) -> Result<&'static SphereGrid, Failure> {
    let Some(min) = quad_nodes else {
        return Ok(SphereGrid::cached(DEFAULT_LEVEL)?);
    };
    let level = (0..=8u32)
        .find(|l| 10 * 4usize.pow(*l) + 2 >= min)
        .ok_or_else(|| input_error(format!("--quad-nodes {min} exceeds the largest grid")))?;
    Ok(SphereGrid::cached(level)?)
}

fn cmd_alpha(a: &AlphaArgs) -> Result<Outcome, Failure> {
    let body = a.body.as_deref().map(|p| read(p).and_then(|t| Ok(polygon_from_json(&t)?))).transpose()?;
    if a.search || a.config.is_some() {
        let cfg = match &a.config {
            Some(path) => serde_json::from_str::<SearchConfig>(&read(path)?)
                .map_err(|e| input_error(format!("malformed search config: {e}")))?,
            None => SearchConfig {
                n: a.n,
                vertex_pairs: a.vertex_pairs.clone(),
                restarts: a.restarts,
                budget: a.budget,
                seed: a.seed,
                ell_min: mahler_core::tol::ELL_MIN,
                tower: SearchConfig::default_tower(),
            },
        };
        let r = alpha_search(&cfg)?;
        return Ok(Outcome { files: vec![("alpha.json".into(), to_json(&AlphaReport::from_search(&r)))], code: 0 });
    }
    let body = body.ok_or_else(|| input_error("alpha needs --body or --search"))?;
    if let (Some(theta), Some(start), Some(length)) = (a.theta, a.start, a.length) {
        let e = alpha_term(a.n, theta, &ConeInterval::new(start, length)?, &body)?;
        return Ok(Outcome { files: vec![("alpha.json".into(), to_json(&e))], code: 0 });
    }
    let t = alpha_tower(a.n, &body, &TowerConfig::default())?;
    Ok(Outcome { files: vec![("alpha.json".into(), to_json(&AlphaReport::from_tower(a.n, &body, &t)))], code: 0 })
}

#[derive(Serialize)]
struct BodyVerdict {
    name: String,
    dim: usize,
    alpha: f64,
    lower: BoundReport,
    upper: BoundReport,
    remark_bound: f64,
    above_remark_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_reference: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    lower_bound_formula: &'static str,
    upper_bound_formula: &'static str,
    remark_bound_formula: &'static str,
    samples: usize,
    bodies: Vec<BodyVerdict>,
    passed: usize,
    total: usize,
}

fn cmd_verify(v: &VerifyArgs, mc_samples: Option<usize>) -> Result<Outcome, Failure> {
    let mut bodies: Vec<(String, Body, Option<f64>)> = Vec::new();
    let n = v.n;
    match v.body.as_str() {
        "cube" => bodies.push(("cube".into(), Body::cube(n)?, Some(exact_reference(ReferenceBody::Cube, n)?))),
        "cross" | "cross_polytope" => bodies.push((
            "cross_polytope".into(),
            Body::cross_polytope(n)?,
            Some(exact_reference(ReferenceBody::CrossPolytope, n)?),
        )),
        "ball" => bodies.push(("ball".into(), Body::ball(n, 1.0)?, Some(exact_reference(ReferenceBody::Ball, n)?))),
        "random" => {
            if v.count == 0 {
                return Err(input_error("--count must be positive"));
            }
            for i in 0..v.count as u64 {
                let seed = v.seed.wrapping_add(i);
                let pairs = 2 * n + (seed % 7) as usize;
                bodies.push((format!("random-{seed}"), Body::random_polytope(n, pairs, seed)?, None));
            }
        }
        path => {
            let k = body_from_json(&read(Path::new(path))?)?;
            bodies.push((path.to_string(), k, None));
        }
    }
    let dim = bodies[0].1.dim();
    let alpha = match &v.alpha_file {
        Some(path) => {
            let value: serde_json::Value =
                serde_json::from_str(&read(path)?).map_err(|e| input_error(format!("malformed alpha file: {e}")))?;
            let file_n = value["n"].as_u64().ok_or_else(|| input_error("alpha file lacks `n`"))?;
            if file_n as usize + 1 != dim {
                return Err(input_error(format!("alpha file is for n = {file_n}, body needs n = {}", dim - 1)));
            }
            value["alpha_hat"].as_f64().ok_or_else(|| input_error("alpha file lacks `alpha_hat`"))?
        }
        None => lemma_floor(dim as u32 - 1),
    };
    let samples = mc_samples.unwrap_or(1_000_000);
    let sample = SphereSample::quasi_random(dim, samples, v.seed)?;
    let remark = remark_bound(dim)?;
    let mut verdicts = Vec::new();
    for (name, k, exact) in bodies {
        let lower = verify_main(&k, alpha, &sample)?;
        let upper = santalo_check(&k, &sample)?;
        let above = lower.product >= remark - 3.0 * lower.std_error;
        verdicts.push(BodyVerdict {
            name,
            dim,
            alpha,
            pass: lower.pass && upper.pass,
            lower,
            upper,
            remark_bound: remark,
            above_remark_bound: above,
            exact_reference: exact,
        });
    }
    let passed = verdicts.iter().filter(|b| b.pass).count();
    let total = verdicts.len();
    let report = VerifyReport {
        lower_bound_formula: "alpha(n-1) * |S^{n-1}|^2",
        upper_bound_formula: "vol(B_n)^2",
        remark_bound_formula: "4 pi^n / (n^{(n+4)/2} Gamma(n/2)^2)",
        samples: sample.len(),
        bodies: verdicts,
        passed,
        total,
    };
    Ok(Outcome { files: vec![("verify.json".into(), to_json(&report))], code: if passed == total { 0 } else { 1 } })
}

fn localize_body(name: &str) -> Result<Body, Failure> {
    let body = match name {
        "cube3" => Body::cube(3)?,
        "cross3" => Body::cross_polytope(3)?,
        path => body_from_json(&read(Path::new(path))?)?,
    };
    if body.dim() != 3 {
        return Err(input_error(format!("localize needs a body in R^3, got dimension {}", body.dim())));
    }
    // A fixed generic rotation keeps the cuts away from symmetric ties.
    Ok(body.transformed(&random_rotation(3, 11))?)
}

fn parse_target(s: &str) -> Result<Arc, Failure> {
    if s == "equator" {
        let h: f64 = 0.4;
        return Ok(Arc::new(vec![h.cos(), -h.sin(), 0.0], vec![h.cos(), h.sin(), 0.0])?);
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| input_error(format!("bad target `{s}`: {e}"))))
        .collect::<Result<_, _>>()?;
    if v.len() != 6 {
        return Err(input_error("target needs six coordinates"));
    }
    let unit = |p: &[f64]| {
        let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        p.iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    Ok(Arc::new(unit(&v[..3]), unit(&v[3..]))?)
}

#[derive(Serialize)]
struct PancakeReport {
    widths: Vec<f64>,
    width: f64,
    axis: Arc,
    needle: NeedleReport,
    left: f64,
    right: f64,
    product: f64,
}

fn cmd_localize(l: &LocalizeArgs, quad_nodes: Option<usize>) -> Result<Outcome, Failure> {
    let grid = sphere_grid(quad_nodes)?;
    let body = localize_body(&l.body)?;
    if l.pancake {
        if l.steps > 200 {
            return Err(input_error("at most 200 cuts"));
        }
        let target = parse_target(&l.target)?;
        let centre = target.point(0.5 * target.length());
        let region = SphericalRegion::hemisphere([centre[0], centre[1], centre[2]])?;
        let trace = axis_cut_sequence(&region, &target, l.steps, grid)?;
        let needle = extract_needle(&trace.pancake, 1, grid)?;
        let p = needle_product(&body, &needle)?;
        let report = PancakeReport {
            width: trace.pancake.width,
            widths: trace.widths,
            axis: trace.pancake.axis,
            needle: NeedleReport::from(&needle),
            left: p.left,
            right: p.right,
            product: p.product,
        };
        return Ok(Outcome { files: vec![("pancake.json".into(), to_json(&report))], code: 0 });
    }
    if l.steps > 12 {
        return Err(input_error("at most 12 halving rounds"));
    }
    let f = BodyFunctions::new(&body, l.offset, grid)?;
    match cut_iterate(|u| f.g1(u), |u| f.g2(u), l.steps as u32, &CutPolicy::Free, grid) {
        Ok(leaves) => {
            let positive = leaves.iter().all(|x| x.masses[0] > 0.0 && x.masses[1] > 0.0);
            let dump = PartitionDump { leaves: &leaves, needle: None };
            Ok(Outcome { files: vec![("partition.json".into(), to_json(&dump))], code: if positive { 0 } else { 1 } })
        }
        Err(failure) => {
            let dump = PartitionDump { leaves: &failure.partial, needle: None };
            let mut f = Failure::from(failure.error);
            f.partial = Some(to_json(&dump));
            Err(f)
        }
    }
}

#[derive(Serialize)]
struct IneqReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    saint_raymond: Option<mahler_core::inequalities::SaintRaymondTally>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    chain: Vec<mahler_core::inequalities::ClosingChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shadow: Option<mahler_core::inequalities::ShadowTally>,
}

fn cmd_ineq(a: &IneqArgs) -> Result<Outcome, Failure> {
    let none = !(a.saint_raymond || a.chain || a.frad || a.shadow);
    let mut report = IneqReport { saint_raymond: None, chain: Vec::new(), shadow: None };
    let mut files = Vec::new();
    let mut ok = true;
    if a.saint_raymond || none {
        let moments = [MomentVector::new(1.0, 1.0)?, MomentVector::new(1.0, 3.0)?];
        let t = saint_raymond_batch(a.count, a.seed, &moments)?;
        ok &= t.passed == t.checks;
        report.saint_raymond = Some(t);
    }
    if a.chain || none {
        let r = closing_chain(a.n)?;
        ok &= r.pass;
        report.chain.push(r);
    }
    if a.shadow {
        report.shadow = Some(shadow_batch(a.n, a.count, a.seed)?);
    }
    if a.frad || a.shadow {
        let rows = inequality_batch(a.n, a.count, a.seed)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &rows {
            w.serialize(r).map_err(|e| input_error(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| input_error(e.to_string()))?;
        files.push(("ineq.csv".into(), String::from_utf8(bytes).expect("csv is utf-8")));
    }
    if report.saint_raymond.is_some() || !report.chain.is_empty() || report.shadow.is_some() {
        files.insert(0, ("ineq.json".into(), to_json(&report)));
    }
    Ok(Outcome { files, code: if ok { 0 } else { 1 } })
}

fn write_files(out: Option<&Path>, files: &[(String, String)]) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    for (_, body) in files {
        // A closed pipe downstream is not an error of the run.
        let _ = writeln!(stdout, "{body}");
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| input_error(format!("cannot create {}: {e}", dir.display())))?;
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Alpha(a) => cmd_alpha(a),
        Command::Verify(v) => cmd_verify(v, cli.mc_samples),
        Command::Localize(l) => cmd_localize(l, cli.quad_nodes),
        Command::Ineq(i) => cmd_ineq(i),
    };
    let out = cli.out.as_deref();
    match result.and_then(|o| write_files(out, &o.files).map(|_| o.code)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(partial) = f.partial {
                let _ = write_files(out, &[("partition.json".into(), partial)]);
            }
            ExitCode::from(f.code)
        }
    }
}
