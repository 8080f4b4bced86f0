//! Command-line front end. Every command resolves its inputs, runs the
//! library operation, prints a summary and optionally writes a JSON report.
//!
//! Exit codes: 0 success, 1 violation (or "not orthogonal" for `bj`),
//! 2 bad input.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogReport, EntryResult};
use crate::embedding::{
    self, Definiteness, EmbeddingSpec, IsometryOutcome, Outcome, ParallelogramOutcome, Tolerances,
    VerificationReport, VerifyConfig,
};
use crate::error::{Error, Result};
use crate::norm::{DualNorm, NormSpec, Space};
use crate::orthogonality::{self, BjResult};
use crate::plot;
use crate::scalar::{self, Field, Matrix, Vector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

/// Random instances in `catalog` use at most this many samples each.
pub const CATALOG_RANDOM_SAMPLES: usize = 1_000;

#[derive(Debug, Parser)]
#[command(name = "normlab", version, about = "Normed-space laboratory: BJ orthogonality, dual norms, embeddings into the dual")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the embedding theorems for a space and a map into its dual.
    Check(CheckArgs),
    /// Decide x ⊥ y (and y ⊥ x) in the Birkhoff-James sense.
    Bj(BjArgs),
    /// Print the dual norm, or evaluate it at --vector.
    Dual(DualArgs),
    /// Parallelogram-law test for an inner-product norm.
    Detect(CommonArgs),
    /// Run every builtin entry plus the seeded random instances.
    Catalog(RunArgs),
    /// Write an SVG of a planar unit ball, its dual ball and BJ fans.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Overrides the sampled-check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Builtin name, JSON text, or path to a JSON file.
    #[arg(long)]
    pub space: String,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `identity`, a builtin name, JSON text, or path; defaults to the
    /// builtin's own map, else the identity.
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BjArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Clone, Args)]
pub struct DualArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub vector: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

impl RunArgs {
    pub fn verify_config(&self) -> Result<VerifyConfig> {
        let mut tol = Tolerances::default();
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidSpec(format!("--tol must be positive, got {t}")));
            }
            tol.sampled = t;
        }
        if self.samples == 0 {
            return Err(Error::InvalidSpec("--samples must be positive".into()));
        }
        Ok(VerifyConfig { samples: self.samples, seed: self.seed, tol })
    }
}

/// A space or map argument after resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolvedConfig {
    pub command: String,
    pub space_source: String,
    pub space: Space,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<EmbeddingSpec>,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// The file layout of every JSON report. `timestamp` is the only
/// non-deterministic field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile<T> {
    pub timestamp: u64,
    pub tool_version: String,
    pub result: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub config: ResolvedConfig,
    pub hermitian_defect: f64,
    pub isometry: IsometryOutcome,
    pub definiteness: Definiteness,
    /// `<Φ(w), w>` at the definiteness witness, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_form: Option<f64>,
    pub parallelogram: ParallelogramOutcome,
    pub theorems: Vec<VerificationReport>,
    /// Comparison with the catalog entry when space and map are builtins.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<EntryResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BjReport {
    pub config: ResolvedConfig,
    #[serde(with = "scalar::vector_serde")]
    pub x: Vector,
    #[serde(with = "scalar::vector_serde")]
    pub y: Vector,
    pub forward: BjResult,
    pub backward: BjResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualReport {
    pub config: ResolvedConfig,
    pub dual: NormSpec,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "scalar::opt_vector_serde")]
    pub vector: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectReport {
    pub config: ResolvedConfig,
    pub inner_product: bool,
    pub parallelogram: ParallelogramOutcome,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRun {
    pub config: ResolvedCatalogConfig,
    pub report: CatalogReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolvedCatalogConfig {
    pub samples: usize,
    pub random_samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub builtins: Vec<String>,
    pub random_instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum SpaceJson {
    Space(Space),
    Norm(NormSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum MapJson {
    Spec(EmbeddingSpec),
    Matrix(Matrix),
}

/// JSON text when it starts with `{` or `[`, else the contents of an
/// existing file, else `None` (a builtin name).
fn load_source(src: &str) -> Result<Option<String>> {
    let t = src.trim();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(Some(t.to_string()));
    }
    let path = Path::new(t);
    if path.is_file() {
        return std::fs::read_to_string(path).map(Some).map_err(|e| Error::Parse(format!("{t}: {e}")));
    }
    Ok(None)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Resolves `--space`; the catalog entry is returned for builtin names.
pub fn resolve_space(src: &str) -> Result<(Space, Option<catalog::CatalogEntry>)> {
    match load_source(src)? {
        Some(text) => {
            let space = match parse_json::<SpaceJson>(&text, "space")? {
                SpaceJson::Space(s) => Space::new(s.norm, s.field)?,
                SpaceJson::Norm(norm) => {
                    let complex = matches!(&norm, NormSpec::Quadratic { gram } if !gram.is_real());
                    Space::new(norm, if complex { Field::Complex } else { Field::Real })?
                }
            };
            Ok((space, None))
        }
        None => {
            let entry = catalog::builtin(src)?;
            Ok((entry.space.clone(), Some(entry)))
        }
    }
}

pub fn resolve_map(src: &str, space: &Space) -> Result<(EmbeddingSpec, Option<catalog::CatalogEntry>)> {
    if src.trim() == "identity" {
        return Ok((EmbeddingSpec::identity(space.dim(), space.field), None));
    }
    let (emb, entry) = match load_source(src)? {
        Some(text) => {
            let emb = match parse_json::<MapJson>(&text, "map")? {
                MapJson::Spec(e) => e,
                MapJson::Matrix(m) => {
                    let field = if m.is_real() { space.field } else { Field::Complex };
                    EmbeddingSpec::new(field, m)?
                }
            };
            (emb, None)
        }
        None => {
            let entry = catalog::builtin(src)?;
            (entry.embedding.clone(), Some(entry))
        }
    };
    emb.validate_for(space)?;
    Ok((emb, entry))
}

/// Promotes a real space to complex when a vector argument is complex.
fn field_for(space: Space, vectors: &[&Vector]) -> Result<Space> {
    if space.field == Field::Real && vectors.iter().any(|v| !scalar::is_real(v)) {
        return Space::new(space.norm, Field::Complex);
    }
    Ok(space)
}

fn parse_arg_vector(s: &str, space: &Space) -> Result<Vector> {
    let v = scalar::parse_vector(s)?;
    if v.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: v.len() });
    }
    if !scalar::all_finite(&v) {
        return Err(Error::NonFinite("vector argument".into()));
    }
    Ok(v)
}

fn config(command: &str, common: &CommonArgs, space: &Space, map: Option<(&str, &EmbeddingSpec)>) -> Result<ResolvedConfig> {
    let cfg = common.run.verify_config()?;
    Ok(ResolvedConfig {
        command: command.into(),
        space_source: common.space.clone(),
        space: space.clone(),
        map_source: map.map(|(s, _)| s.to_string()),
        map: map.map(|(_, e)| e.clone()),
        samples: cfg.samples,
        seed: cfg.seed,
        tolerances: cfg.tol,
    })
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Serializes a report with the timestamp alone on the second line.
pub fn report_json<T: Serialize>(result: &T) -> Result<String> {
    let file = ReportFile { timestamp: timestamp(), tool_version: env!("CARGO_PKG_VERSION").into(), result };
    let mut s = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_report<T: Serialize>(path: Option<&PathBuf>, result: &T) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, report_json(result)?).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0) {
        format!("{}", x.round() + 0.0)
    } else {
        format!("{x:.6}")
    }
}

/// `e₁` for unit coordinate vectors, `(a, b, ...)` otherwise.
pub fn fmt_vector(v: &[scalar::C64]) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i].norm() > 0.0).collect();
    if nz.len() == 1 && v[nz[0]] == scalar::ONE {
        let sub: String = (nz[0] + 1).to_string().chars().map(|c| SUBSCRIPTS[c as usize - '0' as usize]).collect();
        return format!("e{sub}");
    }
    let parts: Vec<String> = v
        .iter()
        .map(|z| if z.im == 0.0 { fmt_num(z.re) } else { format!("{}{:+}i", fmt_num(z.re), fmt_num(z.im)) })
        .collect();
    format!("({})", parts.join(", "))
}

fn fmt_lambda(w: &[scalar::C64]) -> String {
    match w {
        [z] if z.im == 0.0 => fmt_num(z.re),
        _ => fmt_vector(w),
    }
}

fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Holds => "holds",
        Outcome::Violated => "VIOLATED",
        Outcome::NotApplicable => "not applicable",
    }
}

pub fn cmd_check(args: &CheckArgs) -> Result<(i32, CheckReport)> {
    let cfg = args.common.run.verify_config()?;
    let (space, space_entry) = resolve_space(&args.common.space)?;
    let map_src = args
        .map
        .clone()
        .unwrap_or_else(|| if space_entry.is_some() { args.common.space.clone() } else { "identity".into() });
    let (emb, map_entry) = resolve_map(&map_src, &space)?;
    let entry = match (space_entry, map_entry) {
        (Some(s), Some(m)) if s.name == m.name => Some(s),
        _ => None,
    };
    let definiteness = emb.definiteness()?;
    let witness_form = definiteness.witness().map(|w| emb.form(w, w).norm());
    let theorems = vec![
        embedding::verify_theorem1(&space, &emb, &cfg)?,
        embedding::verify_theorem2(&space, &emb, &cfg)?,
        embedding::verify_theorem3(&space, &emb, &cfg)?,
        embedding::verify_weaker_topology(&space, &emb, &cfg)?,
    ];
    let expectations = match &entry {
        Some(e) => Some(catalog::evaluate_entry(e, &cfg)?),
        None => None,
    };
    let pass = match &expectations {
        Some(e) => e.all_met,
        None => theorems.iter().all(|t| t.outcome != Outcome::Violated),
    };
    let report = CheckReport {
        config: config("check", &args.common, &space, Some((&map_src, &emb)))?,
        hermitian_defect: emb.hermitian_defect(),
        isometry: embedding::check_isometry(&space, &emb, cfg.samples, cfg.seed)?,
        definiteness,
        witness_form,
        parallelogram: embedding::parallelogram_defect(&space, cfg.samples, cfg.seed, cfg.tol.sampled)?,
        theorems,
        expectations,
        pass,
    };
    Ok((if pass { EXIT_OK } else { EXIT_VIOLATION }, report))
}

fn print_check(r: &CheckReport) {
    let tol = r.config.tolerances;
    println!("space: {}  map: {}", r.config.space_source, r.config.map_source.as_deref().unwrap_or("identity"));
    println!(
        "hermitian: {} (defect {:.3e})",
        if r.hermitian_defect <= tol.exact { "PASS" } else { "FAIL" },
        r.hermitian_defect
    );
    println!(
        "isometry: {} (max relative deviation {:.3e}, {} spot checks, {} samples)",
        if r.isometry.deviation() <= tol.exact { "PASS" } else { "FAIL" },
        r.isometry.deviation(),
        r.isometry.spot_checks.len(),
        r.isometry.samples
    );
    match r.definiteness.witness() {
        Some(w) => println!(
            "definiteness: FAIL ({}; witness {} with |<Φ(x),x>| = {})",
            r.definiteness.label(),
            fmt_vector(w),
            fmt_num(r.witness_form.unwrap_or(f64::NAN))
        ),
        None => println!("definiteness: {}", r.definiteness.label()),
    }
    match &r.parallelogram.first_violation {
        Some(w) => println!(
            "parallelogram defect: {} at ({}, {}); max {} at ({}, {})",
            fmt_num(w.defect),
            fmt_vector(&w.x),
            fmt_vector(&w.y),
            fmt_num(r.parallelogram.max_defect),
            fmt_vector(&r.parallelogram.x),
            fmt_vector(&r.parallelogram.y)
        ),
        None => println!("parallelogram defect: {:.3e} (law holds)", r.parallelogram.max_defect),
    }
    for t in &r.theorems {
        let name = serde_json::to_value(t.theorem).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        println!("{name}: {}", outcome_label(t.outcome));
    }
    if let Some(e) = &r.expectations {
        for c in &e.checks {
            println!(
                "expected {} = {}: got {} [{}]",
                c.name,
                c.expected,
                c.actual,
                if c.matches { "ok" } else { "MISMATCH" }
            );
        }
    }
    println!("{}", if r.pass { "result: all expectations met" } else { "result: violation found" });
}

pub fn cmd_bj(args: &BjArgs) -> Result<(i32, BjReport)> {
    let (space, _) = resolve_space(&args.common.space)?;
    let x = scalar::parse_vector(&args.x)?;
    let y = scalar::parse_vector(&args.y)?;
    let space = field_for(space, &[&x, &y])?;
    let x = parse_arg_vector(&args.x, &space)?;
    let y = parse_arg_vector(&args.y, &space)?;
    let tol = args.common.run.tol.unwrap_or(Tolerances::default().exact);
    let forward = orthogonality::bj_orthogonal(&space, &x, &y, tol)?;
    let backward = orthogonality::bj_orthogonal(&space, &y, &x, tol)?;
    let code = if forward.orthogonal { EXIT_OK } else { EXIT_VIOLATION };
    let mut common = args.common.clone();
    common.run.tol = Some(tol);
    let mut cfg = config("bj", &common, &space, None)?;
    cfg.tolerances = Tolerances { exact: tol, ..Tolerances::default() };
    Ok((code, BjReport { config: cfg, x, y, forward, backward }))
}

fn print_bj(r: &BjReport) {
    let verdict = |b: &BjResult| if b.orthogonal { "orthogonal" } else { "not orthogonal" };
    println!(
        "x ⊥ y: {} (min ‖x+λy‖ = {} vs ‖x‖ = {}, λ = {}, {})",
        verdict(&r.forward),
        fmt_num(r.forward.min_value),
        fmt_num(r.forward.norm_x),
        fmt_lambda(&r.forward.witness),
        if r.forward.certified { "certified" } else { "search" }
    );
    println!("y ⊥ x: {} (min {} vs {})", verdict(&r.backward), fmt_num(r.backward.min_value), fmt_num(r.backward.norm_x));
}

pub fn cmd_dual(args: &DualArgs) -> Result<(i32, DualReport)> {
    let (space, _) = resolve_space(&args.common.space)?;
    let raw = args.vector.as_deref().map(scalar::parse_vector).transpose()?;
    let space = field_for(space, &raw.iter().collect::<Vec<_>>())?;
    let vector = args.vector.as_deref().map(|s| parse_arg_vector(s, &space)).transpose()?;
    let dual = DualNorm::new(&space.norm)?;
    let value = vector.as_ref().map(|f| dual.eval(f)).transpose()?;
    Ok((
        EXIT_OK,
        DualReport { config: config("dual", &args.common, &space, None)?, dual: dual.spec().clone(), vector, value },
    ))
}

pub fn cmd_detect(args: &CommonArgs) -> Result<(i32, DetectReport)> {
    let cfg = args.run.verify_config()?;
    let (space, _) = resolve_space(&args.space)?;
    let p = embedding::parallelogram_defect(&space, cfg.samples, cfg.seed, cfg.tol.sampled)?;
    let message = match &p.first_violation {
        None => format!("inner-product: parallelogram defect {:.3e} over {} pairs", p.max_defect, p.pairs),
        Some(w) => format!(
            "not inner-product: parallelogram defect {} at ({},{})",
            fmt_num(w.defect),
            fmt_vector(&w.x),
            fmt_vector(&w.y)
        ),
    };
    let inner_product = p.first_violation.is_none();
    Ok((EXIT_OK, DetectReport { config: config("detect", args, &space, None)?, inner_product, parallelogram: p, message }))
}

pub fn cmd_catalog(args: &RunArgs) -> Result<(i32, CatalogRun)> {
    let cfg = args.verify_config()?;
    let random_samples = cfg.samples.min(CATALOG_RANDOM_SAMPLES);
    let report = catalog::run_all(&cfg, random_samples)?;
    let code = if report.all_met { EXIT_OK } else { EXIT_VIOLATION };
    let config = ResolvedCatalogConfig {
        samples: cfg.samples,
        random_samples,
        seed: cfg.seed,
        tolerances: cfg.tol,
        builtins: catalog::DEFAULT_BUILTINS.iter().map(|s| s.to_string()).collect(),
        random_instances: catalog::RANDOM_INSTANCES,
    };
    Ok((code, CatalogRun { config, report }))
}

fn print_catalog(r: &CatalogRun) {
    for e in &r.report.entries {
        if !e.all_met || !e.name.starts_with("random") {
            println!("{:<28} {}", e.name, if e.all_met { "ok" } else { "MISMATCH" });
        }
        for c in e.checks.iter().filter(|c| !c.matches) {
            println!("    {}: expected {}, got {}", c.name, c.expected, c.actual);
        }
    }
    let randoms = r.report.entries.iter().filter(|e| e.name.starts_with("random")).count();
    println!("{randoms} random instances checked");
    println!("mismatches: {}", r.report.mismatches);
}

pub fn cmd_plot(args: &PlotArgs) -> Result<i32> {
    let (space, _) = resolve_space(&args.common.space)?;
    let tol = args.common.run.tol.unwrap_or(Tolerances::default().exact);
    let svg = plot::render_svg(&space, tol)?;
    match &args.svg {
        Some(p) => std::fs::write(p, svg).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?,
        None => print!("{svg}"),
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Check(a) => {
            let (code, r) = cmd_check(a)?;
            print_check(&r);
            write_report(a.common.run.json.as_ref(), &r)?;
            Ok(code)
        }
        Command::Bj(a) => {
            let (code, r) = cmd_bj(a)?;
            print_bj(&r);
            write_report(a.common.run.json.as_ref(), &r)?;
            Ok(code)
        }
        Command::Dual(a) => {
            let (code, r) = cmd_dual(a)?;
            match r.value {
                Some(v) => println!("{}", fmt_num(v)),
                None => println!("{}", serde_json::to_string(&r.dual).map_err(|e| Error::Parse(e.to_string()))?),
            }
            write_report(a.common.run.json.as_ref(), &r)?;
            Ok(code)
        }
        Command::Detect(a) => {
            let (code, r) = cmd_detect(a)?;
            println!("{}", r.message);
            write_report(a.run.json.as_ref(), &r)?;
            Ok(code)
        }
        Command::Catalog(a) => {
            let (code, r) = cmd_catalog(a)?;
            print_catalog(&r);
            write_report(a.json.as_ref(), &r)?;
            Ok(code)
        }
        Command::Plot(a) => cmd_plot(a),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_BAD_INPUT
        }
    }
}
