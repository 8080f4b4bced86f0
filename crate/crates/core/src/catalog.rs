//! Named spaces with their embeddings and expected verdicts, plus a seeded
//! generator of random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::{self, EmbeddingSpec, Outcome, VerifyConfig};
use crate::error::{Error, Result};
use crate::norm::{self, NormSpec, PExponent, Space};
use crate::scalar::{self, Field, Matrix, Vector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefinitenessKind {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
}

impl From<&embedding::Definiteness> for DefinitenessKind {
    fn from(d: &embedding::Definiteness) -> Self {
        match d {
            embedding::Definiteness::PositiveDefinite => DefinitenessKind::PositiveDefinite,
            embedding::Definiteness::NegativeDefinite => DefinitenessKind::NegativeDefinite,
            embedding::Definiteness::Indefinite { .. } => DefinitenessKind::Indefinite,
            embedding::Definiteness::Degenerate { .. } => DefinitenessKind::Degenerate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParallelogramExpect {
    /// Defect within the sampled tolerance.
    Holds,
    /// Defect at least this large.
    DefectAtLeast(f64),
}

/// Verdicts an entry must reproduce; `None` fields are not evaluated.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definiteness: Option<DefinitenessKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bj_condition: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelogram: Option<ParallelogramExpect>,
    /// Induced norm equals this norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<NormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weaker_topology: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem1: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem2: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem3: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub space: Space,
    pub embedding: EmbeddingSpec,
    pub expected: Expected,
    pub note: String,
}

fn parse_exponent(s: &str) -> Result<PExponent> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(PExponent::Infinity),
        t => {
            let p: f64 = t.parse().map_err(|_| Error::UnknownBuiltin(format!("bad exponent `{t}`")))?;
            let p = PExponent::Finite(p);
            p.validate()?;
            Ok(p)
        }
    }
}

/// Splits `name(a,b)` or `nameN` into the stem and its arguments.
fn split_name(name: &str) -> (String, Vec<String>) {
    let name = name.trim();
    if let Some(open) = name.find('(') {
        if let Some(inner) = name[open + 1..].strip_suffix(')') {
            let args = inner.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect();
            return (name[..open].to_string(), args);
        }
    }
    let stem_end = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, num) = name.split_at(stem_end);
    if num.is_empty() || stem.ends_with('_') && stem != "l1_incl_" {
        (name.to_string(), Vec::new())
    } else {
        (stem.trim_end_matches('_').to_string(), vec![num.to_string()])
    }
}

fn parse_dim(s: &str, max: usize) -> Result<usize> {
    let n: usize = s.parse().map_err(|_| Error::UnknownBuiltin(format!("bad dimension `{s}`")))?;
    if n == 0 || n > max {
        return Err(Error::UnknownBuiltin(format!("dimension {n} outside 1..={max}")));
    }
    Ok(n)
}

const MAX_DIM: usize = 16;
const MAX_SCHATTEN: usize = 6;

/// Default builtin set used by `run_all`.
pub const DEFAULT_BUILTINS: &[&str] = &[
    "euclid(3)",
    "pnorm(3,1)",
    "pnorm(2,inf)",
    "pnorm(3,4)",
    "sz3",
    "l1_incl(3)",
    "schatten1(3)",
    "ypsum(2,2)",
    "ypsum(4,2)",
];

/// Resolves `euclid(n)`/`euclidN`, `pnorm(n,p)`, `sz3`, `l1_incl(n)`,
/// `schatten1(n)` (n <= 6) and `ypsum(p,k)`.
pub fn builtin(name: &str) -> Result<CatalogEntry> {
    let (stem, args) = split_name(name);
    let unknown = || Error::UnknownBuiltin(name.to_string());
    let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(unknown()) };
    let real = |norm: NormSpec| Space::real(norm);
    let entry = match stem.as_str() {
        "euclid" => {
            arity(1)?;
            let n = parse_dim(&args[0], MAX_DIM)?;
            CatalogEntry {
                name: format!("euclid({n})"),
                space: real(NormSpec::euclid(n))?,
                embedding: EmbeddingSpec::identity(n, Field::Real),
                expected: hilbert_expectations(),
                note: "Euclidean space with the identity map: the inner-product case.".into(),
            }
        }
        "pnorm" => {
            arity(2)?;
            let n = parse_dim(&args[0], MAX_DIM)?;
            let p = parse_exponent(&args[1])?;
            let two = p.is_two() || n == 1;
            let space = real(NormSpec::PNorm { dim: n, p })?;
            CatalogEntry {
                name: format!("pnorm({n},{p})"),
                space,
                embedding: EmbeddingSpec::identity(n, Field::Real),
                expected: Expected {
                    hermitian: Some(true),
                    definiteness: Some(DefinitenessKind::PositiveDefinite),
                    isometry: Some(two),
                    bj_condition: Some(two),
                    parallelogram: Some(if two {
                        ParallelogramExpect::Holds
                    } else {
                        ParallelogramExpect::DefectAtLeast(1e-3)
                    }),
                    theorem1: Some(if two { Outcome::Holds } else { Outcome::NotApplicable }),
                    theorem3: Some(Outcome::Holds),
                    ..Expected::default()
                },
                note: "l^p with the identity map into l^q; isometric only for p = 2.".into(),
            }
        }
        "sz" if args.first().is_none_or(|a| a == "3") => CatalogEntry {
            name: "sz3".into(),
            space: real(NormSpec::sz3())?,
            embedding: EmbeddingSpec::reversal(3),
            expected: Expected {
                hermitian: Some(true),
                isometry: Some(true),
                definiteness: Some(DefinitenessKind::Indefinite),
                bj_condition: Some(false),
                parallelogram: Some(ParallelogramExpect::DefectAtLeast(2.0)),
                theorem1: Some(Outcome::NotApplicable),
                theorem2: Some(Outcome::NotApplicable),
                ..Expected::default()
            },
            note: "max{|y|+|z|, |x|+|z|/2} on R^3 with the reversal (x,y,z) -> (z,y,x): an isometry \
                   onto the dual with a hermitian but indefinite form; e1 lies in its own kernel."
                .into(),
        },
        "l1_incl" => {
            arity(1)?;
            let n = parse_dim(&args[0], MAX_DIM)?;
            let two = n == 1;
            CatalogEntry {
                name: format!("l1_incl({n})"),
                space: real(NormSpec::p(n, 1.0))?,
                embedding: EmbeddingSpec::identity(n, Field::Real),
                expected: Expected {
                    hermitian: Some(true),
                    definiteness: Some(DefinitenessKind::PositiveDefinite),
                    isometry: Some(two),
                    bj_condition: Some(two),
                    completion: Some(NormSpec::euclid(n)),
                    weaker_topology: Some(Outcome::Holds),
                    theorem1: Some(if two { Outcome::Holds } else { Outcome::NotApplicable }),
                    theorem3: Some(Outcome::Holds),
                    ..Expected::default()
                },
                note: "Inclusion of l^1 into its dual l^inf; the induced norm is the l^2 norm.".into(),
            }
        }
        "schatten1" => {
            arity(1)?;
            let n = parse_dim(&args[0], MAX_SCHATTEN)?;
            CatalogEntry {
                name: format!("schatten1({n})"),
                space: real(NormSpec::SchattenOne { n })?,
                embedding: EmbeddingSpec::identity(n * n, Field::Real),
                expected: Expected {
                    hermitian: Some(true),
                    definiteness: Some(DefinitenessKind::PositiveDefinite),
                    isometry: Some(n == 1),
                    completion: Some(NormSpec::euclid(n * n)),
                    weaker_topology: Some(Outcome::Holds),
                    ..Expected::default()
                },
                note: "Trace-class n x n matrices under the trace pairing; the induced norm is Frobenius."
                    .into(),
            }
        }
        "ypsum" => {
            arity(2)?;
            let p = parse_exponent(&args[0])?;
            let k = parse_dim(&args[1], MAX_DIM / 2)?;
            // one-dimensional blocks make every p Euclidean
            let hilbert = p.is_two() || k == 1;
            let norm = NormSpec::DirectSum {
                outer_p: PExponent::Finite(2.0),
                parts: vec![NormSpec::PNorm { dim: k, p }, NormSpec::PNorm { dim: k, p: p.conjugate() }],
            };
            CatalogEntry {
                name: format!("ypsum({p},{k})"),
                space: real(norm)?,
                embedding: EmbeddingSpec::block_swap(k),
                expected: Expected {
                    hermitian: Some(true),
                    isometry: Some(true),
                    definiteness: Some(DefinitenessKind::Indefinite),
                    bj_condition: Some(false),
                    parallelogram: Some(if hilbert {
                        ParallelogramExpect::Holds
                    } else {
                        ParallelogramExpect::DefectAtLeast(1e-3)
                    }),
                    theorem1: Some(Outcome::NotApplicable),
                    theorem2: Some(Outcome::NotApplicable),
                    ..Expected::default()
                },
                note: "l^p(k) (+)_2 l^q(k) with the block swap (u, w) -> (w, u): isometric onto the dual \
                       with an indefinite form, for every p."
                    .into(),
            }
        }
        _ => return Err(unknown()),
    };
    Ok(entry)
}

fn hilbert_expectations() -> Expected {
    Expected {
        hermitian: Some(true),
        isometry: Some(true),
        definiteness: Some(DefinitenessKind::PositiveDefinite),
        bj_condition: Some(true),
        parallelogram: Some(ParallelogramExpect::Holds),
        theorem1: Some(Outcome::Holds),
        theorem2: Some(Outcome::Holds),
        theorem3: Some(Outcome::Holds),
        ..Expected::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    /// SPD `A` with its own induced norm (complex for odd seeds).
    SpdHilbert,
    /// Random symmetric functional rows, `A = I`.
    Polyhedral,
    /// Random polyhedral norm with a random SPD `A`.
    PolyhedralSpd,
    /// Hermitian `A` with a chosen sign pattern on the Euclidean space.
    Perturbed,
}

/// `B^H B / n + I / 2` for a Gaussian `B`.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize, field: Field) -> Matrix {
    let rows: Vec<Vector> = (0..n).map(|_| norm::gaussian_vector(rng, n, field)).collect();
    let b = Matrix::from_rows(&rows).expect("square");
    let g = b.adjoint().mul(&b).scaled(C64::new(1.0 / n as f64, 0.0));
    let g = g.add(&Matrix::identity(n).scaled(C64::new(0.5, 0.0)));
    // exact hermitian symmetry
    g.add(&g.adjoint()).scaled(C64::new(0.5, 0.0))
}

fn random_orthonormal<R: Rng>(rng: &mut R, n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(n);
    while out.len() < n {
        let mut v = norm::gaussian_vector(rng, n, Field::Real);
        for u in &out {
            let c = scalar::inner(u, &v);
            v = scalar::axpy(&v, -c, u);
        }
        let r = scalar::euclid_norm(&v);
        if r > 1e-6 {
            out.push(scalar::scale_real(&v, 1.0 / r));
        }
    }
    out
}

fn random_rows<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let m = n + 1 + rng.random_range(0..n.max(2));
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    while rows.len() < m {
        let v = norm::gaussian_vector(rng, n, Field::Real);
        rows.push(v.iter().map(|z| z.re).collect());
    }
    // a random change of basis keeps the span and breaks coordinate alignment
    let q = random_orthonormal(rng, n);
    rows.iter()
        .map(|r| (0..n).map(|j| (0..n).map(|i| r[i] * q[i][j].re).sum()).collect())
        .collect()
}

/// Deterministic per `(seed, dim, kind)`; `dim` must be in `1..=8`.
pub fn random_instance(seed: u64, dim: usize, kind: InstanceKind) -> Result<CatalogEntry> {
    if dim == 0 || dim > 8 {
        return Err(Error::InvalidSpec(format!("random instance dimension {dim} outside 1..=8")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (dim as u64) << 32);
    let tag = match kind {
        InstanceKind::SpdHilbert => "spd-hilbert",
        InstanceKind::Polyhedral => "polyhedral",
        InstanceKind::PolyhedralSpd => "polyhedral-spd",
        InstanceKind::Perturbed => "perturbed",
    };
    let name = format!("random({tag},{dim},{seed})");
    let entry = match kind {
        InstanceKind::SpdHilbert => {
            let field = if seed % 2 == 1 { Field::Complex } else { Field::Real };
            let g = random_spd(&mut rng, dim, field);
            CatalogEntry {
                name,
                space: Space::new(NormSpec::Quadratic { gram: g.clone() }, field)?,
                embedding: EmbeddingSpec::new(field, g)?,
                expected: Expected { parallelogram: None, ..hilbert_expectations() },
                note: "SPD form with its own induced norm.".into(),
            }
        }
        InstanceKind::Polyhedral | InstanceKind::PolyhedralSpd => {
            let rows = random_rows(&mut rng, dim);
            let embedding = if kind == InstanceKind::Polyhedral {
                EmbeddingSpec::identity(dim, Field::Real)
            } else {
                EmbeddingSpec::new(Field::Real, random_spd(&mut rng, dim, Field::Real))?
            };
            CatalogEntry {
                name,
                space: Space::real(NormSpec::MaxAbsFunctionals { rows })?,
                embedding,
                expected: Expected {
                    hermitian: Some(true),
                    definiteness: Some(DefinitenessKind::PositiveDefinite),
                    theorem3: Some(Outcome::Holds),
                    weaker_topology: Some(Outcome::Holds),
                    ..Expected::default()
                },
                note: "Random polyhedral norm with a positive definite form.".into(),
            }
        }
        InstanceKind::Perturbed => {
            let pattern = rng.random_range(0..3u8);
            let q = random_orthonormal(&mut rng, dim);
            let mut spec: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..2.0)).collect();
            let kind = match pattern {
                0 => DefinitenessKind::PositiveDefinite,
                1 => {
                    spec.iter_mut().for_each(|v| *v = -*v);
                    DefinitenessKind::NegativeDefinite
                }
                _ if dim >= 2 => {
                    let flip = rng.random_range(1..dim);
                    spec.iter_mut().take(flip).for_each(|v| *v = -*v);
                    DefinitenessKind::Indefinite
                }
                _ => DefinitenessKind::PositiveDefinite,
            };
            let mut a = Matrix::zeros(dim, dim);
            for (lam, u) in spec.iter().zip(&q) {
                for i in 0..dim {
                    for j in 0..dim {
                        a[(i, j)] += u[i] * u[j] * *lam;
                    }
                }
            }
            let a = a.add(&a.transpose()).scaled(C64::new(0.5, 0.0));
            let applies = if kind == DefinitenessKind::Indefinite { Outcome::NotApplicable } else { Outcome::Holds };
            CatalogEntry {
                name,
                space: Space::real(NormSpec::euclid(dim))?,
                embedding: EmbeddingSpec::new(Field::Real, a)?,
                expected: Expected {
                    hermitian: Some(true),
                    definiteness: Some(kind),
                    theorem3: Some(applies),
                    weaker_topology: Some(applies),
                    ..Expected::default()
                },
                note: "Hermitian form with a prescribed sign pattern.".into(),
            }
        }
    };
    Ok(entry)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "scalar::opt_vector_serde")]
    pub witness: Option<Vector>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryResult {
    pub name: String,
    pub note: String,
    pub checks: Vec<EntryCheck>,
    pub all_met: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub seed: u64,
    pub samples: usize,
    pub random_samples: usize,
    pub entries: Vec<EntryResult>,
    pub mismatches: usize,
    pub all_met: bool,
}

fn verdict(b: bool) -> String {
    if b { "pass" } else { "fail" }.to_string()
}

fn outcome_str(o: Outcome) -> String {
    serde_json::to_value(o).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn kind_str(k: DefinitenessKind) -> String {
    serde_json::to_value(k).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn push(out: &mut Vec<EntryCheck>, name: &str, expected: String, actual: String, value: Option<f64>, witness: Option<Vector>) {
    let matches = expected == actual;
    out.push(EntryCheck { name: name.into(), expected, actual, value: value.filter(|v| v.is_finite()), witness, matches });
}

/// Runs the checks named in `entry.expected` and compares verdicts.
pub fn evaluate_entry(entry: &CatalogEntry, cfg: &VerifyConfig) -> Result<EntryResult> {
    let (space, emb, exp) = (&entry.space, &entry.embedding, &entry.expected);
    let tol = cfg.tol;
    let mut checks = Vec::new();
    if let Some(e) = exp.hermitian {
        let ok = emb.check_hermitian(tol.exact);
        push(&mut checks, "hermitian", verdict(e), verdict(ok), Some(emb.hermitian_defect()), None);
    }
    if let Some(e) = exp.isometry {
        let iso = embedding::check_isometry(space, emb, cfg.samples, cfg.seed)?;
        let ok = iso.deviation() <= tol.exact;
        let w = (!ok).then(|| iso.worst.clone());
        push(&mut checks, "isometry", verdict(e), verdict(ok), Some(iso.deviation()), w);
    }
    if let Some(e) = exp.definiteness {
        let d = emb.definiteness()?;
        push(&mut checks, "definiteness", kind_str(e), kind_str((&d).into()), None, d.witness().cloned());
    }
    if let Some(e) = exp.bj_condition {
        let r = embedding::check_bj_condition(space, emb, cfg.samples, cfg.seed, tol.exact)?;
        let w = r.failure.as_ref().map(|f| f.x.clone());
        let v = r.failure.as_ref().and_then(|f| f.result.as_ref()).map(|b| b.margin);
        push(&mut checks, "bj_condition", verdict(e), verdict(r.pass), v, w);
    }
    if let Some(e) = exp.parallelogram {
        let r = embedding::parallelogram_defect(space, cfg.samples, cfg.seed, tol.sampled)?;
        let (expected, actual) = match e {
            ParallelogramExpect::Holds => ("holds".to_string(), if r.max_defect <= tol.sampled { "holds" } else { "defect" }.to_string()),
            ParallelogramExpect::DefectAtLeast(d) => (
                format!("defect >= {d}"),
                if r.max_defect >= d - 1e-12 { format!("defect >= {d}") } else { "smaller defect".to_string() },
            ),
        };
        push(&mut checks, "parallelogram", expected, actual, Some(r.max_defect), Some(r.x.clone()));
    }
    if let Some(expected) = &exp.completion {
        let r = embedding::completion_check(space, emb, expected, cfg.samples, cfg.seed)?;
        let ok = r.max_deviation <= tol.exact;
        push(&mut checks, "completion", verdict(true), verdict(ok), Some(r.max_deviation), (!ok).then(|| r.worst.clone()));
    }
    type Verifier = fn(&Space, &EmbeddingSpec, &VerifyConfig) -> Result<embedding::VerificationReport>;
    let theorems: [(&str, Option<Outcome>, Verifier); 4] = [
        ("weaker_topology", exp.weaker_topology, embedding::verify_weaker_topology),
        ("theorem1", exp.theorem1, embedding::verify_theorem1),
        ("theorem2", exp.theorem2, embedding::verify_theorem2),
        ("theorem3", exp.theorem3, embedding::verify_theorem3),
    ];
    for (name, e, verify) in theorems {
        if let Some(e) = e {
            let r = verify(space, emb, cfg)?;
            let failing = r.hypotheses.iter().chain(&r.conclusions).find(|c| c.failed());
            let w = failing.and_then(|c| c.witness.clone());
            push(&mut checks, name, outcome_str(e), outcome_str(r.outcome), None, w);
        }
    }
    let all_met = checks.iter().all(|c| c.matches);
    Ok(EntryResult { name: entry.name.clone(), note: entry.note.clone(), checks, all_met })
}

pub fn run_entries(entries: &[CatalogEntry], cfg: &VerifyConfig) -> Result<Vec<EntryResult>> {
    entries.iter().map(|e| evaluate_entry(e, cfg)).collect()
}

pub const RANDOM_INSTANCES: usize = 200;

/// The `i`-th random instance of `run_all`: kinds and dimensions 2..=4
/// cycle, seeds derive from the master seed.
pub fn random_catalog_instance(seed: u64, i: usize) -> Result<CatalogEntry> {
    let kinds = [InstanceKind::SpdHilbert, InstanceKind::Polyhedral, InstanceKind::PolyhedralSpd, InstanceKind::Perturbed];
    let kind = kinds[i % kinds.len()];
    let dim = 2 + (i / kinds.len()) % 3;
    random_instance(seed.wrapping_mul(1_000_003).wrapping_add(i as u64), dim, kind)
}

/// Every default builtin at `cfg.samples`, then the random instances at
/// `random_samples` each.
pub fn run_all(cfg: &VerifyConfig, random_samples: usize) -> Result<CatalogReport> {
    let builtins: Vec<CatalogEntry> = DEFAULT_BUILTINS.iter().map(|n| builtin(n)).collect::<Result<_>>()?;
    let mut entries = run_entries(&builtins, cfg)?;
    let rcfg = VerifyConfig { samples: random_samples, ..*cfg };
    for i in 0..RANDOM_INSTANCES {
        entries.push(evaluate_entry(&random_catalog_instance(cfg.seed, i)?, &rcfg)?);
    }
    let mismatches = entries.iter().flat_map(|e| &e.checks).filter(|c| !c.matches).count();
    Ok(CatalogReport {
        seed: cfg.seed,
        samples: cfg.samples,
        random_samples,
        all_met: mismatches == 0,
        entries,
        mismatches,
    })
}
