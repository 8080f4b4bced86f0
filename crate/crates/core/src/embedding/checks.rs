use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{self, DualNorm, NormSpec, Space, SphereSampler};
use crate::optim::{self, GainResult};
use crate::orthogonality::{self, BjResult};
use crate::scalar::{self, Field, Vector, C64};

use super::EmbeddingSpec;

/// Unit-normalized probe points: coordinate directions, then the vertices of
/// a polytope ball.
fn probe_points(space: &Space) -> Result<Vec<Vector>> {
    let mut pts = Vec::new();
    let mut raw = norm::spot_directions(space.dim());
    if space.field == Field::Real {
        raw.extend(norm::ball_vertices(&space.norm).unwrap_or_default());
    }
    for v in raw {
        if let Some(u) = space.normalize(&v)? {
            pts.push(u);
        }
    }
    Ok(pts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BjFailure {
    #[serde(with = "scalar::vector_serde")]
    pub x: Vector,
    pub kernel: Vec<KernelVector>,
    /// `None` when `Φ(x)` vanishes.
    pub result: Option<BjResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KernelVector(#[serde(with = "scalar::vector_serde")] pub Vector);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BjCondition {
    pub pass: bool,
    pub tested: usize,
    /// Every subspace minimum came from an exact solver.
    pub certified: bool,
    pub failure: Option<BjFailure>,
}

/// Tests `x ⊥ Ker(Φ(x))` at probe points and then at `samples` seeded unit
/// vectors, stopping at the first failure.
pub fn check_bj_condition(
    space: &Space,
    emb: &EmbeddingSpec,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<BjCondition> {
    emb.validate_for(space)?;
    let probes = probe_points(space)?;
    let mut sampler = SphereSampler::new(space, seed);
    let total = probes.len() + samples;
    let mut probes = probes.into_iter();
    let mut certified = true;
    for tested in 1..=total {
        let x = match probes.next() {
            Some(p) => p,
            None => sampler.next_unit()?,
        };
        let kernel = match emb.functional_kernel(&x) {
            Ok(k) => k,
            Err(Error::DegenerateFunctional) => {
                return Ok(BjCondition {
                    pass: false,
                    tested,
                    certified,
                    failure: Some(BjFailure { x, kernel: Vec::new(), result: None }),
                })
            }
            Err(e) => return Err(e),
        };
        let r = orthogonality::bj_orthogonal_subspace(space, &x, &kernel, tol)?;
        certified &= r.certified;
        if !r.orthogonal {
            return Ok(BjCondition {
                pass: false,
                tested,
                certified,
                failure: Some(BjFailure {
                    x,
                    kernel: kernel.into_iter().map(KernelVector).collect(),
                    result: Some(r),
                }),
            });
        }
    }
    Ok(BjCondition { pass: true, tested: total, certified, failure: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    #[serde(with = "scalar::vector_serde")]
    pub x: Vector,
    pub norm: f64,
    /// `||Φ(x)||*` through the structural dual (gauge LP when polyhedral).
    pub dual_norm: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryOutcome {
    /// `max |(||Φ(x)||* - ||x||) / ||x||` over the sampled sphere.
    pub max_deviation: f64,
    #[serde(with = "scalar::vector_serde")]
    pub worst: Vector,
    pub samples: usize,
    pub spot_checks: Vec<SpotCheck>,
    pub spot_max_deviation: f64,
}

impl IsometryOutcome {
    pub fn deviation(&self) -> f64 {
        self.max_deviation.max(self.spot_max_deviation)
    }
}

/// Compares `||Φ(x)||*` with `||x||`: exact spot checks at coordinate
/// directions and ball vertices, then `samples` seeded unit vectors.
pub fn check_isometry(space: &Space, emb: &EmbeddingSpec, samples: usize, seed: u64) -> Result<IsometryOutcome> {
    emb.validate_for(space)?;
    let exact = space.norm.dual()?;
    let mut spot_checks = Vec::new();
    let mut raw = norm::spot_directions(space.dim());
    if space.field == Field::Real {
        raw.extend(norm::ball_vertices(&space.norm).unwrap_or_default());
    }
    let mut spot_max_deviation: f64 = 0.0;
    for x in raw {
        let n = space.norm(&x)?;
        let d = exact.eval(&emb.covector(&x))?;
        let deviation = (d - n).abs();
        spot_max_deviation = spot_max_deviation.max(deviation / n.max(f64::MIN_POSITIVE));
        spot_checks.push(SpotCheck { x, norm: n, dual_norm: d, deviation });
    }

    let fast = DualNorm::new(&space.norm)?;
    let mut sampler = SphereSampler::new(space, seed);
    let mut max_deviation: f64 = 0.0;
    let mut worst = vec![scalar::ZERO; space.dim()];
    for _ in 0..samples {
        let x = sampler.next_unit()?;
        let n = space.norm.eval(&x)?;
        let dev = ((fast.eval(&emb.covector(&x))? - n) / n).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst = x;
        }
    }
    Ok(IsometryOutcome { max_deviation, worst, samples, spot_checks, spot_max_deviation })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorBounds {
    /// Estimate of `inf ||Φ(x)||* / ||x||` (exact for polytope balls).
    pub delta: f64,
    /// Estimate of `||Φ||` (exact for polytope balls).
    pub phi_norm: f64,
    #[serde(with = "scalar::vector_serde")]
    pub argmin: Vector,
    #[serde(with = "scalar::vector_serde")]
    pub argmax: Vector,
    pub samples: usize,
}

/// `δ` and `||Φ||` from the gain `||Φ(x)||* / ||x||`. Candidates include the
/// primal ball vertices (where the maximum sits) and the preimages of the
/// dual ball vertices (where the minimum sits) when those balls are
/// polytopes.
pub fn operator_bounds(space: &Space, emb: &EmbeddingSpec, samples: usize, seed: u64) -> Result<OperatorBounds> {
    emb.validate_for(space)?;
    let dual = DualNorm::new(&space.norm)?;
    let mut candidates = probe_points(space)?;
    if space.field == Field::Real {
        if let Some(dual_vertices) = norm::ball_vertices(dual.spec()) {
            let at = emb.matrix.transpose();
            for u in dual_vertices {
                // A^T conj(x) = u
                if let Ok(y) = linalg::solve(&at, &u) {
                    candidates.push(scalar::conj(&y));
                }
            }
        }
    }
    let g: GainResult = optim::extremize_gain(|x| emb.covector(x), space, |f| dual.eval(f), samples, seed, &candidates)?;
    Ok(OperatorBounds {
        delta: g.min,
        phi_norm: g.max,
        argmin: g.argmin,
        argmax: g.argmax,
        samples: g.samples,
    })
}

/// `m = min Re<Φ(x), x> / ||x||^2` over the unit sphere, with its minimizer.
pub fn coercivity(space: &Space, emb: &EmbeddingSpec, samples: usize, seed: u64) -> Result<(f64, Vector)> {
    emb.validate_for(space)?;
    let candidates = probe_points(space)?;
    let g = optim::extremize_ratio(
        |x| {
            let n = space.norm.eval(x)?;
            if n == 0.0 {
                return Ok(f64::NAN);
            }
            Ok(emb.form(x, x).re / (n * n))
        },
        space,
        samples,
        seed,
        &candidates,
    )?;
    Ok((g.min, g.argmin))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionOutcome {
    /// `max | |x| - expected(x) |` over unit vectors.
    pub max_deviation: f64,
    #[serde(with = "scalar::vector_serde")]
    pub worst: Vector,
    pub samples: usize,
}

/// Compares the induced norm with an expected closed-form norm.
pub fn completion_check(
    space: &Space,
    emb: &EmbeddingSpec,
    expected: &NormSpec,
    samples: usize,
    seed: u64,
) -> Result<CompletionOutcome> {
    emb.validate_for(space)?;
    if expected.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: expected.dim() });
    }
    let form = emb.induced_form()?;
    let mut points = probe_points(space)?;
    points.extend(norm::sample_sphere(space, samples, seed)?);
    let mut max_deviation: f64 = 0.0;
    let mut worst = points[0].clone();
    for x in points {
        let d = (form.norm(&x) - expected.eval(&x)?).abs();
        if d > max_deviation {
            max_deviation = d;
            worst = x;
        }
    }
    Ok(CompletionOutcome { max_deviation, worst, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelogramOutcome {
    /// `max | ||x+y||^2 + ||x-y||^2 - 2||x||^2 - 2||y||^2 |` over unit pairs.
    pub max_defect: f64,
    #[serde(with = "scalar::vector_serde")]
    pub x: Vector,
    #[serde(with = "scalar::vector_serde")]
    pub y: Vector,
    /// First pair in probe order (coordinate pairs, then samples) whose
    /// defect exceeds the tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<DefectPair>,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectPair {
    pub defect: f64,
    #[serde(with = "scalar::vector_serde")]
    pub x: Vector,
    #[serde(with = "scalar::vector_serde")]
    pub y: Vector,
}

pub fn parallelogram_pair_defect(norm: &NormSpec, x: &[C64], y: &[C64]) -> Result<f64> {
    let s = norm.eval(&scalar::add(x, y))?;
    let d = norm.eval(&scalar::sub(x, y))?;
    let nx = norm.eval(x)?;
    let ny = norm.eval(y)?;
    Ok((s * s + d * d - 2.0 * nx * nx - 2.0 * ny * ny).abs())
}

/// Largest parallelogram-law defect over coordinate pairs `(e_i, e_j)`
/// (normalized) and then `samples` seeded unit pairs. Earlier pairs win ties.
pub fn parallelogram_defect(space: &Space, samples: usize, seed: u64, tol: f64) -> Result<ParallelogramOutcome> {
    let n = space.dim();
    let mut pairs: Vec<(Vector, Vector)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let x = space.normalize(&scalar::basis_vector(n, i))?;
            let y = space.normalize(&scalar::basis_vector(n, j))?;
            if let (Some(x), Some(y)) = (x, y) {
                pairs.push((x, y));
            }
        }
    }
    let structured = pairs.len();
    let mut sampler = SphereSampler::new(space, seed);
    let mut best: Option<(f64, Vector, Vector)> = None;
    let mut first_violation: Option<DefectPair> = None;
    let mut consider = |x: Vector, y: Vector| -> Result<()> {
        let d = parallelogram_pair_defect(&space.norm, &x, &y)?;
        if d > tol && first_violation.is_none() {
            first_violation = Some(DefectPair { defect: d, x: x.clone(), y: y.clone() });
        }
        if best.as_ref().is_none_or(|b| d > b.0 + 1e-12 * (1.0 + b.0)) {
            best = Some((d, x, y));
        }
        Ok(())
    };
    for (x, y) in pairs {
        consider(x, y)?;
    }
    for _ in 0..samples {
        let x = sampler.next_unit()?;
        let y = sampler.next_unit()?;
        consider(x, y)?;
    }
    let (max_defect, x, y) = match best {
        Some(b) => b,
        // one dimension: every norm is a multiple of |x|
        None => (0.0, scalar::basis_vector(n, 0), scalar::basis_vector(n, 0)),
    };
    Ok(ParallelogramOutcome { max_defect, x, y, first_violation, pairs: structured + samples })
}
