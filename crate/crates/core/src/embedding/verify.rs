use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::norm::{self, Space};
use crate::scalar::{self, Field, Vector};

use super::checks::{self, IsometryOutcome};
use super::report::{Check, Status, Theorem, Tolerances, VerificationReport};
use super::{Definiteness, EmbeddingSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 10_000, seed: 42, tol: Tolerances::default() }
    }
}

/// Coordinate directions, ball vertices (real polytope balls), then the
/// seeded sample; all on the unit sphere.
fn check_points(space: &Space, cfg: &VerifyConfig) -> Result<Vec<Vector>> {
    let mut raw = norm::spot_directions(space.dim());
    if space.field == Field::Real {
        raw.extend(norm::ball_vertices(&space.norm).unwrap_or_default());
    }
    let mut pts = Vec::with_capacity(raw.len() + cfg.samples);
    for v in raw {
        if let Some(u) = space.normalize(&v)? {
            pts.push(u);
        }
    }
    pts.extend(norm::sample_sphere(space, cfg.samples, cfg.seed)?);
    Ok(pts)
}

fn isometry_check(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<Check> {
    let iso: IsometryOutcome = checks::check_isometry(space, emb, cfg.samples, cfg.seed)?;
    let dev = iso.deviation();
    let worst = if iso.spot_max_deviation >= iso.max_deviation {
        iso.spot_checks
            .iter()
            .max_by(|a, b| (a.deviation / a.norm).total_cmp(&(b.deviation / b.norm)))
            .map(|c| c.x.clone())
            .unwrap_or(iso.worst.clone())
    } else {
        iso.worst.clone()
    };
    let ok = dev <= cfg.tol.exact;
    let detail = format!(
        "max |‖Φ(x)‖* − ‖x‖|/‖x‖ = {dev:.3e} ({} exact spot checks, {} samples)",
        iso.spot_checks.len(),
        iso.samples
    );
    let mut c = Check::pass_if("isometry", ok, detail).value(dev).sampled(cfg.samples);
    if !ok {
        c = c.witness(worst);
    }
    Ok(c)
}

fn hermitian_check(emb: &EmbeddingSpec, tol: f64) -> Check {
    let defect = emb.hermitian_defect();
    let ok = emb.check_hermitian(tol);
    let mut c = Check::pass_if("hermitian", ok, format!("max |A_ij − conj(A_ji)| = {defect:.3e}")).value(defect);
    if !ok {
        let n = emb.dim();
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .max_by(|&(a, b), &(c, d)| {
                let m = &emb.matrix;
                (m[(a, b)] - m[(b, a)].conj()).norm().total_cmp(&(m[(c, d)] - m[(d, c)].conj()).norm())
            })
            .unwrap_or((0, 0));
        c = c.witness_pair(scalar::basis_vector(n, i), scalar::basis_vector(n, j));
    }
    c
}

fn definiteness_check(emb: &EmbeddingSpec, tol: f64) -> (Check, Option<Definiteness>) {
    if !emb.check_hermitian(tol) {
        return (Check::new("definiteness", Status::Skipped, "requires a hermitian form"), None);
    }
    match emb.definiteness() {
        Ok(d) => {
            let mut c = Check::pass_if("definiteness", d.is_definite(), d.label());
            if let Some(w) = d.witness() {
                c = c.value(emb.form(w, w).norm()).witness(w.clone());
                c.detail = format!("{}: <Φ(w),w> = {:.3e}", d.label(), emb.form(w, w).norm());
            }
            (c, Some(d))
        }
        Err(e) => (Check::new("definiteness", Status::Skipped, e.to_string()), None),
    }
}

fn invertibility_check(name: &str, emb: &EmbeddingSpec) -> Check {
    let cond = emb.condition_number();
    let mut c = Check::pass_if(name, cond.is_finite(), format!("condition number {cond:.3e}")).value(cond);
    if !cond.is_finite() {
        let eig = crate::linalg::hermitian_eigen(&emb.matrix.adjoint().mul(&emb.matrix));
        c = c.witness(eig.vectors[0].clone());
    }
    c
}

fn sign_of(d: &Option<Definiteness>) -> f64 {
    if matches!(d, Some(Definiteness::NegativeDefinite)) {
        -1.0
    } else {
        1.0
    }
}

/// `max | s Re<Φ(x),x> - ||x||^2 |` over unit check points.
fn norm_identity(space: &Space, emb: &EmbeddingSpec, s: f64, pts: &[Vector], tol: f64) -> Result<Check> {
    let mut worst = (0.0_f64, pts[0].clone());
    for x in pts {
        let n = space.norm.eval(x)?;
        let d = (s * emb.form(x, x).re - n * n).abs();
        if d > worst.0 {
            worst = (d, x.clone());
        }
    }
    let ok = worst.0 <= tol;
    let mut c = Check::pass_if("norm_identity", ok, format!("max |(x,x) − ‖x‖²| = {:.3e}", worst.0))
        .value(worst.0)
        .sampled(pts.len());
    if !ok {
        c = c.witness(worst.1);
    }
    Ok(c)
}

/// Both theorems' BJ hypothesis.
fn bj_check(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<Check> {
    let r = checks::check_bj_condition(space, emb, cfg.samples, cfg.seed, cfg.tol.exact)?;
    let mut c = match &r.failure {
        None => Check::new(
            "bj_condition",
            Status::Pass,
            format!("x ⊥ Ker Φ(x) at {} points{}", r.tested, if r.certified { " (exact solvers)" } else { "" }),
        ),
        Some(f) => match &f.result {
            None => Check::new("bj_condition", Status::Fail, "Φ(x) = 0").witness(f.x.clone()),
            Some(res) => {
                let y = f
                    .kernel
                    .iter()
                    .zip(&res.witness)
                    .fold(vec![scalar::ZERO; space.dim()], |acc, (k, c)| scalar::axpy(&acc, *c, &k.0));
                Check::new(
                    "bj_condition",
                    Status::Fail,
                    format!("min ‖x + y‖ over Ker Φ(x) = {:.6} < ‖x‖ = {:.6}", res.min_value, res.norm_x),
                )
                .value(res.margin)
                .witness_pair(f.x.clone(), y)
            }
        },
    };
    if r.failure.is_none() || !r.certified {
        c = c.sampled(r.tested);
    }
    Ok(c)
}

/// Isometry, hermitian form and `x ⊥ Ker Φ(x)` imply `<Φ(x),x> = ||x||^2`.
pub fn verify_theorem1(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    emb.validate_for(space)?;
    let hypotheses = vec![
        isometry_check(space, emb, cfg)?,
        hermitian_check(emb, cfg.tol.exact),
        bj_check(space, emb, cfg)?,
    ];
    let pts = check_points(space, cfg)?;
    let conclusions = vec![norm_identity(space, emb, 1.0, &pts, cfg.tol.sampled)?];
    Ok(VerificationReport::assemble(Theorem::Theorem1, hypotheses, conclusions, cfg.seed, cfg.samples, cfg.tol))
}

/// Isometry, invertibility, hermitian and definite form imply the induced
/// norm equals the given one; Cauchy-Schwarz is checked on sampled pairs.
pub fn verify_theorem2(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    emb.validate_for(space)?;
    let (def, d) = definiteness_check(emb, cfg.tol.exact);
    let hypotheses = vec![
        isometry_check(space, emb, cfg)?,
        invertibility_check("invertibility", emb),
        hermitian_check(emb, cfg.tol.exact),
        def,
    ];
    let s = sign_of(&d);
    let pts = check_points(space, cfg)?;
    let mut conclusions = vec![norm_identity(space, emb, s, &pts, cfg.tol.sampled)?];

    // |(x,y)| <= |x| |y| on consecutive sample pairs
    let form = super::InducedForm { matrix: emb.symmetrize().matrix, sign: s as i8 };
    let mut worst = (f64::NEG_INFINITY, pts[0].clone(), pts[0].clone());
    for w in pts.chunks_exact(2) {
        let excess = form.form(&w[0], &w[1]).norm() - form.norm(&w[0]) * form.norm(&w[1]);
        if excess > worst.0 {
            worst = (excess, w[0].clone(), w[1].clone());
        }
    }
    let ok = worst.0 <= cfg.tol.sampled;
    let mut cs = Check::pass_if(
        "cauchy_schwarz",
        ok,
        format!("max |(x,y)| − |x||y| = {:.3e} over {} pairs", worst.0, pts.len() / 2),
    )
    .value(worst.0)
    .sampled(pts.len() / 2);
    if !ok {
        cs = cs.witness_pair(worst.1, worst.2);
    }
    conclusions.push(cs);
    Ok(VerificationReport::assemble(Theorem::Theorem2, hypotheses, conclusions, cfg.seed, cfg.samples, cfg.tol))
}

fn bounds_check(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<(Check, f64, f64)> {
    let b = checks::operator_bounds(space, emb, cfg.samples, cfg.seed)?;
    let c = Check::new(
        "operator_bounds",
        Status::Info,
        format!("δ = {:.9}, ‖Φ‖ = {:.9}", b.delta, b.phi_norm),
    )
    .value(b.phi_norm)
    .sampled(b.samples);
    Ok((c, b.delta, b.phi_norm))
}

/// Hermitian definite injective `Φ` gives a Hilbert norm equivalent to the
/// given one: `|x|^2 <= ||Φ|| ||x||^2` and `||x|| <= δ^-1 ||Φ||^(1/2) |x|`.
///
/// `δ` and `||Φ||` are estimated on the same points where the bounds are
/// checked, so the estimates are consistent with every checked point.
pub fn verify_theorem3(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    emb.validate_for(space)?;
    let (def, d) = definiteness_check(emb, cfg.tol.exact);
    let hypotheses = vec![
        hermitian_check(emb, cfg.tol.exact),
        def,
        invertibility_check("injectivity", emb),
        Check::new("closed_range", Status::Pass, "automatic in finite dimension"),
    ];
    let s = sign_of(&d);
    let form = super::InducedForm { matrix: emb.symmetrize().matrix, sign: s as i8 };
    let (info, delta, phi) = bounds_check(space, emb, cfg)?;
    let pts = check_points(space, cfg)?;

    let mut up = (f64::NEG_INFINITY, pts[0].clone());
    let mut low = (f64::NEG_INFINITY, pts[0].clone());
    let k = phi.sqrt() / delta;
    for x in &pts {
        let n = space.norm.eval(x)?;
        let h2 = form.norm_sq(x);
        let e = h2 - phi * n * n;
        if e > up.0 {
            up = (e, x.clone());
        }
        if delta > 0.0 {
            let e = n - k * h2.sqrt();
            if e > low.0 {
                low = (e, x.clone());
            }
        }
    }
    let tol = cfg.tol.sampled;
    let mut upper = Check::pass_if("upper_bound", up.0 <= tol, format!("max |x|² − ‖Φ‖‖x‖² = {:.3e}", up.0))
        .value(up.0)
        .sampled(pts.len());
    if up.0 > tol {
        upper = upper.witness(up.1);
    }
    let lower = if delta > 0.0 {
        let mut c = Check::pass_if("lower_bound", low.0 <= tol, format!("max ‖x‖ − δ⁻¹‖Φ‖^½|x| = {:.3e}", low.0))
            .value(low.0)
            .sampled(pts.len());
        if low.0 > tol {
            c = c.witness(low.1);
        }
        c
    } else {
        Check::new("lower_bound", Status::Skipped, "δ = 0")
    };
    let conclusions = vec![info, upper, lower];
    Ok(VerificationReport::assemble(Theorem::Theorem3, hypotheses, conclusions, cfg.seed, cfg.samples, cfg.tol))
}

/// `|x| <= ||Φ||^(1/2) ||x||`: the induced topology is weaker than the norm
/// topology.
pub fn verify_weaker_topology(space: &Space, emb: &EmbeddingSpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    emb.validate_for(space)?;
    let (def, d) = definiteness_check(emb, cfg.tol.exact);
    let hypotheses = vec![hermitian_check(emb, cfg.tol.exact), def];
    let form = super::InducedForm { matrix: emb.symmetrize().matrix, sign: sign_of(&d) as i8 };
    let (info, _, phi) = bounds_check(space, emb, cfg)?;
    let pts = check_points(space, cfg)?;
    let mut worst = (f64::NEG_INFINITY, pts[0].clone());
    for x in &pts {
        let e = form.norm(x) - phi.sqrt() * space.norm.eval(x)?;
        if e > worst.0 {
            worst = (e, x.clone());
        }
    }
    let ok = worst.0 <= cfg.tol.sampled;
    let mut c = Check::pass_if("weaker_topology", ok, format!("max |x| − ‖Φ‖^½‖x‖ = {:.3e}", worst.0))
        .value(worst.0)
        .sampled(pts.len());
    if !ok {
        c = c.witness(worst.1);
    }
    Ok(VerificationReport::assemble(
        Theorem::WeakerTopology,
        hypotheses,
        vec![info, c],
        cfg.seed,
        cfg.samples,
        cfg.tol,
    ))
}
